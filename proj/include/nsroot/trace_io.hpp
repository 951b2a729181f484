#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsroot/analysis.hpp"
#include "nsroot/methods.hpp"

namespace nsroot {

// Iterate column: 10 fractional places, truncated toward zero (the reference
// table's convention).
std::string format_iterate(const Real& x);
// Error column: "0" for an exact zero, fixed 10 places (round half-even) down
// to 1e-10, scientific with a 3-digit mantissa below that.
std::string format_error(const Real& e);
// Residual-style signed scientific value with 10 significant digits.
std::string format_value(const Real& v);
// Full-precision decimal field for CSV/JSON (precision-many significant digits).
std::string format_full(const Real& v, const NumericContext& ctx);

// Everything one solve run reports.
struct RunReport {
    std::string method;
    std::string function;
    std::vector<std::string> points;
    int precision = NumericContext::kDefaultDigits;
    IterationTrace trace;
    std::optional<EmpiricalOrderReport> empirical;  // absent when too few steps
    std::optional<EfficiencyReport> indices;        // theoretical (p, d)
};

RunReport make_run_report(Method m, const Problem& p, const MethodConfig& c,
                          const std::string& function_text,
                          const std::vector<std::string>& point_texts);

std::string render_table(const RunReport& report, const NumericContext& ctx);
std::string render_csv(const RunReport& report, const NumericContext& ctx);
nlohmann::json render_json(const RunReport& report, const NumericContext& ctx);

struct CompareEntry {
    std::string method;
    std::optional<RunReport> run;  // absent when the method failed
    std::string error;             // failure message for the report
};

struct CompareReport {
    std::string function;
    std::vector<std::string> points;
    int precision = NumericContext::kDefaultDigits;
    std::vector<CompareEntry> entries;
};

// Runs every requested method; failures are reported inline and do not abort
// the others. Methods run concurrently when MPFR is thread-safe.
CompareReport run_compare(const std::vector<Method>& methods, const Expr& f,
                          const NumericContext& ctx, const std::optional<Real>& root_hint,
                          const MethodConfig& base_config, const std::string& function_text,
                          const std::vector<std::string>& point_texts);

std::string render_compare_table(const CompareReport& report, const NumericContext& ctx);
std::string render_compare_csv(const CompareReport& report, const NumericContext& ctx);
nlohmann::json render_compare_json(const CompareReport& report, const NumericContext& ctx);

struct AnalyzeReport {
    int s = 1;
    std::vector<Real> orders;  // r_1..r_n_max
    std::vector<EfficiencyReport> indices;
    // Limits as the memory depth grows: order s+1, I1, I2, I3.
    Real limit_order;
    Real limit_i1;
    Real limit_i2;
    Real limit_i3;

    AnalyzeReport(Real lo, Real l1, Real l2, Real l3)
        : limit_order(std::move(lo)), limit_i1(std::move(l1)), limit_i2(std::move(l2)),
          limit_i3(std::move(l3)) {}
};

AnalyzeReport run_analyze(int s, int n_max, const NumericContext& ctx);
std::string render_analyze_table(const AnalyzeReport& report, const NumericContext& ctx);
std::string render_analyze_csv(const AnalyzeReport& report, const NumericContext& ctx);
nlohmann::json render_analyze_json(const AnalyzeReport& report, const NumericContext& ctx);

}  // namespace nsroot
