#include "nsroot/table1.hpp"

#include <chrono>
#include <sstream>

#include "nsroot/trace_io.hpp"

namespace nsroot {

const char* const kExampleFunctionText = "x^2 - exp((1/x) * sin(pi * x^2 / 2)) - 1";

namespace {

void check_printed(std::vector<Table1Check>& checks, const std::string& label,
                   const std::string& expected, const std::string& got) {
    checks.push_back({label, expected, got, expected == got});
}

void check_exponent_band(std::vector<Table1Check>& checks, const std::string& label,
                         const IterationTrace& trace, std::size_t row, long center, long width) {
    std::string got = "missing row";
    bool pass = false;
    if (trace.steps.size() > row && trace.steps[row].abs_error) {
        const Real& e = *trace.steps[row].abs_error;
        if (e.is_zero()) {
            got = "exact 0";
        } else {
            long exp10 = e.decimal_exponent();
            got = std::to_string(exp10);
            pass = exp10 >= center - width && exp10 <= center + width;
        }
    }
    checks.push_back({label, std::to_string(center) + " +/- " + std::to_string(width), got, pass});
}

void check_error_prints_zero(std::vector<Table1Check>& checks, const std::string& label,
                             const IterationTrace& trace, std::size_t row) {
    std::string got = "missing row";
    bool pass = false;
    if (trace.steps.size() > row && trace.steps[row].abs_error) {
        got = trace.steps[row].abs_error->to_fixed(10);
        pass = got == "0.0000000000";
    }
    checks.push_back({label, "0.0000000000", got, pass});
}

void check_iterate(std::vector<Table1Check>& checks, const std::string& label,
                   const IterationTrace& trace, std::size_t row, const std::string& expected) {
    std::string got = "missing row";
    if (trace.steps.size() > row) {
        got = format_iterate(trace.steps[row].x);
    }
    check_printed(checks, label, expected, got);
}

void check_error_fixed(std::vector<Table1Check>& checks, const std::string& label,
                       const IterationTrace& trace, std::size_t row, const std::string& expected) {
    std::string got = "missing row";
    if (trace.steps.size() > row && trace.steps[row].abs_error) {
        got = trace.steps[row].abs_error->to_fixed(10);
    }
    check_printed(checks, label, expected, got);
}

void render_one(std::ostringstream& out, const char* title, const IterationTrace& trace) {
    out << title << "\n";
    out << "  i  x_i             |e_i|\n";
    for (std::size_t i = 0; i < trace.steps.size() && i < 7; ++i) {
        const auto& s = trace.steps[i];
        out << "  " << s.index << "  " << format_iterate(s.x) << "    "
            << (s.abs_error ? format_error(*s.abs_error) : std::string("-")) << "\n";
    }
    out << "\n";
}

}  // namespace

Table1Result reproduce_table1() {
    const auto started = std::chrono::steady_clock::now();

    NumericContext ctx(120);
    Expr f = Expr::parse(kExampleFunctionText);
    Real root = sqrt(ctx.real(2));
    Problem problem(f, ctx, root);

    MethodConfig config;
    config.initial_points = {ctx.real("1.7"), ctx.real("1.6"), ctx.real("1.5")};

    Table1Result result;
    result.halley_variant = run_nonstationary_halley(problem, config);
    result.chebyshev_variant = run_nonstationary_chebyshev(problem, config);

    std::ostringstream out;
    render_one(out, "nonstationary Halley variant", result.halley_variant);
    render_one(out, "nonstationary Chebyshev variant", result.chebyshev_variant);
    result.rendered = out.str();

    auto& checks = result.checks;
    const IterationTrace& h = result.halley_variant;
    const IterationTrace& c = result.chebyshev_variant;

    const char* start_errors[3] = {"0.2857864376", "0.1857864376", "0.0857864376"};
    for (std::size_t i = 0; i < 3; ++i) {
        check_error_fixed(checks, "halley-variant |e" + std::to_string(i) + "|", h, i,
                          start_errors[i]);
        check_error_fixed(checks, "chebyshev-variant |e" + std::to_string(i) + "|", c, i,
                          start_errors[i]);
    }

    check_iterate(checks, "halley-variant x3", h, 3, "1.4143581722");
    check_iterate(checks, "halley-variant x4", h, 4, "1.4142135632");
    check_iterate(checks, "chebyshev-variant x3", c, 3, "1.4149666839");
    check_iterate(checks, "chebyshev-variant x4", c, 4, "1.4142135854");

    check_exponent_band(checks, "halley-variant |e5| decimal exponent", h, 5, -62, 1);
    check_exponent_band(checks, "chebyshev-variant |e5| decimal exponent", c, 5, -62, 1);

    check_error_prints_zero(checks, "halley-variant |e6| at 10 places", h, 6);
    check_error_prints_zero(checks, "chebyshev-variant |e6| at 10 places", c, 6);

    const auto elapsed = std::chrono::steady_clock::now() - started;
    result.elapsed_seconds = std::chrono::duration<double>(elapsed).count();
    checks.push_back({"runtime", "< 5 s",
                      std::to_string(result.elapsed_seconds) + " s",
                      result.elapsed_seconds < 5.0});

    result.all_pass = true;
    for (const auto& chk : checks) {
        result.all_pass = result.all_pass && chk.pass;
    }
    return result;
}

}  // namespace nsroot
