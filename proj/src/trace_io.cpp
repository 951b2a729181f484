#include "nsroot/trace_io.hpp"
#include <algorithm>
#include <cstdio>

#include <future>
#include <sstream>
#include <utility>

namespace nsroot {

std::string format_iterate(const Real& x) {
    // Render faithfully first, then truncate the decimal string at 10 places.
    // Truncating the binary value directly would let representation noise
    // flip the printed digits of decimal inputs (1.6 stored a hair below 1.6
    // would print as 1.5999999999).
    int digits = static_cast<int>((x.precision_bits() - 8) / 3.3219280948873623);
    int guard_places = std::max(12, digits - 10);
    std::string s = x.to_fixed(guard_places, RoundStyle::HalfEven);
    std::size_t dot = s.find('.');
    if (dot != std::string::npos && s.size() > dot + 11) {
        s.erase(dot + 11);
    }
    return s;
}

std::string format_error(const Real& e) {
    if (e.is_zero()) {
        return "0";
    }
    Real magnitude = abs(e);
    // 10^-10 cutoff without needing a context: decimal exponent >= -10.
    if (magnitude.decimal_exponent() >= -10) {
        return magnitude.to_fixed(10, RoundStyle::HalfEven);
    }
    return magnitude.to_scientific(2);
}

std::string format_value(const Real& v) {
    if (v.is_zero()) {
        return "0";
    }
    return v.to_scientific(9);
}

std::string format_full(const Real& v, const NumericContext& ctx) {
    if (v.is_zero()) {
        return "0";
    }
    return v.to_decimal(ctx.precision_digits());
}

RunReport make_run_report(Method m, const Problem& p, const MethodConfig& c,
                          const std::string& function_text,
                          const std::vector<std::string>& point_texts) {
    RunReport report;
    report.method = method_name(m);
    report.function = function_text;
    report.points = point_texts;
    report.precision = p.context().precision_digits();
    report.trace = run_method(m, p, c);
    report.indices = theoretical_indices(m, p.context());
    try {
        report.empirical = empirical_order(report.trace, p.context());
    } catch (const InsufficientData&) {
        report.empirical = std::nullopt;
    }
    return report;
}

std::string render_table(const RunReport& report, const NumericContext& ctx) {
    (void)ctx;
    std::ostringstream out;
    out << "method: " << report.method << "\n";
    out << "function: " << report.function << "\n";
    const bool have_error = !report.trace.steps.empty() &&
                            report.trace.steps.front().abs_error.has_value();

    out << "  i  " << std::string(18, ' ') << "x_i";
    if (have_error) out << "   |e_i|           ";
    out << "   f(x_i)               d_i  units\n";

    int cumulative = 0;
    for (const auto& s : report.trace.steps) {
        cumulative += s.horner_units;
        char idx[16];
        std::snprintf(idx, sizeof idx, "%3d", s.index);
        out << idx << "  ";
        std::string x = format_iterate(s.x);
        if (x.size() < 21) x.insert(0, 21 - x.size(), ' ');
        out << x;
        if (have_error) {
            std::string e = s.abs_error ? format_error(*s.abs_error) : "";
            e.resize(std::max<std::size_t>(e.size(), 16), ' ');
            out << "   " << e;
        }
        std::string r = s.residual ? format_value(*s.residual) : "";
        r.resize(std::max<std::size_t>(r.size(), 18), ' ');
        out << "   " << r << "   " << s.horner_units << "    " << cumulative << "\n";
    }
    out << "termination: " << termination_name(report.trace.termination) << "\n";
    if (report.empirical) {
        out << "empirical order (last ratios):";
        std::size_t shown = std::min<std::size_t>(report.empirical->ratios.size(), 4);
        for (std::size_t i = report.empirical->ratios.size() - shown;
             i < report.empirical->ratios.size(); ++i) {
            out << " " << report.empirical->ratios[i].to_fixed(4);
        }
        if (report.empirical->used_proxy) out << " (step-difference proxy)";
        out << "\n";
        if (report.empirical->asymptotic_constant) {
            out << "asymptotic error constant (indicative): "
                << format_value(*report.empirical->asymptotic_constant) << "\n";
        }
    }
    if (report.indices) {
        out << "indices: p=" << report.indices->p.to_fixed(4) << " d=" << report.indices->d
            << " I1=" << report.indices->I1.to_fixed(4) << " I2=" << report.indices->I2.to_fixed(4)
            << " I3=" << report.indices->I3.to_fixed(4) << "\n";
    }
    return out.str();
}

std::string render_csv(const RunReport& report, const NumericContext& ctx) {
    std::ostringstream out;
    out << "i,x,abs_error,residual,horner_units\n";
    for (const auto& s : report.trace.steps) {
        out << s.index << ',' << format_full(s.x, ctx) << ',';
        if (s.abs_error) out << format_full(*s.abs_error, ctx);
        out << ',';
        if (s.residual) out << format_full(*s.residual, ctx);
        out << ',' << s.horner_units << "\n";
    }
    return out.str();
}

namespace {

nlohmann::json steps_json(const IterationTrace& trace, const NumericContext& ctx) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : trace.steps) {
        nlohmann::json row;
        row["i"] = s.index;
        row["x"] = format_full(s.x, ctx);
        row["abs_error"] = s.abs_error ? nlohmann::json(format_full(*s.abs_error, ctx))
                                       : nlohmann::json(nullptr);
        row["residual"] = s.residual ? nlohmann::json(format_full(*s.residual, ctx))
                                     : nlohmann::json(nullptr);
        row["horner_units"] = s.horner_units;
        steps.push_back(std::move(row));
    }
    return steps;
}

nlohmann::json indices_json(const EfficiencyReport& r, const NumericContext& ctx) {
    nlohmann::json j;
    j["p"] = format_full(r.p, ctx);
    j["d"] = r.d;
    j["I1"] = format_full(r.I1, ctx);
    j["I2"] = format_full(r.I2, ctx);
    j["I3"] = format_full(r.I3, ctx);
    return j;
}

}  // namespace

nlohmann::json render_json(const RunReport& report, const NumericContext& ctx) {
    nlohmann::json j;
    j["method"] = report.method;
    j["function"] = report.function;
    j["points"] = report.points;
    j["precision"] = report.precision;
    j["steps"] = steps_json(report.trace, ctx);
    j["termination"] = termination_name(report.trace.termination);
    nlohmann::json ratios = nlohmann::json::array();
    if (report.empirical) {
        for (const auto& r : report.empirical->ratios) {
            ratios.push_back(format_full(r, ctx));
        }
    }
    j["empirical_order"] = std::move(ratios);
    j["empirical_order_proxy"] = report.empirical ? report.empirical->used_proxy : false;
    if (report.indices) {
        j["indices"] = indices_json(*report.indices, ctx);
    }
    return j;
}

CompareReport run_compare(const std::vector<Method>& methods, const Expr& f,
                          const NumericContext& ctx, const std::optional<Real>& root_hint,
                          const MethodConfig& base_config, const std::string& function_text,
                          const std::vector<std::string>& point_texts) {
    CompareReport report;
    report.function = function_text;
    report.points = point_texts;
    report.precision = ctx.precision_digits();

    Problem problem(f, ctx, root_hint);
    problem.materialize_derivatives(2);

    auto run_one = [&](Method m) -> CompareEntry {
        CompareEntry entry;
        entry.method = method_name(m);
        try {
            int need = required_points(m);
            if (static_cast<int>(base_config.initial_points.size()) < need) {
                throw InputError("method needs " + std::to_string(need) + " initial points");
            }
            MethodConfig c = base_config;
            // Extra points are ignored; the last ones are used.
            c.initial_points.assign(base_config.initial_points.end() - need,
                                    base_config.initial_points.end());
            entry.run = make_run_report(m, problem, c, function_text, point_texts);
        } catch (const Error& e) {
            entry.error = e.what();
        }
        return entry;
    };

    if (mpfr_buildopt_tls_p()) {
        std::vector<std::future<CompareEntry>> futures;
        futures.reserve(methods.size());
        for (Method m : methods) {
            futures.push_back(std::async(std::launch::async, run_one, m));
        }
        for (auto& fut : futures) {
            report.entries.push_back(fut.get());
        }
    } else {
        for (Method m : methods) {
            report.entries.push_back(run_one(m));
        }
    }
    return report;
}

std::string render_compare_table(const CompareReport& report, const NumericContext& ctx) {
    (void)ctx;
    std::ostringstream out;
    out << "function: " << report.function << "\n";
    out << "method               iters  units  emp.order  p       d  I1      I2      I3      termination\n";
    for (const auto& e : report.entries) {
        std::string name = e.method;
        name.resize(std::max<std::size_t>(name.size(), 19), ' ');
        out << name << "  ";
        if (!e.run) {
            out << "error: " << e.error << "\n";
            continue;
        }
        const RunReport& r = *e.run;
        char buf[160];
        std::string emp = r.empirical && !r.empirical->ratios.empty()
                              ? r.empirical->ratios.back().to_fixed(4)
                              : std::string("n/a");
        std::snprintf(buf, sizeof buf, "%5d  %5d  %-9s  %-6s  %d  %-6s  %-6s  %-6s  %s",
                      r.trace.produced_count(), r.trace.total_horner_units(), emp.c_str(),
                      r.indices->p.to_fixed(4).c_str(), r.indices->d,
                      r.indices->I1.to_fixed(4).c_str(), r.indices->I2.to_fixed(4).c_str(),
                      r.indices->I3.to_fixed(4).c_str(),
                      termination_name(r.trace.termination));
        out << buf << "\n";
    }
    return out.str();
}

std::string render_compare_csv(const CompareReport& report, const NumericContext& ctx) {
    (void)ctx;
    std::ostringstream out;
    out << "method,iterations,total_horner_units,empirical_order,p,d,I1,I2,I3,termination,error\n";
    for (const auto& e : report.entries) {
        out << e.method << ',';
        if (e.run) {
            const RunReport& r = *e.run;
            out << r.trace.produced_count() << ',' << r.trace.total_horner_units() << ',';
            if (r.empirical && !r.empirical->ratios.empty()) {
                out << r.empirical->ratios.back().to_fixed(6);
            }
            out << ',' << r.indices->p.to_fixed(10) << ',' << r.indices->d << ','
                << r.indices->I1.to_fixed(10) << ',' << r.indices->I2.to_fixed(10) << ','
                << r.indices->I3.to_fixed(10) << ',' << termination_name(r.trace.termination)
                << ',';
        } else {
            out << ",,,,,,,,";
        }
        out << '"' << e.error << '"' << "\n";
    }
    return out.str();
}

nlohmann::json render_compare_json(const CompareReport& report, const NumericContext& ctx) {
    nlohmann::json j;
    j["function"] = report.function;
    j["points"] = report.points;
    j["precision"] = report.precision;
    nlohmann::json results = nlohmann::json::array();
    for (const auto& e : report.entries) {
        nlohmann::json row;
        row["method"] = e.method;
        if (e.run) {
            row["iterations"] = e.run->trace.produced_count();
            row["total_horner_units"] = e.run->trace.total_horner_units();
            row["trace"] = render_json(*e.run, ctx);
        } else {
            row["error"] = e.error;
        }
        results.push_back(std::move(row));
    }
    j["results"] = std::move(results);
    return j;
}

AnalyzeReport run_analyze(int s, int n_max, const NumericContext& ctx) {
    if (s < 1 || n_max < 1) {
        throw InputError("analyze needs s >= 1 and n-max >= 1");
    }
    Real s_real = ctx.real(s);
    Real limit_order = ctx.real(s + 1);
    Real limit_i1 = limit_order / s_real;
    Real limit_i2 = pow(limit_order, ctx.real(1) / s_real);
    Real limit_i3 = log10(limit_order) / s_real;
    AnalyzeReport report(limit_order, limit_i1, limit_i2, limit_i3);
    report.s = s;
    report.orders = order_sequence(s, n_max, ctx);
    for (const auto& r : report.orders) {
        report.indices.push_back(efficiency_indices(r, s));
    }
    return report;
}

std::string render_analyze_table(const AnalyzeReport& report, const NumericContext& ctx) {
    std::ostringstream out;
    out << "s = " << report.s << "\n";
    out << "  k  r_k           I1        I2        I3\n";
    for (std::size_t i = 0; i < report.orders.size(); ++i) {
        char idx[16];
        std::snprintf(idx, sizeof idx, "%3zu", i + 1);
        out << idx << "  " << report.orders[i].to_fixed(10) << "  "
            << report.indices[i].I1.to_fixed(6) << "  " << report.indices[i].I2.to_fixed(6)
            << "  " << report.indices[i].I3.to_fixed(6) << "\n";
    }
    out << "lim  " << report.limit_order.to_fixed(10) << "  " << report.limit_i1.to_fixed(6)
        << "  " << report.limit_i2.to_fixed(6) << "  " << report.limit_i3.to_fixed(6) << "\n";
    if (report.s == 1) {
        out << "optimal multipoint I2 = 2^((n-1)/n) < 2 for every n; the s=1 process reaches I2 = "
            << report.limit_i2.to_fixed(4) << "\n";
        (void)ctx;
    }
    return out.str();
}

std::string render_analyze_csv(const AnalyzeReport& report, const NumericContext& ctx) {
    (void)ctx;
    std::ostringstream out;
    out << "k,r_k,I1,I2,I3\n";
    for (std::size_t i = 0; i < report.orders.size(); ++i) {
        out << (i + 1) << ',' << report.orders[i].to_fixed(15) << ','
            << report.indices[i].I1.to_fixed(15) << ',' << report.indices[i].I2.to_fixed(15)
            << ',' << report.indices[i].I3.to_fixed(15) << "\n";
    }
    out << "limit," << report.limit_order.to_fixed(15) << ',' << report.limit_i1.to_fixed(15)
        << ',' << report.limit_i2.to_fixed(15) << ',' << report.limit_i3.to_fixed(15) << "\n";
    return out.str();
}

nlohmann::json render_analyze_json(const AnalyzeReport& report, const NumericContext& ctx) {
    nlohmann::json j;
    j["s"] = report.s;
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < report.orders.size(); ++i) {
        nlohmann::json row;
        row["k"] = i + 1;
        row["r_k"] = format_full(report.orders[i], ctx);
        row["I1"] = format_full(report.indices[i].I1, ctx);
        row["I2"] = format_full(report.indices[i].I2, ctx);
        row["I3"] = format_full(report.indices[i].I3, ctx);
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    nlohmann::json limits;
    limits["order"] = format_full(report.limit_order, ctx);
    limits["I1"] = format_full(report.limit_i1, ctx);
    limits["I2"] = format_full(report.limit_i2, ctx);
    limits["I3"] = format_full(report.limit_i3, ctx);
    j["limits"] = std::move(limits);
    return j;
}

}  // namespace nsroot
