#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nsroot/analysis.hpp"
#include "nsroot/errors.hpp"
#include "nsroot/methods.hpp"
#include "nsroot/table1.hpp"
#include "nsroot/trace_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNumerical = 2;

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

// Plain key=value lines; '#' starts a comment.
std::map<std::string, std::string> load_config(const std::string& path) {
    std::map<std::string, std::string> out;
    std::ifstream in(path);
    if (!in) {
        throw nsroot::InputError("cannot open config file: " + path);
    }
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
            return s;
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (!key.empty()) out[key] = value;
    }
    return out;
}

struct CommonArgs {
    std::string function;
    std::string method;
    std::string methods;
    std::string points;
    int precision = nsroot::NumericContext::kDefaultDigits;
    std::string tol;
    int max_iter = 60;
    std::string root_hint;
    std::string output = "table";
    std::string config_path;
};

// Flags beat the config file, which beats defaults.
void apply_config(CLI::App* cmd, CommonArgs& args) {
    if (args.config_path.empty()) return;
    auto cfg = load_config(args.config_path);
    auto fill_str = [&](const char* flag, const char* key, std::string& slot) {
        auto* opt = cmd->get_option_no_throw(flag);
        if (cfg.count(key) && (!opt || opt->count() == 0)) slot = cfg[key];
    };
    auto fill_int = [&](const char* flag, const char* key, int& slot) {
        auto* opt = cmd->get_option_no_throw(flag);
        if (cfg.count(key) && (!opt || opt->count() == 0)) slot = std::stoi(cfg[key]);
    };
    fill_str("--function", "function", args.function);
    fill_str("--method", "method", args.method);
    fill_str("--methods", "methods", args.methods);
    fill_str("--points", "points", args.points);
    fill_int("--precision", "precision", args.precision);
    fill_str("--tol", "tol", args.tol);
    fill_int("--max-iter", "max-iter", args.max_iter);
    fill_str("--root-hint", "root-hint", args.root_hint);
    fill_str("--output", "output", args.output);
}

struct ProblemSetup {
    nsroot::NumericContext ctx;
    nsroot::Expr f;
    std::optional<nsroot::Real> hint;
    nsroot::MethodConfig config;
    std::vector<std::string> point_texts;
};

ProblemSetup build_setup(const CommonArgs& args) {
    nsroot::NumericContext ctx(args.precision);
    if (args.function.empty()) {
        throw nsroot::InputError("--function is required");
    }
    nsroot::Expr f = nsroot::Expr::parse(args.function);

    ProblemSetup setup{ctx, f, std::nullopt, {}, {}};
    setup.point_texts = split_csv(args.points);
    for (const auto& text : setup.point_texts) {
        setup.config.initial_points.push_back(ctx.real(text));
    }
    if (!args.tol.empty()) {
        nsroot::Real tol = ctx.real(args.tol);
        setup.config.tol_step = tol;
        setup.config.tol_residual = tol;
    }
    setup.config.max_iterations = args.max_iter;
    if (args.max_iter < 1) {
        throw nsroot::InputError("--max-iter must be >= 1");
    }
    if (!args.root_hint.empty()) {
        setup.hint = ctx.real(args.root_hint);
    }
    return setup;
}

int converged_exit(const nsroot::IterationTrace& trace) {
    switch (trace.termination) {
        case nsroot::Termination::StepTolerance:
        case nsroot::Termination::ResidualTolerance:
            return kExitOk;
        case nsroot::Termination::MaxIterations:
        case nsroot::Termination::Stalled:
            return kExitNumerical;
    }
    return kExitNumerical;
}

int cmd_solve(CLI::App* cmd, CommonArgs& args) {
    apply_config(cmd, args);
    if (args.method.empty()) {
        throw nsroot::InputError("--method is required");
    }
    auto method = nsroot::method_from_name(args.method);
    if (!method) {
        throw nsroot::InputError("unknown method: " + args.method);
    }
    ProblemSetup setup = build_setup(args);
    if (static_cast<int>(setup.config.initial_points.size()) != nsroot::required_points(*method)) {
        throw nsroot::InputError(args.method + " needs exactly " +
                                 std::to_string(nsroot::required_points(*method)) +
                                 " initial point(s)");
    }

    nsroot::Problem problem(setup.f, setup.ctx, setup.hint);
    nsroot::RunReport report = nsroot::make_run_report(*method, problem, setup.config,
                                                       args.function, setup.point_texts);
    if (args.output == "csv") {
        std::cout << nsroot::render_csv(report, setup.ctx);
    } else if (args.output == "json") {
        std::cout << nsroot::render_json(report, setup.ctx).dump(2) << "\n";
    } else {
        std::cout << nsroot::render_table(report, setup.ctx);
    }
    return converged_exit(report.trace);
}

int cmd_compare(CLI::App* cmd, CommonArgs& args) {
    apply_config(cmd, args);
    std::vector<nsroot::Method> methods;
    if (args.methods.empty()) {
        methods = nsroot::all_methods();
    } else {
        for (const auto& name : split_csv(args.methods)) {
            auto m = nsroot::method_from_name(name);
            if (!m) {
                throw nsroot::InputError("unknown method: " + name);
            }
            methods.push_back(*m);
        }
    }
    ProblemSetup setup = build_setup(args);

    nsroot::CompareReport report =
        nsroot::run_compare(methods, setup.f, setup.ctx, setup.hint, setup.config, args.function,
                            setup.point_texts);
    if (args.output == "csv") {
        std::cout << nsroot::render_compare_csv(report, setup.ctx);
    } else if (args.output == "json") {
        std::cout << nsroot::render_compare_json(report, setup.ctx).dump(2) << "\n";
    } else {
        std::cout << nsroot::render_compare_table(report, setup.ctx);
    }

    for (const auto& entry : report.entries) {
        if (!entry.run || converged_exit(entry.run->trace) != kExitOk) {
            return kExitNumerical;
        }
    }
    return kExitOk;
}

int cmd_analyze(CLI::App* cmd, CommonArgs& args, int s, int n_max) {
    apply_config(cmd, args);
    nsroot::NumericContext ctx(args.precision);
    nsroot::AnalyzeReport report = nsroot::run_analyze(s, n_max, ctx);
    if (args.output == "csv") {
        std::cout << nsroot::render_analyze_csv(report, ctx);
    } else if (args.output == "json") {
        std::cout << nsroot::render_analyze_json(report, ctx).dump(2) << "\n";
    } else {
        std::cout << nsroot::render_analyze_table(report, ctx);
    }
    return kExitOk;
}

int cmd_reproduce_table1() {
    nsroot::Table1Result result = nsroot::reproduce_table1();
    std::cout << result.rendered;
    std::cout << "checks:\n";
    for (const auto& chk : result.checks) {
        std::cout << "  [" << (chk.pass ? "ok" : "MISMATCH") << "] " << chk.label
                  << ": expected " << chk.expected << ", got " << chk.got << "\n";
    }
    std::cout << (result.all_pass ? "all checks passed" : "some checks failed") << "\n";
    return result.all_pass ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"high-precision scalar root finding with nonstationary iterative processes"};
    app.require_subcommand(1);

    CommonArgs args;

    auto add_common = [&](CLI::App* cmd, bool with_points) {
        cmd->add_option("--function", args.function, "expression in x (see README for the grammar)");
        if (with_points) {
            cmd->add_option("--points", args.points, "comma-separated initial points");
        }
        cmd->add_option("--precision", args.precision, "working precision in decimal digits");
        cmd->add_option("--tol", args.tol, "step and residual tolerance (decimal string)");
        cmd->add_option("--max-iter", args.max_iter, "maximum produced iterations");
        cmd->add_option("--root-hint", args.root_hint, "known root for the error column");
        cmd->add_option("--output", args.output, "table|csv|json")
            ->check(CLI::IsMember({"table", "csv", "json"}));
        cmd->add_option("--config", args.config_path, "key=value config file");
    };

    auto* solve = app.add_subcommand("solve", "run one method and print its trace");
    solve->add_option("--method", args.method, "method name");
    add_common(solve, true);

    auto* compare = app.add_subcommand("compare", "run several methods side by side");
    compare->add_option("--methods", args.methods, "comma-separated method names (default: all)");
    add_common(compare, true);

    int analyze_s = 1;
    int analyze_n_max = 10;
    auto* analyze = app.add_subcommand("analyze", "orders r_k and efficiency indices");
    analyze->add_option("--s", analyze_s, "derivative count including f");
    analyze->add_option("--n-max", analyze_n_max, "memory depths 1..n-max");
    add_common(analyze, false);

    auto* reproduce = app.add_subcommand("reproduce-table1",
                                         "reproduce the built-in reference table and check it");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInput;
    }

    try {
        if (solve->parsed()) return cmd_solve(solve, args);
        if (compare->parsed()) return cmd_compare(compare, args);
        if (analyze->parsed()) return cmd_analyze(analyze, args, analyze_s, analyze_n_max);
        if (reproduce->parsed()) return cmd_reproduce_table1();
    } catch (const nsroot::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const nsroot::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const nsroot::Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
