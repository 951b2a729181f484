#include "nsroot/methods.hpp"

#include <utility>

#include "nsroot/divdiff.hpp"
#include "nsroot/errors.hpp"

namespace nsroot {

Problem::Problem(Expr f, NumericContext ctx, std::optional<Real> root_hint)
    : f_(std::move(f)), ctx_(ctx), hint_(std::move(root_hint)) {}

const Expr& Problem::derivative(int order) const {
    if (order < 1) {
        throw InputError("derivative order must be >= 1");
    }
    while (static_cast<int>(derivatives_.size()) < order) {
        const Expr& base = derivatives_.empty() ? f_ : derivatives_.back();
        derivatives_.push_back(base.differentiate(1));
    }
    return derivatives_[order - 1];
}

void Problem::materialize_derivatives(int up_to) const {
    if (up_to >= 1) {
        derivative(up_to);
    }
}

const char* termination_name(Termination t) {
    switch (t) {
        case Termination::StepTolerance: return "step_tolerance";
        case Termination::ResidualTolerance: return "residual_tolerance";
        case Termination::MaxIterations: return "max_iterations";
        case Termination::Stalled: return "stalled";
    }
    return "unknown";
}

int IterationTrace::total_horner_units() const {
    int total = 0;
    for (const auto& s : steps) total += s.horner_units;
    return total;
}

namespace {

struct Tols {
    Real step;
    Real residual;
    Real vanish;  // denominator-vanishing threshold 10^(-2*precision)
};

Tols resolve_tolerances(const Problem& p, const MethodConfig& c) {
    const auto& ctx = p.context();
    Real def = ctx.pow10(-(ctx.precision_digits() - 20));
    Tols t{c.tol_step.value_or(def), c.tol_residual.value_or(def),
           ctx.pow10(-2L * ctx.precision_digits())};
    if (t.step.sign() <= 0 || t.residual.sign() <= 0) {
        throw InputError("tolerances must be positive");
    }
    return t;
}

void validate_points(const std::vector<Real>& pts, int required) {
    if (static_cast<int>(pts.size()) != required) {
        throw InputError("method requires " + std::to_string(required) + " initial point(s), got " +
                         std::to_string(pts.size()));
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            if (pts[i] == pts[j]) {
                throw InputError("initial points must be pairwise distinct");
            }
        }
    }
}

// Counts evaluations of f or any derivative; take() hands the accumulated
// count to the trace record the evaluations produced.
class UnitCounter {
  public:
    explicit UnitCounter(const Problem& p) : p_(p) {}

    Real f(const Real& x) {
        ++pending_;
        return p_.function().evaluate(x, p_.context());
    }

    Real deriv(int order, const Real& x) {
        ++pending_;
        return p_.derivative(order).evaluate(x, p_.context());
    }

    int take() { return std::exchange(pending_, 0); }

  private:
    const Problem& p_;
    int pending_ = 0;
};

void finish_trace(IterationTrace& trace, const Problem& p) {
    auto& last = trace.steps.back();
    if (!last.residual) {
        // Reporting only; not part of any step's unit count.
        try {
            last.residual = p.function().evaluate(last.x, p.context());
        } catch (const Error&) {
            // final iterate outside the domain; leave the column empty
        }
    }
    if (p.root_hint()) {
        for (auto& s : trace.steps) {
            s.abs_error = abs(s.x - *p.root_hint());
        }
    }
}

Termination duplicate_termination(const Real& fk, const Real& tol_residual) {
    return abs(fk) < sqrt(tol_residual) ? Termination::StepTolerance : Termination::Stalled;
}

}  // namespace

Real newton_update(const Real& x, const Real& f, const Real& H, const Real& vanish_threshold) {
    if (abs(H) < vanish_threshold) {
        throw DerivativeVanished();
    }
    return x - f / H;
}

Real halley_update(const Real& x, const Real& f, const Real& g, const Real& H,
                   const Real& vanish_threshold) {
    Real denom = (g + g) * g - f * H;
    if (abs(denom) < vanish_threshold) {
        throw DenominatorVanished();
    }
    return x - ((f + f) * g) / denom;
}

Real chebyshev_update(const Real& x, const Real& f, const Real& g, const Real& H,
                      const Real& vanish_threshold) {
    if (abs(g) < vanish_threshold) {
        throw DerivativeVanished();
    }
    Real g2 = g * g;
    return x - (f / g) * (one_like(g) + (f * H) / (g2 + g2));
}

// ---------------------------------------------------------------------------
// Stationary one-point methods
// ---------------------------------------------------------------------------

namespace {

enum class PointRule { Newton, Halley, Chebyshev };

IterationTrace run_one_point(const Problem& p, const MethodConfig& c, PointRule rule) {
    validate_points(c.initial_points, 1);
    Tols tol = resolve_tolerances(p, c);
    UnitCounter units(p);

    IterationTrace trace;
    trace.initial_count = 1;
    trace.steps.push_back({0, c.initial_points[0], std::nullopt, std::nullopt, 0});

    int produced = 0;
    for (;;) {
        const Real xk = trace.steps.back().x;
        Real fk = units.f(xk);
        trace.steps.back().residual = fk;
        if (abs(fk) < tol.residual) {
            trace.termination = Termination::ResidualTolerance;
            break;
        }
        if (produced == c.max_iterations) {
            trace.termination = Termination::MaxIterations;
            break;
        }
        Real gk = units.deriv(1, xk);
        Real xn = [&] {
            switch (rule) {
                case PointRule::Newton:
                    return newton_update(xk, fk, gk, tol.vanish);
                case PointRule::Halley:
                    return halley_update(xk, fk, gk, units.deriv(2, xk), tol.vanish);
                case PointRule::Chebyshev:
                    return chebyshev_update(xk, fk, gk, units.deriv(2, xk), tol.vanish);
            }
            throw Error("unreachable");
        }();
        trace.steps.push_back(
            {static_cast<int>(trace.steps.size()), xn, std::nullopt, std::nullopt, units.take()});
        ++produced;
        if (abs(xn - xk) < tol.step) {
            trace.termination = Termination::StepTolerance;
            break;
        }
    }

    finish_trace(trace, p);
    return trace;
}

}  // namespace

IterationTrace run_newton(const Problem& p, const MethodConfig& c) {
    return run_one_point(p, c, PointRule::Newton);
}

IterationTrace run_halley(const Problem& p, const MethodConfig& c) {
    return run_one_point(p, c, PointRule::Halley);
}

IterationTrace run_chebyshev(const Problem& p, const MethodConfig& c) {
    return run_one_point(p, c, PointRule::Chebyshev);
}

// ---------------------------------------------------------------------------
// Secant family (fixed memory window, d = 1)
// ---------------------------------------------------------------------------

IterationTrace run_secant(const Problem& p, const MethodConfig& c) {
    validate_points(c.initial_points, 2);
    Tols tol = resolve_tolerances(p, c);
    UnitCounter units(p);

    IterationTrace trace;
    trace.initial_count = 2;
    Real fprev = units.f(c.initial_points[0]);
    trace.steps.push_back({0, c.initial_points[0], fprev, std::nullopt, units.take()});
    trace.steps.push_back({1, c.initial_points[1], std::nullopt, std::nullopt, 0});

    int produced = 0;
    for (;;) {
        const Real xk = trace.steps.back().x;
        const Real xprev = trace.steps[trace.steps.size() - 2].x;
        Real fk = units.f(xk);
        trace.steps.back().residual = fk;
        if (abs(fk) < tol.residual) {
            trace.termination = Termination::ResidualTolerance;
            break;
        }
        if (produced == c.max_iterations) {
            trace.termination = Termination::MaxIterations;
            break;
        }
        Real slope = (fk - fprev) / (xk - xprev);
        if (abs(slope) < tol.vanish) {
            trace.termination = Termination::Stalled;
            break;
        }
        Real xn = xk - fk / slope;
        trace.steps.push_back(
            {static_cast<int>(trace.steps.size()), xn, std::nullopt, std::nullopt, units.take()});
        ++produced;
        if (abs(xn - xk) < tol.step) {
            trace.termination = Termination::StepTolerance;
            break;
        }
        fprev = fk;
    }

    finish_trace(trace, p);
    return trace;
}

IterationTrace run_generalized_secant(const Problem& p, const MethodConfig& c) {
    validate_points(c.initial_points, 3);
    Tols tol = resolve_tolerances(p, c);
    UnitCounter units(p);

    IterationTrace trace;
    trace.initial_count = 3;
    Real f0 = units.f(c.initial_points[0]);
    trace.steps.push_back({0, c.initial_points[0], f0, std::nullopt, units.take()});
    Real f1 = units.f(c.initial_points[1]);
    trace.steps.push_back({1, c.initial_points[1], f1, std::nullopt, units.take()});
    trace.steps.push_back({2, c.initial_points[2], std::nullopt, std::nullopt, 0});

    Real fprev2 = f0;  // f at steps[-3]
    Real fprev1 = f1;  // f at steps[-2]
    int produced = 0;
    for (;;) {
        const std::size_t m = trace.steps.size();
        const Real xk = trace.steps[m - 1].x;
        const Real xp = trace.steps[m - 2].x;
        const Real xpp = trace.steps[m - 3].x;
        Real fk = units.f(xk);
        trace.steps.back().residual = fk;
        if (abs(fk) < tol.residual) {
            trace.termination = Termination::ResidualTolerance;
            break;
        }
        if (produced == c.max_iterations) {
            trace.termination = Termination::MaxIterations;
            break;
        }
        if (xk == xpp) {
            // 2-cycle revisiting the oldest window node: the order-2 divided
            // difference is undefined, the iteration is going nowhere.
            trace.termination = Termination::Stalled;
            break;
        }
        // First- and second-order divided differences over the window.
        Real d_new = (fk - fprev1) / (xk - xp);
        Real d_old = (fprev1 - fprev2) / (xp - xpp);
        Real dd2 = (d_new - d_old) / (xk - xpp);
        Real denom = d_new + dd2 * (xk - xp);
        if (abs(denom) < tol.vanish) {
            trace.termination = Termination::Stalled;
            break;
        }
        Real xn = xk - fk / denom;
        trace.steps.push_back(
            {static_cast<int>(trace.steps.size()), xn, std::nullopt, std::nullopt, units.take()});
        ++produced;
        if (abs(xn - xk) < tol.step) {
            trace.termination = Termination::StepTolerance;
            break;
        }
        fprev2 = fprev1;
        fprev1 = fk;
    }

    finish_trace(trace, p);
    return trace;
}

// ---------------------------------------------------------------------------
// Nonstationary processes (table grows over all past iterates)
// ---------------------------------------------------------------------------

IterationTrace run_nonstationary_s1(const Problem& p, const MethodConfig& c) {
    validate_points(c.initial_points, 2);
    Tols tol = resolve_tolerances(p, c);
    UnitCounter units(p);

    IterationTrace trace;
    trace.initial_count = 2;
    DividedDifferenceTable table;

    Real f0 = units.f(c.initial_points[0]);
    table.append(c.initial_points[0], f0);
    trace.steps.push_back({0, c.initial_points[0], f0, std::nullopt, units.take()});
    trace.steps.push_back({1, c.initial_points[1], std::nullopt, std::nullopt, 0});

    int produced = 0;
    for (;;) {
        const Real xk = trace.steps.back().x;
        Real fk = units.f(xk);
        trace.steps.back().residual = fk;
        if (abs(fk) < tol.residual) {
            trace.termination = Termination::ResidualTolerance;
            break;
        }
        if (produced == c.max_iterations) {
            trace.termination = Termination::MaxIterations;
            break;
        }
        try {
            table.append(xk, fk);
        } catch (const DuplicateNode&) {
            trace.termination = duplicate_termination(fk, tol.residual);
            break;
        }
        Real G = table.derivative_at_last();
        if (abs(G) < tol.vanish) {
            trace.termination = Termination::Stalled;
            break;
        }
        Real xn = xk - fk / G;
        trace.steps.push_back(
            {static_cast<int>(trace.steps.size()), xn, std::nullopt, std::nullopt, units.take()});
        ++produced;
        if (abs(xn - xk) < tol.step) {
            trace.termination = Termination::StepTolerance;
            break;
        }
    }

    finish_trace(trace, p);
    return trace;
}

namespace {

enum class S2Rule { Halley, Chebyshev };

// Shared mechanics of the two s = 2 nonstationary methods: the table holds
// (x_j, g_j) with g = f', seeded from the first two initial points; each loop
// step evaluates only f_k and g_k.
IterationTrace run_nonstat_s2(const Problem& p, const MethodConfig& c, S2Rule rule) {
    validate_points(c.initial_points, 3);
    Tols tol = resolve_tolerances(p, c);
    UnitCounter units(p);

    IterationTrace trace;
    trace.initial_count = 3;
    DividedDifferenceTable table;

    for (int j = 0; j < 2; ++j) {
        Real fj = units.f(c.initial_points[j]);
        Real gj = units.deriv(1, c.initial_points[j]);
        table.append(c.initial_points[j], gj);
        trace.steps.push_back({j, c.initial_points[j], fj, std::nullopt, units.take()});
    }
    trace.steps.push_back({2, c.initial_points[2], std::nullopt, std::nullopt, 0});

    int produced = 0;
    for (;;) {
        const Real xk = trace.steps.back().x;
        Real fk = units.f(xk);
        trace.steps.back().residual = fk;
        if (abs(fk) < tol.residual) {
            trace.termination = Termination::ResidualTolerance;
            break;
        }
        if (produced == c.max_iterations) {
            trace.termination = Termination::MaxIterations;
            break;
        }
        Real gk = units.deriv(1, xk);
        try {
            table.append(xk, gk);
        } catch (const DuplicateNode&) {
            trace.termination = duplicate_termination(fk, tol.residual);
            break;
        }
        Real G = table.derivative_at_last();
        Real xn = rule == S2Rule::Halley ? halley_update(xk, fk, gk, G, tol.vanish)
                                         : chebyshev_update(xk, fk, gk, G, tol.vanish);
        trace.steps.push_back(
            {static_cast<int>(trace.steps.size()), xn, std::nullopt, std::nullopt, units.take()});
        ++produced;
        if (abs(xn - xk) < tol.step) {
            trace.termination = Termination::StepTolerance;
            break;
        }
    }

    finish_trace(trace, p);
    return trace;
}

}  // namespace

IterationTrace run_nonstationary_halley(const Problem& p, const MethodConfig& c) {
    return run_nonstat_s2(p, c, S2Rule::Halley);
}

IterationTrace run_nonstationary_chebyshev(const Problem& p, const MethodConfig& c) {
    return run_nonstat_s2(p, c, S2Rule::Chebyshev);
}

IterationTrace run_nonstationary_generic(const Problem& p, const MethodConfig& c, int s,
                                         const BaseUpdate& update) {
    if (s < 1) {
        throw InputError("s must be >= 1");
    }
    validate_points(c.initial_points, s + 1);
    Tols tol = resolve_tolerances(p, c);
    UnitCounter units(p);

    IterationTrace trace;
    trace.initial_count = s + 1;
    DividedDifferenceTable table;

    // Seed the table with (x_j, g_j), g = f^(s-1), over the first s points.
    for (int j = 0; j < s; ++j) {
        Real fj = units.f(c.initial_points[j]);
        Real gj = s == 1 ? fj : units.deriv(s - 1, c.initial_points[j]);
        table.append(c.initial_points[j], gj);
        trace.steps.push_back({j, c.initial_points[j], fj, std::nullopt, units.take()});
    }
    trace.steps.push_back({s, c.initial_points[s], std::nullopt, std::nullopt, 0});

    int produced = 0;
    for (;;) {
        const Real xk = trace.steps.back().x;
        Real fk = units.f(xk);
        trace.steps.back().residual = fk;
        if (abs(fk) < tol.residual) {
            trace.termination = Termination::ResidualTolerance;
            break;
        }
        if (produced == c.max_iterations) {
            trace.termination = Termination::MaxIterations;
            break;
        }
        std::vector<Real> derivs;
        derivs.reserve(s);
        derivs.push_back(fk);
        for (int order = 1; order < s - 1; ++order) {
            derivs.push_back(units.deriv(order, xk));
        }
        Real gk = s == 1 ? fk : units.deriv(s - 1, xk);
        if (s >= 2) {
            derivs.push_back(gk);
        }
        try {
            table.append(xk, gk);
        } catch (const DuplicateNode&) {
            trace.termination = duplicate_termination(fk, tol.residual);
            break;
        }
        Real H = table.derivative_at_last();
        Real xn = update(xk, derivs, H);
        trace.steps.push_back(
            {static_cast<int>(trace.steps.size()), xn, std::nullopt, std::nullopt, units.take()});
        ++produced;
        if (abs(xn - xk) < tol.step) {
            trace.termination = Termination::StepTolerance;
            break;
        }
    }

    finish_trace(trace, p);
    return trace;
}

// ---------------------------------------------------------------------------
// Method registry
// ---------------------------------------------------------------------------

const char* method_name(Method m) {
    switch (m) {
        case Method::Newton: return "newton";
        case Method::Secant: return "secant";
        case Method::GeneralizedSecant: return "generalized-secant";
        case Method::NonstatS1: return "nonstat-s1";
        case Method::Halley: return "halley";
        case Method::NonstatHalley: return "nonstat-halley";
        case Method::Chebyshev: return "chebyshev";
        case Method::NonstatChebyshev: return "nonstat-chebyshev";
    }
    return "unknown";
}

std::optional<Method> method_from_name(std::string_view name) {
    for (Method m : all_methods()) {
        if (name == method_name(m)) return m;
    }
    return std::nullopt;
}

std::vector<Method> all_methods() {
    return {Method::Newton,  Method::Secant,        Method::GeneralizedSecant,
            Method::NonstatS1, Method::Halley,      Method::NonstatHalley,
            Method::Chebyshev, Method::NonstatChebyshev};
}

int required_points(Method m) {
    switch (m) {
        case Method::Newton:
        case Method::Halley:
        case Method::Chebyshev:
            return 1;
        case Method::Secant:
        case Method::NonstatS1:
            return 2;
        case Method::GeneralizedSecant:
        case Method::NonstatHalley:
        case Method::NonstatChebyshev:
            return 3;
    }
    return 1;
}

int units_per_step(Method m) {
    switch (m) {
        case Method::Newton: return 2;
        case Method::Secant: return 1;
        case Method::GeneralizedSecant: return 1;
        case Method::NonstatS1: return 1;
        case Method::Halley: return 3;
        case Method::NonstatHalley: return 2;
        case Method::Chebyshev: return 3;
        case Method::NonstatChebyshev: return 2;
    }
    return 1;
}

IterationTrace run_method(Method m, const Problem& p, const MethodConfig& c) {
    switch (m) {
        case Method::Newton: return run_newton(p, c);
        case Method::Secant: return run_secant(p, c);
        case Method::GeneralizedSecant: return run_generalized_secant(p, c);
        case Method::NonstatS1: return run_nonstationary_s1(p, c);
        case Method::Halley: return run_halley(p, c);
        case Method::NonstatHalley: return run_nonstationary_halley(p, c);
        case Method::Chebyshev: return run_chebyshev(p, c);
        case Method::NonstatChebyshev: return run_nonstationary_chebyshev(p, c);
    }
    throw Error("unknown method");
}

}  // namespace nsroot
