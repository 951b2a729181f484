#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "nsroot/analysis.hpp"
#include "nsroot/divdiff.hpp"
#include "nsroot/methods.hpp"
#include "nsroot/trace_io.hpp"
#include "support.hpp"

using namespace nsroot;
using testsupport::close_digits;
using testsupport::within;

namespace {

Problem example_problem(const NumericContext& ctx) {
    return Problem(Expr::parse(testsupport::kEq21), ctx, sqrt(ctx.real(2)));
}

MethodConfig paper_points(const NumericContext& ctx, int count) {
    MethodConfig c;
    std::vector<Real> all{ctx.real("1.7"), ctx.real("1.6"), ctx.real("1.5")};
    c.initial_points.assign(all.end() - count, all.end());
    return c;
}

// Root of the example function located without derivatives, for cross-checks.
Real bisect_example_root(const NumericContext& ctx) {
    Expr f = Expr::parse(testsupport::kEq21);
    Real lo = ctx.real(1);
    Real hi = ctx.real(2);
    Real two = ctx.real(2);
    Real width = ctx.pow10(-40);
    while (hi - lo > width) {
        Real mid = (lo + hi) / two;
        if (f.evaluate(mid, ctx).sign() < 0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return (lo + hi) / two;
}

}  // namespace

TEST_CASE("newton: hand-checked first steps and exact linear solve") {
    NumericContext ctx;
    Problem quad(Expr::parse("x^2 - 1"), ctx);
    MethodConfig c;
    c.initial_points = {ctx.real(2)};
    IterationTrace t = run_newton(quad, c);
    REQUIRE(t.steps.size() >= 2);
    CHECK(t.steps[1].x == ctx.real("1.25"));

    Problem line(Expr::parse("x - 5"), ctx);
    MethodConfig c2;
    c2.initial_points = {ctx.real(0)};
    IterationTrace t2 = run_newton(line, c2);
    CHECK(t2.termination == Termination::ResidualTolerance);
    CHECK(t2.produced_count() == 1);
    CHECK(t2.steps.back().x == ctx.real(5));
}

TEST_CASE("newton converges to the example root found by bisection") {
    NumericContext ctx;
    Problem p = example_problem(ctx);
    IterationTrace t = run_newton(p, paper_points(ctx, 1));
    Real root = bisect_example_root(ctx);
    CHECK(close_digits(t.steps.back().x, root, 35, ctx));
    CHECK(t.steps.back().x.to_fixed(10) == "1.4142135624");
}

TEST_CASE("secant: hand step and linear exactness") {
    NumericContext ctx;
    Problem quad(Expr::parse("x^2 - 1"), ctx);
    MethodConfig c;
    c.initial_points = {ctx.real(0), ctx.real(2)};
    IterationTrace t = run_secant(quad, c);
    REQUIRE(t.steps.size() >= 3);
    CHECK(t.steps[2].x == ctx.real("0.5"));

    Problem line(Expr::parse("x - 5"), ctx);
    MethodConfig c2;
    c2.initial_points = {ctx.real(1), ctx.real(2)};
    IterationTrace t2 = run_secant(line, c2);
    CHECK(t2.steps.back().x == ctx.real(5));
    CHECK(t2.produced_count() == 1);
}

TEST_CASE("generalized secant: display formula evaluated by hand") {
    NumericContext ctx;
    Problem quad(Expr::parse("x^2 - 1"), ctx);
    MethodConfig c;
    c.initial_points = {ctx.real(0), ctx.real(2), ctx.real("0.5")};
    IterationTrace t = run_generalized_secant(quad, c);
    REQUIRE(t.steps.size() >= 4);

    // Hand evaluation over the window (0, 2, 0.5):
    // d10 = (f2-f1)/(x2-x1), d21 = (f1-f0)/(x1-x0), d2 = (d10-d21)/(x2-x0),
    // next = x2 - f2 / (d10 + d2*(x2-x1)) = 0.5 + 0.75/1 = 1.25.
    CHECK(t.steps[3].x == ctx.real("1.25"));

    Problem line(Expr::parse("x - 5"), ctx);
    MethodConfig c2;
    c2.initial_points = {ctx.real(0), ctx.real(1), ctx.real(2)};
    IterationTrace t2 = run_generalized_secant(line, c2);
    CHECK(t2.steps.back().x == ctx.real(5));
    CHECK(t2.produced_count() == 1);
}

TEST_CASE("halley: hand value 14/13 and cubic convergence on the example") {
    NumericContext ctx;
    Problem quad(Expr::parse("x^2 - 1"), ctx);
    MethodConfig c;
    c.initial_points = {ctx.real(2)};
    IterationTrace t = run_halley(quad, c);
    REQUIRE(t.steps.size() >= 2);
    CHECK(close_digits(t.steps[1].x, ctx.real(14) / ctx.real(13), 115, ctx));

    Problem line(Expr::parse("x - 5"), ctx);
    MethodConfig c2;
    c2.initial_points = {ctx.real(0)};
    IterationTrace t2 = run_halley(line, c2);
    CHECK(t2.steps.back().x == ctx.real(5));
    CHECK(t2.produced_count() == 1);

    Problem p = example_problem(ctx);
    IterationTrace t3 = run_halley(p, paper_points(ctx, 1));
    CHECK(t3.steps.back().x.to_fixed(10) == "1.4142135624");
    auto order = empirical_order(t3, ctx);
    CHECK(within(order.ratios.back(), 2.7, 3.3));
}

TEST_CASE("chebyshev: hand value 1.109375 (exact dyadic) and cubic convergence") {
    NumericContext ctx;
    Problem quad(Expr::parse("x^2 - 1"), ctx);
    MethodConfig c;
    c.initial_points = {ctx.real(2)};
    IterationTrace t = run_chebyshev(quad, c);
    REQUIRE(t.steps.size() >= 2);
    CHECK(t.steps[1].x == ctx.real("1.109375"));

    Problem p = example_problem(ctx);
    IterationTrace t2 = run_chebyshev(p, paper_points(ctx, 1));
    CHECK(t2.steps.back().x.to_fixed(10) == "1.4142135624");
    auto order = empirical_order(t2, ctx);
    CHECK(within(order.ratios.back(), 2.7, 3.3));
}

TEST_CASE("nonstationary s=1: first step is the secant step") {
    NumericContext ctx;
    Problem p = example_problem(ctx);
    IterationTrace s1 = run_nonstationary_s1(p, paper_points(ctx, 2));
    IterationTrace sec = run_secant(p, paper_points(ctx, 2));
    REQUIRE(s1.steps.size() >= 3);
    CHECK(s1.steps[2].x == sec.steps[2].x);
}

TEST_CASE("nonstationary s=1 on a cubic becomes Newton once the table is exact") {
    NumericContext ctx;
    Expr f = Expr::parse("x^3 - 2*x - 5");
    Problem p(f, ctx);
    MethodConfig c;
    c.initial_points = {ctx.real("2.4"), ctx.real("2.2")};
    IterationTrace t = run_nonstationary_s1(p, c);
    Expr df = f.differentiate();

    // From the step with four accumulated nodes onward, the interpolant is the
    // cubic itself, so each step must equal a Newton step on f.
    REQUIRE(t.steps.size() >= 6);
    for (std::size_t k = 4; k + 1 < t.steps.size(); ++k) {
        const Real& xk = t.steps[k].x;
        Real newton_step = xk - f.evaluate(xk, ctx) / df.evaluate(xk, ctx);
        CHECK(close_digits(t.steps[k + 1].x, newton_step, ctx.precision_digits() - 10, ctx));
    }
}

TEST_CASE("empirical orders of the memory methods on the example problem") {
    NumericContext ctx;
    Problem p = example_problem(ctx);

    auto sec = empirical_order(run_secant(p, paper_points(ctx, 2)), ctx);
    CHECK(within(sec.ratios.back(), 1.618 - 0.05, 1.618 + 0.05));

    auto gen = empirical_order(run_generalized_secant(p, paper_points(ctx, 3)), ctx);
    CHECK(within(gen.ratios.back(), 1.84 - 0.05, 1.84 + 0.05));

    auto s1 = empirical_order(run_nonstationary_s1(p, paper_points(ctx, 2)), ctx);
    CHECK(within(s1.ratios.back(), 2.0 - 0.1, 2.0 + 0.1));
}

TEST_CASE("nonstationary halley variant: reference iterates at 120 digits") {
    NumericContext ctx;
    Problem p = example_problem(ctx);
    IterationTrace t = run_nonstationary_halley(p, paper_points(ctx, 3));
    REQUIRE(t.steps.size() >= 7);

    CHECK(format_iterate(t.steps[3].x) == "1.4143581722");
    CHECK(format_iterate(t.steps[4].x) == "1.4142135632");
    CHECK(t.steps[3].abs_error->to_fixed(10) == "0.0001446099");
    CHECK(t.steps[4].abs_error->to_fixed(10) == "0.0000000008");

    // Frozen from an independent 200-digit simulation of the same recurrence.
    CHECK(t.steps[5].abs_error->decimal_exponent() == -24);
    CHECK(close_digits(*t.steps[5].abs_error, ctx.real("2.97944e-24"), 3, ctx));
    CHECK(t.steps[6].abs_error->decimal_exponent() == -62);
    CHECK(close_digits(*t.steps[6].abs_error, ctx.real("8.97501e-62"), 3, ctx));

    auto order = empirical_order(t, ctx);
    CHECK(within(order.ratios.back(), 2.55, 2.65));
}

TEST_CASE("nonstationary chebyshev variant: reference iterates at 120 digits") {
    NumericContext ctx;
    Problem p = example_problem(ctx);
    IterationTrace t = run_nonstationary_chebyshev(p, paper_points(ctx, 3));
    REQUIRE(t.steps.size() >= 7);

    CHECK(format_iterate(t.steps[3].x) == "1.4149666839");
    CHECK(format_iterate(t.steps[4].x) == "1.4142135854");
    CHECK(t.steps[3].abs_error->to_fixed(10) == "0.0007531215");

    CHECK(t.steps[5].abs_error->decimal_exponent() == -20);
    CHECK(close_digits(*t.steps[5].abs_error, ctx.real("1.18098e-20"), 3, ctx));
    CHECK(t.steps[6].abs_error->decimal_exponent() == -52);
    CHECK(close_digits(*t.steps[6].abs_error, ctx.real("2.01985e-52"), 3, ctx));

    auto order = empirical_order(t, ctx);
    CHECK(within(order.ratios.back(), 2.55, 2.65));
}

TEST_CASE("horner-unit audit: d_k is constant after initialization") {
    NumericContext ctx;
    Problem p = example_problem(ctx);

    for (Method m : all_methods()) {
        MethodConfig c = paper_points(ctx, required_points(m));
        IterationTrace t = run_method(m, p, c);
        REQUIRE(t.produced_count() >= 3);
        for (std::size_t k = t.initial_count; k < t.steps.size(); ++k) {
            CHECK(t.steps[k].horner_units == units_per_step(m));
        }
    }
}

TEST_CASE("initialization units follow the published algorithms") {
    NumericContext ctx;
    Problem p = example_problem(ctx);

    // s = 2 variants evaluate f and g at the first two points.
    IterationTrace h = run_nonstationary_halley(p, paper_points(ctx, 3));
    CHECK(h.steps[0].horner_units == 2);
    CHECK(h.steps[1].horner_units == 2);
    CHECK(h.steps[2].horner_units == 0);

    // s = 1 evaluates only f0.
    IterationTrace s1 = run_nonstationary_s1(p, paper_points(ctx, 2));
    CHECK(s1.steps[0].horner_units == 1);
    CHECK(s1.steps[1].horner_units == 0);

    IterationTrace n = run_newton(p, paper_points(ctx, 1));
    CHECK(n.steps[0].horner_units == 0);
}

TEST_CASE("error contraction on every recorded step of every method") {
    NumericContext ctx;
    Problem p = example_problem(ctx);
    for (Method m : all_methods()) {
        IterationTrace t = run_method(m, p, paper_points(ctx, required_points(m)));
        for (std::size_t k = 0; k + 1 < t.steps.size(); ++k) {
            REQUIRE(t.steps[k].abs_error.has_value());
            CHECK(*t.steps[k + 1].abs_error < *t.steps[k].abs_error);
        }
    }
}

TEST_CASE("all methods agree on the example root at 10 places") {
    NumericContext ctx;
    Problem p = example_problem(ctx);
    for (Method m : all_methods()) {
        IterationTrace t = run_method(m, p, paper_points(ctx, required_points(m)));
        CHECK(t.steps.back().x.to_fixed(10) == "1.4142135624");
    }
}

TEST_CASE("generic combinator reproduces the dedicated runs step for step") {
    NumericContext ctx;
    Problem p = example_problem(ctx);
    Real vanish = ctx.pow10(-2L * ctx.precision_digits());

    auto same_trace = [](const IterationTrace& a, const IterationTrace& b) {
        REQUIRE(a.steps.size() == b.steps.size());
        for (std::size_t i = 0; i < a.steps.size(); ++i) {
            CHECK(a.steps[i].x == b.steps[i].x);
            CHECK(a.steps[i].horner_units == b.steps[i].horner_units);
        }
        CHECK(a.termination == b.termination);
        CHECK(a.initial_count == b.initial_count);
    };

    BaseUpdate halley_rule = [&](const Real& x, std::span<const Real> d, const Real& H) {
        return halley_update(x, d[0], d[1], H, vanish);
    };
    same_trace(run_nonstationary_generic(p, paper_points(ctx, 3), 2, halley_rule),
               run_nonstationary_halley(p, paper_points(ctx, 3)));

    BaseUpdate cheby_rule = [&](const Real& x, std::span<const Real> d, const Real& H) {
        return chebyshev_update(x, d[0], d[1], H, vanish);
    };
    same_trace(run_nonstationary_generic(p, paper_points(ctx, 3), 2, cheby_rule),
               run_nonstationary_chebyshev(p, paper_points(ctx, 3)));

    BaseUpdate newton_rule = [&](const Real& x, std::span<const Real> d, const Real& H) {
        return newton_update(x, d[0], H, vanish);
    };
    IterationTrace generic = run_nonstationary_generic(p, paper_points(ctx, 2), 1, newton_rule);
    IterationTrace dedicated = run_nonstationary_s1(p, paper_points(ctx, 2));
    REQUIRE(generic.steps.size() == dedicated.steps.size());
    for (std::size_t i = 0; i < generic.steps.size(); ++i) {
        CHECK(generic.steps[i].x == dedicated.steps[i].x);
        CHECK(generic.steps[i].horner_units == dedicated.steps[i].horner_units);
    }
}

TEST_CASE("generic combinator handles s=3 with a fourth-order base rule") {
    NumericContext ctx;
    Problem p = example_problem(ctx);
    Real vanish = ctx.pow10(-2L * ctx.precision_digits());

    // Fourth-order one-point rule x - u - C2 u^2 - (2 C2^2 - C3) u^3 with
    // u = f/f', C2 = f''/(2f'), C3 = f'''/(6f'); H stands in for f'''.
    BaseUpdate fourth_order = [&](const Real& x, std::span<const Real> d, const Real& H) {
        const Real& f = d[0];
        const Real& g = d[1];
        const Real& g2 = d[2];
        if (abs(g) < vanish) throw DerivativeVanished();
        Real u = f / g;
        Real c2 = g2 / (g + g);
        Real c3 = H / (ctx.real(6) * g);
        return x - u - c2 * u * u - ((c2 + c2) * c2 - c3) * u * u * u;
    };

    MethodConfig c;
    c.initial_points = {ctx.real("1.8"), ctx.real("1.7"), ctx.real("1.6"), ctx.real("1.5")};
    IterationTrace t = run_nonstationary_generic(p, c, 3, fourth_order);

    CHECK(t.steps.back().x.to_fixed(10) == "1.4142135624");
    CHECK(t.initial_count == 4);
    for (std::size_t k = t.initial_count; k < t.steps.size(); ++k) {
        CHECK(t.steps[k].horner_units == 3);
    }
    auto order = empirical_order(t, ctx);
    CHECK(within(order.ratios.back(), 3.0, 3.7));
}

TEST_CASE("reference iterates hold at non-default precision") {
    NumericContext ctx(60);
    Problem p(Expr::parse(testsupport::kEq21), ctx, sqrt(ctx.real(2)));
    MethodConfig c;
    c.initial_points = {ctx.real("1.7"), ctx.real("1.6"), ctx.real("1.5")};
    IterationTrace t = run_nonstationary_halley(p, c);
    REQUIRE(t.steps.size() >= 5);
    CHECK(format_iterate(t.steps[3].x) == "1.4143581722");
    CHECK(format_iterate(t.steps[4].x) == "1.4142135632");
    CHECK(t.steps.back().x.to_fixed(10) == "1.4142135624");
}

TEST_CASE("runs stay healthy at 500 digits") {
    NumericContext ctx(500);
    Problem p(Expr::parse(testsupport::kEq21), ctx, sqrt(ctx.real(2)));
    MethodConfig c;
    c.initial_points = {ctx.real("1.7"), ctx.real("1.6"), ctx.real("1.5")};
    IterationTrace t = run_nonstationary_halley(p, c);
    CHECK(t.steps.back().x.to_fixed(10) == "1.4142135624");
    CHECK(t.termination == Termination::ResidualTolerance);
    // tolerance 10^-480: two more table-growing steps past the 120-digit run
    CHECK(t.produced_count() <= 12);
    CHECK(abs(*t.steps.back().abs_error) <= ctx.pow10(-450));
}

TEST_CASE("input validation") {
    NumericContext ctx;
    Problem p = example_problem(ctx);

    MethodConfig wrong;
    wrong.initial_points = {ctx.real(1), ctx.real(2)};
    CHECK_THROWS_AS(run_newton(p, wrong), InputError);

    MethodConfig dup;
    dup.initial_points = {ctx.real(1), ctx.real(1)};
    CHECK_THROWS_AS(run_secant(p, dup), InputError);

    MethodConfig bad_tol = paper_points(ctx, 1);
    bad_tol.tol_step = ctx.real(0);
    CHECK_THROWS_AS(run_newton(p, bad_tol), InputError);
}

TEST_CASE("failure modes: max iterations, stalls, vanishing derivatives") {
    NumericContext ctx;

    Problem quad(Expr::parse("x^2 - 1"), ctx);
    MethodConfig slow;
    slow.initial_points = {ctx.real(100)};
    slow.max_iterations = 3;
    IterationTrace t = run_newton(quad, slow);
    CHECK(t.termination == Termination::MaxIterations);
    CHECK(t.produced_count() == 3);
    CHECK(t.steps.back().residual.has_value());

    Problem bump(Expr::parse("x^2 + 1"), ctx);
    MethodConfig sym;
    sym.initial_points = {ctx.real(-1), ctx.real(1)};
    CHECK(run_secant(bump, sym).termination == Termination::Stalled);

    MethodConfig at_zero;
    at_zero.initial_points = {ctx.real(0)};
    CHECK_THROWS_AS(run_newton(bump, at_zero), DerivativeVanished);
    CHECK_THROWS_AS(run_chebyshev(bump, at_zero), DerivativeVanished);

    // 2 f'(x)^2 - f(x) f''(x) = 6x^2 + 2c vanishes for f = x^2+3 at x = 1.
    Problem crafted(Expr::parse("x^2 + 3"), ctx);
    MethodConfig at_one;
    at_one.initial_points = {ctx.real(1)};
    CHECK_THROWS_AS(run_halley(crafted, at_one), DenominatorVanished);
}

TEST_CASE("revisiting an old iterate converts to a stall or convergence") {
    NumericContext ctx;
    Real vanish = ctx.pow10(-2L * ctx.precision_digits());

    // A rule rigged to cycle v -> w -> v forces a duplicate table node at the
    // third produced step.
    auto cycle_rule = [&](Real v, Real w) -> BaseUpdate {
        auto flip = std::make_shared<int>(0);
        return [=](const Real& x, std::span<const Real>, const Real&) {
            (void)x;
            return (((*flip)++ % 2) == 0) ? v : w;
        };
    };

    // Far from the root: |f(v)| is large, so the revisit is a stall.
    Problem line(Expr::parse("x - 9"), ctx);
    MethodConfig c;
    c.initial_points = {ctx.real(1), ctx.real(2)};
    IterationTrace stalled =
        run_nonstationary_generic(line, c, 1, cycle_rule(ctx.real(3), ctx.real(4)));
    CHECK(stalled.termination == Termination::Stalled);

    // Revisit where |f| is tiny but above the residual tolerance: treated as
    // converged by step tolerance.
    MethodConfig c2;
    c2.initial_points = {ctx.real(1), ctx.real(2)};
    c2.tol_residual = ctx.pow10(-90);
    c2.tol_step = ctx.pow10(-90);
    Real near_root = ctx.real(9) + ctx.pow10(-60);
    IterationTrace converged =
        run_nonstationary_generic(line, c2, 1, cycle_rule(near_root, ctx.real(4)));
    CHECK(converged.termination == Termination::StepTolerance);
    (void)vanish;
}

TEST_CASE("method registry") {
    CHECK(method_from_name("nonstat-halley") == Method::NonstatHalley);
    CHECK(method_from_name("no-such") == std::nullopt);
    CHECK(all_methods().size() == 8);
    CHECK(required_points(Method::GeneralizedSecant) == 3);
    CHECK(units_per_step(Method::Halley) == 3);
}
