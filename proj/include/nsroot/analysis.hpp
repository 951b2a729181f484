#pragma once

#include <optional>
#include <vector>

#include "nsroot/methods.hpp"
#include "nsroot/real.hpp"

namespace nsroot {

// F_n(t) = t^(n+1) - s * sum_{j=0}^{n} t^j. Its unique root in (s, s+1) is the
// convergence order of the depth-n stationary one-point process with memory
// that reuses information at n points and evaluates s derivatives (including
// f) per step.
struct OrderEquation {
    int s = 1;  // derivative count including f
    int n = 1;  // memory depth; must be >= 1
};

Real order_equation_value(const OrderEquation& eq, const Real& t, const NumericContext& ctx);

// Locates the unique root in (s, s+1) by bisection to bracket width tol.
Real solve_order_equation(const OrderEquation& eq, const Real& tol, const NumericContext& ctx);
Real solve_order_equation(const OrderEquation& eq, const NumericContext& ctx);  // tol = 1e-15

// [r_1, ..., r_n_max]; strictly increasing, each in (s, s+1).
std::vector<Real> order_sequence(int s, int n_max, const NumericContext& ctx);

struct EfficiencyReport {
    Real p;   // order
    int d;    // Horner units per iteration
    Real I1;  // informational efficiency p/d
    Real I2;  // computational efficiency p^(1/d)
    Real I3;  // local efficiency log10(I2)
};

EfficiencyReport efficiency_indices(const Real& p, int d);

struct EmpiricalOrderReport {
    // Ratios p_{n+1}/p_n with p_n = -log10 |e_n| over consecutive usable
    // steps. Steps whose error is zero or below the representation floor of
    // the working precision are skipped.
    std::vector<Real> ratios;
    // True when |x_{n+1} - x_n| substituted for |e_n| (no root hint known).
    bool used_proxy = false;
    // |e_last| / |e_prev|^p at the last usable pair; indicative only.
    std::optional<Real> asymptotic_constant;
};

EmpiricalOrderReport empirical_order(const IterationTrace& trace, const NumericContext& ctx);

// I2 = 2^((n-1)/n) of the optimal multipoint method without memory that uses
// n evaluations per iteration; below 2 for every n.
Real kung_traub_comparison(int n_evals, const NumericContext& ctx);

// Theoretical (p, d) for a method, for index reporting. The secant-family
// orders come from the order equation at the context precision.
EfficiencyReport theoretical_indices(Method m, const NumericContext& ctx);

}  // namespace nsroot
