#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nsroot/expr.hpp"
#include "nsroot/real.hpp"

namespace nsroot {

// A root-finding problem: f, its lazily materialized symbolic derivatives, an
// optional known root for error-column reporting, and the arithmetic context.
class Problem {
  public:
    Problem(Expr f, NumericContext ctx, std::optional<Real> root_hint = std::nullopt);

    const Expr& function() const { return f_; }
    const NumericContext& context() const { return ctx_; }
    const std::optional<Real>& root_hint() const { return hint_; }

    // f^(order), cached. Call materialize_derivatives first when sharing one
    // Problem across threads.
    const Expr& derivative(int order) const;
    void materialize_derivatives(int up_to) const;

  private:
    Expr f_;
    NumericContext ctx_;
    std::optional<Real> hint_;
    mutable std::vector<Expr> derivatives_;
};

struct MethodConfig {
    std::vector<Real> initial_points;
    // Both tolerances default to 10^-(precision-20).
    std::optional<Real> tol_step;
    std::optional<Real> tol_residual;
    int max_iterations = 60;
};

enum class Termination { StepTolerance, ResidualTolerance, MaxIterations, Stalled };

const char* termination_name(Termination t);

struct TraceStep {
    int index = 0;
    Real x;
    std::optional<Real> residual;   // f(x)
    std::optional<Real> abs_error;  // |x - root_hint| when the hint is known
    // Evaluations of f or any derivative consumed producing this iterate
    // (initialization evaluations are charged to the initial-point records).
    int horner_units = 0;
};

struct IterationTrace {
    std::vector<TraceStep> steps;
    Termination termination = Termination::MaxIterations;
    int initial_count = 0;  // leading records that are initial points

    int produced_count() const { return static_cast<int>(steps.size()) - initial_count; }
    int total_horner_units() const;
};

// Stationary one-point baselines.
IterationTrace run_newton(const Problem& p, const MethodConfig& c);      // d = 2
IterationTrace run_halley(const Problem& p, const MethodConfig& c);      // d = 3
IterationTrace run_chebyshev(const Problem& p, const MethodConfig& c);   // d = 3

// Stationary methods with memory (fixed window).
IterationTrace run_secant(const Problem& p, const MethodConfig& c);              // d = 1
IterationTrace run_generalized_secant(const Problem& p, const MethodConfig& c);  // d = 1

// Nonstationary processes: the divided-difference table grows over all past
// iterates, and the derivative of the interpolation polynomial at the newest
// node replaces the highest derivative of the base rule.
IterationTrace run_nonstationary_s1(const Problem& p, const MethodConfig& c);         // d = 1
IterationTrace run_nonstationary_halley(const Problem& p, const MethodConfig& c);     // d = 2
IterationTrace run_nonstationary_chebyshev(const Problem& p, const MethodConfig& c);  // d = 2

// One-point base rule of order s+1 whose only use of f^(s) is the slot H:
// update(x_k, {f(x_k), f'(x_k), ..., f^(s-1)(x_k)}, H).
using BaseUpdate = std::function<Real(const Real& x, std::span<const Real> derivs, const Real& H)>;

// Generic substitution combinator: maintains a table over (x_j, f^(s-1)(x_j)),
// feeds H = P'_k(x_k) into the base rule; d = s per step; s+1 initial points.
IterationTrace run_nonstationary_generic(const Problem& p, const MethodConfig& c, int s,
                                         const BaseUpdate& update);

// Update formulas shared with the tests that cross-check the generic
// combinator against the dedicated runs (H stands in for the highest
// derivative).
Real newton_update(const Real& x, const Real& f, const Real& H, const Real& vanish_threshold);
Real halley_update(const Real& x, const Real& f, const Real& g, const Real& H,
                   const Real& vanish_threshold);
Real chebyshev_update(const Real& x, const Real& f, const Real& g, const Real& H,
                      const Real& vanish_threshold);

enum class Method {
    Newton,
    Secant,
    GeneralizedSecant,
    NonstatS1,
    Halley,
    NonstatHalley,
    Chebyshev,
    NonstatChebyshev,
};

const char* method_name(Method m);
std::optional<Method> method_from_name(std::string_view name);
std::vector<Method> all_methods();
int required_points(Method m);
// Horner units consumed per post-initialization step.
int units_per_step(Method m);
IterationTrace run_method(Method m, const Problem& p, const MethodConfig& c);

}  // namespace nsroot
