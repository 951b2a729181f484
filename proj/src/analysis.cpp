#include "nsroot/analysis.hpp"

#include "nsroot/errors.hpp"

namespace nsroot {

Real order_equation_value(const OrderEquation& eq, const Real& t, const NumericContext& ctx) {
    // Horner over the geometric sum: F_n(t) = t^(n+1) - s * (t^n + ... + 1).
    Real powsum = one_like(t);
    for (int j = 0; j < eq.n; ++j) {
        powsum = powsum * t + one_like(t);
    }
    return pow_int(t, eq.n + 1) - ctx.real(eq.s) * powsum;
}

Real solve_order_equation(const OrderEquation& eq, const Real& tol, const NumericContext& ctx) {
    if (eq.s < 1) {
        throw InputError("order equation needs s >= 1");
    }
    if (eq.n < 1) {
        throw InputError("order equation needs memory depth n >= 1");
    }
    if (tol.sign() <= 0) {
        throw InputError("bisection tolerance must be positive");
    }

    Real lo = ctx.real(eq.s);
    Real hi = ctx.real(eq.s + 1);
    Real flo = order_equation_value(eq, lo, ctx);
    Real fhi = order_equation_value(eq, hi, ctx);
    if (flo.sign() >= 0 || fhi.sign() <= 0) {
        throw Error("order equation bracket lost its sign change");
    }

    Real two = ctx.real(2);
    while (hi - lo > tol) {
        Real mid = (lo + hi) / two;
        if (mid == lo || mid == hi) {
            break;  // bracket collapsed to adjacent representable values
        }
        Real fmid = order_equation_value(eq, mid, ctx);
        if (fmid.is_zero()) {
            return mid;
        }
        if (fmid.sign() < 0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return (lo + hi) / two;
}

Real solve_order_equation(const OrderEquation& eq, const NumericContext& ctx) {
    return solve_order_equation(eq, ctx.pow10(-15), ctx);
}

std::vector<Real> order_sequence(int s, int n_max, const NumericContext& ctx) {
    if (n_max < 1) {
        throw InputError("order sequence needs n_max >= 1");
    }
    std::vector<Real> out;
    out.reserve(n_max);
    for (int n = 1; n <= n_max; ++n) {
        out.push_back(solve_order_equation({s, n}, ctx));
    }
    return out;
}

EfficiencyReport efficiency_indices(const Real& p, int d) {
    if (d < 1) {
        throw InputError("information usage d must be >= 1");
    }
    if (p <= one_like(p)) {
        throw InputError("order p must exceed 1");
    }
    Real d_real = one_like(p);
    for (int i = 1; i < d; ++i) {
        d_real = d_real + one_like(p);
    }
    Real i1 = p / d_real;
    Real i2 = pow(p, one_like(p) / d_real);
    Real i3 = log10(i2);  // I3 = log10(I2) holds exactly by construction
    return {p, d, i1, i2, i3};
}

EmpiricalOrderReport empirical_order(const IterationTrace& trace, const NumericContext& ctx) {
    EmpiricalOrderReport report;

    const bool have_errors =
        !trace.steps.empty() && trace.steps.front().abs_error.has_value();
    report.used_proxy = !have_errors;

    // e_n, with |x_{n+1} - x_n| as the proxy when the root is unknown.
    std::vector<std::optional<Real>> errors;
    if (have_errors) {
        for (const auto& s : trace.steps) {
            errors.push_back(s.abs_error);
        }
    } else {
        for (std::size_t i = 0; i + 1 < trace.steps.size(); ++i) {
            errors.push_back(abs(trace.steps[i + 1].x - trace.steps[i].x));
        }
    }

    // An error at the representation floor of the working precision carries
    // no information; treat it like an exact zero and skip it.
    auto usable = [&](std::size_t i) -> bool {
        if (i >= errors.size() || !errors[i]) return false;
        const Real& e = *errors[i];
        if (e.is_zero()) return false;
        Real scale = abs(trace.steps[i].x);
        Real tiny = ctx.pow10(-ctx.precision_digits());
        if (scale < tiny) scale = tiny;
        return e > scale * ctx.pow10(-(ctx.precision_digits() - 3));
    };

    int usable_count = 0;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (usable(i)) ++usable_count;
    }
    if (usable_count < 4) {
        throw InsufficientData("empirical order needs at least 4 steps with nonzero errors, got " +
                               std::to_string(usable_count));
    }

    std::optional<std::size_t> last_pair;
    for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
        if (!usable(i) || !usable(i + 1)) continue;
        Real pn = -log10(*errors[i]);
        Real pn1 = -log10(*errors[i + 1]);
        if (pn.sign() <= 0) continue;  // error >= 1: no digits gained yet
        report.ratios.push_back(pn1 / pn);
        last_pair = i;
    }

    if (last_pair && !report.ratios.empty()) {
        const Real& e_prev = *errors[*last_pair];
        const Real& e_last = *errors[*last_pair + 1];
        report.asymptotic_constant = e_last / pow(e_prev, report.ratios.back());
    }
    return report;
}

Real kung_traub_comparison(int n_evals, const NumericContext& ctx) {
    if (n_evals < 1) {
        throw InputError("evaluation count must be >= 1");
    }
    Real n = ctx.real(n_evals);
    return pow(ctx.real(2), (n - ctx.real(1)) / n);
}

EfficiencyReport theoretical_indices(Method m, const NumericContext& ctx) {
    switch (m) {
        case Method::Newton:
            return efficiency_indices(ctx.real(2), 2);
        case Method::Secant:
            return efficiency_indices(solve_order_equation({1, 1}, ctx), 1);
        case Method::GeneralizedSecant:
            return efficiency_indices(solve_order_equation({1, 2}, ctx), 1);
        case Method::NonstatS1:
            return efficiency_indices(ctx.real(2), 1);
        case Method::Halley:
        case Method::Chebyshev:
            return efficiency_indices(ctx.real(3), 3);
        case Method::NonstatHalley:
        case Method::NonstatChebyshev:
            return efficiency_indices(ctx.real(3), 2);
    }
    throw Error("unknown method");
}

}  // namespace nsroot
