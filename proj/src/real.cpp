#include "nsroot/real.hpp"

#include <cmath>
#include <cstdlib>
#include <utility>

namespace nsroot {

namespace {

mpfr_prec_t digits_to_bits(int digits) {
    // log2(10) per decimal digit, plus a few guard bits so that printing the
    // full decimal precision round-trips.
    return static_cast<mpfr_prec_t>(std::ceil(digits * 3.321928094887362)) + 8;
}

std::string take_mpfr_string(char* s) {
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

}  // namespace

NumericContext::NumericContext(int precision_digits) : digits_(precision_digits), bits_(0) {
    if (precision_digits < kMinDigits) {
        throw InputError("precision must be at least " + std::to_string(kMinDigits) +
                         " decimal digits, got " + std::to_string(precision_digits));
    }
    bits_ = digits_to_bits(precision_digits);
}

Real NumericContext::real(std::string_view decimal) const {
    Real r(bits_);
    std::string text(decimal);
    if (text.empty() || mpfr_set_str(r.v_, text.c_str(), 10, MPFR_RNDN) != 0) {
        throw InputError("invalid decimal literal: '" + text + "'");
    }
    r.ensure_finite("literal");
    return r;
}

Real NumericContext::real(long value) const {
    Real r(bits_);
    mpfr_set_si(r.v_, value, MPFR_RNDN);
    return r;
}

Real NumericContext::pi() const {
    Real r(bits_);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
}

Real NumericContext::pow10(long e) const {
    Real r(bits_);
    mpfr_set_si(r.v_, 10, MPFR_RNDN);
    mpfr_pow_si(r.v_, r.v_, e, MPFR_RNDN);
    return r;
}

Real::Real(mpfr_prec_t bits) {
    mpfr_init2(v_, bits);
    mpfr_set_zero(v_, 1);
}

Real::Real(const Real& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_swap(v_, other.v_);
}

Real& Real::operator=(const Real& other) {
    if (this != &other) {
        mpfr_set_prec(v_, mpfr_get_prec(other.v_));
        mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
}

Real& Real::operator=(Real&& other) noexcept {
    if (this != &other) {
        mpfr_swap(v_, other.v_);
    }
    return *this;
}

Real::~Real() {
    mpfr_clear(v_);
}

void Real::ensure_finite(const char* what) const {
    if (!mpfr_number_p(v_)) {
        throw NonFiniteError(std::string("non-finite result from ") + what);
    }
}

long Real::decimal_exponent() const {
    if (is_zero()) {
        throw Error("decimal exponent of zero is undefined");
    }
    mpfr_exp_t e = 0;
    char* s = mpfr_get_str(nullptr, &e, 10, 2, v_, MPFR_RNDN);
    mpfr_free_str(s);
    // mpfr_get_str places the decimal point before the first digit.
    return static_cast<long>(e) - 1;
}

std::string Real::to_decimal(int significant_digits) const {
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*RNe", significant_digits - 1, v_);
    return take_mpfr_string(s);
}

std::string Real::to_fixed(int fractional_digits, RoundStyle style) const {
    char* s = nullptr;
    if (style == RoundStyle::TowardZero) {
        mpfr_asprintf(&s, "%.*RZf", fractional_digits, v_);
    } else {
        mpfr_asprintf(&s, "%.*RNf", fractional_digits, v_);
    }
    return take_mpfr_string(s);
}

std::string Real::to_scientific(int mantissa_fraction_digits) const {
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*RNe", mantissa_fraction_digits, v_);
    return take_mpfr_string(s);
}

namespace {

mpfr_prec_t result_prec(const Real& a, const Real& b) {
    return std::max(a.precision_bits(), b.precision_bits());
}

}  // namespace

Real operator+(const Real& a, const Real& b) {
    Real r(result_prec(a, b));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    r.ensure_finite("add");
    return r;
}

Real operator-(const Real& a, const Real& b) {
    Real r(result_prec(a, b));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    r.ensure_finite("sub");
    return r;
}

Real operator*(const Real& a, const Real& b) {
    Real r(result_prec(a, b));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    r.ensure_finite("mul");
    return r;
}

Real operator/(const Real& a, const Real& b) {
    if (b.is_zero()) {
        throw DivisionByZero();
    }
    Real r(result_prec(a, b));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    r.ensure_finite("div");
    return r;
}

Real operator-(const Real& a) {
    Real r(a.precision_bits());
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
}

Real abs(const Real& x) {
    Real r(x.precision_bits());
    mpfr_abs(r.v_, x.v_, MPFR_RNDN);
    return r;
}

Real exp(const Real& x) {
    Real r(x.precision_bits());
    mpfr_exp(r.v_, x.v_, MPFR_RNDN);
    r.ensure_finite("exp");
    return r;
}

Real sin(const Real& x) {
    Real r(x.precision_bits());
    mpfr_sin(r.v_, x.v_, MPFR_RNDN);
    r.ensure_finite("sin");
    return r;
}

Real cos(const Real& x) {
    Real r(x.precision_bits());
    mpfr_cos(r.v_, x.v_, MPFR_RNDN);
    r.ensure_finite("cos");
    return r;
}

Real ln(const Real& x) {
    if (x.sign() <= 0) {
        throw DomainError("ln requires a positive argument");
    }
    Real r(x.precision_bits());
    mpfr_log(r.v_, x.v_, MPFR_RNDN);
    r.ensure_finite("ln");
    return r;
}

Real log10(const Real& x) {
    if (x.sign() <= 0) {
        throw DomainError("log10 requires a positive argument");
    }
    Real r(x.precision_bits());
    mpfr_log10(r.v_, x.v_, MPFR_RNDN);
    r.ensure_finite("log10");
    return r;
}

Real sqrt(const Real& x) {
    if (x.sign() < 0) {
        throw DomainError("sqrt requires a non-negative argument");
    }
    Real r(x.precision_bits());
    mpfr_sqrt(r.v_, x.v_, MPFR_RNDN);
    r.ensure_finite("sqrt");
    return r;
}

Real pow(const Real& base, const Real& exponent) {
    Real r(result_prec(base, exponent));
    mpfr_pow(r.v_, base.v_, exponent.v_, MPFR_RNDN);
    if (mpfr_nan_p(r.v_)) {
        throw DomainError("pow of a negative base with a non-integer exponent");
    }
    r.ensure_finite("pow");
    return r;
}

Real pow_int(const Real& base, long exponent) {
    if (exponent < 0 && base.is_zero()) {
        throw DivisionByZero("zero raised to a negative power");
    }
    Real r(base.precision_bits());
    mpfr_pow_si(r.v_, base.v_, exponent, MPFR_RNDN);
    r.ensure_finite("pow");
    return r;
}

Real one_like(const Real& x) {
    Real r(x.precision_bits());
    mpfr_set_si(r.v_, 1, MPFR_RNDN);
    return r;
}

}  // namespace nsroot
