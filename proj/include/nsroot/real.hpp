#pragma once

#include <mpfr.h>

#include <string>
#include <type_traits>
#include <string_view>

#include "nsroot/errors.hpp"

namespace nsroot {

class Real;

// Arbitrary-precision arithmetic contract. Precision is given in significant
// decimal digits; every value created through a context carries at least that
// many digits. Contexts are immutable and there is no process-global precision
// state, so contexts and the values they mint can cross threads freely.
class NumericContext {
  public:
    static constexpr int kMinDigits = 30;
    static constexpr int kDefaultDigits = 120;

    explicit NumericContext(int precision_digits = kDefaultDigits);

    int precision_digits() const { return digits_; }
    mpfr_prec_t precision_bits() const { return bits_; }

    // Parse a decimal literal ("1.5", "2.98e-62") exactly at context precision.
    Real real(std::string_view decimal) const;
    Real real(long value) const;
    // Doubles are not accepted: pass the decimal text instead, so that "1.6"
    // means the decimal 1.6 at full precision.
    template <typename T>
        requires std::is_floating_point_v<T>
    Real real(T) const = delete;
    Real pi() const;
    // 10^e at context precision.
    Real pow10(long e) const;

  private:
    int digits_;
    mpfr_prec_t bits_;
};

enum class RoundStyle { HalfEven, TowardZero };

// Immutable arbitrary-precision real number. All operations return fresh
// values rounded to the operand precision; non-finite results throw instead of
// propagating.
class Real {
  public:
    Real(const Real& other);
    Real(Real&& other) noexcept;
    Real& operator=(const Real& other);
    Real& operator=(Real&& other) noexcept;
    ~Real();

    mpfr_srcptr raw() const { return v_; }
    mpfr_prec_t precision_bits() const { return mpfr_get_prec(v_); }

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    // Decimal exponent e of the scientific form m * 10^e with 1 <= |m| < 10.
    // Requires a nonzero value.
    long decimal_exponent() const;

    // Scientific string with the given number of significant digits,
    // round-to-nearest-even ("1.4142135624e+00" for 11 digits).
    std::string to_decimal(int significant_digits) const;
    // Fixed-point string with the given number of fractional places.
    std::string to_fixed(int fractional_digits, RoundStyle style = RoundStyle::HalfEven) const;
    // Scientific string with the given number of fractional mantissa digits
    // ("8.36e-10" for 2).
    std::string to_scientific(int mantissa_fraction_digits) const;

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    friend Real operator+(const Real& a, const Real& b);
    friend Real operator-(const Real& a, const Real& b);
    friend Real operator*(const Real& a, const Real& b);
    friend Real operator/(const Real& a, const Real& b);
    friend Real operator-(const Real& a);

    friend bool operator==(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) == 0; }
    friend bool operator!=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) != 0; }
    friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
    friend bool operator>(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
    friend bool operator>=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }

    friend Real abs(const Real& x);
    friend Real exp(const Real& x);
    friend Real sin(const Real& x);
    friend Real cos(const Real& x);
    friend Real ln(const Real& x);
    friend Real log10(const Real& x);
    friend Real sqrt(const Real& x);
    friend Real pow(const Real& base, const Real& exponent);
    friend Real pow_int(const Real& base, long exponent);
    friend Real one_like(const Real& x);

    friend class NumericContext;

  private:
    explicit Real(mpfr_prec_t bits);
    void ensure_finite(const char* what) const;

    mpfr_t v_;
};

Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);
Real operator-(const Real& a);

Real abs(const Real& x);
Real exp(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real ln(const Real& x);
Real log10(const Real& x);
Real sqrt(const Real& x);
Real pow(const Real& base, const Real& exponent);
Real pow_int(const Real& base, long exponent);
// 1 at the precision of x.
Real one_like(const Real& x);

}  // namespace nsroot
