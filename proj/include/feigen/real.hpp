#ifndef FEIGEN_REAL_HPP
#define FEIGEN_REAL_HPP

#include <algorithm>
#include <cmath>
#include <compare>
#include <ostream>
#include <string>
#include <utility>

#include <mpfr.h>

#include "errors.hpp"

namespace feigen
{

// Owning wrapper around an mpfr_t. Rounding is always passed per operation,
// so there is no process-wide rounding mode to protect.
class Real
{
  public:
    explicit Real(mpfr_prec_t prec = 53)
    {
        mpfr_init2(v_, prec);
        mpfr_set_zero(v_, 1);
    }

    Real(double d, mpfr_prec_t prec)
    {
        mpfr_init2(v_, prec);
        mpfr_set_d(v_, d, MPFR_RNDN);
    }

    Real(const Real &o)
    {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }

    Real(Real &&o) noexcept
    {
        mpfr_init2(v_, MPFR_PREC_MIN);
        mpfr_swap(v_, o.v_);
    }

    Real &operator=(const Real &o)
    {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }

    Real &operator=(Real &&o) noexcept
    {
        mpfr_swap(v_, o.v_);
        return *this;
    }

    ~Real() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

    // Parse with an explicit rounding direction; accepts decimal and
    // hexadecimal ("0x1.8p+3") forms.
    static Real parse(const std::string &s, mpfr_prec_t prec, mpfr_rnd_t rnd = MPFR_RNDN)
    {
        Real r(prec);
        char *end = nullptr;
        mpfr_strtofr(r.v_, s.c_str(), &end, 0, rnd);
        if (s.empty() || end != s.c_str() + s.size()) {
            throw ParseError("cannot parse '" + s + "' as a real number");
        }
        return r;
    }

    static Real from_long(long v, mpfr_prec_t prec)
    {
        Real r(prec);
        mpfr_set_si(r.v_, v, MPFR_RNDN);
        return r;
    }

    double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(v_, rnd); }

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    // Exact hexadecimal form, suitable for bit-exact round trips.
    std::string to_hex() const
    {
        char *s = nullptr;
        mpfr_asprintf(&s, "%Ra", v_);
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }

    // Decimal string with `digits` significant digits, rounded in direction rnd.
    std::string to_decimal(std::size_t digits, mpfr_rnd_t rnd = MPFR_RNDN) const
    {
        char *s = nullptr;
        const std::string fmt = "%." + std::to_string(digits > 0 ? digits - 1 : 0) + "R*e";
        mpfr_asprintf(&s, fmt.c_str(), rnd, v_);
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }

    friend bool operator==(const Real &a, const Real &b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend std::partial_ordering operator<=>(const Real &a, const Real &b)
    {
        if (mpfr_unordered_p(a.v_, b.v_)) {
            return std::partial_ordering::unordered;
        }
        const int c = mpfr_cmp(a.v_, b.v_);
        return c < 0 ? std::partial_ordering::less
                     : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
    }

    friend std::ostream &operator<<(std::ostream &os, const Real &r) { return os << r.to_decimal(20); }

  private:
    mpfr_t v_;
};

inline mpfr_prec_t max_prec(const Real &a, const Real &b) { return std::max(a.prec(), b.prec()); }

// Directed-rounding primitives. The result carries the larger operand precision.
#define FEIGEN_BINARY_OP(name, fn)                                                                 \
    inline Real name(const Real &a, const Real &b, mpfr_rnd_t rnd)                                 \
    {                                                                                              \
        Real r(max_prec(a, b));                                                                    \
        fn(r.get(), a.get(), b.get(), rnd);                                                        \
        return r;                                                                                  \
    }
FEIGEN_BINARY_OP(add, mpfr_add)
FEIGEN_BINARY_OP(sub, mpfr_sub)
FEIGEN_BINARY_OP(mul, mpfr_mul)
FEIGEN_BINARY_OP(div, mpfr_div)
#undef FEIGEN_BINARY_OP

inline Real neg(const Real &a)
{
    Real r(a.prec());
    mpfr_neg(r.get(), a.get(), MPFR_RNDN);
    return r;
}

inline Real abs(const Real &a)
{
    Real r(a.prec());
    mpfr_abs(r.get(), a.get(), MPFR_RNDN);
    return r;
}

inline Real sqrt(const Real &a, mpfr_rnd_t rnd)
{
    Real r(a.prec());
    mpfr_sqrt(r.get(), a.get(), rnd);
    return r;
}

inline Real pow(const Real &a, unsigned long n, mpfr_rnd_t rnd)
{
    Real r(a.prec());
    mpfr_pow_ui(r.get(), a.get(), n, rnd);
    return r;
}

inline Real mul_si(const Real &a, long n, mpfr_rnd_t rnd)
{
    Real r(a.prec());
    mpfr_mul_si(r.get(), a.get(), n, rnd);
    return r;
}

inline const Real &min(const Real &a, const Real &b) { return (b < a) ? b : a; }
inline const Real &max(const Real &a, const Real &b) { return (a < b) ? b : a; }

// Shorthands for upper bounds of nonnegative quantities.
inline Real add_up(const Real &a, const Real &b) { return add(a, b, MPFR_RNDU); }
inline Real mul_up(const Real &a, const Real &b) { return mul(a, b, MPFR_RNDU); }

// Round-to-nearest arithmetic for the non-rigorous (midpoint) side of the code.
inline Real operator+(const Real &a, const Real &b) { return add(a, b, MPFR_RNDN); }
inline Real operator-(const Real &a, const Real &b) { return sub(a, b, MPFR_RNDN); }
inline Real operator*(const Real &a, const Real &b) { return mul(a, b, MPFR_RNDN); }
inline Real operator/(const Real &a, const Real &b) { return div(a, b, MPFR_RNDN); }
inline Real operator-(const Real &a) { return neg(a); }
inline Real &operator+=(Real &a, const Real &b) { return a = a + b; }
inline Real &operator-=(Real &a, const Real &b) { return a = a - b; }
inline Real &operator*=(Real &a, const Real &b) { return a = a * b; }

} // namespace feigen

#endif // FEIGEN_REAL_HPP
