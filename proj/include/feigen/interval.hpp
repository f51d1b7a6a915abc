#ifndef FEIGEN_INTERVAL_HPP
#define FEIGEN_INTERVAL_HPP

#include <cmath>
#include <ostream>
#include <string>

#include "real.hpp"

namespace feigen
{

// Working precision for one pipeline (or one worker). Values created through
// a context carry its precision; operations between values produce results at
// the larger operand precision, so a context never needs to be installed
// globally.
class RoundingContext
{
  public:
    explicit RoundingContext(mpfr_prec_t bits) : bits_(bits)
    {
        if (bits < MPFR_PREC_MIN || bits > MPFR_PREC_MAX) {
            throw Error("precision out of range: " + std::to_string(bits));
        }
    }

    // Bits needed to carry `digits` decimal significant digits.
    static RoundingContext from_digits(unsigned digits)
    {
        return RoundingContext(static_cast<mpfr_prec_t>(std::ceil(digits * 3.321928094887362)));
    }

    mpfr_prec_t bits() const { return bits_; }
    unsigned decimal_digits() const { return static_cast<unsigned>(std::floor(bits_ * 0.3010299956639812)); }

    Real real(double d) const { return Real(d, bits_); }
    Real real(long v) const { return Real::from_long(v, bits_); }
    Real parse(const std::string &s, mpfr_rnd_t rnd) const { return Real::parse(s, bits_, rnd); }

    friend bool operator==(const RoundingContext &, const RoundingContext &) = default;

  private:
    mpfr_prec_t bits_;
};

// Closed real interval [lo, hi] with outward-rounded endpoints.
class Interval
{
  public:
    Interval() = default;
    explicit Interval(const Real &point) : lo_(point), hi_(point) {}
    Interval(Real lo, Real hi) : lo_(std::move(lo)), hi_(std::move(hi))
    {
        if (hi_ < lo_) {
            throw Error("interval with lo > hi");
        }
    }

    static Interval point(const RoundingContext &ctx, double d) { return Interval(ctx.real(d)); }
    static Interval point(const RoundingContext &ctx, long v) { return Interval(ctx.real(v)); }
    static Interval zero(const RoundingContext &ctx) { return Interval(ctx.real(0L)); }

    // Smallest representable interval containing the decimal (or hex) value.
    static Interval from_string(const RoundingContext &ctx, const std::string &s)
    {
        return Interval(ctx.parse(s, MPFR_RNDD), ctx.parse(s, MPFR_RNDU));
    }
    static Interval from_strings(const RoundingContext &ctx, const std::string &lo, const std::string &hi)
    {
        return Interval(ctx.parse(lo, MPFR_RNDD), ctx.parse(hi, MPFR_RNDU));
    }

    const Real &lo() const { return lo_; }
    const Real &hi() const { return hi_; }
    mpfr_prec_t prec() const { return std::max(lo_.prec(), hi_.prec()); }

    bool is_point() const { return lo_ == hi_; }
    bool is_zero() const { return lo_.is_zero() && hi_.is_zero(); }
    bool contains(const Real &x) const { return lo_ <= x && x <= hi_; }
    bool contains_zero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }
    bool contains(const Interval &o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
    bool subset_of(const Interval &o) const { return o.contains(*this); }
    bool intersects(const Interval &o) const { return !(hi_ < o.lo_ || o.hi_ < lo_); }
    bool positive() const { return lo_.sign() > 0; }
    bool negative() const { return hi_.sign() < 0; }

    // Upper bound of |x| over the interval.
    Real mag() const { return max(abs(lo_), abs(hi_)); }
    // Lower bound of |x| over the interval.
    Real mig() const
    {
        if (contains_zero()) {
            return Real(prec());
        }
        return min(abs(lo_), abs(hi_));
    }
    Real mid() const
    {
        Real m = add(lo_, hi_, MPFR_RNDN);
        mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
        return m;
    }
    Real width() const { return sub(hi_, lo_, MPFR_RNDU); }

    friend std::ostream &operator<<(std::ostream &os, const Interval &x)
    {
        return os << '[' << x.lo_.to_decimal(20, MPFR_RNDD) << ", " << x.hi_.to_decimal(20, MPFR_RNDU) << ']';
    }

  private:
    Real lo_;
    Real hi_;
};

inline Interval hull(const Interval &x, const Interval &y) { return Interval(min(x.lo(), y.lo()), max(x.hi(), y.hi())); }

inline Interval operator-(const Interval &x) { return Interval(neg(x.hi()), neg(x.lo())); }

inline Interval operator+(const Interval &x, const Interval &y)
{
    return Interval(add(x.lo(), y.lo(), MPFR_RNDD), add(x.hi(), y.hi(), MPFR_RNDU));
}

inline Interval operator-(const Interval &x, const Interval &y)
{
    return Interval(sub(x.lo(), y.hi(), MPFR_RNDD), sub(x.hi(), y.lo(), MPFR_RNDU));
}

inline Interval operator*(const Interval &x, const Interval &y)
{
    const Real &xl = x.lo(), &xh = x.hi(), &yl = y.lo(), &yh = y.hi();
    auto make = [](const Real &a, const Real &b, const Real &c, const Real &d) {
        return Interval(mul(a, b, MPFR_RNDD), mul(c, d, MPFR_RNDU));
    };
    if (xl.sign() >= 0) {
        if (yl.sign() >= 0) {
            return make(xl, yl, xh, yh);
        }
        if (yh.sign() <= 0) {
            return make(xh, yl, xl, yh);
        }
        return make(xh, yl, xh, yh);
    }
    if (xh.sign() <= 0) {
        if (yl.sign() >= 0) {
            return make(xl, yh, xh, yl);
        }
        if (yh.sign() <= 0) {
            return make(xh, yh, xl, yl);
        }
        return make(xl, yh, xl, yl);
    }
    if (yl.sign() >= 0) {
        return make(xl, yh, xh, yh);
    }
    if (yh.sign() <= 0) {
        return make(xh, yl, xl, yl);
    }
    return Interval(min(mul(xl, yh, MPFR_RNDD), mul(xh, yl, MPFR_RNDD)),
                    max(mul(xl, yl, MPFR_RNDU), mul(xh, yh, MPFR_RNDU)));
}

inline Interval operator/(const Interval &x, const Interval &y)
{
    if (y.contains_zero()) {
        throw DivisionByZeroInterval("denominator interval contains zero");
    }
    const Real &xl = x.lo(), &xh = x.hi(), &yl = y.lo(), &yh = y.hi();
    auto make = [](const Real &a, const Real &b, const Real &c, const Real &d) {
        return Interval(div(a, b, MPFR_RNDD), div(c, d, MPFR_RNDU));
    };
    if (yl.sign() > 0) {
        if (xl.sign() >= 0) {
            return make(xl, yh, xh, yl);
        }
        if (xh.sign() <= 0) {
            return make(xl, yl, xh, yh);
        }
        return make(xl, yl, xh, yl);
    }
    if (xl.sign() >= 0) {
        return make(xh, yh, xl, yl);
    }
    if (xh.sign() <= 0) {
        return make(xh, yl, xl, yh);
    }
    return make(xh, yh, xl, yh);
}

inline Interval &operator+=(Interval &x, const Interval &y) { return x = x + y; }
inline Interval &operator-=(Interval &x, const Interval &y) { return x = x - y; }
inline Interval &operator*=(Interval &x, const Interval &y) { return x = x * y; }

inline Interval sqr(const Interval &x)
{
    if (x.lo().sign() >= 0) {
        return Interval(mul(x.lo(), x.lo(), MPFR_RNDD), mul(x.hi(), x.hi(), MPFR_RNDU));
    }
    if (x.hi().sign() <= 0) {
        return Interval(mul(x.hi(), x.hi(), MPFR_RNDD), mul(x.lo(), x.lo(), MPFR_RNDU));
    }
    const Real m = x.mag();
    return Interval(Real(x.prec()), mul(m, m, MPFR_RNDU));
}

inline Interval sqrt(const Interval &x)
{
    if (x.lo().sign() < 0) {
        throw Error("sqrt of interval with negative part");
    }
    return Interval(sqrt(x.lo(), MPFR_RNDD), sqrt(x.hi(), MPFR_RNDU));
}

inline Interval abs(const Interval &x) { return Interval(x.mig(), x.mag()); }

// Scale by an exact power of two.
inline Interval ldexp(const Interval &x, long e)
{
    Real lo = x.lo(), hi = x.hi();
    mpfr_mul_2si(lo.get(), lo.get(), e, MPFR_RNDD);
    mpfr_mul_2si(hi.get(), hi.get(), e, MPFR_RNDU);
    return Interval(std::move(lo), std::move(hi));
}

// Complex enclosure re + i*im.
class Rectangle
{
  public:
    Rectangle() = default;
    explicit Rectangle(Interval re) : re_(std::move(re)), im_(Interval(Real(re_.prec()))) {}
    Rectangle(Interval re, Interval im) : re_(std::move(re)), im_(std::move(im)) {}

    static Rectangle zero(const RoundingContext &ctx) { return Rectangle(Interval::zero(ctx)); }
    static Rectangle point(const RoundingContext &ctx, double re, double im = 0.0)
    {
        return Rectangle(Interval::point(ctx, re), Interval::point(ctx, im));
    }

    const Interval &re() const { return re_; }
    const Interval &im() const { return im_; }
    mpfr_prec_t prec() const { return std::max(re_.prec(), im_.prec()); }

    bool is_real() const { return im_.is_zero(); }
    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
    bool contains(const Rectangle &o) const { return re_.contains(o.re_) && im_.contains(o.im_); }
    bool contains(const Real &re, const Real &im) const { return re_.contains(re) && im_.contains(im); }
    bool intersects(const Rectangle &o) const { return re_.intersects(o.re_) && im_.intersects(o.im_); }

    // Upper bound of |z| over the rectangle.
    Real mag() const
    {
        if (im_.is_zero()) {
            return re_.mag();
        }
        if (re_.is_zero()) {
            return im_.mag();
        }
        const Real a = re_.mag(), b = im_.mag();
        return sqrt(add(mul(a, a, MPFR_RNDU), mul(b, b, MPFR_RNDU), MPFR_RNDU), MPFR_RNDU);
    }
    // Lower bound of |z| over the rectangle.
    Real mig() const
    {
        const Real a = re_.mig(), b = im_.mig();
        return sqrt(add(mul(a, a, MPFR_RNDD), mul(b, b, MPFR_RNDD), MPFR_RNDD), MPFR_RNDD);
    }

    friend std::ostream &operator<<(std::ostream &os, const Rectangle &z) { return os << '<' << z.re_ << ", " << z.im_ << '>'; }

  private:
    Interval re_;
    Interval im_;
};

inline Rectangle operator-(const Rectangle &z) { return Rectangle(-z.re(), -z.im()); }
inline Rectangle operator+(const Rectangle &x, const Rectangle &y) { return Rectangle(x.re() + y.re(), x.im() + y.im()); }
inline Rectangle operator-(const Rectangle &x, const Rectangle &y) { return Rectangle(x.re() - y.re(), x.im() - y.im()); }

// Four-products formula; real operands skip the vanishing products.
inline Rectangle operator*(const Rectangle &x, const Rectangle &y)
{
    const bool xr = x.is_real(), yr = y.is_real();
    if (xr && yr) {
        Interval re = x.re() * y.re();
        Interval im(Real(re.prec()));
        return Rectangle(std::move(re), std::move(im));
    }
    if (yr) {
        return Rectangle(x.re() * y.re(), x.im() * y.re());
    }
    if (xr) {
        return Rectangle(x.re() * y.re(), x.re() * y.im());
    }
    return Rectangle(x.re() * y.re() - x.im() * y.im(), x.re() * y.im() + x.im() * y.re());
}

inline Rectangle operator*(const Rectangle &x, const Interval &s) { return Rectangle(x.re() * s, x.im() * s); }

inline Rectangle operator/(const Rectangle &x, const Rectangle &y)
{
    if (y.is_real()) {
        if (y.re().contains_zero()) {
            throw DivisionByZeroRectangle("denominator rectangle contains zero");
        }
        return Rectangle(x.re() / y.re(), x.im() / y.re());
    }
    const Interval den = sqr(y.re()) + sqr(y.im());
    if (den.contains_zero()) {
        throw DivisionByZeroRectangle("denominator rectangle contains zero");
    }
    const Rectangle num = x * Rectangle(y.re(), -y.im());
    return Rectangle(num.re() / den, num.im() / den);
}

inline Rectangle &operator+=(Rectangle &x, const Rectangle &y) { return x = x + y; }
inline Rectangle &operator-=(Rectangle &x, const Rectangle &y) { return x = x - y; }
inline Rectangle &operator*=(Rectangle &x, const Rectangle &y) { return x = x * y; }

inline Rectangle sqr(const Rectangle &z)
{
    if (z.is_real()) {
        return Rectangle(sqr(z.re()));
    }
    Interval two_re = ldexp(z.re(), 1);
    return Rectangle(sqr(z.re()) - sqr(z.im()), two_re * z.im());
}

// Interval enclosing |z| over the rectangle.
inline Interval abs_upper(const Rectangle &z) { return Interval(z.mig(), z.mag()); }

inline Rectangle hull(const Rectangle &x, const Rectangle &y) { return Rectangle(hull(x.re(), y.re()), hull(x.im(), y.im())); }

// Rectangle enclosing the closed disc of radius r around every member of z.
inline Rectangle inflate(const Rectangle &z, const Real &r)
{
    return Rectangle(Interval(sub(z.re().lo(), r, MPFR_RNDD), add(z.re().hi(), r, MPFR_RNDU)),
                     Interval(sub(z.im().lo(), r, MPFR_RNDD), add(z.im().hi(), r, MPFR_RNDU)));
}

} // namespace feigen

#endif // FEIGEN_INTERVAL_HPP
