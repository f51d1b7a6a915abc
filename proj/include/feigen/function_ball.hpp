#ifndef FEIGEN_FUNCTION_BALL_HPP
#define FEIGEN_FUNCTION_BALL_HPP

#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "interval.hpp"

namespace feigen
{

// Closed disc D(c, r) on which the power-series basis e_k(z) = ((z - c)/r)^k lives.
struct Disc
{
    Real center;
    Real radius;

    Disc(Real c, Real r) : center(std::move(c)), radius(std::move(r))
    {
        if (radius.sign() <= 0) {
            throw Error("disc radius must be positive");
        }
    }

    // The configuration used throughout the pipeline: D(1, 2.5).
    static Disc standard(const RoundingContext &ctx) { return Disc(ctx.real(1.0), ctx.real(2.5)); }

    friend bool operator==(const Disc &a, const Disc &b) { return a.center == b.center && a.radius == b.radius; }
};

/**
 * Enclosure of a set of analytic functions on a disc, written as
 * f = f_P + f_H + f_E where
 *  - f_P has coefficients (in the basis e_k) inside the rectangles coeffs[0..N],
 *  - f_H is supported on degrees > N with l1-norm at most high_order_bound,
 *  - f_E is arbitrary with l1-norm at most error_bound.
 *
 * All operations return balls that contain the exact result for every member
 * of the inputs.
 */
class FunctionBall
{
  public:
    FunctionBall(const RoundingContext &ctx, Disc domain, std::vector<Rectangle> coeffs, Real high_order_bound,
                 Real error_bound)
        : ctx_(ctx), domain_(std::move(domain)), coeffs_(std::move(coeffs)), vh_(std::move(high_order_bound)),
          ve_(std::move(error_bound))
    {
        if (coeffs_.empty()) {
            throw Error("function ball needs at least one coefficient");
        }
        if (vh_.sign() < 0 || ve_.sign() < 0) {
            throw Error("norm bounds must be nonnegative");
        }
    }

    static FunctionBall zero(const RoundingContext &ctx, const Disc &domain, std::size_t degree)
    {
        return FunctionBall(ctx, domain, std::vector<Rectangle>(degree + 1, Rectangle::zero(ctx)), ctx.real(0L),
                            ctx.real(0L));
    }

    static FunctionBall constant(const RoundingContext &ctx, const Disc &domain, std::size_t degree,
                                 const Rectangle &value)
    {
        FunctionBall f = zero(ctx, domain, degree);
        f.coeffs_[0] = value;
        return f;
    }

    // e_k.
    static FunctionBall basis(const RoundingContext &ctx, const Disc &domain, std::size_t degree, std::size_t k)
    {
        if (k > degree) {
            throw IndexBeyondTruncation("basis index " + std::to_string(k) + " > " + std::to_string(degree));
        }
        FunctionBall f = zero(ctx, domain, degree);
        f.coeffs_[k] = Rectangle::point(ctx, 1.0);
        return f;
    }

    // z -> z, i.e. c + r e_1.
    static FunctionBall identity(const RoundingContext &ctx, const Disc &domain, std::size_t degree)
    {
        if (degree < 1) {
            throw Error("identity needs degree >= 1");
        }
        FunctionBall f = zero(ctx, domain, degree);
        f.coeffs_[0] = Rectangle(Interval(domain.center));
        f.coeffs_[1] = Rectangle(Interval(domain.radius));
        return f;
    }

    // Exact polynomial from real coefficients (v_H = v_E = 0).
    static FunctionBall from_reals(const RoundingContext &ctx, const Disc &domain, const std::vector<Real> &coeffs)
    {
        std::vector<Rectangle> c;
        c.reserve(coeffs.size());
        for (const auto &x : coeffs) {
            c.emplace_back(Interval(x));
        }
        return FunctionBall(ctx, domain, std::move(c), ctx.real(0L), ctx.real(0L));
    }

    const RoundingContext &context() const { return ctx_; }
    const Disc &domain() const { return domain_; }
    std::size_t degree() const { return coeffs_.size() - 1; }
    const std::vector<Rectangle> &coeffs() const { return coeffs_; }
    std::vector<Rectangle> &coeffs() { return coeffs_; }
    const Real &high_order_bound() const { return vh_; }
    const Real &error_bound() const { return ve_; }
    void set_high_order_bound(Real v) { vh_ = std::move(v); }
    void set_error_bound(Real v) { ve_ = std::move(v); }

    bool has_tail() const { return !vh_.is_zero() || !ve_.is_zero(); }

    // Midpoints of the real parts of the coefficients.
    std::vector<Real> midpoints() const
    {
        std::vector<Real> m;
        m.reserve(coeffs_.size());
        for (const auto &c : coeffs_) {
            m.push_back(c.re().mid());
        }
        return m;
    }

  private:
    RoundingContext ctx_;
    Disc domain_;
    std::vector<Rectangle> coeffs_;
    Real vh_;
    Real ve_;
};

namespace detail
{

inline void check_compatible(const FunctionBall &f, const FunctionBall &g)
{
    if (!(f.domain() == g.domain())) {
        throw DomainMismatch("function balls live on different discs");
    }
    if (f.degree() != g.degree()) {
        throw DomainMismatch("function balls have different truncation degrees " + std::to_string(f.degree()) +
                             " and " + std::to_string(g.degree()));
    }
}

inline const RoundingContext &wider(const FunctionBall &f, const FunctionBall &g)
{
    return f.context().bits() >= g.context().bits() ? f.context() : g.context();
}

inline Real zero_like(const FunctionBall &f) { return f.context().real(0L); }

// acc += s * x, coefficientwise and on the bounds.
inline void add_scaled(FunctionBall &acc, const Rectangle &s, const FunctionBall &x)
{
    if (s.is_zero()) {
        return;
    }
    auto &c = acc.coeffs();
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (!x.coeffs()[k].is_zero()) {
            c[k] += s * x.coeffs()[k];
        }
    }
    if (x.has_tail()) {
        const Real m = s.mag();
        acc.set_high_order_bound(add_up(acc.high_order_bound(), mul_up(m, x.high_order_bound())));
        acc.set_error_bound(add_up(acc.error_bound(), mul_up(m, x.error_bound())));
    }
}

} // namespace detail

// Sum of upper bounds of |a_k| over the polynomial part.
inline Real polynomial_norm_upper(const FunctionBall &f)
{
    Real s = detail::zero_like(f);
    for (const auto &c : f.coeffs()) {
        if (!c.is_zero()) {
            s = add_up(s, c.mag());
        }
    }
    return s;
}

// Upper bound of the l1 norm of every member.
inline Real norm_upper(const FunctionBall &f)
{
    return add_up(add_up(polynomial_norm_upper(f), f.high_order_bound()), f.error_bound());
}

inline FunctionBall operator+(const FunctionBall &f, const FunctionBall &g)
{
    detail::check_compatible(f, g);
    std::vector<Rectangle> c;
    c.reserve(f.coeffs().size());
    for (std::size_t k = 0; k < f.coeffs().size(); ++k) {
        c.push_back(f.coeffs()[k] + g.coeffs()[k]);
    }
    return FunctionBall(detail::wider(f, g), f.domain(), std::move(c), add_up(f.high_order_bound(), g.high_order_bound()),
                        add_up(f.error_bound(), g.error_bound()));
}

inline FunctionBall operator-(const FunctionBall &f, const FunctionBall &g)
{
    detail::check_compatible(f, g);
    std::vector<Rectangle> c;
    c.reserve(f.coeffs().size());
    for (std::size_t k = 0; k < f.coeffs().size(); ++k) {
        c.push_back(f.coeffs()[k] - g.coeffs()[k]);
    }
    return FunctionBall(detail::wider(f, g), f.domain(), std::move(c), add_up(f.high_order_bound(), g.high_order_bound()),
                        add_up(f.error_bound(), g.error_bound()));
}

inline FunctionBall scale(const FunctionBall &f, const Rectangle &s)
{
    std::vector<Rectangle> c;
    c.reserve(f.coeffs().size());
    for (const auto &a : f.coeffs()) {
        c.push_back(a.is_zero() ? a : a * s);
    }
    const Real m = s.mag();
    return FunctionBall(f.context(), f.domain(), std::move(c), mul_up(f.high_order_bound(), m), mul_up(f.error_bound(), m));
}

inline FunctionBall scale(const FunctionBall &f, const Interval &s) { return scale(f, Rectangle(s)); }

inline FunctionBall operator-(const FunctionBall &f)
{
    std::vector<Rectangle> c;
    c.reserve(f.coeffs().size());
    for (const auto &a : f.coeffs()) {
        c.push_back(-a);
    }
    return FunctionBall(f.context(), f.domain(), std::move(c), f.high_order_bound(), f.error_bound());
}

/**
 * Product in the Banach algebra. Polynomial-times-polynomial terms above
 * degree N and every product involving an f_H factor (but no f_E factor)
 * are provably of degree > N and are charged to v_H; anything involving an
 * error part is charged to v_E. Cross terms use submultiplicativity.
 */
inline FunctionBall operator*(const FunctionBall &f, const FunctionBall &g)
{
    detail::check_compatible(f, g);
    const RoundingContext &ctx = detail::wider(f, g);
    const std::size_t n = f.degree();
    std::vector<Rectangle> low(n + 1, Rectangle::zero(ctx));
    std::vector<Rectangle> high(n, Rectangle::zero(ctx));
    std::vector<bool> high_used(n, false);
    for (std::size_t i = 0; i <= n; ++i) {
        const Rectangle &fi = f.coeffs()[i];
        if (fi.is_zero()) {
            continue;
        }
        for (std::size_t j = 0; j <= n; ++j) {
            const Rectangle &gj = g.coeffs()[j];
            if (gj.is_zero()) {
                continue;
            }
            const std::size_t m = i + j;
            if (m <= n) {
                low[m] += fi * gj;
            } else {
                high[m - n - 1] += fi * gj;
                high_used[m - n - 1] = true;
            }
        }
    }
    Real vh(ctx.bits());
    for (std::size_t m = 0; m < n; ++m) {
        if (high_used[m]) {
            vh = add_up(vh, high[m].mag());
        }
    }
    Real ve(ctx.bits());
    if (f.has_tail() || g.has_tail()) {
        const Real pf = polynomial_norm_upper(f), pg = polynomial_norm_upper(g);
        const Real &hf = f.high_order_bound(), &hg = g.high_order_bound();
        const Real &ef = f.error_bound(), &eg = g.error_bound();
        // f_H * (g_P + g_H) + f_P * g_H
        vh = add_up(vh, add_up(mul_up(hf, add_up(pg, hg)), mul_up(pf, hg)));
        // f_E * g + (f_P + f_H) * g_E
        ve = add_up(mul_up(ef, add_up(add_up(pg, hg), eg)), mul_up(add_up(pf, hf), eg));
    }
    return FunctionBall(ctx, f.domain(), std::move(low), std::move(vh), std::move(ve));
}

inline FunctionBall &operator+=(FunctionBall &f, const FunctionBall &g) { return f = f + g; }
inline FunctionBall &operator-=(FunctionBall &f, const FunctionBall &g) { return f = f - g; }

// Closed l1 ball of radius rho around every member of f.
inline FunctionBall inflate(const FunctionBall &f, const Real &rho)
{
    if (rho.sign() < 0) {
        throw Error("inflation radius must be nonnegative");
    }
    FunctionBall g = f;
    g.set_error_bound(add_up(f.error_bound(), rho));
    return g;
}

// (h - c) / r as a ball; its norm is the composition contraction factor.
inline FunctionBall normalized(const FunctionBall &h)
{
    const RoundingContext &ctx = h.context();
    const Disc &d = h.domain();
    const Interval r(d.radius);
    std::vector<Rectangle> c;
    c.reserve(h.coeffs().size());
    for (std::size_t k = 0; k < h.coeffs().size(); ++k) {
        Rectangle a = h.coeffs()[k];
        if (k == 0) {
            a = a - Rectangle(Interval(d.center));
        }
        c.push_back(a.is_zero() ? a : Rectangle(a.re() / r, a.im() / r));
    }
    const Real vh = div(h.high_order_bound(), d.radius, MPFR_RNDU);
    const Real ve = div(h.error_bound(), d.radius, MPFR_RNDU);
    return FunctionBall(ctx, d, std::move(c), vh, ve);
}

// Upper bound of ||(h - c)/r|| over the ball.
inline Real theta(const FunctionBall &h) { return norm_upper(normalized(h)); }

/**
 * Upper bound of sup_{k >= kmin} k * theta^(k-1) for 0 <= theta < 1.
 * Tries the decreasing-term test (kmin+1)*theta <= kmin first, then scans for
 * the peak of the sequence, and finally falls back to the geometric majorant
 * kmin * theta^(kmin-1) / (1 - theta)^2.
 */
inline Real sup_k_theta_power(const Real &theta, unsigned long kmin)
{
    const mpfr_prec_t p = theta.prec();
    const Real one = Real::from_long(1, p);
    if (!(theta < one)) {
        throw CompositionContractFailure("derivative tail needs theta < 1");
    }
    auto term = [&](unsigned long k) { return mul_si(pow(theta, k - 1, MPFR_RNDU), static_cast<long>(k), MPFR_RNDU); };
    auto decreasing_from = [&](unsigned long k) {
        return mul_si(theta, static_cast<long>(k + 1), MPFR_RNDU) <= Real::from_long(static_cast<long>(k), p);
    };
    if (theta.is_zero()) {
        return kmin <= 1 ? one : Real(p);
    }
    if (decreasing_from(kmin)) {
        return term(kmin);
    }
    constexpr unsigned long scan_limit = 4096;
    Real best = term(kmin);
    for (unsigned long k = kmin + 1; k < kmin + scan_limit; ++k) {
        best = max(best, term(k));
        if (decreasing_from(k)) {
            return best;
        }
    }
    const Real gap = sub(one, theta, MPFR_RNDD);
    return div(term(kmin), mul(gap, gap, MPFR_RNDD), MPFR_RNDU);
}

// Polynomial part of f' (degree N-1, padded to N); tails are not included.
inline FunctionBall derivative_polynomial(const FunctionBall &f)
{
    const RoundingContext &ctx = f.context();
    const std::size_t n = f.degree();
    FunctionBall d = FunctionBall::zero(ctx, f.domain(), n);
    const Interval r(f.domain().radius);
    for (std::size_t k = 1; k <= n; ++k) {
        const Rectangle &a = f.coeffs()[k];
        if (!a.is_zero()) {
            d.coeffs()[k - 1] = a * (Interval::point(ctx, static_cast<long>(k)) / r);
        }
    }
    return d;
}

namespace detail
{

inline void require_theta(const Real &th, bool strict, const char *what)
{
    const Real one = Real::from_long(1, th.prec());
    if (strict ? !(th < one) : !(th <= one)) {
        throw CompositionContractFailure(std::string(what) + ": theta bound " + th.to_decimal(8, MPFR_RNDU) +
                                         (strict ? " is not < 1" : " is not <= 1"));
    }
}

// Tail contribution of f under composition with an inner map of contraction theta.
inline Real composition_tail(const FunctionBall &f, const Real &th)
{
    if (!f.has_tail()) {
        return zero_like(f);
    }
    return add_up(mul_up(f.high_order_bound(), pow(th, f.degree() + 1, MPFR_RNDU)), f.error_bound());
}

inline Real derivative_tail(const FunctionBall &f, const Real &th)
{
    if (!f.has_tail()) {
        return zero_like(f);
    }
    const Real &r = f.domain().radius;
    Real t = zero_like(f);
    if (!f.high_order_bound().is_zero()) {
        t = mul_up(f.high_order_bound(), sup_k_theta_power(th, f.degree() + 1));
    }
    if (!f.error_bound().is_zero()) {
        t = add_up(t, mul_up(f.error_bound(), sup_k_theta_power(th, 1)));
    }
    return div(t, r, MPFR_RNDU);
}

inline FunctionBall horner(const FunctionBall &poly, const FunctionBall &u)
{
    const std::size_t n = poly.degree();
    FunctionBall acc = FunctionBall::constant(poly.context(), poly.domain(), n, poly.coeffs()[n]);
    for (std::size_t k = n; k-- > 0;) {
        acc = acc * u;
        acc.coeffs()[0] += poly.coeffs()[k];
    }
    return acc;
}

inline FunctionBall polynomial_part(const FunctionBall &f)
{
    FunctionBall p = f;
    p.set_high_order_bound(zero_like(f));
    p.set_error_bound(zero_like(f));
    return p;
}

} // namespace detail

/**
 * f o h. The polynomial part is evaluated by Horner's scheme in ball
 * arithmetic; the tails of f contribute v_H(f) * theta^(N+1) + v_E(f) to the
 * error bound, where theta = ||(h - c)/r||.
 */
inline FunctionBall compose(const FunctionBall &f, const FunctionBall &h)
{
    detail::check_compatible(f, h);
    const Real th = theta(h);
    detail::require_theta(th, f.has_tail(), "compose");
    FunctionBall out = detail::horner(detail::polynomial_part(f), normalized(h));
    out.set_error_bound(add_up(out.error_bound(), detail::composition_tail(f, th)));
    return out;
}

// f' o h, with the derivative tails bounded through sup_k k theta^(k-1) / r.
// As for compose, theta = 1 is accepted when f has no tails.
inline FunctionBall compose_derivative(const FunctionBall &f, const FunctionBall &h)
{
    detail::check_compatible(f, h);
    const Real th = theta(h);
    detail::require_theta(th, f.has_tail(), "compose_derivative");
    FunctionBall out = detail::horner(derivative_polynomial(f), normalized(h));
    out.set_error_bound(add_up(out.error_bound(), detail::derivative_tail(f, th)));
    return out;
}

// X -> s X on the given disc: coefficients (s c, s r, 0, ...).
inline FunctionBall affine_argument(const RoundingContext &ctx, const Disc &domain, std::size_t degree,
                                    const Rectangle &s)
{
    if (degree < 1) {
        throw Error("affine argument needs degree >= 1");
    }
    FunctionBall f = FunctionBall::zero(ctx, domain, degree);
    f.coeffs()[0] = s * Interval(domain.center);
    f.coeffs()[1] = s * Interval(domain.radius);
    return f;
}

inline FunctionBall affine_argument(const RoundingContext &ctx, const Disc &domain, std::size_t degree,
                                    const Interval &s)
{
    return affine_argument(ctx, domain, degree, Rectangle(s));
}

/**
 * Powers U_k = ((h - c)/r)^k, k = 0..N, for repeated compositions with the
 * same inner map. compose(f, table) agrees with compose(f, h) in what it
 * encloses and costs O(N^2) instead of O(N^3).
 */
class PowerTable
{
  public:
    explicit PowerTable(const FunctionBall &h) : theta_(feigen::theta(h))
    {
        const FunctionBall u = normalized(h);
        const std::size_t n = h.degree();
        powers_.reserve(n + 1);
        powers_.push_back(FunctionBall::constant(h.context(), h.domain(), n, Rectangle::point(h.context(), 1.0)));
        for (std::size_t k = 1; k <= n; ++k) {
            powers_.push_back(powers_.back() * u);
        }
    }

    const Real &theta() const { return theta_; }
    const FunctionBall &power(std::size_t k) const { return powers_.at(k); }
    std::size_t degree() const { return powers_.size() - 1; }

  private:
    Real theta_;
    std::vector<FunctionBall> powers_;
};

inline FunctionBall compose(const FunctionBall &f, const PowerTable &table)
{
    detail::check_compatible(f, table.power(0));
    detail::require_theta(table.theta(), f.has_tail(), "compose");
    FunctionBall out = FunctionBall::zero(f.context(), f.domain(), f.degree());
    for (std::size_t k = 0; k <= f.degree(); ++k) {
        detail::add_scaled(out, f.coeffs()[k], table.power(k));
    }
    out.set_error_bound(add_up(out.error_bound(), detail::composition_tail(f, table.theta())));
    return out;
}

namespace detail
{

inline Rectangle normalized_point(const FunctionBall &f, const Rectangle &z, bool strict)
{
    const Disc &d = f.domain();
    const Rectangle shifted = z - Rectangle(Interval(d.center));
    const Real dist = shifted.mag();
    if (strict ? !(dist < d.radius) : !(dist <= d.radius)) {
        throw PointOutsideDomain("|z - c| <= " + dist.to_decimal(10, MPFR_RNDU) + " exceeds radius");
    }
    return Rectangle(shifted.re() / Interval(d.radius), shifted.im() / Interval(d.radius));
}

inline Rectangle horner_point(const std::vector<Rectangle> &c, const Rectangle &w)
{
    Rectangle acc = c.back();
    for (std::size_t k = c.size() - 1; k-- > 0;) {
        acc = acc * w + c[k];
    }
    return acc;
}

} // namespace detail

/**
 * Enclosure of f(z) for every member and every z in the rectangle, which must
 * lie in the closed disc. |e_k(z)| <= m^k with m = sup|z - c|/r, so the tails
 * contribute at most v_H m^(N+1) + v_E.
 */
inline Rectangle evaluate(const FunctionBall &f, const Rectangle &z)
{
    const Rectangle w = detail::normalized_point(f, z, false);
    Rectangle value = detail::horner_point(f.coeffs(), w);
    if (f.has_tail()) {
        const Real m = w.mag();
        const Real rad = add_up(mul_up(f.high_order_bound(), pow(m, f.degree() + 1, MPFR_RNDU)), f.error_bound());
        value = inflate(value, rad);
    }
    return value;
}

inline Rectangle evaluate(const FunctionBall &f, const Interval &x) { return evaluate(f, Rectangle(x)); }

// Enclosure of f'(z); z must lie strictly inside the disc.
inline Rectangle evaluate_derivative(const FunctionBall &f, const Rectangle &z)
{
    const Rectangle w = detail::normalized_point(f, z, true);
    Rectangle value = detail::horner_point(derivative_polynomial(f).coeffs(), w);
    if (f.has_tail()) {
        value = inflate(value, detail::derivative_tail(f, w.mag()));
    }
    return value;
}

// Coefficient k of any member: the error part may contribute to every coefficient.
inline Rectangle coefficient(const FunctionBall &f, std::size_t k)
{
    if (k > f.degree()) {
        throw IndexBeyondTruncation("coefficient " + std::to_string(k) + " beyond truncation degree " +
                                    std::to_string(f.degree()));
    }
    if (f.error_bound().is_zero()) {
        return f.coeffs()[k];
    }
    return inflate(f.coeffs()[k], f.error_bound());
}

// Text checkpoint format. Every number is an exact hexadecimal float.
//
//   feigen-ball 1
//   precision <bits>
//   center <hex>
//   radius <hex>
//   degree <N>
//   high_order_bound <hex>
//   error_bound <hex>
//   coeff <k> <re.lo> <re.hi> <im.lo> <im.hi>     (N+1 lines)
inline std::string to_text(const FunctionBall &f)
{
    std::ostringstream os;
    os << "feigen-ball 1\n";
    os << "precision " << f.context().bits() << '\n';
    os << "center " << f.domain().center.to_hex() << '\n';
    os << "radius " << f.domain().radius.to_hex() << '\n';
    os << "degree " << f.degree() << '\n';
    os << "high_order_bound " << f.high_order_bound().to_hex() << '\n';
    os << "error_bound " << f.error_bound().to_hex() << '\n';
    for (std::size_t k = 0; k <= f.degree(); ++k) {
        const Rectangle &c = f.coeffs()[k];
        os << "coeff " << k << ' ' << c.re().lo().to_hex() << ' ' << c.re().hi().to_hex() << ' '
           << c.im().lo().to_hex() << ' ' << c.im().hi().to_hex() << '\n';
    }
    return os.str();
}

inline FunctionBall ball_from_text(const std::string &text)
{
    std::istringstream is(text);
    auto expect = [&](const std::string &key) {
        std::string k;
        if (!(is >> k) || k != key) {
            throw ParseError("expected '" + key + "' in function ball text");
        }
    };
    auto word = [&]() {
        std::string w;
        if (!(is >> w)) {
            throw ParseError("truncated function ball text");
        }
        return w;
    };
    expect("feigen-ball");
    if (word() != "1") {
        throw ParseError("unsupported function ball format version");
    }
    expect("precision");
    const RoundingContext ctx(std::stol(word()));
    auto exact = [&]() { return ctx.parse(word(), MPFR_RNDN); };
    expect("center");
    Real c = exact();
    expect("radius");
    Real r = exact();
    expect("degree");
    const std::size_t n = std::stoul(word());
    expect("high_order_bound");
    Real vh = exact();
    expect("error_bound");
    Real ve = exact();
    std::vector<Rectangle> coeffs;
    coeffs.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        expect("coeff");
        if (std::stoul(word()) != k) {
            throw ParseError("coefficient lines out of order");
        }
        Real a = exact(), b = exact(), p = exact(), q = exact();
        coeffs.emplace_back(Interval(std::move(a), std::move(b)), Interval(std::move(p), std::move(q)));
    }
    return FunctionBall(ctx, Disc(std::move(c), std::move(r)), std::move(coeffs), std::move(vh), std::move(ve));
}

} // namespace feigen

#endif // FEIGEN_FUNCTION_BALL_HPP
