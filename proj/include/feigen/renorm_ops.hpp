#ifndef FEIGEN_RENORM_OPS_HPP
#define FEIGEN_RENORM_OPS_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "function_ball.hpp"
#include "parallel.hpp"

namespace feigen
{

/**
 * Subexpressions of T(G) = a^{-1} G(Q(G(a^2 X))), a = G(1), Q(w) = w^2,
 * computed once for a ball of G and reused by T, DT(G) and the noise
 * operator L.
 */
struct SharedEvaluations
{
    Rectangle a;           // G(1)
    Rectangle a2;          // a^2
    Rectangle a_inv;       // 1/a
    Rectangle a_inv2;      // 1/a^2
    FunctionBall affine;   // X -> a^2 X
    FunctionBall inner;    // G(a^2 X)
    FunctionBall squared;  // Q(G(a^2 X))
    FunctionBall outer_comp;   // G(Q(G(a^2 X)))
    FunctionBall deriv_outer;  // G'(Q(G(a^2 X)))
    FunctionBall deriv_inner;  // G'(a^2 X)
    FunctionBall chain;        // G'(Q(G(a^2 X))) * 2 G(a^2 X)
    FunctionBall chain_scaled; // a^{-1} * chain
    FunctionBall noise_weight; // a^{-2} * chain^2
    // Coefficient of da = dG(1) in DT(G) dG:
    //   -a^{-2} G(Q(G(a^2 X))) + chain * G'(a^2 X) * 2X   (the a^{-1} G(1) factor cancels)
    FunctionBall da_sensitivity;
    std::shared_ptr<const PowerTable> affine_powers;
    std::shared_ptr<const PowerTable> squared_powers;

    const RoundingContext &context() const { return inner.context(); }
    const Real &theta_affine() const { return affine_powers->theta(); }
    const Real &theta_squared() const { return squared_powers->theta(); }
};

namespace detail
{

template <typename F>
auto named_stage(const char *name, F &&f)
{
    try {
        return f();
    } catch (const CompositionContractFailure &e) {
        throw CompositionContractFailure(std::string(name) + ": " + e.what());
    }
}

inline Rectangle point_rect(const Real &x) { return Rectangle(Interval(x)); }

} // namespace detail

inline SharedEvaluations precompute_shared(const FunctionBall &g)
{
    const RoundingContext &ctx = g.context();
    const Disc &dom = g.domain();
    const std::size_t n = g.degree();
    const Rectangle one = Rectangle::point(ctx, 1.0);

    Rectangle a = evaluate(g, Rectangle::point(ctx, 1.0));
    if (a.mig().is_zero()) {
        throw NormalizationSingular("enclosure of a = G(1) contains zero");
    }
    Rectangle a2 = a * a;
    Rectangle a_inv = one / a;
    Rectangle a_inv2 = a_inv * a_inv;

    FunctionBall affine = affine_argument(ctx, dom, n, a2);
    auto affine_powers = std::make_shared<const PowerTable>(affine);
    FunctionBall inner = detail::named_stage("G(a^2 X)", [&] { return compose(g, *affine_powers); });
    FunctionBall squared = inner * inner;
    auto squared_powers = std::make_shared<const PowerTable>(squared);
    FunctionBall outer = detail::named_stage("G(Q(G(a^2 X)))", [&] { return compose(g, *squared_powers); });
    FunctionBall deriv_outer =
        detail::named_stage("G'(Q(G(a^2 X)))", [&] { return compose_derivative(g, squared); });
    FunctionBall deriv_inner = detail::named_stage("G'(a^2 X)", [&] { return compose_derivative(g, affine); });

    FunctionBall chain = deriv_outer * scale(inner, Rectangle::point(ctx, 2.0));
    FunctionBall chain_scaled = scale(chain, a_inv);
    FunctionBall noise_weight = scale(chain * chain, a_inv2);
    const FunctionBall two_x = scale(FunctionBall::identity(ctx, dom, n), Rectangle::point(ctx, 2.0));
    FunctionBall da_sensitivity = scale(outer, -a_inv2) + chain * deriv_inner * two_x;

    return SharedEvaluations{std::move(a),        std::move(a2),         std::move(a_inv),
                             std::move(a_inv2),   std::move(affine),     std::move(inner),
                             std::move(squared),  std::move(outer),      std::move(deriv_outer),
                             std::move(deriv_inner), std::move(chain),   std::move(chain_scaled),
                             std::move(noise_weight), std::move(da_sensitivity), std::move(affine_powers),
                             std::move(squared_powers)};
}

// T(G) = a^{-1} G(Q(G(a^2 X))).
inline FunctionBall apply_T(const SharedEvaluations &s) { return scale(s.outer_comp, s.a_inv); }
inline FunctionBall apply_T(const FunctionBall &g) { return apply_T(precompute_shared(g)); }

/**
 * DT(G) dG as the sum of
 *   -a^{-2} da G(Q(G(a^2X)))
 *   + a^{-1} dG(Q(G(a^2X)))
 *   + a^{-1} G'(Q(G(a^2X))) 2G(a^2X) dG(a^2X)
 *   + a^{-1} G'(Q(G(a^2X))) 2G(a^2X) G'(a^2X) 2X G(1) da,
 * with da = dG(1). When `with_normalization_terms` is false the two da terms
 * are dropped; that variant is for spectrum estimates only.
 */
inline FunctionBall apply_DT(const SharedEvaluations &s, const FunctionBall &dg, bool with_normalization_terms = true)
{
    FunctionBall out = scale(compose(dg, *s.squared_powers), s.a_inv);
    out += s.chain_scaled * compose(dg, *s.affine_powers);
    if (with_normalization_terms) {
        const Rectangle da = evaluate(dg, Rectangle::point(dg.context(), 1.0));
        if (!da.is_zero()) {
            out += scale(s.da_sensitivity, da);
        }
    }
    return out;
}

// L W = a^{-2} (G'(Q(G(a^2X))) 2G(a^2X))^2 W(a^2X) + a^{-2} W(Q(G(a^2X))).
inline FunctionBall apply_L(const SharedEvaluations &s, const FunctionBall &w)
{
    return s.noise_weight * compose(w, *s.affine_powers) + scale(compose(w, *s.squared_powers), s.a_inv2);
}

/// Rectangles covering a closed curve, and the images certified inside the disc.
struct DomainExtensionReport
{
    bool pass = false;
    std::vector<Rectangle> boundary; // covering of the boundary circle
    std::vector<Rectangle> gamma1;   // a^2 z
    std::vector<Rectangle> gamma2;   // Q(G(a^2 z))
};

/**
 * Covering of the circle |z - c| = r by m rectangles over equal-angle arcs.
 * m must be a multiple of 4 so that every arc sits inside one quadrant; there
 * the arc is monotone in both coordinates, so the box spanned by its (enclosed)
 * endpoints contains it. Axis points are exact.
 */
inline std::vector<Rectangle> boundary_covering(const RoundingContext &ctx, const Disc &d, std::size_t m)
{
    if (m < 4 || m % 4 != 0) {
        throw ConfigError("boundary covering needs a multiple of 4 rectangles, got " + std::to_string(m));
    }
    const std::size_t per_quadrant = m / 4;
    // Unit-circle point enclosures at angles q*pi/2 + j*(pi/2)/per_quadrant.
    auto unit_point = [&](std::size_t idx) -> Rectangle {
        const std::size_t q = (idx / per_quadrant) % 4;
        const std::size_t j = idx % per_quadrant;
        Interval cs = Interval::point(ctx, 1L), sn = Interval::zero(ctx);
        if (j != 0) {
            // Any representable angle strictly inside the quadrant will do; the
            // same angle is used by both neighbouring arcs.
            Real angle(ctx.bits());
            mpfr_const_pi(angle.get(), MPFR_RNDN);
            mpfr_mul_ui(angle.get(), angle.get(), static_cast<unsigned long>(j), MPFR_RNDN);
            mpfr_div_ui(angle.get(), angle.get(), static_cast<unsigned long>(2 * per_quadrant), MPFR_RNDN);
            Real clo(ctx.bits()), chi(ctx.bits()), slo(ctx.bits()), shi(ctx.bits());
            mpfr_cos(clo.get(), angle.get(), MPFR_RNDD);
            mpfr_cos(chi.get(), angle.get(), MPFR_RNDU);
            mpfr_sin(slo.get(), angle.get(), MPFR_RNDD);
            mpfr_sin(shi.get(), angle.get(), MPFR_RNDU);
            cs = Interval(std::move(clo), std::move(chi));
            sn = Interval(std::move(slo), std::move(shi));
        }
        // rotate by q quarter turns
        switch (q) {
        case 0:
            return Rectangle(cs, sn);
        case 1:
            return Rectangle(-sn, cs);
        case 2:
            return Rectangle(-cs, -sn);
        default:
            return Rectangle(sn, -cs);
        }
    };
    const Interval c(d.center), r(d.radius);
    std::vector<Rectangle> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const Rectangle box = hull(unit_point(i), unit_point((i + 1) % m));
        out.emplace_back(box.re() * r + c, box.im() * r);
    }
    return out;
}

/**
 * Verifies, for every G in the ball, that a^2 * closure(D) and
 * Q(G(a^2 * closure(D))) lie strictly inside D, by checking the images of a
 * rectangle covering of the boundary (maximum modulus principle). Throws
 * ContainmentFailure naming the first offending rectangle.
 */
inline DomainExtensionReport check_domain_extension(const FunctionBall &g, std::size_t m, unsigned workers = 1)
{
    const RoundingContext &ctx = g.context();
    const Disc &d = g.domain();
    DomainExtensionReport rep;
    rep.boundary = boundary_covering(ctx, d, m);
    const Rectangle a = evaluate(g, Rectangle::point(ctx, 1.0));
    const Rectangle a2 = a * a;
    const Rectangle c = detail::point_rect(d.center);
    auto images = parallel_map<std::pair<Rectangle, Rectangle>>(rep.boundary.size(), workers, [&](std::size_t i) {
        const Rectangle z1 = a2 * rep.boundary[i];
        if (!((z1 - c).mag() < d.radius)) {
            throw ContainmentFailure("rectangle " + std::to_string(i) + ": a^2 z not strictly inside the disc");
        }
        Rectangle z2;
        try {
            z2 = sqr(evaluate(g, z1));
        } catch (const PointOutsideDomain &) {
            throw ContainmentFailure("rectangle " + std::to_string(i) + ": a^2 z leaves the closed disc");
        }
        if (!((z2 - c).mag() < d.radius)) {
            throw ContainmentFailure("rectangle " + std::to_string(i) +
                                     ": Q(G(a^2 z)) not strictly inside the disc");
        }
        return std::make_pair(z1, z2);
    });
    for (auto &[z1, z2] : images) {
        rep.gamma1.push_back(std::move(z1));
        rep.gamma2.push_back(std::move(z2));
    }
    rep.pass = true;
    return rep;
}

enum class ExtensionTarget
{
    G,     // G*(X)
    g,     // g*(x) = G*(x^2)
    V,     // V*(X)
    v,     // v*(x) = V*(x^2)
    W,     // W*(X)
    w      // w*(x) = W*(x^2)
};

/**
 * Certified balls and constants needed to evaluate the fixed point and the
 * eigenfunctions beyond the disc through their functional equations:
 *   G(X) = a^{-1} G(Q(G(a^2 X))),
 *   V(X) = delta^{-1} (DT(G) V)(X),
 *   W(X) = gamma^{-2} (L W)(X).
 */
struct CertifiedFunctions
{
    FunctionBall G;
    std::optional<FunctionBall> V;
    std::optional<FunctionBall> W;
    Rectangle a;
    std::optional<Rectangle> delta;
    std::optional<Rectangle> gamma;
};

namespace detail
{

class Extender
{
  public:
    explicit Extender(const CertifiedFunctions &f) : f_(f), ctx_(f.G.context()), a2_(f.a * f.a) {}

    Rectangle G(const Rectangle &x, unsigned depth) const
    {
        if (inside(x, false)) {
            return evaluate(f_.G, x);
        }
        need(depth);
        const Rectangle y = G(a2_ * x, depth - 1);
        return G(sqr(y), depth - 1) / f_.a;
    }

    Rectangle Gp(const Rectangle &x, unsigned depth) const
    {
        if (inside(x, true)) {
            return evaluate_derivative(f_.G, x);
        }
        need(depth);
        // G'(X) = a^{-1} G'(y^2) 2 y G'(a^2 X) a^2, y = G(a^2 X)
        const Rectangle ax = a2_ * x;
        const Rectangle y = G(ax, depth - 1);
        return Gp(sqr(y), depth - 1) * two() * y * Gp(ax, depth - 1) * a2_ / f_.a;
    }

    Rectangle V(const Rectangle &x, unsigned depth) const
    {
        const FunctionBall &v = require(f_.V, "V*");
        if (inside(x, false)) {
            return evaluate(v, x);
        }
        need(depth);
        const Rectangle &delta = require(f_.delta, "delta");
        const Rectangle ax = a2_ * x;
        const Rectangle y = G(ax, depth - 1);
        const Rectangle y2 = sqr(y);
        const Rectangle v1 = evaluate(v, Rectangle::point(ctx_, 1.0));
        const Rectangle chain = Gp(y2, depth - 1) * two() * y;
        Rectangle dt = V(y2, depth - 1) / f_.a + chain * V(ax, depth - 1) / f_.a;
        dt += v1 * (chain * Gp(ax, depth - 1) * two() * x - G(y2, depth - 1) / (f_.a * f_.a));
        return dt / delta;
    }

    Rectangle W(const Rectangle &x, unsigned depth) const
    {
        const FunctionBall &w = require(f_.W, "W*");
        if (inside(x, false)) {
            return evaluate(w, x);
        }
        need(depth);
        const Rectangle &gamma = require(f_.gamma, "gamma");
        const Rectangle ax = a2_ * x;
        const Rectangle y = G(ax, depth - 1);
        const Rectangle y2 = sqr(y);
        const Rectangle chain = Gp(y2, depth - 1) * two() * y;
        const Rectangle lw = (sqr(chain) * W(ax, depth - 1) + W(y2, depth - 1)) / sqr(f_.a);
        return lw / sqr(gamma);
    }

  private:
    bool inside(const Rectangle &x, bool strict) const
    {
        const Disc &d = f_.G.domain();
        const Real dist = (x - point_rect(d.center)).mag();
        return strict ? dist < d.radius : dist <= d.radius;
    }

    static void need(unsigned depth)
    {
        if (depth == 0) {
            throw DepthExceeded("argument not brought inside the disc within the allowed depth");
        }
    }

    template <typename T>
    static const T &require(const std::optional<T> &v, const char *what)
    {
        if (!v) {
            throw MissingCertificate(std::string(what) + " is not available");
        }
        return *v;
    }

    Rectangle two() const { return Rectangle::point(ctx_, 2.0); }

    const CertifiedFunctions &f_;
    RoundingContext ctx_;
    Rectangle a2_;
};

} // namespace detail

/**
 * Enclosure of a certified function at x, evaluated directly when x lies in
 * the closed disc and otherwise through the functional equations, applied at
 * most `depth` times along every branch. Lower-case targets are evaluated at
 * X = x^2.
 */
inline Rectangle extend_recursive(const CertifiedFunctions &f, ExtensionTarget target, const Interval &x,
                                  unsigned depth)
{
    const detail::Extender ext(f);
    const Rectangle px(x);
    switch (target) {
    case ExtensionTarget::G:
        return ext.G(px, depth);
    case ExtensionTarget::g:
        return ext.G(Rectangle(sqr(x)), depth);
    case ExtensionTarget::V:
        return ext.V(px, depth);
    case ExtensionTarget::v:
        return ext.V(Rectangle(sqr(x)), depth);
    case ExtensionTarget::W:
        return ext.W(px, depth);
    case ExtensionTarget::w:
        return ext.W(Rectangle(sqr(x)), depth);
    }
    throw Error("unknown extension target");
}

} // namespace feigen

#endif // FEIGEN_RENORM_OPS_HPP
