#include <gtest/gtest.h>

#include "desk_fixture.hpp"

using namespace feigen;

namespace
{

bool contains_ball(const FunctionBall &outer, const FunctionBall &inner)
{
    for (std::size_t k = 0; k <= outer.degree(); ++k) {
        if (!outer.coeffs()[k].contains(inner.coeffs()[k])) {
            return false;
        }
    }
    return inner.high_order_bound() <= outer.high_order_bound() && inner.error_bound() <= outer.error_bound();
}

Interval digits(const char *s) { return Interval::from_string(desk::ctx(), s); }

} // namespace

TEST(PrecomputeShared, ConstantOne)
{
    const RoundingContext &ctx = desk::ctx();
    const Disc d = Disc::standard(ctx);
    const FunctionBall one = FunctionBall::constant(ctx, d, 8, Rectangle::point(ctx, 1.0));
    const SharedEvaluations s = precompute_shared(one);
    EXPECT_TRUE(s.a.contains(ctx.real(1.0), ctx.real(0.0)));
    EXPECT_TRUE(s.a.re().is_point());
    EXPECT_TRUE(s.inner.coeffs()[0].contains(ctx.real(1.0), ctx.real(0.0)));
    EXPECT_TRUE(s.squared.coeffs()[0].contains(ctx.real(1.0), ctx.real(0.0)));
    EXPECT_EQ(norm_upper(s.squared), ctx.real(1.0));
}

TEST(PrecomputeShared, DeskApproximation)
{
    const SharedEvaluations s = precompute_shared(desk::g0());
    EXPECT_TRUE(Interval::from_strings(desk::ctx(), "-0.39953529", "-0.39953528").contains(s.a.re()));
    EXPECT_LT(s.a.re().width(), desk::ctx().real(1e-20));
    EXPECT_NEAR(s.theta_affine().to_double(), 0.4958, 1e-4);
}

TEST(PrecomputeShared, InflationWidensEveryField)
{
    const SharedEvaluations p = precompute_shared(desk::g0());
    const SharedEvaluations b = precompute_shared(desk::ball());
    EXPECT_TRUE(b.a.contains(p.a));
    EXPECT_TRUE(contains_ball(b.inner, p.inner));
    EXPECT_TRUE(contains_ball(b.squared, p.squared));
    EXPECT_TRUE(contains_ball(b.outer_comp, p.outer_comp));
    EXPECT_TRUE(contains_ball(b.deriv_outer, p.deriv_outer));
    EXPECT_TRUE(contains_ball(b.deriv_inner, p.deriv_inner));
}

TEST(PrecomputeShared, NormalizationSingular)
{
    const RoundingContext &ctx = desk::ctx();
    const FunctionBall e1 = FunctionBall::basis(ctx, Disc::standard(ctx), 8, 1);
    EXPECT_THROW(precompute_shared(e1), NormalizationSingular);
}

TEST(PrecomputeShared, NamesTheFailingStage)
{
    const RoundingContext &ctx = desk::ctx();
    const Disc d = Disc::standard(ctx);
    // G = 1 - 3X: a = -2, a^2 X leaves the disc
    std::vector<Real> c = {ctx.real(-2.0), ctx.real(-7.5)};
    c.resize(9, ctx.real(0.0));
    FunctionBall g = FunctionBall::from_reals(ctx, d, c);
    g.set_error_bound(ctx.real(1e-3));
    try {
        precompute_shared(g);
        FAIL() << "expected CompositionContractFailure";
    } catch (const CompositionContractFailure &e) {
        EXPECT_NE(std::string(e.what()).find("G(a^2 X)"), std::string::npos);
    }
}

TEST(ApplyT, ToyInputIsWellDefined)
{
    const RoundingContext &ctx = desk::ctx();
    const Disc d = Disc::standard(ctx);
    // G(X) = 1 - 1.2 X in the basis ((X - 1)/2.5)^k: (-0.2, -3)
    std::vector<Real> c = {ctx.real(-0.2), ctx.real(-3.0)};
    c.resize(9, ctx.real(0.0));
    const FunctionBall t = apply_T(FunctionBall::from_reals(ctx, d, c));
    EXPECT_TRUE(norm_upper(t).is_finite());
}

TEST(ApplyT, ResidualAtDeskApproximationIsSmall)
{
    const FunctionBall g0 = desk::g0();
    const FunctionBall t = apply_T(g0);
    EXPECT_LT(norm_upper(t - g0), desk::ctx().real(1e-10));
    const FunctionBall tb = apply_T(desk::ball());
    for (std::size_t k = 0; k <= g0.degree(); ++k) {
        EXPECT_TRUE(inflate(tb, desk::ctx().real(1e-8)).coeffs()[k].intersects(g0.coeffs()[k]));
    }
}

TEST(ApplyDT, NormalizationTermsVanishForHigherBasis)
{
    const SharedEvaluations s = precompute_shared(desk::ball());
    const RoundingContext &ctx = desk::ctx();
    for (std::size_t k = 1; k <= 20; ++k) {
        const FunctionBall ek = FunctionBall::basis(ctx, Disc::standard(ctx), 20, k);
        const FunctionBall full = apply_DT(s, ek, true);
        const FunctionBall simple = apply_DT(s, ek, false);
        EXPECT_EQ(to_text(full), to_text(simple)) << "k = " << k;
    }
    const FunctionBall e0 = FunctionBall::basis(ctx, Disc::standard(ctx), 20, 0);
    EXPECT_NE(to_text(apply_DT(s, e0, true)), to_text(apply_DT(s, e0, false)));
}

TEST(ApplyL, ZeroAndLinearity)
{
    const SharedEvaluations s = precompute_shared(desk::ball());
    const RoundingContext &ctx = desk::ctx();
    const Disc d = Disc::standard(ctx);
    EXPECT_EQ(norm_upper(apply_L(s, FunctionBall::zero(ctx, d, 20))), ctx.real(0.0));
    const FunctionBall &w = *desk::run().functions->W;
    const FunctionBall l1 = scale(apply_L(s, w), Rectangle::point(ctx, 2.0));
    const FunctionBall l2 = apply_L(s, scale(w, Rectangle::point(ctx, 2.0)));
    for (std::size_t k = 0; k <= 20; ++k) {
        EXPECT_TRUE(l1.coeffs()[k].intersects(l2.coeffs()[k]));
    }
}

TEST(ApplyL, EigenvalueGammaSquared)
{
    const auto &fns = *desk::run().functions;
    const SharedEvaluations s = precompute_shared(fns.G);
    const Rectangle ratio = coefficient(apply_L(s, *fns.W), 0) / coefficient(*fns.W, 0);
    const Interval g = digits(desk::gamma_digits);
    EXPECT_TRUE(ratio.re().contains(sqr(g)));
}

TEST(ApplyDT, EigenvalueDelta)
{
    const auto &fns = *desk::run().functions;
    const SharedEvaluations s = precompute_shared(fns.G);
    const Rectangle ratio = coefficient(apply_DT(s, *fns.V), 0) / coefficient(*fns.V, 0);
    EXPECT_TRUE(ratio.re().contains(digits(desk::delta_digits)));
}

TEST(DomainExtension, AnalyticDiscCheck)
{
    const Interval a = digits(desk::a_digits);
    const Interval a2 = sqr(a);
    const RoundingContext &ctx = desk::ctx();
    const Interval c = Interval::point(ctx, 1L), r = Interval::point(ctx, 2.5);
    const Interval lhs = abs(a2 * c - c) + abs(a2) * r;
    EXPECT_NEAR(lhs.mid().to_double(), 1.2394, 1e-4);
    EXPECT_LT(lhs.hi(), r.lo());
}

TEST(DomainExtension, PassesOnDeskBall)
{
    const DomainExtensionReport rep = check_domain_extension(desk::ball(), 256);
    EXPECT_TRUE(rep.pass);
    EXPECT_EQ(rep.boundary.size(), 256u);
    EXPECT_EQ(rep.gamma1.size(), 256u);
    EXPECT_EQ(rep.gamma2.size(), 256u);
}

TEST(DomainExtension, MonotoneInRadiusAndCount)
{
    const RoundingContext &ctx = desk::ctx();
    for (double rho : {1e-8, 1e-10, 1e-12}) {
        for (std::size_t m : {16u, 64u, 256u}) {
            EXPECT_TRUE(check_domain_extension(inflate(desk::g0(), ctx.real(rho)), m).pass);
        }
    }
}

TEST(DomainExtension, AbsurdRadiusFails)
{
    EXPECT_THROW(check_domain_extension(inflate(desk::g0(), desk::ctx().real(1.0)), 64), ContainmentFailure);
}

TEST(DomainExtension, BadRectangleCount)
{
    EXPECT_THROW(check_domain_extension(desk::ball(), 2), ConfigError);
    EXPECT_THROW(check_domain_extension(desk::ball(), 30), ConfigError);
}

TEST(DomainExtension, BoundaryCoveringContainsCirclePoints)
{
    const RoundingContext &ctx = desk::ctx();
    const Disc d = Disc::standard(ctx);
    const auto rects = boundary_covering(ctx, d, 64);
    for (int i = 0; i < 1000; ++i) {
        const double t = 2 * M_PI * i / 1000.0;
        const double x = 1 + 2.5 * std::cos(t), y = 2.5 * std::sin(t);
        bool covered = false;
        for (const auto &z : rects) {
            // double sample: allow for its own rounding
            if (inflate(z, ctx.real(1e-12)).contains(ctx.real(x), ctx.real(y))) {
                covered = true;
                break;
            }
        }
        EXPECT_TRUE(covered) << "angle " << t;
    }
}

TEST(Extend, InsideDiscAgreesWithEvaluation)
{
    const auto &fns = *desk::run().functions;
    const Interval x = Interval::from_strings(desk::ctx(), "0.25", "0.5");
    const Rectangle direct = evaluate(fns.G, x);
    const Rectangle ext = extend_recursive(fns, ExtensionTarget::G, x, 0);
    EXPECT_EQ(direct.re().lo(), ext.re().lo());
    EXPECT_EQ(direct.re().hi(), ext.re().hi());
}

TEST(Extend, ValueAtOneIsA)
{
    const auto &fns = *desk::run().functions;
    const Interval one = Interval::point(desk::ctx(), 1L);
    EXPECT_TRUE(extend_recursive(fns, ExtensionTarget::g, one, 0).re().contains(digits(desk::a_digits)));
    EXPECT_TRUE(extend_recursive(fns, ExtensionTarget::G, one, 0).re().contains(digits(desk::a_digits)));
}

TEST(Extend, OutsideUsesTheFunctionalEquation)
{
    const auto &fns = *desk::run().functions;
    const RoundingContext &ctx = desk::ctx();
    const Interval x = Interval::point(ctx, 8L);
    const Rectangle ext = extend_recursive(fns, ExtensionTarget::G, x, 4);
    const Rectangle y = evaluate(fns.G, fns.a * fns.a * Rectangle(x));
    const Rectangle manual = evaluate(fns.G, sqr(y)) / fns.a;
    EXPECT_TRUE(ext.intersects(manual));
    EXPECT_THROW(extend_recursive(fns, ExtensionTarget::G, x, 0), DepthExceeded);
}

TEST(Extend, EigenfunctionsAtOne)
{
    const auto &fns = *desk::run().functions;
    const Interval one = Interval::point(desk::ctx(), 1L);
    EXPECT_TRUE(extend_recursive(fns, ExtensionTarget::V, one, 0).re().contains(digits(desk::delta_digits)));
    EXPECT_TRUE(extend_recursive(fns, ExtensionTarget::w, one, 0).re().contains(digits(desk::gamma_digits)));
}

TEST(Extend, EigenfunctionsBeyondTheDisc)
{
    const auto &fns = *desk::run().functions;
    const RoundingContext &ctx = desk::ctx();
    const Interval x = Interval::point(ctx, 5L);
    const Rectangle v = extend_recursive(fns, ExtensionTarget::V, x, 4);
    const Rectangle w = extend_recursive(fns, ExtensionTarget::W, x, 4);
    EXPECT_TRUE(v.re().lo().is_finite() && v.re().hi().is_finite());
    EXPECT_TRUE(w.re().lo().is_finite() && w.re().hi().is_finite());
}

TEST(Extend, MissingEigenfunction)
{
    CertifiedFunctions fns = *desk::run().functions;
    fns.V.reset();
    const Interval x = Interval::point(desk::ctx(), 1L);
    EXPECT_THROW(extend_recursive(fns, ExtensionTarget::V, x, 2), MissingCertificate);
}
