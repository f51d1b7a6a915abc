#ifndef FEIGEN_TESTS_PROPERTY_CHECKS_HPP
#define FEIGEN_TESTS_PROPERTY_CHECKS_HPP

// Randomised property checks shared by the unit suite and the acceptance run.
// Each check returns the number of cases tried and the number that failed.

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "feigen/feigen.hpp"

namespace props
{

using namespace feigen;

struct Result
{
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::string first_failure;

    bool ok() const { return cases > 0 && failures == 0; }

    void fail(const std::string &what)
    {
        if (failures++ == 0) {
            first_failure = what;
        }
    }
};

inline Real at_prec(const Real &x, mpfr_prec_t p)
{
    Real r(p);
    mpfr_set(r.get(), x.get(), MPFR_RNDN);
    return r;
}

inline Interval at_prec(const Interval &x, mpfr_prec_t p)
{
    Real lo(p), hi(p);
    mpfr_set(lo.get(), x.lo().get(), MPFR_RNDD);
    mpfr_set(hi.get(), x.hi().get(), MPFR_RNDU);
    return Interval(std::move(lo), std::move(hi));
}

// ---------------------------------------------------------------------------
// Intervals

enum class Op
{
    add,
    sub,
    mul,
    div
};

inline const char *op_name(Op op)
{
    switch (op) {
    case Op::add: return "+";
    case Op::sub: return "-";
    case Op::mul: return "*";
    case Op::div: return "/";
    }
    return "?";
}

inline Interval apply(Op op, const Interval &x, const Interval &y)
{
    switch (op) {
    case Op::add: return x + y;
    case Op::sub: return x - y;
    case Op::mul: return x * y;
    case Op::div: return x / y;
    }
    throw Error("bad op");
}

inline Real apply(Op op, const Real &a, const Real &b)
{
    switch (op) {
    case Op::add: return add(a, b, MPFR_RNDN);
    case Op::sub: return sub(a, b, MPFR_RNDN);
    case Op::mul: return mul(a, b, MPFR_RNDN);
    case Op::div: return div(a, b, MPFR_RNDN);
    }
    throw Error("bad op");
}

class IntervalSampler
{
  public:
    IntervalSampler(std::uint64_t seed, mpfr_prec_t prec) : rng_(seed), prec_(prec) {}

    double scalar()
    {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::uniform_int_distribution<int> e(-20, 20);
        return std::ldexp(u(rng_), e(rng_));
    }

    // Interval with endpoints at working precision; the divisor case avoids zero.
    Interval interval(bool nonzero)
    {
        double a = scalar(), b = a + std::abs(scalar()) * std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
        if (std::uniform_int_distribution<int>(0, 9)(rng_) == 0) {
            b = a;
        }
        if (nonzero && a <= 0.0 && b >= 0.0) {
            const double w = b - a;
            a = w + std::abs(scalar()) + 1e-30;
            b = a + w;
        }
        return Interval(Real(a, prec_), Real(b, prec_));
    }

    // A point of x (endpoints included now and then).
    Real member(const Interval &x)
    {
        const int pick = std::uniform_int_distribution<int>(0, 7)(rng_);
        if (pick == 0) {
            return x.lo();
        }
        if (pick == 1) {
            return x.hi();
        }
        const double t = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
        const mpfr_prec_t q = 4 * prec_;
        Real m = add(at_prec(x.lo(), q), mul(sub(at_prec(x.hi(), q), at_prec(x.lo(), q), MPFR_RNDN), Real(t, q), MPFR_RNDN),
                     MPFR_RNDN);
        return min(max(m, at_prec(x.lo(), q)), at_prec(x.hi(), q));
    }

    Interval subinterval(const Interval &x)
    {
        Real a = member(x), b = member(x);
        if (b < a) {
            std::swap(a, b);
        }
        // Round inward to working precision; the result stays inside x.
        Real lo(prec_), hi(prec_);
        mpfr_set(lo.get(), a.get(), MPFR_RNDU);
        mpfr_set(hi.get(), b.get(), MPFR_RNDD);
        if (hi < lo) {
            hi = lo;
        }
        return Interval(std::move(lo), std::move(hi));
    }

    Op op() { return static_cast<Op>(std::uniform_int_distribution<int>(0, 3)(rng_)); }

  private:
    std::mt19937_64 rng_;
    mpfr_prec_t prec_;
};

// x' in x, y' in y  =>  x' op y' in x op y.
inline Result interval_isotonicity(std::size_t cases, std::uint64_t seed = 1, mpfr_prec_t prec = 64)
{
    Result r{"interval inclusion isotonicity"};
    IntervalSampler s(seed, prec);
    for (std::size_t i = 0; i < cases; ++i) {
        const Op op = s.op();
        const Interval x = s.interval(false), y = s.interval(op == Op::div);
        const Interval xs = s.subinterval(x), ys = s.subinterval(y);
        ++r.cases;
        const Interval big = apply(op, x, y);
        const Interval small = apply(op, xs, ys);
        if (!big.contains(small)) {
            r.fail(std::string("op ") + op_name(op) + " on " + decimal_interval(x, 20) + ", " + decimal_interval(y, 20));
        }
    }
    return r;
}

// a in x, b in y  =>  a op b (at four times the precision) in x op y.
inline Result interval_containment(std::size_t cases, std::uint64_t seed = 2, mpfr_prec_t prec = 64)
{
    Result r{"interval containment at 4x precision"};
    IntervalSampler s(seed, prec);
    for (std::size_t i = 0; i < cases; ++i) {
        const Op op = s.op();
        const Interval x = s.interval(false), y = s.interval(op == Op::div);
        const Real a = at_prec(s.member(x), 4 * prec), b = at_prec(s.member(y), 4 * prec);
        ++r.cases;
        const Real exact = apply(op, a, b);
        if (!apply(op, x, y).contains(exact)) {
            r.fail(std::string("op ") + op_name(op) + " value " + exact.to_decimal(30));
        }
    }
    return r;
}

// Same inputs at twice the precision never give a wider result.
inline Result interval_precision_monotonicity(std::size_t cases, std::uint64_t seed = 3, mpfr_prec_t prec = 64)
{
    Result r{"interval precision monotonicity"};
    IntervalSampler s(seed, prec);
    for (std::size_t i = 0; i < cases; ++i) {
        const Op op = s.op();
        const Interval x = s.interval(false), y = s.interval(op == Op::div);
        ++r.cases;
        const Interval lo_prec = apply(op, x, y);
        const Interval hi_prec = apply(op, at_prec(x, 2 * prec), at_prec(y, 2 * prec));
        if (!lo_prec.contains(hi_prec)) {
            r.fail(std::string("op ") + op_name(op));
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Function balls. Members are concrete real polynomials in w = (z - c) / r,
// carried at four times the working precision.

using Poly = std::vector<Real>;

inline Poly poly_mul(const Poly &p, const Poly &q)
{
    const mpfr_prec_t pr = p[0].prec();
    Poly out(p.size() + q.size() - 1, Real(pr));
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i].is_zero()) {
            continue;
        }
        for (std::size_t j = 0; j < q.size(); ++j) {
            out[i + j] = add(out[i + j], mul(p[i], q[j], MPFR_RNDN), MPFR_RNDN);
        }
    }
    return out;
}

inline Poly poly_add(Poly p, const Poly &q)
{
    if (p.size() < q.size()) {
        p.resize(q.size(), Real(q[0].prec()));
    }
    for (std::size_t i = 0; i < q.size(); ++i) {
        p[i] = add(p[i], q[i], MPFR_RNDN);
    }
    return p;
}

inline Poly poly_scale(Poly p, const Real &s)
{
    for (auto &x : p) {
        x = mul(x, s, MPFR_RNDN);
    }
    return p;
}

// sum_k f_k u^k
inline Poly poly_compose(const Poly &f, const Poly &u)
{
    Poly acc{f.back()};
    for (std::size_t k = f.size() - 1; k-- > 0;) {
        acc = poly_mul(acc, u);
        acc[0] = add(acc[0], f[k], MPFR_RNDN);
    }
    return acc;
}

inline Real poly_eval(const Poly &p, const Real &w)
{
    Real acc = p.back();
    for (std::size_t k = p.size() - 1; k-- > 0;) {
        acc = add(mul(acc, w, MPFR_RNDN), p[k], MPFR_RNDN);
    }
    return acc;
}

inline Real l1(const Poly &p)
{
    Real s(p[0].prec());
    for (const auto &x : p) {
        s = add(s, abs(x), MPFR_RNDN);
    }
    return s;
}

// Minimal error-part mass needed to place p in the ball; p is a member iff
// this is at most v_E (up to the oracle's own rounding).
inline Real excess_over_ball(const FunctionBall &f, const Poly &p)
{
    const mpfr_prec_t q = p[0].prec();
    const std::size_t n = f.degree();
    Real low(q), high(q);
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (k > n) {
            high = add(high, abs(p[k]), MPFR_RNDN);
            continue;
        }
        const Rectangle &c = f.coeffs()[k];
        Real d(q);
        if (p[k] < c.re().lo()) {
            d = sub(at_prec(c.re().lo(), q), p[k], MPFR_RNDN);
        } else if (c.re().hi() < p[k]) {
            d = sub(p[k], at_prec(c.re().hi(), q), MPFR_RNDN);
        }
        // Members are real; an imaginary part not containing 0 costs its mignitude.
        low = add(add(low, d, MPFR_RNDN), at_prec(c.im().mig(), q), MPFR_RNDN);
    }
    Real over = sub(high, at_prec(f.high_order_bound(), q), MPFR_RNDN);
    if (over.sign() < 0) {
        over = Real(q);
    }
    return add(low, over, MPFR_RNDN);
}

inline bool is_member(const FunctionBall &f, const Poly &p)
{
    const mpfr_prec_t q = p[0].prec();
    // Slack for the oracle's own round-to-nearest at precision q.
    Real slack(q);
    mpfr_set_ui_2exp(slack.get(), 1, -static_cast<long>(q) + 16, MPFR_RNDN);
    slack = mul(slack, add(l1(p), Real::from_long(1, q), MPFR_RNDN), MPFR_RNDN);
    return excess_over_ball(f, p) <= add(at_prec(f.error_bound(), q), slack, MPFR_RNDN);
}

class BallSampler
{
  public:
    BallSampler(std::uint64_t seed, const RoundingContext &ctx, std::size_t degree)
        : rng_(seed), ctx_(ctx), disc_(Disc::standard(ctx)), n_(degree)
    {
    }

    const Disc &disc() const { return disc_; }
    mpfr_prec_t oracle_prec() const { return 4 * ctx_.bits(); }

    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
    bool coin(int one_in) { return std::uniform_int_distribution<int>(0, one_in - 1)(rng_) == 0; }

    // Ball with coefficient i of size ~ decay^i, small radii, optional tails.
    FunctionBall ball(double decay, double tail_scale)
    {
        std::vector<Rectangle> c;
        double s = 1.0;
        for (std::size_t k = 0; k <= n_; ++k, s *= decay) {
            const double mid = uniform(-s, s);
            const double rad = coin(4) ? 0.0 : uniform(0.0, 1e-6) * s;
            c.emplace_back(Interval(sub(ctx_.real(mid), ctx_.real(rad), MPFR_RNDD),
                                    add(ctx_.real(mid), ctx_.real(rad), MPFR_RNDU)));
        }
        Real vh = coin(3) ? Real(ctx_.bits()) : ctx_.real(uniform(0.0, tail_scale));
        Real ve = coin(3) ? Real(ctx_.bits()) : ctx_.real(uniform(0.0, tail_scale));
        return FunctionBall(ctx_, disc_, std::move(c), std::move(vh), std::move(ve));
    }

    // Inner function h = c + r u with ||u|| <= target < 1 for every member.
    FunctionBall inner_ball(double target)
    {
        for (;;) {
            std::vector<Rectangle> c;
            double s = target;
            for (std::size_t k = 0; k <= n_; ++k, s *= 0.5) {
                const double u = uniform(-s, s) * 0.5;
                const double rad = coin(3) ? 0.0 : uniform(0.0, 1e-7);
                const Interval uk(sub(ctx_.real(u), ctx_.real(rad), MPFR_RNDD), add(ctx_.real(u), ctx_.real(rad), MPFR_RNDU));
                const Interval r(disc_.radius);
                c.emplace_back(k == 0 ? Interval(disc_.center) + uk * r : uk * r);
            }
            Real vh = coin(2) ? Real(ctx_.bits()) : ctx_.real(uniform(0.0, 0.05));
            Real ve = coin(2) ? Real(ctx_.bits()) : ctx_.real(uniform(0.0, 0.05));
            FunctionBall h(ctx_, disc_, std::move(c), std::move(vh), std::move(ve));
            if (theta(h) < ctx_.real(1.0)) {
                return h;
            }
        }
    }

    // Random member: a point of every coefficient rectangle, plus a tail
    // polynomial above degree N of mass <= v_H and an arbitrary polynomial
    // of mass <= v_E.
    Poly member(const FunctionBall &f)
    {
        const mpfr_prec_t q = oracle_prec();
        const std::size_t extra = 4;
        Poly p(f.degree() + extra + 1, Real(q));
        for (std::size_t k = 0; k <= f.degree(); ++k) {
            const Interval &re = f.coeffs()[k].re();
            const double t = coin(6) ? (coin(2) ? 0.0 : 1.0) : uniform(0.0, 1.0);
            const Real lo = at_prec(re.lo(), q), hi = at_prec(re.hi(), q);
            p[k] = min(max(add(lo, mul(sub(hi, lo, MPFR_RNDN), Real(t, q), MPFR_RNDN), MPFR_RNDN), lo), hi);
        }
        spread(p, f.degree() + 1, p.size(), f.high_order_bound());
        spread(p, 0, p.size(), f.error_bound());
        return p;
    }

  private:
    // Adds a random polynomial of l1 mass <= budget on degrees [from, to).
    void spread(Poly &p, std::size_t from, std::size_t to, const Real &budget)
    {
        if (budget.is_zero()) {
            return;
        }
        const mpfr_prec_t q = p[0].prec();
        std::vector<double> w(to - from);
        double total = 0.0;
        for (auto &x : w) {
            x = coin(2) ? 0.0 : uniform(0.0, 1.0);
            total += x;
        }
        if (total == 0.0) {
            return;
        }
        // Down-rounded share so the l1 mass never exceeds the budget.
        const double fill = coin(3) ? 1.0 : uniform(0.0, 1.0);
        for (std::size_t i = 0; i < w.size(); ++i) {
            Real share = mul(at_prec(budget, q), Real(w[i] / total * fill * (1.0 - 1e-15), q), MPFR_RNDD);
            if (coin(2)) {
                share = neg(share);
            }
            p[from + i] = add(p[from + i], share, MPFR_RNDN);
        }
    }

    std::mt19937_64 rng_;
    RoundingContext ctx_;
    Disc disc_;
    std::size_t n_;
};

// u = (h - c) / r for a member h.
inline Poly normalized_member(const Disc &d, const Poly &h)
{
    const mpfr_prec_t q = h[0].prec();
    Poly u = h;
    u[0] = sub(u[0], at_prec(d.center, q), MPFR_RNDN);
    return poly_scale(u, div(Real::from_long(1, q), at_prec(d.radius, q), MPFR_RNDN));
}

inline Result ball_mul_containment(std::size_t cases, std::uint64_t seed = 11, std::size_t degree = 6)
{
    Result r{"ball product sampling oracle"};
    const RoundingContext ctx(100);
    BallSampler s(seed, ctx, degree);
    for (std::size_t i = 0; i < cases; ++i) {
        const FunctionBall f = s.ball(0.7, 1e-3), g = s.ball(0.7, 1e-3);
        const FunctionBall fg = f * g;
        ++r.cases;
        if (!is_member(fg, poly_mul(s.member(f), s.member(g)))) {
            r.fail("case " + std::to_string(i));
        }
    }
    return r;
}

inline Result ball_compose_containment(std::size_t cases, std::uint64_t seed = 12, std::size_t degree = 6)
{
    Result r{"ball composition sampling oracle"};
    const RoundingContext ctx(100);
    BallSampler s(seed, ctx, degree);
    for (std::size_t i = 0; i < cases; ++i) {
        const FunctionBall f = s.ball(0.8, 1e-3);
        const FunctionBall h = s.inner_ball(0.9);
        const FunctionBall fh = compose(f, h);
        ++r.cases;
        const Poly u = normalized_member(s.disc(), s.member(h));
        if (!is_member(fh, poly_compose(s.member(f), u))) {
            r.fail("case " + std::to_string(i));
        }
    }
    return r;
}

inline Result ball_compose_derivative_containment(std::size_t cases, std::uint64_t seed = 13, std::size_t degree = 6)
{
    Result r{"ball derivative composition sampling oracle"};
    const RoundingContext ctx(100);
    BallSampler s(seed, ctx, degree);
    const mpfr_prec_t q = s.oracle_prec();
    for (std::size_t i = 0; i < cases; ++i) {
        const FunctionBall f = s.ball(0.8, 1e-3);
        const FunctionBall h = s.inner_ball(0.9);
        const FunctionBall dfh = compose_derivative(f, h);
        ++r.cases;
        // f'(X) = sum_k k f_k w^(k-1) / r
        const Poly fm = s.member(f);
        Poly df(fm.size() - 1, Real(q));
        const Real rr = at_prec(s.disc().radius, q);
        for (std::size_t k = 1; k < fm.size(); ++k) {
            df[k - 1] = div(mul(fm[k], Real::from_long(static_cast<long>(k), q), MPFR_RNDN), rr, MPFR_RNDN);
        }
        const Poly u = normalized_member(s.disc(), s.member(h));
        if (!is_member(dfh, poly_compose(df, u))) {
            r.fail("case " + std::to_string(i));
        }
    }
    return r;
}

// Pointwise: members evaluated at points of a real sub-interval lie in the
// enclosure over the interval, and shrinking the interval never widens it.
inline Result ball_eval_containment(std::size_t cases, std::uint64_t seed = 14, std::size_t degree = 6)
{
    Result r{"ball evaluation sampling oracle"};
    const RoundingContext ctx(100);
    BallSampler s(seed, ctx, degree);
    const mpfr_prec_t q = s.oracle_prec();
    const Disc &d = s.disc();
    const double c = d.center.to_double(), rad = d.radius.to_double();
    for (std::size_t i = 0; i < cases; ++i) {
        const FunctionBall f = s.ball(0.8, 1e-3);
        double a = s.uniform(c - rad, c + rad), b = s.uniform(c - rad, c + rad);
        if (b < a) {
            std::swap(a, b);
        }
        const Interval x(ctx.real(a), ctx.real(b));
        const Rectangle wide = evaluate(f, x);
        const Poly p = s.member(f);
        ++r.cases;
        bool ok = true;
        for (int j = 0; j < 4 && ok; ++j) {
            const double t = j == 0 ? a : (j == 1 ? b : s.uniform(a, b));
            const Real w = div(sub(Real(t, q), at_prec(d.center, q), MPFR_RNDN), at_prec(d.radius, q), MPFR_RNDN);
            const Real v = poly_eval(p, w);
            ok = wide.re().contains(v) && wide.im().contains_zero();
            const Rectangle narrow = evaluate(f, Interval(ctx.real(t)));
            ok = ok && narrow.re().contains(v) && wide.contains(narrow);
        }
        if (!ok) {
            r.fail("case " + std::to_string(i));
        }
    }
    return r;
}

inline Result ball_norm_submultiplicative(std::size_t cases, std::uint64_t seed = 15, std::size_t degree = 6)
{
    Result r{"ball norm submultiplicativity"};
    const RoundingContext ctx(100);
    BallSampler s(seed, ctx, degree);
    Real rel(ctx.bits());
    mpfr_set_ui_2exp(rel.get(), 1, -static_cast<long>(ctx.bits()) + 10, MPFR_RNDU);
    const Real one_plus = add(ctx.real(1L), rel, MPFR_RNDU);
    for (std::size_t i = 0; i < cases; ++i) {
        const FunctionBall f = s.ball(0.9, 1e-2), g = s.ball(0.9, 1e-2);
        ++r.cases;
        const Real bound = mul_up(mul_up(norm_upper(f), norm_upper(g)), one_plus);
        if (!(norm_upper(f * g) <= bound)) {
            r.fail("case " + std::to_string(i));
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Operators

struct FiniteDifference
{
    std::vector<double> steps;
    std::vector<double> relative_errors;
};

// ||(T(G + t dG) - T(G)) / t - DT(G) dG|| / ||DT(G) dG|| in midpoint arithmetic.
inline FiniteDifference dt_finite_difference(const DenseVector &g0, const DenseVector &dg,
                                             const std::vector<double> &steps = {1e-3, 1e-4, 1e-5, 1e-6})
{
    const approx::Basis b(g0.size() - 1, g0[0].prec());
    const approx::Shared s = approx::precompute(b, g0);
    const DenseVector lin = approx::apply_DT(b, s, dg);
    const DenseVector t0 = approx::apply_T(b, g0);
    auto l1n = [](const DenseVector &v) {
        Real acc(v[0].prec());
        for (const auto &x : v) {
            acc += abs(x);
        }
        return acc;
    };
    const Real denom = l1n(lin);
    FiniteDifference out;
    for (double t : steps) {
        const Real tr(t, b.prec);
        const DenseVector t1 = approx::apply_T(b, approx::plus(g0, approx::scaled(dg, tr)));
        const DenseVector fd = approx::scaled(approx::minus(t1, t0), Real(1.0, b.prec) / tr);
        out.steps.push_back(t);
        out.relative_errors.push_back((l1n(approx::minus(fd, lin)) / denom).to_double());
    }
    return out;
}

// Relative errors shrink with the step and end small, for several directions.
inline Result dt_matches_finite_differences(const DenseVector &g0, std::size_t directions = 8, std::uint64_t seed = 21)
{
    Result r{"DT against finite differences of T"};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const mpfr_prec_t p = g0[0].prec();
    for (std::size_t i = 0; i < directions; ++i) {
        DenseVector dg(g0.size(), Real(p));
        if (i < 3) {
            dg[i] = Real(1.0, p);
        } else {
            double s = 1.0;
            for (auto &x : dg) {
                x = Real(u(rng) * s, p);
                s *= 0.6;
            }
        }
        const FiniteDifference fd = dt_finite_difference(g0, dg);
        ++r.cases;
        bool ok = fd.relative_errors.back() < 1e-4;
        for (std::size_t k = 1; k < fd.relative_errors.size(); ++k) {
            ok = ok && fd.relative_errors[k] < fd.relative_errors[k - 1];
        }
        if (!ok) {
            std::string e;
            for (double x : fd.relative_errors) {
                e += std::to_string(x) + " ";
            }
            r.fail("direction " + std::to_string(i) + ": " + e);
        }
    }
    return r;
}

// Certificates at several worker counts are bitwise identical.
inline Result certificate_determinism(const Problem &p, const FunctionBall &x0, const LinearMap &lam, const Real &rho,
                                      const std::vector<unsigned> &workers = {1, 2, 3, 4})
{
    Result r{std::string("certificate determinism (") + to_string(p.kind()) + ")"};
    auto payload = [](const Certificate &c) {
        nlohmann::json j = to_json(c);
        j.erase("run");
        return j.dump();
    };
    const std::string ref = payload(evaluate_certificate(p, x0, lam, rho, workers.front()));
    for (std::size_t i = 1; i < workers.size(); ++i) {
        ++r.cases;
        if (payload(evaluate_certificate(p, x0, lam, rho, workers[i])) != ref) {
            r.fail("workers = " + std::to_string(workers[i]));
        }
    }
    return r;
}

} // namespace props

#endif
