#ifndef FEIGEN_CERTIFIER_HPP
#define FEIGEN_CERTIFIER_HPP

#include <chrono>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "approx.hpp"
#include "dense.hpp"
#include "parallel.hpp"
#include "renorm_ops.hpp"

namespace feigen
{

/**
 * Fixed linear operator Lambda: an exact (N+1)x(N+1) matrix acting on the
 * coefficients 0..N, and a scalar acting on every degree above N.
 */
class LinearMap
{
  public:
    LinearMap(DenseMatrix matrix, Real tail_scalar) : m_(std::move(matrix)), tail_(std::move(tail_scalar)) {}

    static LinearMap identity(std::size_t dim, mpfr_prec_t prec)
    {
        return LinearMap(DenseMatrix::identity(dim, prec), Real::from_long(1, prec));
    }

    std::size_t dimension() const { return m_.size(); }
    const DenseMatrix &matrix() const { return m_; }
    const Real &tail_scalar() const { return tail_; }

    // Max column sum of |matrix|, and |tail_scalar|, both rounded up.
    Real operator_norm_upper() const
    {
        Real best = abs(tail_);
        for (std::size_t j = 0; j < m_.size(); ++j) {
            Real s(tail_.prec());
            for (std::size_t i = 0; i < m_.size(); ++i) {
                s = add_up(s, abs(m_(i, j)));
            }
            best = max(best, s);
        }
        return best;
    }

  private:
    DenseMatrix m_;
    Real tail_;
};

/**
 * Lambda f: matrix times the coefficient vector in interval arithmetic; the
 * high-order part stays high-order and is scaled by |tail_scalar|; the error
 * part may have low-degree content and is scaled by the full operator norm.
 */
inline FunctionBall apply_lambda(const LinearMap &lam, const FunctionBall &f)
{
    const std::size_t n = lam.dimension();
    if (n != f.degree() + 1) {
        throw DimensionMismatch("linear map of dimension " + std::to_string(n) + " applied to degree " +
                                std::to_string(f.degree()));
    }
    const RoundingContext &ctx = f.context();
    std::vector<Rectangle> out(n, Rectangle::zero(ctx));
    for (std::size_t j = 0; j < n; ++j) {
        const Rectangle &c = f.coeffs()[j];
        if (c.is_zero()) {
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const Real &m = lam.matrix()(i, j);
            if (!m.is_zero()) {
                out[i] += c * Interval(m);
            }
        }
    }
    Real vh = mul_up(f.high_order_bound(), abs(lam.tail_scalar()));
    Real ve = f.error_bound().is_zero() ? Real(ctx.bits()) : mul_up(f.error_bound(), lam.operator_norm_upper());
    return FunctionBall(ctx, f.domain(), std::move(out), std::move(vh), std::move(ve));
}

struct InvertibilityReport
{
    bool pass = false;
    Real bound; // upper bound of ||I - B M|| (max column sum)
};

/**
 * Certifies that Lambda is invertible: with B an approximate inverse of the
 * matrix block (computed in round-to-nearest), ||I - B M|| < 1 is checked in
 * interval arithmetic; the tail block is invertible iff its scalar is nonzero.
 */
inline InvertibilityReport verify_lambda_invertible(const LinearMap &lam)
{
    if (lam.tail_scalar().is_zero()) {
        throw InversionUncertified("tail scalar is zero");
    }
    const DenseMatrix &m = lam.matrix();
    const std::size_t n = m.size();
    const mpfr_prec_t p = lam.tail_scalar().prec();
    const LU lu(m);
    if (lu.singular()) {
        throw InversionUncertified("matrix block is numerically singular");
    }
    const DenseMatrix b = lu.inverse();
    InvertibilityReport rep;
    rep.bound = Real(p);
    for (std::size_t j = 0; j < n; ++j) {
        Real col(p);
        for (std::size_t i = 0; i < n; ++i) {
            Real lo = Real::from_long(i == j ? 1 : 0, p), hi = lo;
            for (std::size_t k = 0; k < n; ++k) {
                if (b(i, k).is_zero() || m(k, j).is_zero()) {
                    continue;
                }
                lo = sub(lo, mul(b(i, k), m(k, j), MPFR_RNDU), MPFR_RNDD);
                hi = sub(hi, mul(b(i, k), m(k, j), MPFR_RNDD), MPFR_RNDU);
            }
            col = add_up(col, Interval(lo, hi).mag());
        }
        rep.bound = max(rep.bound, col);
    }
    rep.pass = rep.bound < Real::from_long(1, p);
    if (!rep.pass) {
        throw InversionUncertified("||I - B M|| <= " + rep.bound.to_decimal(8, MPFR_RNDU) + " is not < 1");
    }
    return rep;
}

inline LinearMap build_lambda(ProblemKind kind, const DenseMatrix &jacobian, const Real *eigenvalue = nullptr)
{
    const LU lu(jacobian);
    if (lu.singular()) {
        throw SingularJacobian("Jacobian is numerically singular");
    }
    const mpfr_prec_t p = jacobian(0, 0).prec();
    Real tail = Real::from_long(-1, p);
    if (kind != ProblemKind::fixed_point) {
        if (!eigenvalue) {
            throw Error("eigen problems need the approximate eigenvalue for the tail scalar");
        }
        const Real lam = kind == ProblemKind::delta_eigen ? *eigenvalue : (*eigenvalue) * (*eigenvalue);
        tail = Real::from_long(-1, p) / lam;
    }
    return LinearMap(lu.inverse(), std::move(tail));
}

/**
 * One of the three residual maps:
 *   fixed_point: F(G) = T(G) - G
 *   delta_eigen: F(V) = DT(G) V - phi(V) V,   G over the parameter ball
 *   gamma_eigen: F(W) = L(G) W - phi(W)^2 W, G over the parameter ball
 * with phi the constant coefficient (the value at c = 1).
 */
class Problem
{
  public:
    // Data that depends on the point (or ball) x at which DF is taken.
    struct Linearization
    {
        std::shared_ptr<const SharedEvaluations> shared;
        FunctionBall x;
        Rectangle phi; // phi(x)
    };

    static Problem fixed_point() { return Problem(ProblemKind::fixed_point, nullptr); }

    static Problem delta_eigen(const FunctionBall &parameter_ball)
    {
        return Problem(ProblemKind::delta_eigen, std::make_shared<const SharedEvaluations>(precompute_shared(parameter_ball)));
    }

    static Problem gamma_eigen(const FunctionBall &parameter_ball)
    {
        return Problem(ProblemKind::gamma_eigen, std::make_shared<const SharedEvaluations>(precompute_shared(parameter_ball)));
    }

    static Problem eigen(ProblemKind kind, std::shared_ptr<const SharedEvaluations> shared)
    {
        return Problem(kind, std::move(shared));
    }

    ProblemKind kind() const { return kind_; }
    const std::shared_ptr<const SharedEvaluations> &parameter_evaluations() const { return shared_; }

    Linearization linearize(const FunctionBall &x) const
    {
        auto s = kind_ == ProblemKind::fixed_point ? std::make_shared<const SharedEvaluations>(precompute_shared(x))
                                                   : shared_;
        return Linearization{std::move(s), x, coefficient(x, 0)};
    }

    FunctionBall residual(const FunctionBall &x) const
    {
        const Linearization lin = linearize(x);
        switch (kind_) {
        case ProblemKind::fixed_point:
            return apply_T(*lin.shared) - x;
        case ProblemKind::delta_eigen:
            return apply_DT(*lin.shared, x) - scale(x, lin.phi);
        case ProblemKind::gamma_eigen:
            return apply_L(*lin.shared, x) - scale(x, lin.phi * lin.phi);
        }
        throw Error("unknown problem kind");
    }

    // s(x) in DF(x) dx = linear_part(x, dx) + s(x) dx.
    Rectangle identity_multiplier(const Linearization &lin) const
    {
        switch (kind_) {
        case ProblemKind::fixed_point:
            return Rectangle::point(lin.x.context(), -1.0);
        case ProblemKind::delta_eigen:
            return -lin.phi;
        case ProblemKind::gamma_eigen:
            return -(lin.phi * lin.phi);
        }
        throw Error("unknown problem kind");
    }

    // DT(G) dx (or L dx) plus the rank-one term from differentiating phi.
    FunctionBall linear_part(const Linearization &lin, const FunctionBall &dx) const
    {
        switch (kind_) {
        case ProblemKind::fixed_point:
            return apply_DT(*lin.shared, dx);
        case ProblemKind::delta_eigen: {
            FunctionBall out = apply_DT(*lin.shared, dx);
            const Rectangle dphi = coefficient(dx, 0);
            if (!dphi.is_zero()) {
                out -= scale(lin.x, dphi);
            }
            return out;
        }
        case ProblemKind::gamma_eigen: {
            FunctionBall out = apply_L(*lin.shared, dx);
            const Rectangle dphi = coefficient(dx, 0);
            if (!dphi.is_zero()) {
                out -= scale(lin.x, Rectangle::point(lin.x.context(), 2.0) * lin.phi * dphi);
            }
            return out;
        }
        }
        throw Error("unknown problem kind");
    }

    FunctionBall directional(const Linearization &lin, const FunctionBall &dx) const
    {
        return linear_part(lin, dx) + scale(dx, identity_multiplier(lin));
    }

    FunctionBall directional(const FunctionBall &x, const FunctionBall &dx) const { return directional(linearize(x), dx); }

  private:
    Problem(ProblemKind kind, std::shared_ptr<const SharedEvaluations> shared) : kind_(kind), shared_(std::move(shared)) {}

    ProblemKind kind_;
    std::shared_ptr<const SharedEvaluations> shared_;
};

// ||Lambda F(x0)|| = ||Phi(x0) - x0||, rounded up.
inline Real bound_epsilon(const Problem &p, const FunctionBall &x0, const LinearMap &lam)
{
    if (!x0.error_bound().is_zero()) {
        throw Error("bound_epsilon expects an exact centre (v_E = 0)");
    }
    return norm_upper(apply_lambda(lam, p.residual(x0)));
}

/**
 * Upper bounds of ||DPhi(x) e_k|| = ||e_k - Lambda DF(x) e_k|| over the whole
 * ball, for k = 0..N. Columns are independent and spread over workers;
 * results are collected by index.
 */
inline std::vector<Real> bound_kappa_columns(const Problem &p, const FunctionBall &ball, const LinearMap &lam,
                                             unsigned workers)
{
    const Problem::Linearization lin = p.linearize(ball);
    const RoundingContext &ctx = ball.context();
    const std::size_t n = ball.degree();
    return parallel_map<Real>(n + 1, workers, [&](std::size_t k) {
        try {
            const FunctionBall ek = FunctionBall::basis(ctx, ball.domain(), n, k);
            return norm_upper(ek - apply_lambda(lam, p.directional(lin, ek)));
        } catch (const Error &e) {
            throw Error("column " + std::to_string(k) + ": " + e.what());
        }
    });
}

/**
 * Upper bound of ||DPhi(x) f_H|| over every f_H supported above degree N with
 * ||f_H|| <= 1. Writing DF(x) f_H = s(x) f_H + R f_H and using that Lambda acts
 * on f_H as its tail scalar t,
 *   DPhi(x) f_H = (1 - t s(x)) f_H - Lambda R f_H.
 * With c = 1 the terms in dG(1) and phi(f_H) vanish, and compositions
 * f_H o h are bounded by theta(h)^(N+1) without expanding f_H.
 */
inline Real bound_kappa_tail(const Problem &p, const FunctionBall &ball, const LinearMap &lam)
{
    const Problem::Linearization lin = p.linearize(ball);
    const RoundingContext &ctx = ball.context();
    FunctionBall fh = FunctionBall::zero(ctx, ball.domain(), ball.degree());
    fh.set_high_order_bound(ctx.real(1L));
    FunctionBall rest = [&] {
        try {
            return p.linear_part(lin, fh);
        } catch (const CompositionContractFailure &e) {
            throw TailContractFailure(e.what());
        }
    }();
    const Rectangle one = Rectangle::point(ctx, 1.0);
    const Rectangle direct = one - Rectangle(Interval(lam.tail_scalar())) * p.identity_multiplier(lin);
    return add_up(direct.mag(), norm_upper(apply_lambda(lam, rest)));
}

struct CertificateConfig
{
    std::size_t degree = 0;
    mpfr_prec_t precision_bits = 0;
    std::size_t boundary_rectangles = 0;
    unsigned workers = 1;
    std::map<std::string, std::string> checksums;
};

struct Certificate
{
    ProblemKind kind = ProblemKind::fixed_point;
    Real rho;
    Real epsilon;
    Real kappa;
    Real kappa_columns;
    Real kappa_tail;
    Real lambda_inverse_residual;
    // On pass: upper bound of ||x* - x0||, i.e. epsilon / (1 - kappa) capped at rho.
    Real radius;
    bool pass = false;
    std::map<std::string, Interval> enclosures;
    CertificateConfig config;
    double wall_time_seconds = 0.0;
};

class CertificationFailed : public Error
{
  public:
    explicit CertificationFailed(Certificate cert)
        : Error("CertificationFailed: " + to_string(cert.kind) + " epsilon <= " + cert.epsilon.to_decimal(6, MPFR_RNDU) +
                ", kappa <= " + cert.kappa.to_decimal(6, MPFR_RNDU) + ", rho = " + cert.rho.to_decimal(6)),
          cert_(std::move(cert))
    {
    }

    const Certificate &certificate() const { return cert_; }

  private:
    Certificate cert_;
};

/**
 * Runs the contraction-mapping test for Phi = id - Lambda F on B(x0, rho):
 * pass iff kappa < 1 and epsilon < rho (1 - kappa), with epsilon, kappa
 * rounded up and rho (1 - kappa) rounded down. Never retries or tunes.
 * Returns the certificate either way; see certify() for the throwing form.
 */
inline Certificate evaluate_certificate(const Problem &p, const FunctionBall &x0, const LinearMap &lam, const Real &rho,
                                        unsigned workers, CertificateConfig config = {})
{
    const auto start = std::chrono::steady_clock::now();
    const RoundingContext &ctx = x0.context();
    Certificate cert;
    cert.kind = p.kind();
    cert.rho = rho;
    cert.lambda_inverse_residual = verify_lambda_invertible(lam).bound;
    cert.epsilon = bound_epsilon(p, x0, lam);
    const FunctionBall ball = inflate(x0, rho);
    const std::vector<Real> cols = bound_kappa_columns(p, ball, lam, workers);
    cert.kappa_columns = ctx.real(0L);
    for (const auto &c : cols) {
        cert.kappa_columns = max(cert.kappa_columns, c);
    }
    cert.kappa_tail = bound_kappa_tail(p, ball, lam);
    cert.kappa = max(cert.kappa_columns, cert.kappa_tail);
    const Real one = ctx.real(1L);
    const Real margin = mul(rho, sub(one, cert.kappa, MPFR_RNDD), MPFR_RNDD);
    cert.pass = cert.kappa < one && cert.epsilon < margin;
    if (cert.pass) {
        // x* = Phi(x*) gives ||x* - x0|| <= kappa ||x* - x0|| + epsilon.
        cert.radius = min(rho, div(cert.epsilon, sub(one, cert.kappa, MPFR_RNDD), MPFR_RNDU));
        const FunctionBall tight = inflate(x0, cert.radius);
        switch (p.kind()) {
        case ProblemKind::fixed_point: {
            const Interval a = evaluate(tight, Rectangle::point(ctx, 1.0)).re();
            cert.enclosures.emplace("a", a);
            cert.enclosures.emplace("alpha", Interval::point(ctx, 1L) / a);
            break;
        }
        case ProblemKind::delta_eigen:
            cert.enclosures.emplace("delta", coefficient(tight, 0).re());
            break;
        case ProblemKind::gamma_eigen:
            cert.enclosures.emplace("gamma", coefficient(tight, 0).re());
            break;
        }
    }
    config.degree = x0.degree();
    config.precision_bits = ctx.bits();
    config.workers = workers;
    cert.config = std::move(config);
    cert.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return cert;
}

inline Certificate certify(const Problem &p, const FunctionBall &x0, const LinearMap &lam, const Real &rho,
                           unsigned workers, CertificateConfig config = {})
{
    Certificate cert = evaluate_certificate(p, x0, lam, rho, workers, std::move(config));
    if (!cert.pass) {
        throw CertificationFailed(std::move(cert));
    }
    return cert;
}

// Decimal interval string with outward rounding at `digits` significant digits.
inline std::string decimal_interval(const Interval &x, std::size_t digits)
{
    return "[" + x.lo().to_decimal(digits, MPFR_RNDD) + ", " + x.hi().to_decimal(digits, MPFR_RNDU) + "]";
}

/**
 * JSON payload. Bounds are exact hexadecimal strings; enclosures are
 * outward-rounded decimal intervals plus their exact endpoints. Wall time is
 * kept apart from the reproducible payload.
 */
inline nlohmann::json to_json(const Certificate &c)
{
    nlohmann::json enc = nlohmann::json::object();
    const std::size_t digits = static_cast<std::size_t>(c.config.precision_bits * 0.30103) + 2;
    for (const auto &[name, x] : c.enclosures) {
        enc[name] = {{"decimal", decimal_interval(x, digits)}, {"lo", x.lo().to_hex()}, {"hi", x.hi().to_hex()}};
    }
    nlohmann::json j;
    j["kind"] = to_string(c.kind);
    j["pass"] = c.pass;
    j["rho"] = c.rho.to_hex();
    j["epsilon"] = c.epsilon.to_hex();
    j["kappa"] = c.kappa.to_hex();
    j["kappa_columns"] = c.kappa_columns.to_hex();
    j["kappa_tail"] = c.kappa_tail.to_hex();
    if (c.pass) {
        j["radius"] = c.radius.to_hex();
    }
    j["lambda_inverse_residual"] = c.lambda_inverse_residual.to_hex();
    j["summary"] = {{"rho", c.rho.to_decimal(3, MPFR_RNDN)},
                    {"epsilon_upper", c.epsilon.to_decimal(3, MPFR_RNDU)},
                    {"kappa_upper", c.kappa.to_decimal(3, MPFR_RNDU)}};
    j["enclosures"] = enc;
    j["config"] = {{"degree", c.config.degree},
                   {"precision_bits", c.config.precision_bits},
                   {"boundary_rectangles", c.config.boundary_rectangles},
                   {"checksums", c.config.checksums}};
    j["run"] = {{"wall_time_seconds", c.wall_time_seconds}, {"workers", c.config.workers}};
    return j;
}

// Linear map text format:
//   feigen-linear-map 1
//   precision <bits>
//   dimension <n>
//   tail <hex>
//   row <i> <hex> ... <hex>        (n lines)
inline std::string to_text(const LinearMap &lam)
{
    std::ostringstream os;
    os << "feigen-linear-map 1\n";
    os << "precision " << lam.tail_scalar().prec() << '\n';
    os << "dimension " << lam.dimension() << '\n';
    os << "tail " << lam.tail_scalar().to_hex() << '\n';
    for (std::size_t i = 0; i < lam.dimension(); ++i) {
        os << "row " << i;
        for (std::size_t j = 0; j < lam.dimension(); ++j) {
            os << ' ' << lam.matrix()(i, j).to_hex();
        }
        os << '\n';
    }
    return os.str();
}

inline LinearMap linear_map_from_text(const std::string &text)
{
    std::istringstream is(text);
    auto word = [&]() {
        std::string w;
        if (!(is >> w)) {
            throw ParseError("truncated linear map text");
        }
        return w;
    };
    auto expect = [&](const std::string &key) {
        if (word() != key) {
            throw ParseError("expected '" + key + "' in linear map text");
        }
    };
    expect("feigen-linear-map");
    if (word() != "1") {
        throw ParseError("unsupported linear map format version");
    }
    expect("precision");
    const mpfr_prec_t p = std::stol(word());
    expect("dimension");
    const std::size_t n = std::stoul(word());
    expect("tail");
    Real tail = Real::parse(word(), p);
    DenseMatrix m(n, p);
    for (std::size_t i = 0; i < n; ++i) {
        expect("row");
        if (std::stoul(word()) != i) {
            throw ParseError("linear map rows out of order");
        }
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = Real::parse(word(), p);
        }
    }
    return LinearMap(std::move(m), std::move(tail));
}

} // namespace feigen

#endif // FEIGEN_CERTIFIER_HPP
