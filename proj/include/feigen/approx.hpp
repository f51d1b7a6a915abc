#ifndef FEIGEN_APPROX_HPP
#define FEIGEN_APPROX_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dense.hpp"
#include "function_ball.hpp"

namespace feigen
{

// Non-rigorous numerics: truncated polynomial arithmetic in round-to-nearest
// on coefficient vectors in the basis e_k of a disc. Produces the centres
// G0, V0, W0 and the approximate inverses used by the certifier.

enum class ProblemKind
{
    fixed_point,
    delta_eigen,
    gamma_eigen
};

inline std::string to_string(ProblemKind k)
{
    switch (k) {
    case ProblemKind::fixed_point:
        return "fixed_point";
    case ProblemKind::delta_eigen:
        return "delta_eigen";
    case ProblemKind::gamma_eigen:
        return "gamma_eigen";
    }
    return "unknown";
}

namespace approx
{

struct Basis
{
    std::size_t degree;
    mpfr_prec_t prec;
    Real center;
    Real radius;

    Basis(std::size_t n, mpfr_prec_t p, double c = 1.0, double r = 2.5)
        : degree(n), prec(p), center(c, p), radius(r, p)
    {
    }

    Real zero() const { return Real(prec); }
    Real one() const { return Real::from_long(1, prec); }
    DenseVector zeros() const { return DenseVector(degree + 1, zero()); }
    DenseVector unit(std::size_t k) const
    {
        DenseVector v = zeros();
        v[k] = one();
        return v;
    }
};

inline DenseVector mul(const Basis &b, const DenseVector &p, const DenseVector &q)
{
    DenseVector out = b.zeros();
    for (std::size_t i = 0; i <= b.degree; ++i) {
        if (p[i].is_zero()) {
            continue;
        }
        for (std::size_t j = 0; i + j <= b.degree; ++j) {
            if (!q[j].is_zero()) {
                out[i + j] += p[i] * q[j];
            }
        }
    }
    return out;
}

inline DenseVector scaled(const DenseVector &p, const Real &s)
{
    DenseVector out;
    out.reserve(p.size());
    for (const auto &x : p) {
        out.push_back(x * s);
    }
    return out;
}

inline DenseVector plus(const DenseVector &p, const DenseVector &q)
{
    DenseVector out;
    out.reserve(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        out.push_back(p[i] + q[i]);
    }
    return out;
}

inline DenseVector minus(const DenseVector &p, const DenseVector &q) { return plus(p, scaled(q, Real(-1.0, q[0].prec()))); }

inline DenseVector normalized(const Basis &b, DenseVector h)
{
    h[0] -= b.center;
    for (auto &x : h) {
        x = x / b.radius;
    }
    return h;
}

inline Real evaluate(const Basis &b, const DenseVector &f, const Real &x)
{
    const Real w = (x - b.center) / b.radius;
    Real acc = f.back();
    for (std::size_t k = f.size() - 1; k-- > 0;) {
        acc = acc * w + f[k];
    }
    return acc;
}

inline DenseVector derivative(const Basis &b, const DenseVector &f)
{
    DenseVector d = b.zeros();
    for (std::size_t k = 1; k <= b.degree; ++k) {
        d[k - 1] = f[k] * Real::from_long(static_cast<long>(k), b.prec) / b.radius;
    }
    return d;
}

// Truncated f o h.
inline DenseVector compose(const Basis &b, const DenseVector &f, const DenseVector &h)
{
    const DenseVector u = normalized(b, h);
    DenseVector acc = b.zeros();
    acc[0] = f.back();
    for (std::size_t k = b.degree; k-- > 0;) {
        acc = mul(b, acc, u);
        acc[0] += f[k];
    }
    return acc;
}

// U_k = ((h - c)/r)^k truncated, k = 0..N.
inline std::vector<DenseVector> power_table(const Basis &b, const DenseVector &h)
{
    const DenseVector u = normalized(b, h);
    std::vector<DenseVector> t;
    t.reserve(b.degree + 1);
    t.push_back(b.unit(0));
    for (std::size_t k = 1; k <= b.degree; ++k) {
        t.push_back(mul(b, t.back(), u));
    }
    return t;
}

inline DenseVector compose(const Basis &b, const DenseVector &f, const std::vector<DenseVector> &table)
{
    DenseVector out = b.zeros();
    for (std::size_t k = 0; k <= b.degree; ++k) {
        if (f[k].is_zero()) {
            continue;
        }
        for (std::size_t i = 0; i <= b.degree; ++i) {
            if (!table[k][i].is_zero()) {
                out[i] += f[k] * table[k][i];
            }
        }
    }
    return out;
}

// Midpoint counterpart of SharedEvaluations.
struct Shared
{
    Real a, a_inv, a_inv2;
    DenseVector affine, inner, squared, outer;
    DenseVector chain_scaled, noise_weight, da_sensitivity;
    std::vector<DenseVector> affine_powers, squared_powers;
};

inline Shared precompute(const Basis &b, const DenseVector &g)
{
    Shared s;
    s.a = evaluate(b, g, b.one());
    if (s.a.is_zero()) {
        throw NewtonDivergence("G(1) vanished");
    }
    const Real a2 = s.a * s.a;
    s.a_inv = b.one() / s.a;
    s.a_inv2 = s.a_inv * s.a_inv;
    s.affine = b.zeros();
    s.affine[0] = a2 * b.center;
    s.affine[1] = a2 * b.radius;
    s.affine_powers = power_table(b, s.affine);
    s.inner = compose(b, g, s.affine_powers);
    s.squared = mul(b, s.inner, s.inner);
    s.squared_powers = power_table(b, s.squared);
    s.outer = compose(b, g, s.squared_powers);
    const DenseVector dg = derivative(b, g);
    const DenseVector deriv_outer = compose(b, dg, s.squared_powers);
    const DenseVector deriv_inner = compose(b, dg, s.affine_powers);
    const DenseVector chain = mul(b, deriv_outer, scaled(s.inner, Real(2.0, b.prec)));
    s.chain_scaled = scaled(chain, s.a_inv);
    s.noise_weight = scaled(mul(b, chain, chain), s.a_inv2);
    DenseVector two_x = b.zeros();
    two_x[0] = b.center * Real(2.0, b.prec);
    two_x[1] = b.radius * Real(2.0, b.prec);
    s.da_sensitivity =
        plus(scaled(s.outer, -s.a_inv2), mul(b, mul(b, chain, deriv_inner), two_x));
    return s;
}

inline DenseVector apply_T(const Basis &b, const DenseVector &g)
{
    const Shared s = precompute(b, g);
    return scaled(s.outer, s.a_inv);
}

inline DenseVector apply_DT(const Basis &b, const Shared &s, const DenseVector &dg, bool with_normalization_terms = true)
{
    DenseVector out = scaled(compose(b, dg, s.squared_powers), s.a_inv);
    out = plus(out, mul(b, s.chain_scaled, compose(b, dg, s.affine_powers)));
    if (with_normalization_terms) {
        const Real da = evaluate(b, dg, b.one());
        if (!da.is_zero()) {
            out = plus(out, scaled(s.da_sensitivity, da));
        }
    }
    return out;
}

inline DenseVector apply_L(const Basis &b, const Shared &s, const DenseVector &w)
{
    return plus(mul(b, s.noise_weight, compose(b, w, s.affine_powers)),
                scaled(compose(b, w, s.squared_powers), s.a_inv2));
}

// Matrix of DT(G) (or of the simplified operator without the da terms) on e_0..e_N.
inline DenseMatrix dt_matrix(const Basis &b, const Shared &s, bool with_normalization_terms = true)
{
    DenseMatrix m(b.degree + 1, b.prec);
    for (std::size_t k = 0; k <= b.degree; ++k) {
        m.set_column(k, apply_DT(b, s, b.unit(k), with_normalization_terms));
    }
    return m;
}

inline DenseMatrix l_matrix(const Basis &b, const Shared &s)
{
    DenseMatrix m(b.degree + 1, b.prec);
    for (std::size_t k = 0; k <= b.degree; ++k) {
        m.set_column(k, apply_L(b, s, b.unit(k)));
    }
    return m;
}

} // namespace approx

// Coefficients of the classical polynomial approximation of the fixed point
// in the variable X = x^2: G(X) ~ 1 - 1.5276330 X + 0.1048152 X^2 + ...
inline std::vector<double> classical_seed_monomials()
{
    return {1.0, -1.5276330, 0.1048152, 0.0267057, -0.0035274, 0.0000816, 0.0000254, -0.0000027};
}

// Re-expands sum_j m_j X^j in the basis e_k = ((X - c)/r)^k, truncated at degree n.
inline DenseVector monomials_to_basis(const approx::Basis &b, const std::vector<double> &monomials)
{
    DenseVector out = b.zeros();
    for (std::size_t j = 0; j < monomials.size(); ++j) {
        // X^j = sum_k C(j,k) c^(j-k) r^k e_k
        Real binom = b.one();
        for (std::size_t k = 0; k <= j; ++k) {
            if (k > 0) {
                binom = binom * Real::from_long(static_cast<long>(j - k + 1), b.prec) /
                        Real::from_long(static_cast<long>(k), b.prec);
            }
            if (k > b.degree) {
                continue;
            }
            Real term = Real(monomials[j], b.prec) * binom;
            for (std::size_t i = 0; i < j - k; ++i) {
                term *= b.center;
            }
            for (std::size_t i = 0; i < k; ++i) {
                term *= b.radius;
            }
            out[k] += term;
        }
    }
    return out;
}

struct NewtonReport
{
    std::size_t iterations = 0;
    Real residual;
};

namespace detail
{

inline DenseVector resize_coeffs(const DenseVector &v, std::size_t n, mpfr_prec_t p)
{
    DenseVector out(n + 1, Real(p));
    for (std::size_t k = 0; k < v.size() && k <= n; ++k) {
        out[k] = Real(v[k]);
        mpfr_prec_round(out[k].get(), p, MPFR_RNDN);
    }
    return out;
}

inline Real tolerance(unsigned digits, unsigned guard, mpfr_prec_t p)
{
    Real t(p);
    const long e = -static_cast<long>(digits) + static_cast<long>(guard);
    mpfr_set_si(t.get(), 10, MPFR_RNDN);
    mpfr_pow_si(t.get(), t.get(), e, MPFR_RNDN);
    return t;
}

// Newton on F(x) = 0 with a caller-supplied residual and Jacobian.
template <typename Residual, typename Jacobian>
NewtonReport newton(DenseVector &x, Residual &&residual, Jacobian &&jacobian, const Real &tol, std::size_t max_iter)
{
    NewtonReport rep;
    DenseVector f = residual(x);
    rep.residual = sup_norm(f);
    while (!(rep.residual < tol)) {
        if (rep.iterations >= max_iter || !rep.residual.is_finite()) {
            throw NewtonDivergence("residual " + rep.residual.to_decimal(6) + " after " +
                                   std::to_string(rep.iterations) + " iterations");
        }
        const LU lu(jacobian(x));
        if (lu.singular()) {
            throw SingularJacobian("Newton Jacobian is singular");
        }
        const DenseVector step = lu.solve(f);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] -= step[i];
        }
        f = residual(x);
        rep.residual = sup_norm(f);
        ++rep.iterations;
    }
    return rep;
}

} // namespace detail

/**
 * Approximate fixed point of T, truncated at `degree`, in round-to-nearest at
 * `digits` decimal digits. Starts from the seed's monomial coefficients and
 * continues through doubling truncation degrees, running Newton at each stage.
 */
inline DenseVector approx_fixed_point(std::size_t degree, unsigned digits,
                                      const std::vector<double> &seed = classical_seed_monomials(),
                                      NewtonReport *report = nullptr, std::size_t max_iter = 40)
{
    const mpfr_prec_t prec = RoundingContext::from_digits(digits).bits();
    std::size_t n = std::min<std::size_t>(degree, std::max<std::size_t>(seed.size(), 4));
    DenseVector g = monomials_to_basis(approx::Basis(n, prec), seed);
    NewtonReport rep;
    while (true) {
        const approx::Basis b(n, prec);
        g = detail::resize_coeffs(g, n, prec);
        const Real tol = detail::tolerance(digits, n == degree ? 5 : 8, prec);
        auto residual = [&](const DenseVector &x) { return approx::minus(approx::apply_T(b, x), x); };
        auto jacobian = [&](const DenseVector &x) {
            DenseMatrix m = approx::dt_matrix(b, approx::precompute(b, x));
            for (std::size_t i = 0; i <= n; ++i) {
                m(i, i) -= b.one();
            }
            return m;
        };
        rep = detail::newton(g, residual, jacobian, tol, max_iter);
        if (n == degree) {
            break;
        }
        n = std::min(degree, 2 * n);
    }
    if (report) {
        *report = rep;
    }
    return g;
}

/**
 * Jacobian DF(x0) of the residual map on e_0..e_N:
 *   fixed_point: DT(G0) - I
 *   delta_eigen: DT(G0) - V0 phi(.) - phi(V0) I
 *   gamma_eigen: L(G0) - 2 phi(W0) W0 phi(.) - phi(W0)^2 I
 * with phi the constant coefficient.
 */
inline DenseMatrix approx_jacobian(ProblemKind kind, const DenseVector &g0, const DenseVector *x0 = nullptr)
{
    const approx::Basis b(g0.size() - 1, g0[0].prec());
    const approx::Shared s = approx::precompute(b, g0);
    if (kind == ProblemKind::fixed_point) {
        DenseMatrix m = approx::dt_matrix(b, s);
        for (std::size_t i = 0; i <= b.degree; ++i) {
            m(i, i) -= b.one();
        }
        return m;
    }
    if (!x0) {
        throw Error("eigen Jacobian needs the approximate eigenfunction");
    }
    const DenseVector &v = *x0;
    const Real phi = v[0];
    DenseMatrix m = kind == ProblemKind::delta_eigen ? approx::dt_matrix(b, s) : approx::l_matrix(b, s);
    const Real shift = kind == ProblemKind::delta_eigen ? phi : phi * phi;
    const Real rank_one_factor = kind == ProblemKind::delta_eigen ? b.one() : phi * Real(2.0, b.prec);
    for (std::size_t i = 0; i <= b.degree; ++i) {
        m(i, 0) -= rank_one_factor * v[i];
        m(i, i) -= shift;
    }
    return m;
}

// Midpoint matrix of DT(G0) on e_0..e_N; the simplified variant drops the da terms.
inline DenseMatrix dt_matrix(const DenseVector &g0, bool with_normalization_terms = true)
{
    const approx::Basis b(g0.size() - 1, g0[0].prec());
    return approx::dt_matrix(b, approx::precompute(b, g0), with_normalization_terms);
}

struct Eigenpair
{
    DenseVector vector;
    Real value; // lambda0 = phi(V0) for delta; gamma0 = phi(W0) for gamma
    NewtonReport newton;
};

/**
 * Eigenpair bootstrap. For delta_eigen the eigenvalue of DT(G0) closest to
 * `target` among those outside the unit disc is selected; for gamma_eigen the
 * eigenvalue of L of largest modulus. The eigenvector is scaled so that its
 * constant coefficient equals lambda (delta) or sqrt(lambda) (gamma), then
 * refined by Newton on DT V - phi(V) V = 0, respectively L W - phi(W)^2 W = 0.
 */
inline Eigenpair approx_eigenpair(ProblemKind kind, const DenseVector &g0, unsigned digits, double target = 4.669201,
                                  double ambiguity_tol = 1e-3, std::size_t max_iter = 40)
{
    if (kind == ProblemKind::fixed_point) {
        throw Error("approx_eigenpair needs an eigen problem kind");
    }
    const approx::Basis b(g0.size() - 1, g0[0].prec());
    const approx::Shared s = approx::precompute(b, g0);
    const DenseMatrix m = kind == ProblemKind::delta_eigen ? approx::dt_matrix(b, s) : approx::l_matrix(b, s);

    Eigen::EigenSolver<Eigen::MatrixXd> es(m.to_double(), true);
    const auto &vals = es.eigenvalues();
    std::optional<Eigen::Index> pick;
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
        const std::complex<double> z = vals[i];
        if (std::abs(z.imag()) > 1e-9 * std::max(1.0, std::abs(z))) {
            continue;
        }
        if (kind == ProblemKind::delta_eigen) {
            if (std::abs(z) <= 1.0) {
                continue;
            }
            if (!pick || std::abs(z.real() - target) < std::abs(vals[*pick].real() - target)) {
                pick = i;
            }
        } else if (!pick || std::abs(z) > std::abs(vals[*pick])) {
            pick = i;
        }
    }
    if (!pick) {
        throw EigenSelectionAmbiguous("no real eigenvalue candidate");
    }
    const double chosen = vals[*pick].real();
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
        if (i == *pick) {
            continue;
        }
        const double d = std::abs(vals[i] - vals[*pick]);
        const bool rival = kind == ProblemKind::delta_eigen ? (std::abs(vals[i].real() - target) <= ambiguity_tol &&
                                                              std::abs(chosen - target) <= ambiguity_tol)
                                                           : std::abs(std::abs(vals[i]) - std::abs(chosen)) <=
                                                                 ambiguity_tol * std::abs(chosen);
        if (rival || d == 0.0) {
            throw EigenSelectionAmbiguous("two eigenvalue candidates near " + std::to_string(chosen));
        }
    }
    const double phi_target = kind == ProblemKind::delta_eigen ? chosen : std::sqrt(chosen);
    const Eigen::VectorXcd vec = es.eigenvectors().col(*pick);
    const double scale = phi_target / vec[0].real();
    DenseVector v = b.zeros();
    for (std::size_t i = 0; i <= b.degree; ++i) {
        v[i] = Real(vec[static_cast<Eigen::Index>(i)].real() * scale, b.prec);
    }

    const bool squared = kind == ProblemKind::gamma_eigen;
    auto residual = [&](const DenseVector &x) {
        const Real phi = squared ? x[0] * x[0] : x[0];
        return approx::minus(m * x, approx::scaled(x, phi));
    };
    auto jacobian = [&](const DenseVector &x) {
        DenseMatrix j = m;
        const Real shift = squared ? x[0] * x[0] : x[0];
        const Real factor = squared ? x[0] * Real(2.0, b.prec) : b.one();
        for (std::size_t i = 0; i <= b.degree; ++i) {
            j(i, 0) -= factor * x[i];
            j(i, i) -= shift;
        }
        return j;
    };
    Eigenpair out;
    out.newton = detail::newton(v, residual, jacobian, detail::tolerance(digits, 5, b.prec), max_iter);
    out.value = v[0];
    out.vector = std::move(v);
    return out;
}

} // namespace feigen

#endif // FEIGEN_APPROX_HPP
