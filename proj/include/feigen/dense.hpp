#ifndef FEIGEN_DENSE_HPP
#define FEIGEN_DENSE_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "interval.hpp"

namespace feigen
{

// Round-to-nearest multi-precision vectors and matrices for the
// non-rigorous side of the pipeline.
using DenseVector = std::vector<Real>;

class DenseMatrix
{
  public:
    DenseMatrix(std::size_t n, mpfr_prec_t prec) : n_(n), a_(n * n, Real(prec)) {}

    static DenseMatrix identity(std::size_t n, mpfr_prec_t prec)
    {
        DenseMatrix m(n, prec);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = Real::from_long(1, prec);
        }
        return m;
    }

    std::size_t size() const { return n_; }
    Real &operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const Real &operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    void set_column(std::size_t j, const DenseVector &v)
    {
        for (std::size_t i = 0; i < n_; ++i) {
            (*this)(i, j) = v[i];
        }
    }

    Eigen::MatrixXd to_double() const
    {
        Eigen::MatrixXd m(n_, n_);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (*this)(i, j).to_double();
            }
        }
        return m;
    }

  private:
    std::size_t n_;
    std::vector<Real> a_;
};

inline DenseVector operator*(const DenseMatrix &m, const DenseVector &v)
{
    DenseVector out(m.size(), Real(v.empty() ? 53 : v[0].prec()));
    for (std::size_t i = 0; i < m.size(); ++i) {
        Real s(out[i].prec());
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (!m(i, j).is_zero() && !v[j].is_zero()) {
                s += m(i, j) * v[j];
            }
        }
        out[i] = std::move(s);
    }
    return out;
}

inline Real sup_norm(const DenseVector &v)
{
    Real m(v.empty() ? 53 : v[0].prec());
    for (const auto &x : v) {
        m = max(m, abs(x));
    }
    return m;
}

// LU factorisation with partial pivoting, PA = LU.
class LU
{
  public:
    explicit LU(DenseMatrix m) : lu_(std::move(m)), perm_(lu_.size())
    {
        const std::size_t n = lu_.size();
        for (std::size_t i = 0; i < n; ++i) {
            perm_[i] = i;
        }
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t p = k;
            for (std::size_t i = k + 1; i < n; ++i) {
                if (abs(lu_(i, k)) > abs(lu_(p, k))) {
                    p = i;
                }
            }
            if (lu_(p, k).is_zero()) {
                singular_ = true;
                return;
            }
            if (p != k) {
                for (std::size_t j = 0; j < n; ++j) {
                    std::swap(lu_(k, j), lu_(p, j));
                }
                std::swap(perm_[k], perm_[p]);
            }
            for (std::size_t i = k + 1; i < n; ++i) {
                if (lu_(i, k).is_zero()) {
                    continue;
                }
                const Real f = lu_(i, k) / lu_(k, k);
                lu_(i, k) = f;
                for (std::size_t j = k + 1; j < n; ++j) {
                    lu_(i, j) -= f * lu_(k, j);
                }
            }
        }
    }

    bool singular() const { return singular_; }

    DenseVector solve(const DenseVector &b) const
    {
        const std::size_t n = lu_.size();
        DenseVector x(n);
        for (std::size_t i = 0; i < n; ++i) {
            Real s = b[perm_[i]];
            for (std::size_t j = 0; j < i; ++j) {
                s -= lu_(i, j) * x[j];
            }
            x[i] = std::move(s);
        }
        for (std::size_t i = n; i-- > 0;) {
            Real s = x[i];
            for (std::size_t j = i + 1; j < n; ++j) {
                s -= lu_(i, j) * x[j];
            }
            x[i] = s / lu_(i, i);
        }
        return x;
    }

    DenseMatrix inverse() const
    {
        const std::size_t n = lu_.size();
        const mpfr_prec_t p = lu_(0, 0).prec();
        DenseMatrix inv(n, p);
        for (std::size_t j = 0; j < n; ++j) {
            DenseVector e(n, Real(p));
            e[j] = Real::from_long(1, p);
            inv.set_column(j, solve(e));
        }
        return inv;
    }

  private:
    DenseMatrix lu_;
    std::vector<std::size_t> perm_;
    bool singular_ = false;
};

// Eigenvalues in double precision (used for selection and spectrum checks).
inline std::vector<std::complex<double>> eigenvalues_double(const DenseMatrix &m)
{
    Eigen::EigenSolver<Eigen::MatrixXd> es(m.to_double(), false);
    std::vector<std::complex<double>> out;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        out.push_back(es.eigenvalues()[i]);
    }
    return out;
}

} // namespace feigen

#endif // FEIGEN_DENSE_HPP
