#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <initializer_list>

#include "matorder/error.hpp"

namespace matorder {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Relative threshold below which eigenvalues are treated as exact zeros.
inline constexpr double kDefaultSupportTol = 1e-10;

/// Gap threshold used when extracting the eigenvalue-2 eigenspace of P+Q.
inline constexpr double kProjMeetTol = 1e-8;

/// Dense complex Hermitian matrix; symmetrized on construction so that
/// entries[i][j] == conj(entries[j][i]) holds exactly.
class HermMat {
public:
    explicit HermMat(Matrix m);
    static HermMat diag(std::initializer_list<double> d);
    static HermMat diag(const RealVector& d);
    static HermMat zero(int dim);
    static HermMat identity(int dim);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& mat() const { return m_; }

    double trace() const { return m_.trace().real(); }
    double max_abs() const { return m_.size() ? m_.cwiseAbs().maxCoeff() : 0.0; }

private:
    Matrix m_;
};

/// Eigenvalues in decreasing order with orthonormal eigenvector columns.
struct SpectralDecomp {
    RealVector eigenvalues;
    Matrix eigenvectors;
};

SpectralDecomp eigh(const HermMat& h);

/// Hermitian matrix validated nonnegative up to support_tol, with the
/// spectral decomposition, support cut and rank cached.
class PsdMat {
public:
    explicit PsdMat(HermMat h, double support_tol = kDefaultSupportTol);
    explicit PsdMat(Matrix m, double support_tol = kDefaultSupportTol)
        : PsdMat(HermMat(std::move(m)), support_tol) {}
    static PsdMat diag(std::initializer_list<double> d, double support_tol = kDefaultSupportTol);

    int dim() const { return herm_.dim(); }
    const HermMat& herm() const { return herm_; }
    const Matrix& mat() const { return herm_.mat(); }
    const RealVector& eigenvalues() const { return eig_.eigenvalues; }
    const Matrix& eigenvectors() const { return eig_.eigenvectors; }

    double support_tol() const { return support_tol_; }
    /// Absolute eigenvalue cut: support_tol * max(1, lambda_max).
    double cut() const { return cut_; }
    int rank() const { return rank_; }
    double lambda_max() const { return eig_.eigenvalues.size() ? eig_.eigenvalues(0) : 0.0; }
    double lambda_min() const {
        return eig_.eigenvalues.size() ? eig_.eigenvalues(eig_.eigenvalues.size() - 1) : 0.0;
    }
    bool is_pd() const;

    /// Retained eigenvalues (above the cut), descending.
    RealVector retained_eigenvalues() const;
    /// Isometry whose columns span the support (first `rank` eigenvectors).
    Matrix support_isometry() const;

private:
    HermMat herm_;
    SpectralDecomp eig_;
    double support_tol_;
    double cut_;
    int rank_;
};

/// Orthogonal projection (idempotent Hermitian, eigenvalues in {0,1}).
struct Projection {
    HermMat mat;
    int rank;

    int dim() const { return mat.dim(); }
};

/// U f(Lambda) U* with f applied to eigenvalues above the support cut and
/// zero_value substituted on the null block.
HermMat func_calc(const PsdMat& a, const std::function<double(double)>& f, double zero_value);

/// Generalized power: lambda^r on the support, 0 on the kernel; r = 0 gives
/// the support projection.
PsdMat gpower(const PsdMat& a, double r);

/// Generalized logarithm s(A)(log A)s(A).
HermMat glog(const PsdMat& a);

Projection support(const PsdMat& a);
Projection projection_from(const PsdMat& a);  // validates idempotency

/// Projection onto range(P) ∩ range(Q), via the eigenvalue-2 eigenspace of P+Q.
Projection proj_meet(const Projection& p, const Projection& q);
/// Projection onto range(P) + range(Q), the support of P+Q.
Projection proj_join(const Projection& p, const Projection& q);

/// Operator norm of a Hermitian matrix (max |eigenvalue|).
double opnorm(const HermMat& h);

/// Entrywise max-abs distance.
double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace matorder
