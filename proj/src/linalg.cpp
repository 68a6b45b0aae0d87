#include "matorder/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace matorder {

namespace {

bool all_finite(const Matrix& m) {
    return m.allFinite();
}

}  // namespace

HermMat::HermMat(Matrix m) {
    if (m.rows() != m.cols() || m.rows() < 1) {
        throw Error(ErrorKind::InvalidInput, "matrix must be square with dim >= 1");
    }
    if (!all_finite(m)) {
        throw Error(ErrorKind::InvalidInput, "matrix has non-finite entries");
    }
    m_ = 0.5 * (m + m.adjoint().eval());
    // force exact conjugate symmetry against rounding in the average
    for (Eigen::Index i = 0; i < m_.rows(); ++i) {
        m_(i, i) = Complex(m_(i, i).real(), 0.0);
        for (Eigen::Index j = i + 1; j < m_.cols(); ++j) {
            m_(j, i) = std::conj(m_(i, j));
        }
    }
}

HermMat HermMat::diag(std::initializer_list<double> d) {
    RealVector v(static_cast<Eigen::Index>(d.size()));
    Eigen::Index i = 0;
    for (double x : d) v(i++) = x;
    return diag(v);
}

HermMat HermMat::diag(const RealVector& d) {
    Matrix m = Matrix::Zero(d.size(), d.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) m(i, i) = d(i);
    return HermMat(std::move(m));
}

HermMat HermMat::zero(int dim) { return HermMat(Matrix::Zero(dim, dim)); }

HermMat HermMat::identity(int dim) { return HermMat(Matrix::Identity(dim, dim)); }

SpectralDecomp eigh(const HermMat& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h.mat());
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::NumericalDomain, "eigendecomposition failed to converge");
    }
    const Eigen::Index n = h.dim();
    SpectralDecomp out;
    out.eigenvalues = RealVector(n);
    out.eigenvectors = Matrix(n, n);
    // Eigen returns ascending order; flip to descending
    for (Eigen::Index i = 0; i < n; ++i) {
        out.eigenvalues(i) = solver.eigenvalues()(n - 1 - i);
        out.eigenvectors.col(i) = solver.eigenvectors().col(n - 1 - i);
    }
    return out;
}

PsdMat::PsdMat(HermMat h, double support_tol) : herm_(std::move(h)), support_tol_(support_tol) {
    if (support_tol <= 0) {
        throw Error(ErrorKind::InvalidInput, "support_tol must be positive");
    }
    eig_ = eigh(herm_);
    const double lmax = eig_.eigenvalues(0);
    cut_ = support_tol_ * std::max(1.0, lmax);
    const double lmin = eig_.eigenvalues(eig_.eigenvalues.size() - 1);
    if (lmin < -cut_) {
        throw Error(ErrorKind::InvalidInput,
                    "matrix is not positive semidefinite (min eigenvalue " + std::to_string(lmin) + ")");
    }
    rank_ = 0;
    for (Eigen::Index i = 0; i < eig_.eigenvalues.size(); ++i) {
        if (eig_.eigenvalues(i) > cut_) ++rank_;
    }
}

PsdMat PsdMat::diag(std::initializer_list<double> d, double support_tol) {
    return PsdMat(HermMat::diag(d), support_tol);
}

bool PsdMat::is_pd() const { return lambda_min() > 1e3 * cut_; }

RealVector PsdMat::retained_eigenvalues() const {
    RealVector out(rank_);
    for (int i = 0; i < rank_; ++i) out(i) = eig_.eigenvalues(i);
    return out;
}

Matrix PsdMat::support_isometry() const { return eig_.eigenvectors.leftCols(rank_); }

HermMat func_calc(const PsdMat& a, const std::function<double(double)>& f, double zero_value) {
    const int n = a.dim();
    RealVector fv(n);
    for (int i = 0; i < n; ++i) {
        const double lam = a.eigenvalues()(i);
        if (lam > a.cut()) {
            const double y = f(lam);
            if (!std::isfinite(y)) {
                throw Error(ErrorKind::NumericalDomain,
                            "function not finite at retained eigenvalue " + std::to_string(lam));
            }
            fv(i) = y;
        } else {
            fv(i) = zero_value;
        }
    }
    const Matrix& u = a.eigenvectors();
    return HermMat(u * fv.asDiagonal() * u.adjoint());
}

PsdMat gpower(const PsdMat& a, double r) {
    if (r == 0.0) {
        return PsdMat(func_calc(a, [](double) { return 1.0; }, 0.0), a.support_tol());
    }
    return PsdMat(func_calc(a, [r](double x) { return std::pow(x, r); }, 0.0), a.support_tol());
}

HermMat glog(const PsdMat& a) {
    return func_calc(a, [](double x) { return std::log(x); }, 0.0);
}

Projection support(const PsdMat& a) {
    HermMat p = func_calc(a, [](double) { return 1.0; }, 0.0);
    return Projection{std::move(p), a.rank()};
}

Projection projection_from(const PsdMat& a) {
    const Matrix& m = a.mat();
    const double idem = max_abs_diff((m * m).eval(), m);
    if (idem > 1e-10) {
        throw Error(ErrorKind::InvalidInput, "matrix is not idempotent (||P^2-P|| = " + std::to_string(idem) + ")");
    }
    int rank = 0;
    for (Eigen::Index i = 0; i < a.eigenvalues().size(); ++i) {
        if (a.eigenvalues()(i) > 0.5) ++rank;
    }
    return Projection{a.herm(), rank};
}

Projection proj_meet(const Projection& p, const Projection& q) {
    if (p.dim() != q.dim()) {
        throw Error(ErrorKind::InvalidInput, "projections must have equal dim");
    }
    HermMat sum(p.mat.mat() + q.mat.mat());
    SpectralDecomp d = eigh(sum);
    const int n = p.dim();
    int k = 0;
    while (k < n && d.eigenvalues(k) >= 2.0 - kProjMeetTol) ++k;
    if (k == 0) return Projection{HermMat::zero(n), 0};
    Matrix v = d.eigenvectors.leftCols(k);
    return Projection{HermMat(v * v.adjoint()), k};
}

Projection proj_join(const Projection& p, const Projection& q) {
    if (p.dim() != q.dim()) {
        throw Error(ErrorKind::InvalidInput, "projections must have equal dim");
    }
    PsdMat sum(HermMat(p.mat.mat() + q.mat.mat()));
    return support(sum);
}

double opnorm(const HermMat& h) {
    SpectralDecomp d = eigh(h);
    double m = 0.0;
    for (Eigen::Index i = 0; i < d.eigenvalues.size(); ++i) {
        m = std::max(m, std::abs(d.eigenvalues(i)));
    }
    return m;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace matorder
