#include "matorder/means.hpp"

#include <algorithm>
#include <cmath>

namespace matorder {

namespace {

using MatrixLD = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;

MatrixLD to_ld(const Matrix& m) {
    MatrixLD o(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            o(i, j) = std::complex<long double>(m(i, j).real(), m(i, j).imag());
    return o;
}

Matrix from_ld(const MatrixLD& m) {
    Matrix o(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            o(i, j) = Complex(static_cast<double>(m(i, j).real()), static_cast<double>(m(i, j).imag()));
    return o;
}

MatrixLD hfunc_ld(const MatrixLD& h, const std::function<long double(long double)>& f) {
    Eigen::SelfAdjointEigenSolver<MatrixLD> s(h);
    Eigen::Matrix<long double, Eigen::Dynamic, 1> ev = s.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = f(ev(i));
    return s.eigenvectors() * ev.asDiagonal() * s.eigenvectors().adjoint();
}

MatrixLD hpow_ld(const MatrixLD& h, long double r) {
    return hfunc_ld(h, [r](long double x) { return x > 0.0L ? std::pow(x, r) : 0.0L; });
}

/// A + eps I assembled in A's eigenbasis with null eigenvalues clamped to
/// exact zeros first: the shifted kernel eigenvalue is then exactly eps
/// instead of eps plus eigensolver dirt, which matters once eps is small.
Matrix clean_shift(const PsdMat& a, double eps) {
    RealVector ev = a.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        ev(i) = (ev(i) > a.cut() ? ev(i) : 0.0) + eps;
    }
    return a.eigenvectors() * ev.asDiagonal() * a.eigenvectors().adjoint();
}

Matrix eps_shift(const Matrix& m, double eps) {
    return m + eps * Matrix::Identity(m.rows(), m.cols());
}

PsdMat psd_of(Matrix m, double tol = kDefaultSupportTol) { return PsdMat(HermMat(std::move(m)), tol); }

/// Plain functional calculus on a Hermitian matrix, no support cut. Used for
/// matrices that are definite by construction (epsilon-shifted, PD blocks),
/// where the relative cut of PsdMat would swallow genuine small eigenvalues.
Matrix herm_func_all(const Matrix& h, const std::function<double(double)>& f) {
    Eigen::SelfAdjointEigenSolver<Matrix> s(h);
    Eigen::VectorXd ev(s.eigenvalues().size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = f(s.eigenvalues()(i));
    return s.eigenvectors() * ev.asDiagonal() * s.eigenvectors().adjoint();
}

Matrix herm_pow_all(const Matrix& h, double r) {
    return herm_func_all(h, [r](double x) { return std::pow(x, r); });
}

/// pow with eigenvalues clamped to [0, inf); 0^r := 0 for r > 0. For PSD
/// matrices whose tiny negative eigenvalues are rounding noise.
Matrix herm_pow_clamped(const Matrix& h, double r) {
    return herm_func_all(h, [r](double x) { return x > 0.0 ? std::pow(x, r) : 0.0; });
}

Matrix herm_exp(const Matrix& h) {
    return herm_func_all(h, [](double x) { return std::exp(x); });
}

Matrix proj_isometry(const Projection& p) {
    if (p.rank == 0) return Matrix(p.dim(), 0);
    SpectralDecomp d = eigh(p.mat);
    return d.eigenvectors.leftCols(p.rank);
}

PsdMat compress(const PsdMat& a, const Matrix& v) {
    return psd_of(v.adjoint() * a.mat() * v, a.support_tol());
}

Matrix embed(const Matrix& block, const Matrix& v, int dim) {
    if (v.cols() == 0) return Matrix::Zero(dim, dim);
    return v * block * v.adjoint();
}

double norm_scale(const Matrix& m) { return std::max(1.0, m.cwiseAbs().maxCoeff()); }

bool both_pd(const PsdMat& a, const PsdMat& b) { return a.is_pd() && b.is_pd(); }

/// Epsilon ladder driver. Iterates are compressed onto `clean` before
/// convergence is judged (ladder junk off the limit support never meets the
/// tolerance), then Richardson-extrapolated twice: first in sqrt(eps) -- the
/// means are only Holder-1/2 at the PSD boundary, so raw iterates move like
/// sqrt(eps) when the supports are incomparable -- and then in eps.
/// Convergence is declared on the extrapolated sequence.
Matrix run_ladder(const std::function<Matrix(double)>& value_at, const Projection& clean,
                  std::vector<RegStep>* trace, const char* what) {
    const std::vector<double> ladder = default_eps_ladder();
    std::vector<Matrix> vals;
    vals.reserve(ladder.size());
    for (double eps : ladder) {
        Matrix cur = value_at(eps);
        if (clean.rank < clean.dim()) {
            cur = clean.mat.mat() * cur * clean.mat.mat();
            cur = 0.5 * (cur + cur.adjoint().eval());
        }
        vals.push_back(std::move(cur));
    }
    std::vector<Matrix> l1;
    for (size_t k = 1; k < vals.size(); ++k) {
        const double s0 = std::sqrt(ladder[k - 1]), s1 = std::sqrt(ladder[k]);
        l1.push_back((s0 * vals[k] - s1 * vals[k - 1]) / (s0 - s1));
    }
    std::vector<Matrix> l2;
    for (size_t k = 1; k < l1.size(); ++k) {
        const double e0 = ladder[k], e1 = ladder[k + 1];
        l2.push_back((e0 * l1[k] - e1 * l1[k - 1]) / (e0 - e1));
    }
    double last_delta = 0.0;
    for (size_t k = 1; k < l2.size(); ++k) {
        last_delta = (l2[k] - l2[k - 1]).cwiseAbs().maxCoeff();
        if (trace) trace->push_back({ladder[k + 2], last_delta});
    }
    if (last_delta >= kLadderTol * norm_scale(l2.back())) {
        throw Error(ErrorKind::NonConvergence,
                    std::string(what) + " ladder still moving at eps=" + std::to_string(ladder.back()) +
                        " (delta=" + std::to_string(last_delta) + ")");
    }
    return l2.back();
}

/// PSD-ify a ladder limit: extrapolation can undershoot by the ladder
/// accuracy, so eigenvalues within that band are clamped to zero.
PsdMat psd_ladder_limit(const Matrix& m, double support_tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> s(0.5 * (m + m.adjoint().eval()));
    const double floor = -10.0 * kLadderTol * std::max(1.0, s.eigenvalues().cwiseAbs().maxCoeff());
    Eigen::VectorXd ev = s.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < floor) {
            throw Error(ErrorKind::NonConvergence,
                        "ladder limit has a negative eigenvalue " + std::to_string(ev(i)));
        }
        ev(i) = std::max(ev(i), 0.0);
    }
    return PsdMat(HermMat(s.eigenvectors() * ev.asDiagonal() * s.eigenvectors().adjoint()),
                  support_tol);
}

/// X #_alpha Y for definite X, Y (plain powers throughout).
Matrix geo_pd(const Matrix& x, const Matrix& y, double alpha) {
    Matrix xh = herm_pow_all(x, 0.5);
    Matrix xmh = herm_pow_all(x, -0.5);
    Matrix inner = xmh * y * xmh;
    inner = 0.5 * (inner + inner.adjoint().eval());
    return xh * herm_pow_clamped(inner, alpha) * xh;
}

/// X #_alpha Y anchored at definite X, singular Y: the middle power follows
/// the support convention.
Matrix geo_anchored(const PsdMat& x, const PsdMat& y, double alpha) {
    if (y.is_pd()) return geo_pd(x.mat(), y.mat(), alpha);
    Matrix xh = herm_pow_all(x.mat(), 0.5);
    Matrix xmh = herm_pow_all(x.mat(), -0.5);
    PsdMat inner = psd_of(xmh * y.mat() * xmh, y.support_tol());
    return xh * gpower(inner, alpha).mat() * xh;
}

MeanResult make_result(PsdMat value, std::vector<RegStep> trace = {}) {
    Projection sup = support(value);
    return MeanResult{std::move(value), std::move(sup), std::move(trace)};
}

void check_alpha_p(double alpha, double p) {
    if (!std::isfinite(alpha) || !std::isfinite(p)) throw Error(ErrorKind::InvalidInput, "non-finite parameter");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorKind::InvalidInput, "alpha must be in [0,1]");
    if (!(p > 0.0)) throw Error(ErrorKind::InvalidInput, "p must be positive");
}

void check_dims(const PsdMat& a, const PsdMat& b) {
    if (a.dim() != b.dim()) throw Error(ErrorKind::InvalidInput, "dimension mismatch");
}

void require_support_dominance(const PsdMat& a, const PsdMat& b, const char* what) {
    if (!support_leq(b, a)) {
        throw Error(ErrorKind::SupportViolation, std::string(what) + " requires s(A) >= s(B)");
    }
}

}  // namespace

const char* mean_kind_name(MeanKind k) {
    switch (k) {
        case MeanKind::Arithmetic: return "arithmetic";
        case MeanKind::Harmonic: return "harmonic";
        case MeanKind::Geometric: return "geometric";
        case MeanKind::SpectralGeometric: return "sg";
        case MeanKind::SpectralGeometricTilde: return "sgt";
        case MeanKind::Renyi: return "renyi";
        case MeanKind::LogEuclidean: return "le";
        case MeanKind::KuboAndo: return "kubo-ando";
    }
    return "?";
}

std::optional<MeanKind> parse_mean_kind(const std::string& s) {
    if (s == "arithmetic" || s == "arith" || s == "a") return MeanKind::Arithmetic;
    if (s == "harmonic" || s == "harm" || s == "h") return MeanKind::Harmonic;
    if (s == "geometric" || s == "geom" || s == "g") return MeanKind::Geometric;
    if (s == "sg" || s == "spectral-geometric") return MeanKind::SpectralGeometric;
    if (s == "sgt" || s == "sgtilde" || s == "sg-tilde") return MeanKind::SpectralGeometricTilde;
    if (s == "renyi" || s == "r") return MeanKind::Renyi;
    if (s == "le" || s == "log-euclidean" || s == "logeuclidean") return MeanKind::LogEuclidean;
    if (s == "kubo-ando" || s == "kuboando" || s == "ka") return MeanKind::KuboAndo;
    return std::nullopt;
}

void MeanSpec::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorKind::InvalidInput, "alpha must be in [0,1]");
    if (kind != MeanKind::LogEuclidean && !(p > 0.0)) {
        throw Error(ErrorKind::InvalidInput, "p must be positive");
    }
    if (kind == MeanKind::LogEuclidean && !(alpha > 0.0 && alpha < 1.0)) {
        throw Error(ErrorKind::InvalidInput, "log-euclidean requires 0 < alpha < 1");
    }
    if (kind == MeanKind::KuboAndo && !rep_fn) {
        throw Error(ErrorKind::InvalidInput, "kubo-ando requires a representing function");
    }
}

std::vector<double> default_eps_ladder() { return {1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8}; }

bool support_leq(const PsdMat& p, const PsdMat& q, double tol) {
    // max eig((I - s(Q)) s(P) (I - s(Q))) <= tol
    Projection sp = support(p);
    Projection sq = support(q);
    Matrix comp = Matrix::Identity(q.dim(), q.dim()) - sq.mat.mat();
    return opnorm(HermMat(comp * sp.mat.mat() * comp)) <= tol;
}

PsdMat arithmetic_quasi(const PsdMat& a, const PsdMat& b, double alpha, double p) {
    check_alpha_p(alpha, p);
    check_dims(a, b);
    if (both_pd(a, b)) {
        Matrix s = (1.0 - alpha) * herm_pow_all(a.mat(), p) + alpha * herm_pow_all(b.mat(), p);
        return psd_of(herm_pow_clamped(s, 1.0 / p), a.support_tol());
    }
    Matrix s = (1.0 - alpha) * gpower(a, p).mat() + alpha * gpower(b, p).mat();
    return gpower(psd_of(std::move(s), a.support_tol()), 1.0 / p);
}

MeanResult harmonic_quasi(const PsdMat& a, const PsdMat& b, double alpha, double p) {
    check_alpha_p(alpha, p);
    check_dims(a, b);
    if (alpha == 0.0) return make_result(a);
    if (alpha == 1.0) return make_result(b);

    auto direct = [&](const Matrix& x, const Matrix& y) {
        Matrix s = (1.0 - alpha) * herm_pow_all(x, -p) + alpha * herm_pow_all(y, -p);
        s = 0.5 * (s + s.adjoint().eval());
        return herm_pow_all(s, -1.0 / p);
    };

    if (both_pd(a, b)) {
        return make_result(psd_of(direct(a.mat(), b.mat()), a.support_tol()));
    }
    Projection p0 = proj_meet(support(a), support(b));
    if (p0.rank == 0) return make_result(psd_of(Matrix::Zero(a.dim(), a.dim())));
    if (support_leq(a, b) && support_leq(b, a)) {
        // equal supports: both definite on the common block
        Matrix v = proj_isometry(p0);
        Matrix blk = direct(compress(a, v).mat(), compress(b, v).mat());
        return make_result(psd_of(embed(blk, v, a.dim()), a.support_tol()));
    }
    std::vector<RegStep> trace;
    Matrix lim = run_ladder(
        [&](double eps) {
            MatrixLD xl = to_ld(clean_shift(a, eps));
            MatrixLD yl = to_ld(clean_shift(b, eps));
            MatrixLD s = static_cast<long double>(1.0 - alpha) * hpow_ld(xl, static_cast<long double>(-p)) +
                         static_cast<long double>(alpha) * hpow_ld(yl, static_cast<long double>(-p));
            s = 0.5L * (s + s.adjoint().eval());
            return from_ld(hpow_ld(s, static_cast<long double>(-1.0 / p)));
        },
        p0, &trace, "harmonic");
    return make_result(psd_ladder_limit(lim, a.support_tol()), std::move(trace));
}

Matrix geo_mean_alpha(const PsdMat& x, const PsdMat& y, double alpha, std::vector<RegStep>* trace) {
    check_dims(x, y);
    if (alpha == 0.0) return x.mat();
    if (alpha == 1.0) return y.mat();
    if (x.is_pd()) return geo_anchored(x, y, alpha);
    if (y.is_pd()) return geo_anchored(y, x, 1.0 - alpha);

    Projection join = proj_join(support(x), support(y));
    if (join.rank == 0) return Matrix::Zero(x.dim(), x.dim());
    if (join.rank < x.dim()) {
        Matrix v = proj_isometry(join);
        PsdMat xb = compress(x, v);
        PsdMat yb = compress(y, v);
        if (xb.is_pd() || yb.is_pd()) {
            return embed(geo_mean_alpha(xb, yb, alpha, trace), v, x.dim());
        }
    }
    Projection p0 = proj_meet(support(x), support(y));
    std::vector<RegStep> local;
    Matrix lim = run_ladder(
        [&](double eps) {
            MatrixLD xl = to_ld(clean_shift(x, eps));
            MatrixLD yl = to_ld(clean_shift(y, eps));
            MatrixLD xh = hpow_ld(xl, 0.5L), xmh = hpow_ld(xl, -0.5L);
            MatrixLD inner = xmh * yl * xmh;
            inner = 0.5L * (inner + inner.adjoint().eval());
            return from_ld(xh * hpow_ld(inner, static_cast<long double>(alpha)) * xh);
        },
        p0, &local, "geometric");
    if (trace) trace->insert(trace->end(), local.begin(), local.end());
    return lim;
}

MeanResult geometric_quasi(const PsdMat& a, const PsdMat& b, double alpha, double p) {
    check_alpha_p(alpha, p);
    check_dims(a, b);
    if (alpha == 0.0) return make_result(a);
    if (alpha == 1.0) return make_result(b);
    if (both_pd(a, b)) {
        Matrix k = geo_pd(herm_pow_all(a.mat(), p), herm_pow_all(b.mat(), p), alpha);
        return make_result(psd_of(herm_pow_clamped(k, 1.0 / p), a.support_tol()));
    }
    std::vector<RegStep> trace;
    Matrix k = geo_mean_alpha(gpower(a, p), gpower(b, p), alpha, &trace);
    PsdMat kk = psd_ladder_limit(k, a.support_tol());
    return make_result(gpower(kk, 1.0 / p), std::move(trace));
}

MeanResult spectral_geometric(const PsdMat& a, const PsdMat& b, double alpha, double p) {
    check_alpha_p(alpha, p);
    check_dims(a, b);
    require_support_dominance(a, b, "spectral geometric mean");
    // everything lives on range s(A), where A is definite and B block-diagonal
    Matrix v = a.support_isometry();
    PsdMat a1 = compress(a, v);
    PsdMat b1 = compress(b, v);
    Matrix aph = herm_pow_all(a1.mat(), p / 2.0);
    Matrix apmh = herm_pow_all(a1.mat(), -p / 2.0);
    const bool pd = b1.is_pd();
    Matrix bp = pd ? herm_pow_all(b1.mat(), p) : gpower(b1, p).mat();
    // A^{-p} # B^p = A^{-p/2} (A^{p/2} B^p A^{p/2})^{1/2} A^{-p/2}
    Matrix sand = aph * bp * aph;
    sand = 0.5 * (sand + sand.adjoint().eval());
    Matrix sroot = pd ? herm_pow_clamped(sand, 0.5) : gpower(psd_of(sand, a.support_tol()), 0.5).mat();
    Matrix xmean = apmh * sroot * apmh;
    xmean = 0.5 * (xmean + xmean.adjoint().eval());
    Matrix xa = pd ? herm_pow_clamped(xmean, alpha) : gpower(psd_of(xmean, a.support_tol()), alpha).mat();
    Matrix f = xa * herm_pow_all(a1.mat(), p) * xa;
    f = 0.5 * (f + f.adjoint().eval());
    Matrix blk = pd ? herm_pow_clamped(f, 1.0 / p) : gpower(psd_of(f, a.support_tol()), 1.0 / p).mat();
    return make_result(psd_of(embed(blk, v, a.dim()), a.support_tol()));
}

MeanResult spectral_geometric_tilde(const PsdMat& a, const PsdMat& b, double alpha, double p) {
    check_alpha_p(alpha, p);
    check_dims(a, b);
    require_support_dominance(a, b, "tilde spectral geometric mean");
    Matrix v = a.support_isometry();
    PsdMat a1 = compress(a, v);
    PsdMat b1 = compress(b, v);
    const bool pd = b1.is_pd();
    // A^{-p} #_alpha B^p with A definite on the block. alpha in {0,1} follows
    // the Kubo-Ando trivial means, not the support-projection power.
    Matrix inner;
    if (alpha == 0.0) {
        inner = herm_pow_all(a1.mat(), -p);
    } else if (alpha == 1.0) {
        inner = pd ? herm_pow_all(b1.mat(), p) : gpower(b1, p).mat();
    } else {
        Matrix aph = herm_pow_all(a1.mat(), p / 2.0);
        Matrix apmh = herm_pow_all(a1.mat(), -p / 2.0);
        Matrix bp = pd ? herm_pow_all(b1.mat(), p) : gpower(b1, p).mat();
        Matrix sand = aph * bp * aph;
        sand = 0.5 * (sand + sand.adjoint().eval());
        Matrix smid = pd ? herm_pow_clamped(sand, alpha) : gpower(psd_of(sand, a.support_tol()), alpha).mat();
        inner = apmh * smid * apmh;
    }
    inner = 0.5 * (inner + inner.adjoint().eval());
    Matrix w = (pd || alpha == 0.0) ? herm_pow_clamped(inner, 0.5)
                                    : gpower(psd_of(inner, a.support_tol()), 0.5).mat();
    Matrix f = w * herm_pow_all(a1.mat(), 2.0 * (1.0 - alpha) * p) * w;
    f = 0.5 * (f + f.adjoint().eval());
    Matrix blk = (pd || alpha == 0.0) ? herm_pow_clamped(f, 1.0 / p)
                                      : gpower(psd_of(f, a.support_tol()), 1.0 / p).mat();
    return make_result(psd_of(embed(blk, v, a.dim()), a.support_tol()));
}

PsdMat renyi_mean(const PsdMat& a, const PsdMat& b, double alpha, double p) {
    check_alpha_p(alpha, p);
    check_dims(a, b);
    if (both_pd(a, b)) {
        Matrix g1 = herm_pow_all(a.mat(), (1.0 - alpha) * p / 2.0);
        Matrix g2 = herm_pow_all(b.mat(), alpha * p);
        Matrix s = g1 * g2 * g1;
        s = 0.5 * (s + s.adjoint().eval());
        return psd_of(herm_pow_clamped(s, 1.0 / p), a.support_tol());
    }
    Matrix g1 = gpower(a, (1.0 - alpha) * p / 2.0).mat();
    Matrix g2 = gpower(b, alpha * p).mat();
    PsdMat s = psd_of(g1 * g2 * g1, a.support_tol());
    return gpower(s, 1.0 / p);
}

PsdMat log_euclidean(const PsdMat& a, const PsdMat& b, double alpha) {
    check_dims(a, b);
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(ErrorKind::InvalidInput, "log-euclidean requires 0 < alpha < 1");
    }
    Projection p0 = proj_meet(support(a), support(b));
    if (p0.rank == 0) return psd_of(Matrix::Zero(a.dim(), a.dim()), a.support_tol());
    Matrix v = proj_isometry(p0);
    Matrix ca = v.adjoint() * glog(a).mat() * v;
    Matrix cb = v.adjoint() * glog(b).mat() * v;
    Matrix e = herm_exp((1.0 - alpha) * ca + alpha * cb);
    return psd_of(embed(e, v, a.dim()), a.support_tol());
}

MeanResult kubo_ando(const PsdMat& a, const PsdMat& b, const std::function<double(double)>& f) {
    check_dims(a, b);
    if (!f) throw Error(ErrorKind::InvalidInput, "representing function missing");

    auto direct = [&](const Matrix& x, const Matrix& y) {
        Matrix xh = herm_pow_all(x, 0.5);
        Matrix xmh = herm_pow_all(x, -0.5);
        Matrix inner = xmh * y * xmh;
        inner = 0.5 * (inner + inner.adjoint().eval());
        Matrix mid = herm_func_all(inner, [&](double t) { return f(std::max(t, 1e-300)); });
        return (xh * mid * xh).eval();
    };

    if (both_pd(a, b)) {
        return make_result(psd_of(direct(a.mat(), b.mat()), a.support_tol()));
    }
    Projection p0 = proj_meet(support(a), support(b));
    if (support_leq(a, b) && support_leq(b, a) && p0.rank > 0) {
        Matrix v = proj_isometry(p0);
        Matrix blk = direct(compress(a, v).mat(), compress(b, v).mat());
        return make_result(psd_of(embed(blk, v, a.dim()), a.support_tol()));
    }
    // Probe the representing function at the edges of (0, inf): f(0+) = 0 and
    // f(x)/x -> 0 identify the means whose limit support is s(A) ^ s(B),
    // which the ladder iterates can be cleaned onto.
    const bool meet_class = std::abs(f(1e-12)) < 1e-8 && std::abs(f(1e12) / 1e12) < 1e-8;
    Projection clean = meet_class ? p0 : Projection{HermMat::identity(a.dim()), a.dim()};
    std::vector<RegStep> trace;
    Matrix lim = run_ladder(
        [&](double eps) {
            MatrixLD xl = to_ld(clean_shift(a, eps));
            MatrixLD yl = to_ld(clean_shift(b, eps));
            MatrixLD xh = hpow_ld(xl, 0.5L), xmh = hpow_ld(xl, -0.5L);
            MatrixLD inner = xmh * yl * xmh;
            inner = 0.5L * (inner + inner.adjoint().eval());
            MatrixLD mid = hfunc_ld(inner, [&](long double t) {
                return static_cast<long double>(f(std::max(static_cast<double>(t), 1e-300)));
            });
            return from_ld(xh * mid * xh);
        },
        clean, &trace, "kubo-ando");
    PsdMat val = psd_ladder_limit(lim, a.support_tol());
    if (!meet_class) {
        // unknown limit support: clean eigenvalues below the ladder resolution
        const double floor = kLadderTol * std::max(1.0, val.lambda_max());
        val = psd_of(func_calc(val, [floor](double x) { return x > floor ? x : 0.0; }, 0.0).mat(),
                     a.support_tol());
    }
    return make_result(std::move(val), std::move(trace));
}

MeanResult evaluate_mean(const MeanSpec& spec, const PsdMat& a, const PsdMat& b) {
    spec.validate();
    switch (spec.kind) {
        case MeanKind::Arithmetic: return make_result(arithmetic_quasi(a, b, spec.alpha, spec.p));
        case MeanKind::Harmonic: return harmonic_quasi(a, b, spec.alpha, spec.p);
        case MeanKind::Geometric: return geometric_quasi(a, b, spec.alpha, spec.p);
        case MeanKind::SpectralGeometric: return spectral_geometric(a, b, spec.alpha, spec.p);
        case MeanKind::SpectralGeometricTilde: return spectral_geometric_tilde(a, b, spec.alpha, spec.p);
        case MeanKind::Renyi: return make_result(renyi_mean(a, b, spec.alpha, spec.p));
        case MeanKind::LogEuclidean: return make_result(log_euclidean(a, b, spec.alpha));
        case MeanKind::KuboAndo: return kubo_ando(a, b, spec.rep_fn);
    }
    throw Error(ErrorKind::InvalidInput, "unknown mean kind");
}

ContinuityReport epsilon_continuity_check(const MeanSpec& spec, const PsdMat& a, const PsdMat& b,
                                          std::span<const double> eps_ladder) {
    spec.validate();
    std::vector<double> ladder(eps_ladder.begin(), eps_ladder.end());
    if (ladder.empty()) ladder = default_eps_ladder();

    MeanResult limit = evaluate_mean(spec, a, b);
    ContinuityReport rep;
    rep.eps = ladder;
    const double scale = std::max({a.lambda_max(), b.lambda_max(), 1.0});
    for (double eps : ladder) {
        // shrink the support tolerance so the shift stays above the cut and
        // the shifted pair is evaluated through the definite path
        const double tol = std::min(kDefaultSupportTol, 1e-4 * eps / scale);
        PsdMat ae = psd_of(eps_shift(a.mat(), eps), tol);
        PsdMat be = psd_of(eps_shift(b.mat(), eps), tol);
        MeanResult at_eps = evaluate_mean(spec, ae, be);
        rep.gaps.push_back(opnorm(HermMat(at_eps.value.mat() - limit.value.mat())));
    }
    rep.monotone = true;
    for (size_t i = 1; i < rep.gaps.size(); ++i) {
        if (rep.gaps[i] > rep.gaps[i - 1] * (1.0 + 1e-6) + 1e-15) rep.monotone = false;
    }
    rep.final_gap = rep.gaps.empty() ? 0.0 : rep.gaps.back();
    return rep;
}

}  // namespace matorder
