#include "matorder/perturb.hpp"

#include <cmath>

namespace matorder {

namespace {

constexpr double kDegenTol = 1e-8;

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorKind::DegenerateBase, what);
}

void check_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw Error(ErrorKind::InvalidInput, std::string(name) + " must be positive");
    }
}

Eigen::Matrix2d sym2(double m11, double m22, double m12) {
    Eigen::Matrix2d m;
    m << m11, m12, m12, m22;
    return m;
}

}  // namespace

std::pair<PsdMat, PsdMat> family_eval(const Family2x2& fam, double theta) {
    if (const auto* rp = std::get_if<RotatedPair>(&fam)) {
        check_positive(rp->x, "x");
        check_positive(rp->y, "y");
        Matrix a = Matrix::Zero(2, 2);
        a(0, 0) = 1.0;
        a(1, 1) = rp->x;
        const double c = std::cos(theta), s = std::sin(theta);
        Matrix r(2, 2);
        r << c, -s, s, c;
        Matrix d = Matrix::Zero(2, 2);
        d(0, 0) = 1.0;
        d(1, 1) = rp->y;
        Matrix b = r * d * r.adjoint();
        return {PsdMat(std::move(a)), PsdMat(std::move(b))};
    }
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = 2.0;
    const double c = std::cos(theta), s = std::sin(theta);
    Matrix b(2, 2);
    b << c * c, c * s, c * s, s * s;
    return {PsdMat(std::move(a)), PsdMat(std::move(b))};
}

EntryExpansion btheta_expansion(double y) {
    check_positive(y, "y");
    EntryExpansion e;
    e.cst = sym2(1.0, y, 0.0);
    e.lin = sym2(0.0, 0.0, 1.0 - y);
    e.quad = sym2(-(1.0 - y), 1.0 - y, 0.0);
    return e;
}

EntryExpansion CoeffSet::expansion() const {
    EntryExpansion e;
    e.cst = sym2(1.0, base22, 0.0);
    e.lin = sym2(0.0, 0.0, c12);
    e.quad = sym2(c11, c22, 0.0);
    return e;
}

std::array<double, 3> daleckii_expand(double a, double b, double x11, double x22, double x12,
                                      const C2Scalar& f) {
    require(std::abs(a - b) >= kDegenTol * std::max({1.0, std::abs(a), std::abs(b)}),
            "base eigenvalues coincide (a = b)");
    if (!f.f || !f.df) throw Error(ErrorKind::InvalidInput, "scalar function and derivative required");
    const double fa = f.f(a), fb = f.f(b);
    const double dfa = f.df(a), dfb = f.df(b);
    const double d = a - b;
    const double y12 = (fa - fb) / d * x12;
    const double y11 = dfa * x11 + (dfa * d - fa + fb) / (d * d) * x12 * x12;
    const double y22 = dfb * x22 + (fa - fb - dfb * d) / (d * d) * x12 * x12;
    return {y11, y22, y12};
}

CoeffSet coeffs_arithmetic(double alpha, double p, double x, double y) {
    check_positive(p, "p");
    check_positive(x, "x");
    check_positive(y, "y");
    const double xp = std::pow(x, p), yp = std::pow(y, p);
    const double zeta = 1.0 - (1.0 - alpha) * xp - alpha * yp;
    require(std::abs(zeta) >= kDegenTol * std::max(1.0, (1.0 - alpha) * xp + alpha * yp),
            "(1-alpha)x^p + alpha y^p = 1");
    const double m = std::pow((1.0 - alpha) * xp + alpha * yp, 1.0 / p);
    const double w = 1.0 - m;
    const double oy = 1.0 - yp;
    CoeffSet c;
    c.lemma_tag = "3.3";
    c.base22 = m;
    c.c11 = -alpha * (1.0 - alpha) * (1.0 - xp) * oy / (p * zeta) - alpha * alpha * oy * oy * w / (zeta * zeta);
    c.c22 = alpha * (1.0 - alpha) * (1.0 - xp) * oy * std::pow((1.0 - alpha) * xp + alpha * yp, 1.0 / p - 1.0) /
                (p * zeta) +
            alpha * alpha * oy * oy * w / (zeta * zeta);
    c.c12 = alpha * oy * w / zeta;
    return c;
}

CoeffSet coeffs_log_euclidean(double alpha, double x, double y) {
    check_positive(x, "x");
    check_positive(y, "y");
    const double lx = std::log(x), ly = std::log(y);
    const double lg = (1.0 - alpha) * lx + alpha * ly;  // log(x^{1-a} y^a)
    require(std::abs(lg) >= kDegenTol * std::max({1.0, std::abs(lx), std::abs(ly)}),
            "x^{1-alpha} y^{alpha} = 1");
    const double g = std::exp(lg);
    CoeffSet c;
    c.lemma_tag = "3.4";
    c.base22 = g;
    c.c11 = alpha * (1.0 - alpha) * lx * ly / lg - alpha * alpha * (1.0 - g) * ly * ly / (lg * lg);
    c.c22 = -alpha * (1.0 - alpha) * g * lx * ly / lg + alpha * alpha * (1.0 - g) * ly * ly / (lg * lg);
    c.c12 = alpha * (1.0 - g) * ly / lg;
    return c;
}

CoeffSet coeffs_renyi(double alpha, double p, double x) {
    check_positive(p, "p");
    check_positive(x, "x");
    require(std::abs(x - 1.0) >= kDegenTol * std::max(1.0, x), "x = 1");
    const double xp = std::pow(x, p);
    const double s = std::pow(x, (1.0 - alpha) * p / 2.0) - std::pow(x, (1.0 + alpha) * p / 2.0);
    CoeffSet c;
    c.lemma_tag = "3.5";
    c.base22 = x;
    c.c11 = -(1.0 - std::pow(x, alpha * p)) / p + (1.0 - p + p * x - xp) * s * s / (p * (1.0 - xp) * (1.0 - xp));
    c.c22 = (std::pow(x, 1.0 - alpha * p) - x) / p +
            (p + (1.0 - p) * x - std::pow(x, 1.0 - p)) * s * s / (p * (1.0 - xp) * (1.0 - xp));
    c.c12 = (1.0 - x) * s / (1.0 - xp);
    return c;
}

CoeffSet coeffs_geometric(double alpha, double p, double x) {
    check_positive(p, "p");
    check_positive(x, "x");
    require(std::abs(x - 1.0) >= kDegenTol * std::max(1.0, x), "x = 1");
    CoeffSet c;
    c.lemma_tag = "4.17";
    c.base22 = x;
    c.c11 = alpha * (1.0 - alpha) * (std::pow(x, p) - std::pow(x, -p)) / (2.0 * p) -
            alpha * alpha * (1.0 - x);
    c.c22 = alpha * (1.0 - alpha) * (std::pow(x, 1.0 - p) - std::pow(x, 1.0 + p)) / (2.0 * p) +
            alpha * alpha * (1.0 - x);
    c.c12 = alpha * (1.0 - x);
    return c;
}

CoeffSet coeffs_arithmetic_equal(double alpha, double q, double x) {
    check_positive(q, "q");
    check_positive(x, "x");
    require(std::abs(x - 1.0) >= kDegenTol * std::max(1.0, x), "x = 1");
    CoeffSet c;
    c.lemma_tag = "4.6";
    c.base22 = x;
    c.c11 = alpha * (1.0 - alpha) * (std::pow(x, q) - 1.0) / q - alpha * alpha * (1.0 - x);
    c.c22 = alpha * (1.0 - alpha) * (std::pow(x, 1.0 - q) - x) / q + alpha * alpha * (1.0 - x);
    c.c12 = alpha * (1.0 - x);
    return c;
}

double det_gap_arith_arith(double alpha, double p, double q, double x, double y) {
    check_positive(p, "p");
    check_positive(q, "q");
    check_positive(x, "x");
    check_positive(y, "y");
    const double xp = std::pow(x, p), yp = std::pow(y, p);
    const double xq = std::pow(x, q), yq = std::pow(y, q);
    const double zp = 1.0 - (1.0 - alpha) * xp - alpha * yp;
    const double zq = 1.0 - (1.0 - alpha) * xq - alpha * yq;
    require(std::abs(zp) >= kDegenTol * std::max(1.0, (1.0 - alpha) * xp + alpha * yp),
            "(1-alpha)x^p + alpha y^p = 1");
    require(std::abs(zq) >= kDegenTol * std::max(1.0, (1.0 - alpha) * xq + alpha * yq),
            "(1-alpha)x^q + alpha y^q = 1");
    const double mp = std::pow((1.0 - alpha) * xp + alpha * yp, 1.0 / p);
    const double mq = std::pow((1.0 - alpha) * xq + alpha * yq, 1.0 / q);
    const double wp = 1.0 - mp, wq = 1.0 - mq;
    const double term1 = alpha * (1.0 - alpha) *
                         ((1.0 - xp) * (1.0 - yp) / (p * zp) - (1.0 - xq) * (1.0 - yq) / (q * zq)) * (mq - mp);
    const double diff = (1.0 - yp) / zp - (1.0 - yq) / zq;
    const double term2 = -alpha * alpha * diff * diff * wp * wq;
    return term1 + term2;
}

double det_gap_le_arith(double alpha, double p, double x, double y) {
    check_positive(p, "p");
    check_positive(x, "x");
    check_positive(y, "y");
    const double xp = std::pow(x, p), yp = std::pow(y, p);
    const double zp = 1.0 - (1.0 - alpha) * xp - alpha * yp;
    const double lx = std::log(x), ly = std::log(y);
    const double lg = (1.0 - alpha) * lx + alpha * ly;
    require(std::abs(zp) >= kDegenTol * std::max(1.0, (1.0 - alpha) * xp + alpha * yp),
            "(1-alpha)x^p + alpha y^p = 1");
    require(std::abs(lg) >= kDegenTol * std::max({1.0, std::abs(lx), std::abs(ly)}),
            "x^{1-alpha} y^{alpha} = 1");
    const double g = std::exp(lg);
    const double mp = std::pow((1.0 - alpha) * xp + alpha * yp, 1.0 / p);
    const double term1 =
        -alpha * (1.0 - alpha) * ((1.0 - xp) * (1.0 - yp) / (p * zp) + lx * ly / lg) * (mp - g);
    const double diff = (1.0 - yp) / zp - ly / lg;
    const double term2 = -alpha * alpha * diff * diff * (1.0 - g) * (1.0 - mp);
    return term1 + term2;
}

double det_gap_tilted(double alpha, double p, double q) {
    if (!(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0)) {
        throw Error(ErrorKind::InvalidInput, "tilted family expansion requires 0 < p, q < 1");
    }
    const double cp = alpha + (1.0 - alpha) * std::pow(2.0, p);
    const double cq = alpha + (1.0 - alpha) * std::pow(2.0, q);
    const double d = alpha / cp - alpha / cq;
    return -std::pow(cp, 1.0 / p) * std::pow(cq, 1.0 / q) * d * d;
}

std::pair<double, double> eig_expand(double a, double b, double x11, double x22, double x12) {
    require(std::abs(a - b) >= kDegenTol * std::max({1.0, std::abs(a), std::abs(b)}),
            "base eigenvalues coincide (a = b)");
    const double top = x11 + x12 * x12 / (a - b);
    const double bot = x22 - x12 * x12 / (a - b);
    if (a > b) return {top, bot};
    return {bot, top};
}

EntryExpansion numeric_coeff_oracle(const std::function<Matrix(double)>& matrix_fn, int order) {
    if (order != 1 && order != 2) throw Error(ErrorKind::InvalidInput, "order must be 1 or 2");
    const std::array<double, 3> hs = {1e-3, 5e-4, 2.5e-4};

    auto as_real2 = [](const Matrix& m) {
        if (m.rows() != 2 || m.cols() != 2) {
            throw Error(ErrorKind::InvalidInput, "oracle expects 2x2 matrices");
        }
        Eigen::Matrix2d r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r(i, j) = m(i, j).real();
        return r;
    };

    const Eigen::Matrix2d m0 = as_real2(matrix_fn(0.0));
    std::array<Eigen::Matrix2d, 3> lin{}, quad{};
    for (size_t k = 0; k < hs.size(); ++k) {
        const double h = hs[k];
        const Eigen::Matrix2d mp = as_real2(matrix_fn(h));
        const Eigen::Matrix2d mm = as_real2(matrix_fn(-h));
        lin[k] = (mp - mm) / (2.0 * h);
        quad[k] = (mp - 2.0 * m0 + mm) / (2.0 * h * h);
    }
    // two Richardson levels for the O(h^2) central-difference error
    auto rich = [](const std::array<Eigen::Matrix2d, 3>& v) {
        Eigen::Matrix2d r1a = (4.0 * v[1] - v[0]) / 3.0;
        Eigen::Matrix2d r1b = (4.0 * v[2] - v[1]) / 3.0;
        Eigen::Matrix2d r2 = (16.0 * r1b - r1a) / 15.0;
        const double resid = (r2 - r1b).cwiseAbs().maxCoeff();
        return std::pair{r2, resid};
    };

    EntryExpansion out;
    out.cst = m0;
    auto [l2, lres] = rich(lin);
    out.lin = l2;
    out.err = lres;
    double scale = std::max(1.0, l2.cwiseAbs().maxCoeff());
    if (lres > 1e-3 * scale) {
        throw Error(ErrorKind::OracleUnstable, "first-order Richardson residual " + std::to_string(lres));
    }
    if (order == 2) {
        auto [q2, qres] = rich(quad);
        out.quad = q2;
        out.err = std::max(out.err, qres);
        scale = std::max(1.0, q2.cwiseAbs().maxCoeff());
        if (qres > 1e-3 * scale) {
            throw Error(ErrorKind::OracleUnstable,
                        "second-order Richardson residual " + std::to_string(qres));
        }
    }
    return out;
}

}  // namespace matorder
