#pragma once

#include <complex>
#include <random>
#include <vector>

#include "matorder/linalg.hpp"

namespace matorder::testing {

/// Deterministic random Hermitian with entries O(1).
inline Matrix random_herm(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> gauss;
    Matrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
    return 0.5 * (g + g.adjoint().eval());
}

inline PsdMat random_pd(std::mt19937_64& rng, int n, double lo = 0.1, double hi = 10.0) {
    std::normal_distribution<double> gauss;
    Matrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    std::uniform_real_distribution<double> unif(std::log(lo), std::log(hi));
    RealVector ev(n);
    for (int i = 0; i < n; ++i) ev(i) = std::exp(unif(rng));
    return PsdMat(HermMat(q * ev.asDiagonal() * q.adjoint()));
}

inline PsdMat random_psd_rank(std::mt19937_64& rng, int n, int rank, double lo = 0.1,
                              double hi = 10.0) {
    std::normal_distribution<double> gauss;
    Matrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    std::uniform_real_distribution<double> unif(std::log(lo), std::log(hi));
    RealVector ev = RealVector::Zero(n);
    for (int i = 0; i < rank; ++i) ev(i) = std::exp(unif(rng));
    return PsdMat(HermMat(q * ev.asDiagonal() * q.adjoint()));
}

/// Characteristic polynomial coefficients by Faddeev-LeVerrier:
/// p(t) = t^n + c[0] t^{n-1} + ... + c[n-1]. Independent of any
/// eigendecomposition routine.
inline std::vector<std::complex<long double>> charpoly(const Matrix& a) {
    const int n = static_cast<int>(a.rows());
    using C = std::complex<long double>;
    std::vector<std::vector<C>> A(n, std::vector<C>(n)), M(n, std::vector<C>(n)), T(n, std::vector<C>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            A[i][j] = C(a(i, j).real(), a(i, j).imag());
            M[i][j] = (i == j) ? C(1) : C(0);
        }
    std::vector<C> c(n);
    for (int k = 1; k <= n; ++k) {
        // T = A * M
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                C s = 0;
                for (int l = 0; l < n; ++l) s += A[i][l] * M[l][j];
                T[i][j] = s;
            }
        C tr = 0;
        for (int i = 0; i < n; ++i) tr += T[i][i];
        c[k - 1] = -tr / static_cast<long double>(k);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) M[i][j] = T[i][j] + ((i == j) ? c[k - 1] : C(0));
    }
    return c;
}

/// Roots of the monic polynomial t^n + c[0] t^{n-1} + ... + c[n-1] by
/// Durand-Kerner iteration (the companion-matrix spectrum, computed without
/// any matrix eigensolver).
inline std::vector<std::complex<long double>> charpoly_roots(
    const std::vector<std::complex<long double>>& c) {
    using C = std::complex<long double>;
    const int n = static_cast<int>(c.size());
    auto eval = [&](C t) {
        C v = 1;
        for (int i = 0; i < n; ++i) v = v * t + c[i];
        return v;
    };
    long double bound = 1;
    for (const C& ci : c) bound = std::max(bound, static_cast<long double>(1) + std::abs(ci));
    std::vector<C> r(n);
    const C seed(0.4L, 0.9L);
    C acc = 1;
    for (int i = 0; i < n; ++i) {
        acc *= seed;
        r[i] = acc * bound;
    }
    for (int iter = 0; iter < 500; ++iter) {
        long double moved = 0;
        for (int i = 0; i < n; ++i) {
            C denom = 1;
            for (int j = 0; j < n; ++j)
                if (j != i) denom *= (r[i] - r[j]);
            C step = eval(r[i]) / denom;
            r[i] -= step;
            moved = std::max(moved, std::abs(step));
        }
        if (moved < 1e-30L) break;
    }
    return r;
}

/// Eigenvalues of a Hermitian matrix via the characteristic-polynomial route,
/// returned real descending.
inline std::vector<double> charpoly_eigenvalues(const Matrix& a) {
    auto roots = charpoly_roots(charpoly(a));
    std::vector<double> ev;
    ev.reserve(roots.size());
    for (const auto& r : roots) ev.push_back(static_cast<double>(r.real()));
    std::sort(ev.begin(), ev.end(), std::greater<double>());
    return ev;
}

}  // namespace matorder::testing
