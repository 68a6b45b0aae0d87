#pragma once

#include <array>
#include <functional>
#include <string>
#include <variant>

#include "matorder/linalg.hpp"

namespace matorder {

/// A0 = diag(1, x) against the rotated B_theta = R(theta) diag(1, y) R(theta)^T.
struct RotatedPair {
    double x;
    double y;
};

/// A0~ = diag(2, 0) against the rank-one projection onto (cos t, sin t).
struct TiltedRankOne {};

using Family2x2 = std::variant<RotatedPair, TiltedRankOne>;

std::pair<PsdMat, PsdMat> family_eval(const Family2x2& fam, double theta);

/// Second-order entrywise model M(theta) = cst + theta*lin + theta^2*quad.
struct EntryExpansion {
    Eigen::Matrix2d cst = Eigen::Matrix2d::Zero();
    Eigen::Matrix2d lin = Eigen::Matrix2d::Zero();
    Eigen::Matrix2d quad = Eigen::Matrix2d::Zero();
    double err = 0.0;  // oracle residual estimate; 0 for closed forms

    Eigen::Matrix2d at(double theta) const { return cst + theta * lin + theta * theta * quad; }
};

/// The rotated B_theta expansion: const diag(1,y), off-diagonal slope (1-y),
/// quadratic diag (-(1-y), (1-y)).
EntryExpansion btheta_expansion(double y);

/// The (c11, c22, c12) coefficient triple of one lemma's second-order model,
/// with the theta^0 diagonal (1, base22).
struct CoeffSet {
    double c11;
    double c22;
    double c12;
    double base22;
    std::string lemma_tag;

    EntryExpansion expansion() const;
};

struct C2Scalar {
    std::function<double(double)> f;
    std::function<double(double)> df;
};

/// Daleckii-Krein second-order update: entrywise coefficients of f(X_theta)
/// for X_theta = diag(a,b) + theta*offdiag(x12) + theta^2*diag(x11,x22).
/// Returns (y11, y22, y12).
std::array<double, 3> daleckii_expand(double a, double b, double x11, double x22, double x12,
                                      const C2Scalar& f);

CoeffSet coeffs_arithmetic(double alpha, double p, double x, double y);
CoeffSet coeffs_log_euclidean(double alpha, double x, double y);
CoeffSet coeffs_renyi(double alpha, double p, double x);
CoeffSet coeffs_geometric(double alpha, double p, double x);
CoeffSet coeffs_arithmetic_equal(double alpha, double q, double x);

/// theta^2 coefficient of det(A_q-mean - A_p-mean) on the rotated family.
double det_gap_arith_arith(double alpha, double p, double q, double x, double y);
/// theta^2 coefficient of det(A_p-mean - LE-mean) on the rotated family.
double det_gap_le_arith(double alpha, double p, double x, double y);
/// theta^2 coefficient of det(A_q-mean - A_p-mean) on the tilted rank-one
/// family; strictly negative for p != q in (0,1).
double det_gap_tilted(double alpha, double p, double q);

/// theta^2 eigenvalue corrections of the X_theta model, ordered by descending
/// base value: returns the coefficients attached to (max(a,b), min(a,b)).
std::pair<double, double> eig_expand(double a, double b, double x11, double x22, double x12);

/// Central differences with two-level Richardson extrapolation over
/// h in {1e-3, 5e-4, 2.5e-4}. order=1 skips the quadratic coefficients
/// (for C^1-only models). Throws OracleUnstable when the Richardson residual
/// exceeds 1e-3 of the coefficient scale.
EntryExpansion numeric_coeff_oracle(const std::function<Matrix(double)>& matrix_fn, int order = 2);

}  // namespace matorder
