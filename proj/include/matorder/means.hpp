#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "matorder/linalg.hpp"

namespace matorder {

enum class MeanKind {
    Arithmetic,
    Harmonic,
    Geometric,
    SpectralGeometric,
    SpectralGeometricTilde,
    Renyi,
    LogEuclidean,
    KuboAndo,
};

const char* mean_kind_name(MeanKind k);
std::optional<MeanKind> parse_mean_kind(const std::string& s);

/// Which quasi mean to evaluate. p is ignored for LogEuclidean (p-invariant);
/// rep_fn is consulted only for KuboAndo and must satisfy rep_fn(1) = 1
/// (operator monotonicity is the caller's responsibility).
struct MeanSpec {
    MeanKind kind = MeanKind::Arithmetic;
    double alpha = 0.5;
    double p = 1.0;
    std::function<double(double)> rep_fn;

    void validate() const;
};

/// One rung of the epsilon ladder: delta is the max-abs distance between the
/// (support-cleaned) values at this epsilon and the previous one.
struct RegStep {
    double eps;
    double delta;
};

struct MeanResult {
    PsdMat value;
    Projection support_note;
    std::vector<RegStep> regularization_trace;
};

/// Default geometric epsilon ladder 1e-3 .. 1e-8 and its convergence tolerance.
std::vector<double> default_eps_ladder();
inline constexpr double kLadderTol = 1e-6;

PsdMat arithmetic_quasi(const PsdMat& a, const PsdMat& b, double alpha, double p);
MeanResult harmonic_quasi(const PsdMat& a, const PsdMat& b, double alpha, double p);
MeanResult geometric_quasi(const PsdMat& a, const PsdMat& b, double alpha, double p);
MeanResult spectral_geometric(const PsdMat& a, const PsdMat& b, double alpha, double p);
MeanResult spectral_geometric_tilde(const PsdMat& a, const PsdMat& b, double alpha, double p);
PsdMat renyi_mean(const PsdMat& a, const PsdMat& b, double alpha, double p);
PsdMat log_euclidean(const PsdMat& a, const PsdMat& b, double alpha);
MeanResult kubo_ando(const PsdMat& a, const PsdMat& b, const std::function<double(double)>& f);

MeanResult evaluate_mean(const MeanSpec& spec, const PsdMat& a, const PsdMat& b);

/// Kubo-Ando weighted geometric mean X #_alpha Y for PSD inputs. Exact block
/// formulas are used whenever one input is definite on the joint support;
/// otherwise the epsilon ladder runs with iterates compressed onto
/// s(X) ∧ s(Y). Trace entries are appended when the ladder path is taken.
Matrix geo_mean_alpha(const PsdMat& x, const PsdMat& y, double alpha,
                      std::vector<RegStep>* trace = nullptr);

/// Is s(P) <= s(Q) within the support comparison tolerance 1e-8.
bool support_leq(const PsdMat& p, const PsdMat& q, double tol = 1e-8);

struct ContinuityReport {
    std::vector<double> eps;
    std::vector<double> gaps;
    bool monotone = false;
    double final_gap = 0.0;
};

/// Gap ||M(A+eps I, B+eps I) - M(A,B)||_inf along the ladder (Prop-2.2 style
/// regularization check). The report carries failure; nothing throws here
/// beyond invalid specs.
ContinuityReport epsilon_continuity_check(const MeanSpec& spec, const PsdMat& a, const PsdMat& b,
                                          std::span<const double> eps_ladder = {});

}  // namespace matorder
