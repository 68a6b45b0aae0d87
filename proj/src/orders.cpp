#include "matorder/orders.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "matorder/means.hpp"

namespace matorder {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSupportCmpTol = 1e-8;

void check_dims(const PsdMat& x, const PsdMat& y) {
    if (x.dim() != y.dim()) throw Error(ErrorKind::InvalidInput, "dimension mismatch");
}

OrderVerdict finish(OrderKind k, double margin, double tol) {
    OrderVerdict v;
    v.order = k;
    v.margin = margin;
    v.holds = margin >= -tol;
    v.boundary = std::isfinite(margin) && std::abs(margin) <= tol;
    return v;
}

OrderVerdict support_fail(OrderKind k) {
    OrderVerdict v;
    v.order = k;
    v.holds = false;
    v.margin = -kInf;
    v.support_ok = false;
    v.note = "support condition s(X) <= s(Y) fails";
    return v;
}

Matrix support_isometry_of(const PsdMat& a) { return a.support_isometry(); }

}  // namespace

const char* order_kind_name(OrderKind k) {
    switch (k) {
        case OrderKind::Loewner: return "loewner";
        case OrderKind::Chaotic: return "chao";
        case OrderKind::Near: return "near";
        case OrderKind::Eigen: return "eigen";
        case OrderKind::WeakMajor: return "wmaj";
        case OrderKind::WeakLogMajor: return "wlog";
        case OrderKind::LogMajor: return "logmaj";
        case OrderKind::Trace: return "trace";
    }
    return "?";
}

std::optional<OrderKind> parse_order_kind(const std::string& s) {
    if (s == "loewner" || s == "le" || s == "psd") return OrderKind::Loewner;
    if (s == "chao" || s == "chaotic") return OrderKind::Chaotic;
    if (s == "near") return OrderKind::Near;
    if (s == "eigen" || s == "lambda") return OrderKind::Eigen;
    if (s == "wmaj" || s == "weak" || s == "weak-major") return OrderKind::WeakMajor;
    if (s == "wlog" || s == "weak-log" || s == "weak-log-major") return OrderKind::WeakLogMajor;
    if (s == "logmaj" || s == "log-major") return OrderKind::LogMajor;
    if (s == "trace" || s == "tr") return OrderKind::Trace;
    return std::nullopt;
}

double decision_tol(const PsdMat& x, const PsdMat& y) {
    return kDecisionTolRel * std::max({1.0, x.lambda_max(), y.lambda_max()});
}

OrderVerdict loewner_le(const PsdMat& x, const PsdMat& y) {
    check_dims(x, y);
    SpectralDecomp d = eigh(HermMat(y.mat() - x.mat()));
    const double margin = d.eigenvalues(d.eigenvalues.size() - 1);
    return finish(OrderKind::Loewner, margin, decision_tol(x, y));
}

OrderVerdict chaotic_le(const PsdMat& x, const PsdMat& y) {
    check_dims(x, y);
    if (!support_leq(x, y, kSupportCmpTol)) return support_fail(OrderKind::Chaotic);
    if (x.rank() == 0) return finish(OrderKind::Chaotic, kInf, decision_tol(x, y));
    Matrix v = support_isometry_of(x);
    Matrix lx = v.adjoint() * glog(x).mat() * v;
    Matrix ly = v.adjoint() * glog(y).mat() * v;
    SpectralDecomp d = eigh(HermMat(ly - lx));
    const double margin = d.eigenvalues(d.eigenvalues.size() - 1);
    // log-domain margin; decision band stays on the absolute scale
    return finish(OrderKind::Chaotic, margin, decision_tol(x, y));
}

OrderVerdict near_le(const PsdMat& x, const PsdMat& y) {
    check_dims(x, y);
    if (!support_leq(x, y, kSupportCmpTol)) return support_fail(OrderKind::Near);
    if (y.rank() == 0) return finish(OrderKind::Near, 1.0, decision_tol(x, y));
    // compress onto range s(Y), where Y is definite; then X # Y^{-1} is exact
    Matrix v = support_isometry_of(y);
    PsdMat xb(Matrix(v.adjoint() * x.mat() * v), x.support_tol());
    PsdMat yinv(Matrix((v.adjoint() * y.mat() * v).inverse()), y.support_tol());
    Matrix g = geo_mean_alpha(xb, yinv, 0.5);
    SpectralDecomp d = eigh(HermMat(std::move(g)));
    const double margin = 1.0 - d.eigenvalues(0);
    OrderVerdict out = finish(OrderKind::Near, margin, decision_tol(x, y));
    out.note = "margin = 1 - max eig(X # Y^{-1}) (artifact convention)";
    return out;
}

OrderVerdict eigen_le(const PsdMat& x, const PsdMat& y) {
    check_dims(x, y);
    double margin = kInf;
    int idx = -1;
    for (int i = 0; i < x.dim(); ++i) {
        const double m = y.eigenvalues()(i) - x.eigenvalues()(i);
        if (m < margin) {
            margin = m;
            idx = i;
        }
    }
    OrderVerdict out = finish(OrderKind::Eigen, margin, decision_tol(x, y));
    if (!out.holds) out.fail_index = idx;
    return out;
}

OrderVerdict weak_major(const PsdMat& x, const PsdMat& y) {
    check_dims(x, y);
    double margin = kInf;
    int idx = -1;
    double cum = 0.0;
    for (int k = 0; k < x.dim(); ++k) {
        cum += y.eigenvalues()(k) - x.eigenvalues()(k);
        if (cum < margin) {
            margin = cum;
            idx = k;
        }
    }
    OrderVerdict out = finish(OrderKind::WeakMajor, margin, decision_tol(x, y));
    if (!out.holds) out.fail_index = idx;
    return out;
}

namespace {

/// Weak log-majorization margin over partial products of retained
/// eigenvalues, in the log domain. Null eigenvalues are exact zeros: a zero
/// product on the X side satisfies its constraint outright, a zero product on
/// the Y side against a positive X product fails with the -inf sentinel.
OrderVerdict wlog_core(const PsdMat& x, const PsdMat& y, OrderKind kind) {
    const int n = x.dim();
    const int rx = x.rank(), ry = y.rank();
    double margin = kInf;
    int idx = -1;
    double sx = 0.0, sy = 0.0;
    for (int k = 0; k < n; ++k) {
        const bool x_zero = k >= rx;
        const bool y_zero = k >= ry;
        if (x_zero) break;  // all remaining X products are exact 0
        sx += std::log(x.eigenvalues()(k));
        if (y_zero) {
            margin = -kInf;
            idx = k;
            break;
        }
        sy += std::log(y.eigenvalues()(k));
        if (sy - sx < margin) {
            margin = sy - sx;
            idx = k;
        }
    }
    OrderVerdict out;
    out.order = kind;
    out.margin = margin;
    // log-domain band: relative tolerance on the products
    out.holds = margin >= -kDecisionTolRel * 1e3;
    out.boundary = std::isfinite(margin) && std::abs(margin) <= kDecisionTolRel * 1e3;
    if (!out.holds) out.fail_index = idx;
    return out;
}

}  // namespace

OrderVerdict weak_log_major(const PsdMat& x, const PsdMat& y) {
    check_dims(x, y);
    return wlog_core(x, y, OrderKind::WeakLogMajor);
}

OrderVerdict log_major(const PsdMat& x, const PsdMat& y) {
    check_dims(x, y);
    OrderVerdict wl = wlog_core(x, y, OrderKind::LogMajor);
    if (x.rank() != y.rank()) {
        wl.holds = false;
        wl.margin = -kInf;
        wl.note = "rank mismatch (" + std::to_string(x.rank()) + " vs " + std::to_string(y.rank()) + ")";
        return wl;
    }
    double dx = 0.0, dy = 0.0;
    for (int i = 0; i < x.rank(); ++i) dx += std::log(x.eigenvalues()(i));
    for (int i = 0; i < y.rank(); ++i) dy += std::log(y.eigenvalues()(i));
    const double det_tol = 1e-8;
    const double det_margin = det_tol - std::abs(dx - dy);
    if (det_margin < wl.margin) wl.margin = det_margin;
    if (det_margin < 0.0) {
        wl.holds = false;
        wl.note = "det (retained product) mismatch";
    }
    return wl;
}

OrderVerdict trace_le(const PsdMat& x, const PsdMat& y) {
    check_dims(x, y);
    const double margin = y.herm().trace() - x.herm().trace();
    return finish(OrderKind::Trace, margin, decision_tol(x, y));
}

OrderVerdict check_order(OrderKind k, const PsdMat& x, const PsdMat& y) {
    switch (k) {
        case OrderKind::Loewner: return loewner_le(x, y);
        case OrderKind::Chaotic: return chaotic_le(x, y);
        case OrderKind::Near: return near_le(x, y);
        case OrderKind::Eigen: return eigen_le(x, y);
        case OrderKind::WeakMajor: return weak_major(x, y);
        case OrderKind::WeakLogMajor: return weak_log_major(x, y);
        case OrderKind::LogMajor: return log_major(x, y);
        case OrderKind::Trace: return trace_le(x, y);
    }
    throw Error(ErrorKind::InvalidInput, "unknown order kind");
}

ChainReport implication_chain(const PsdMat& x, const PsdMat& y) {
    check_dims(x, y);
    ChainReport rep{{check_order(kImplicationChain[0], x, y), check_order(kImplicationChain[1], x, y),
                     check_order(kImplicationChain[2], x, y), check_order(kImplicationChain[3], x, y),
                     check_order(kImplicationChain[4], x, y), check_order(kImplicationChain[5], x, y),
                     check_order(kImplicationChain[6], x, y)},
                    {}};
    const double guard = 10.0 * decision_tol(x, y);
    for (size_t i = 0; i < rep.verdicts.size(); ++i) {
        if (!(rep.verdicts[i].holds && rep.verdicts[i].margin > guard)) continue;
        for (size_t j = i + 1; j < rep.verdicts.size(); ++j) {
            if (!rep.verdicts[j].holds && rep.verdicts[j].margin < -guard) {
                rep.violations.emplace_back(kImplicationChain[i], kImplicationChain[j]);
            }
        }
    }
    return rep;
}

}  // namespace matorder
