#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "matorder/linalg.hpp"

namespace matorder {

enum class OrderKind {
    Loewner,
    Chaotic,
    Near,
    Eigen,
    WeakMajor,
    WeakLogMajor,
    LogMajor,
    Trace,
};

const char* order_kind_name(OrderKind k);
std::optional<OrderKind> parse_order_kind(const std::string& s);

/// Relative decision band: verdicts with |margin| <= decision_tol are at the
/// boundary and reported holds=true with the boundary flag set.
inline constexpr double kDecisionTolRel = 1e-9;
double decision_tol(const PsdMat& x, const PsdMat& y);

struct OrderVerdict {
    OrderKind order;
    bool holds;
    /// Signed distance to the boundary in the ordering's natural scale;
    /// -inf when the support condition fails outright.
    double margin;
    bool boundary = false;
    bool support_ok = true;
    /// Offending index (partial sum / eigenvalue position), -1 if n/a.
    int fail_index = -1;
    std::string note;
};

OrderVerdict loewner_le(const PsdMat& x, const PsdMat& y);
OrderVerdict chaotic_le(const PsdMat& x, const PsdMat& y);
OrderVerdict near_le(const PsdMat& x, const PsdMat& y);
OrderVerdict eigen_le(const PsdMat& x, const PsdMat& y);
OrderVerdict weak_major(const PsdMat& x, const PsdMat& y);
OrderVerdict weak_log_major(const PsdMat& x, const PsdMat& y);
OrderVerdict log_major(const PsdMat& x, const PsdMat& y);
OrderVerdict trace_le(const PsdMat& x, const PsdMat& y);

OrderVerdict check_order(OrderKind k, const PsdMat& x, const PsdMat& y);

/// The implication chain, strongest first:
/// Loewner => chaotic => near => eigen => weak-log-major => weak-major => trace.
constexpr std::array<OrderKind, 7> kImplicationChain = {
    OrderKind::Loewner,  OrderKind::Chaotic,   OrderKind::Near,  OrderKind::Eigen,
    OrderKind::WeakLogMajor, OrderKind::WeakMajor, OrderKind::Trace,
};

struct ChainReport {
    std::array<OrderVerdict, 7> verdicts;
    /// Pairs (stronger, weaker) where the stronger order held with margin
    /// beyond the guard band but the weaker failed beyond it.
    std::vector<std::pair<OrderKind, OrderKind>> violations;
    bool consistent() const { return violations.empty(); }
};

ChainReport implication_chain(const PsdMat& x, const PsdMat& y);

}  // namespace matorder
