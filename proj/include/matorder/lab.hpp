#pragma once

#include <cstdint>
#include <functional>
#include <json.hpp>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "matorder/means.hpp"
#include "matorder/orders.hpp"

namespace matorder {

using json = nlohmann::json;

inline constexpr std::uint64_t kDefaultSeed = 7;

/// lhs ordered against rhs (rhs is the quasi arithmetic mean throughout the
/// encoded tables, but kept general). Both sides share alpha.
struct InequalityClaim {
    MeanSpec lhs;
    MeanSpec rhs;
    OrderKind order = OrderKind::Loewner;

    std::string to_string() const;
};

/// Mini-language <mean>:<order>:<alpha>:<p>:<q>[:<rhs-mean>], e.g.
/// "sg:chao:0.5:1:1". rhs defaults to the arithmetic mean.
InequalityClaim parse_claim(const std::string& s);

struct EnsembleConfig {
    int dim = 3;              // 0 = cycle dims 2,3,4
    int count = 200;
    int rank_deficiency = 0;  // eigenvalues zeroed per sample; -1 = alternate 0/1
    double spec_min = 1e-3;
    double spec_max = 1e3;
    std::uint64_t seed = kDefaultSeed;
};

/// Per-sample RNG split off the master seed; serial and parallel evaluation
/// orders see identical streams.
std::mt19937_64 sample_rng(std::uint64_t master_seed, std::uint64_t index);
PsdMat sample_psd(std::mt19937_64& rng, int dim, double spec_min, double spec_max, int rank_def);

struct Witness {
    Matrix a, b;
    InequalityClaim claim;
    double margin = 0.0;
    std::string construction;
    std::vector<std::pair<std::string, double>> params;
};

json witness_to_json(const Witness& w);
Witness witness_from_json(const json& j);
/// Re-evaluate the stored claim on the stored pair; true when it still fails
/// with a margin within 10% of the recorded one.
bool witness_reverifies(const Witness& w);

struct VerifyOutcome {
    int samples = 0;
    int violations = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    std::optional<Witness> first_witness;
};

VerifyOutcome verify_inequality(const InequalityClaim& claim, const EnsembleConfig& ens);

struct SearchBudget {
    int family_points = 10000;
    int random_trials = 10000;
    /// Restrict the sweep to one named construction device (empty = all).
    std::string only_construction;
};

/// Deterministic sweep over the 2x2 construction devices keyed to the claim,
/// then seeded random pairs. Returns the first witness with margin below
/// -10 * decision_tol, re-verified; nullopt after budget (inconclusive, never
/// a proof).
std::optional<Witness> find_counterexample(const InequalityClaim& claim, const SearchBudget& budget = {},
                                           std::uint64_t seed = kDefaultSeed);

enum class RowStatus { Exact, Gap, None, Open };
const char* row_status_name(RowStatus s);

using ParamPred = std::function<bool(double /*alpha*/, double /*p*/, double /*q*/)>;

struct TableRow {
    std::string label;
    OrderKind order;
    RowStatus status;
    std::string sufficient_text;
    std::string necessary_text;
    ParamPred sufficient;            // null = unknown ("?")
    ParamPred necessary;             // null = unknown / blank
    ParamPred verify_when;           // inequality must hold for all pairs here
    ParamPred counterexample_when;   // a witness must exist here
    ParamPred domain;                // null = all (alpha, p, q)
};

struct ConditionTable {
    std::string section;  // "4.1" .. "4.6"
    MeanKind lhs;
    std::vector<TableRow> rows;
};

/// The six summary tables of the quasi-arithmetic-geometric comparisons,
/// encoded as machine-checkable predicates over (alpha, p, q).
const std::vector<ConditionTable>& condition_tables();
const ConditionTable& condition_table(const std::string& section);

struct GridSpec {
    std::vector<double> alphas{0.3, 0.5, 0.7};
    std::vector<double> ps{0.3, 0.5, 0.75, 1.0, 1.5, 2.0};
    std::vector<double> qs{0.3, 0.5, 0.75, 1.0, 1.5, 2.0};
};

struct TableCell {
    std::string row_label;
    OrderKind order;
    double alpha, p, q;
    std::string zone;    // "verify" | "counterexample" | "open"
    std::string result;  // "ok" | "mismatch" | "unchecked"
    double metric = 0.0;
    std::string construction;
};

struct TableReport {
    std::string section;
    std::vector<TableCell> cells;
    int mismatches = 0;

    std::string csv() const;
    std::string pretty() const;
};

TableReport reproduce_table(const std::string& section, const GridSpec& grid = {},
                            std::uint64_t seed = kDefaultSeed, int samples_per_point = 200);

struct LtkReport {
    std::vector<double> p_ladder;
    std::vector<double> gaps;    // ||M_{alpha,p}(A,B) - LE_alpha(A,B)||_inf
    std::vector<double> ratios;  // gap / p
    double final_gap = 0.0;
    double tol = 1e-3;
    bool tail_monotone = false;
    bool converged = false;
    bool ratio_bounded = false;
};

/// Lie-Trotter-Kato check: the p->0 limit of the quasi mean against the
/// log-Euclidean target on the joint support.
LtkReport ltk_verify(const MeanSpec& spec, const PsdMat& a, const PsdMat& b,
                     std::span<const double> p_ladder = {}, double tol = 1e-3);

struct EqualityDiagnosis {
    double tr_lhs = 0.0, tr_rhs = 0.0, tr_gap = 0.0;
    double ab_dist = 0.0;
    bool equal_trace = false;
    bool equal_inputs = false;
    bool violation = false;  // trace equality without A = B
};

EqualityDiagnosis equality_cases(const MeanSpec& lhs, const MeanSpec& rhs, const PsdMat& a,
                                 const PsdMat& b);

}  // namespace matorder
