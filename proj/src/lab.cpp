#include "matorder/lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

#include "matorder/matrix_io.hpp"
#include "matorder/perturb.hpp"

namespace matorder {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t& s) {
    s += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
    std::uint64_t s = h ^ (v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2));
    return splitmix64(s);
}

std::uint64_t hash_double(double d) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(d));
    std::memcpy(&bits, &d, sizeof(bits));
    return bits;
}

PsdMat psd_of(Matrix m) { return PsdMat(HermMat(std::move(m))); }

struct ClaimEval {
    double margin;
    double guard;  // 10 * decision_tol of the compared values
    OrderVerdict verdict;
};

ClaimEval evaluate_claim(const InequalityClaim& claim, const PsdMat& a, const PsdMat& b) {
    if (claim.lhs.alpha != claim.rhs.alpha) {
        // cross-weight means are not definitively comparable
        throw Error(ErrorKind::InvalidInput, "claim sides must share alpha");
    }
    MeanResult lhs = evaluate_mean(claim.lhs, a, b);
    MeanResult rhs = evaluate_mean(claim.rhs, a, b);
    OrderVerdict v = check_order(claim.order, lhs.value, rhs.value);
    const double guard = 10.0 * decision_tol(lhs.value, rhs.value);
    return ClaimEval{v.margin, guard, std::move(v)};
}

bool needs_support_dominance(MeanKind k) {
    return k == MeanKind::SpectralGeometric || k == MeanKind::SpectralGeometricTilde;
}

}  // namespace

std::string InequalityClaim::to_string() const {
    std::ostringstream os;
    os << mean_kind_name(lhs.kind) << ":" << order_kind_name(order) << ":" << format_double(lhs.alpha)
       << ":" << format_double(lhs.p) << ":" << format_double(rhs.p);
    if (rhs.kind != MeanKind::Arithmetic) os << ":" << mean_kind_name(rhs.kind);
    return os.str();
}

InequalityClaim parse_claim(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    if (parts.size() != 5 && parts.size() != 6) {
        throw Error(ErrorKind::ParseError,
                    "claim must be <mean>:<order>:<alpha>:<p>:<q>[:<rhs-mean>], got '" + s + "'");
    }
    auto kind = parse_mean_kind(parts[0]);
    if (!kind) throw Error(ErrorKind::ParseError, "unknown mean kind '" + parts[0] + "'");
    auto order = parse_order_kind(parts[1]);
    if (!order) throw Error(ErrorKind::ParseError, "unknown order kind '" + parts[1] + "'");
    InequalityClaim claim;
    try {
        claim.lhs = MeanSpec{*kind, std::stod(parts[2]), std::stod(parts[3])};
        claim.rhs = MeanSpec{MeanKind::Arithmetic, claim.lhs.alpha, std::stod(parts[4])};
    } catch (const std::exception&) {
        throw Error(ErrorKind::ParseError, "bad numeric field in claim '" + s + "'");
    }
    if (parts.size() == 6) {
        auto rk = parse_mean_kind(parts[5]);
        if (!rk) throw Error(ErrorKind::ParseError, "unknown rhs mean kind '" + parts[5] + "'");
        claim.rhs.kind = *rk;
    }
    claim.order = *order;
    claim.lhs.validate();
    claim.rhs.validate();
    return claim;
}

std::mt19937_64 sample_rng(std::uint64_t master_seed, std::uint64_t index) {
    std::uint64_t s = master_seed ^ (0x9E3779B97F4A7C15ULL * (index + 1));
    const std::uint64_t a = splitmix64(s), b = splitmix64(s);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return std::mt19937_64(seq);
}

PsdMat sample_psd(std::mt19937_64& rng, int dim, double spec_min, double spec_max, int rank_def) {
    std::normal_distribution<double> gauss;
    Matrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < dim; ++i) {
        const Complex d = r(i, i);
        q.col(i) *= (std::abs(d) > 0 ? d / std::abs(d) : Complex(1, 0));
    }
    std::uniform_real_distribution<double> unif(std::log(spec_min), std::log(spec_max));
    RealVector ev(dim);
    for (int i = 0; i < dim; ++i) ev(i) = std::exp(unif(rng));
    for (int i = 0; i < std::min(rank_def, dim - 1); ++i) ev(dim - 1 - i) = 0.0;
    return psd_of(q * ev.asDiagonal() * q.adjoint());
}

json witness_to_json(const Witness& w) {
    json params = json::object();
    for (const auto& [k, v] : w.params) params[k] = v;
    return json{{"schema", 1},
                {"claim", w.claim.to_string()},
                {"a", matrix_to_json(w.a)},
                {"b", matrix_to_json(w.b)},
                {"margin", w.margin},
                {"construction", w.construction},
                {"params", std::move(params)}};
}

Witness witness_from_json(const json& j) {
    if (j.value("schema", 0) != 1) throw Error(ErrorKind::ParseError, "unknown witness schema");
    Witness w;
    w.claim = parse_claim(j.at("claim").get<std::string>());
    w.a = matrix_from_json(j.at("a"));
    w.b = matrix_from_json(j.at("b"));
    w.margin = j.at("margin").get<double>();
    w.construction = j.value("construction", "");
    if (j.contains("params")) {
        for (auto it = j.at("params").begin(); it != j.at("params").end(); ++it) {
            w.params.emplace_back(it.key(), it.value().get<double>());
        }
    }
    return w;
}

bool witness_reverifies(const Witness& w) {
    ClaimEval ev = evaluate_claim(w.claim, psd_of(w.a), psd_of(w.b));
    if (ev.verdict.holds) return false;
    if (!std::isfinite(w.margin) || !std::isfinite(ev.margin)) {
        return std::isfinite(w.margin) == std::isfinite(ev.margin);
    }
    return std::abs(ev.margin - w.margin) <= 0.1 * std::abs(w.margin) + 1e-12;
}

VerifyOutcome verify_inequality(const InequalityClaim& claim, const EnsembleConfig& ens) {
    VerifyOutcome out;
    const std::vector<int> dims = ens.dim == 0 ? std::vector<int>{2, 3, 4} : std::vector<int>{ens.dim};
    for (int i = 0; i < ens.count; ++i) {
        std::mt19937_64 rng = sample_rng(ens.seed, static_cast<std::uint64_t>(i));
        const int dim = dims[i % dims.size()];
        int rank_def = ens.rank_deficiency;
        if (rank_def < 0) rank_def = (i % 2 == 0) ? 0 : 1;
        PsdMat a = sample_psd(rng, dim, ens.spec_min, ens.spec_max, rank_def);
        PsdMat b = [&] {
            if (!needs_support_dominance(claim.lhs.kind) || a.rank() == a.dim()) {
                return sample_psd(rng, dim, ens.spec_min, ens.spec_max, rank_def);
            }
            // s(B) <= s(A): build B inside the support of A
            Matrix v = a.support_isometry();
            PsdMat c = sample_psd(rng, a.rank(), ens.spec_min, ens.spec_max,
                                  std::min(rank_def, a.rank() - 1));
            return psd_of(v * c.mat() * v.adjoint());
        }();
        ClaimEval ev = evaluate_claim(claim, a, b);
        ++out.samples;
        if (std::isfinite(ev.margin)) out.min_margin = std::min(out.min_margin, ev.margin);
        if (!ev.verdict.holds && ev.margin < -ev.guard) {
            ++out.violations;
            if (!out.first_witness) {
                out.first_witness = Witness{a.mat(), b.mat(), claim, ev.margin, "ensemble",
                                            {{"sample", static_cast<double>(i)}}};
            }
        }
    }
    return out;
}

namespace {

struct Candidate {
    Matrix a, b;
    std::string construction;
    std::vector<std::pair<std::string, double>> params;
};

Matrix rot_btheta(double y, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    Matrix r(2, 2);
    r << c, -s, s, c;
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = y;
    return r * d * r.adjoint();
}

Matrix diag2(double a, double b) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

Matrix herm_pow2(const Matrix& h, double r) {
    Eigen::SelfAdjointEigenSolver<Matrix> s(h);
    Eigen::VectorXd ev = s.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = std::pow(std::max(ev(i), 0.0), r);
    return s.eigenvectors() * ev.asDiagonal() * s.eigenvectors().adjoint();
}

const std::vector<double>& theta_grid() {
    static const std::vector<double> g{1e-1, 1e-2, 1e-3};
    return g;
}

std::vector<double> log_grid(double lo, double hi, int per_decade) {
    std::vector<double> out;
    const double l0 = std::log10(lo), l1 = std::log10(hi);
    const int n = static_cast<int>(std::round((l1 - l0) * per_decade));
    for (int i = 0; i <= n; ++i) out.push_back(std::pow(10.0, l0 + i / static_cast<double>(per_decade)));
    return out;
}

void gen_scalar(const InequalityClaim&, std::vector<Candidate>& out) {
    const std::vector<double> vals{1e-3, 1e-2, 0.1, 0.5, 2.0, 10.0, 1e2, 1e3};
    for (double a : vals)
        for (double b : vals) {
            if (a == b) continue;
            Matrix ma(1, 1), mb(1, 1);
            ma(0, 0) = a;
            mb(0, 0) = b;
            out.push_back({ma, mb, "scalar", {{"a", a}, {"b", b}}});
        }
}

void gen_rotated(const InequalityClaim&, std::vector<Candidate>& out) {
    const std::vector<double> grid = log_grid(1e-4, 1e4, 1);
    for (double x : grid)
        for (double y : grid)
            for (double t : theta_grid()) {
                out.push_back({diag2(1.0, x), rot_btheta(y, t),
                               "rotated-pair",
                               {{"x", x}, {"y", y}, {"theta", t}}});
            }
}

void gen_rotated_sq(const InequalityClaim&, std::vector<Candidate>& out) {
    const std::vector<double> ys{0.1, 0.03, 0.01, 3e-3, 1e-3, 3e-4, 1e-4, 1e-5, 1e-6};
    for (double y : ys)
        for (double t : theta_grid()) {
            out.push_back({diag2(1.0, y * y), rot_btheta(y, t),
                           "rotated-pair-x=y^2",
                           {{"x", y * y}, {"y", y}, {"theta", t}}});
        }
}

void gen_rotated_eq(const InequalityClaim&, std::vector<Candidate>& out) {
    for (double x : log_grid(1e-4, 1e4, 2))
        for (double t : theta_grid()) {
            if (std::abs(x - 1.0) < 1e-9) continue;
            out.push_back({diag2(1.0, x), rot_btheta(x, t),
                           "rotated-pair-y=x",
                           {{"x", x}, {"theta", t}}});
        }
}

void gen_tilted(const InequalityClaim&, std::vector<Candidate>& out) {
    for (double t : {0.3, 0.1, 0.03, 0.01, 3e-3, 1e-3}) {
        auto [a, b] = family_eval(TiltedRankOne{}, t);
        out.push_back({a.mat(), b.mat(), "tilted-rank-one", {{"theta", t}}});
    }
}

void gen_rank_one_vs_diag(const InequalityClaim&, std::vector<Candidate>& out) {
    for (double x : log_grid(1e-4, 1e4, 1))
        for (double t : {1e-1, 1e-2}) {
            const double c = std::cos(t), s = std::sin(t);
            Matrix b(2, 2);
            b << c * c, c * s, c * s, s * s;
            out.push_back({diag2(1.0, x), b, "rank-one-vs-diag", {{"x", x}, {"theta", t}}});
        }
}

// Riccati reparametrization: with X = A0, Y = B_theta, the pair
// A = Y^{1/p}, B = (X Y X)^{1/p} satisfies A^p = Y and A^{-p} # B^p = X.
void gen_riccati_sg(const InequalityClaim& claim, std::vector<Candidate>& out) {
    const double p = claim.lhs.p;
    const std::vector<double> xs{1e-2, 0.1, 0.5, 2.0, 4.0, 10.0, 1e2};
    const std::vector<double> ys{0.3, 0.1, 3e-2, 1e-2, 1e-3, 1e-4};
    for (double x : xs)
        for (double y : ys)
            for (double t : {1e-1, 1e-2}) {
                Matrix x0 = diag2(1.0, x);
                Matrix yt = rot_btheta(y, t);
                Matrix a = herm_pow2(yt, 1.0 / p);
                Matrix b = herm_pow2(x0 * yt * x0, 1.0 / p);
                out.push_back({a, b, "riccati-sg", {{"x", x}, {"y", y}, {"theta", t}}});
                // SG_{a,p}(A,B) = SG_{1-a,p}(B,A): the swapped pair carries
                // the symmetric branch of the necessity arguments
                out.push_back({b, a, "riccati-sg-swap", {{"x", x}, {"y", y}, {"theta", t}}});
            }
}

// Riccati reparametrization, tilde variant: with X = B_theta, Y = A0, the pair
// A = Y^{1/p}, B = (Y^{-1} #_{1/alpha} X)^{1/p} satisfies A^{-p} #_a B^p = X.
void gen_riccati_sgt(const InequalityClaim& claim, std::vector<Candidate>& out) {
    const double p = claim.lhs.p, alpha = claim.lhs.alpha;
    if (!(alpha > 0.0 && alpha < 1.0)) return;
    auto push = [&](double x, double y, double t, const char* name) {
        Matrix y0 = diag2(1.0, x);
        Matrix xt = rot_btheta(y, t);
        Matrix y0inv = diag2(1.0, 1.0 / x);
        // Y^{-1} #_{1/alpha} X = Y^{-1/2} (Y^{1/2} X Y^{1/2})^{1/alpha} Y^{-1/2}
        Matrix yh = herm_pow2(y0, 0.5);
        Matrix ymh = herm_pow2(y0inv, 0.5);
        Matrix bp = ymh * herm_pow2(yh * xt * yh, 1.0 / alpha) * ymh;
        bp = 0.5 * (bp + bp.adjoint().eval());
        Matrix a = herm_pow2(y0, 1.0 / p);
        Matrix b = herm_pow2(bp, 1.0 / p);
        out.push_back({a, b, name, {{"x", x}, {"y", y}, {"theta", t}}});
    };
    for (double x : log_grid(1e-3, 1e3, 1))
        for (double t : {1e-1, 1e-2}) {
            if (std::abs(x - 1.0) < 1e-9) continue;
            push(x, std::pow(x, 2.0 * alpha - 1.0), t, "riccati-sgt");
        }
    for (double x : {0.5, 0.1, 1e-2})
        for (double y : {0.1, 1e-2, 1e-3, 1e-4})
            for (double t : {1e-1, 1e-2}) push(x, y, t, "riccati-sgt-free");
}

using DeviceGen = void (*)(const InequalityClaim&, std::vector<Candidate>&);

std::vector<DeviceGen> devices_for(MeanKind lhs) {
    switch (lhs) {
        case MeanKind::Arithmetic:
        case MeanKind::Harmonic:
            return {gen_scalar, gen_rotated_sq, gen_tilted, gen_rotated_eq, gen_rotated};
        case MeanKind::LogEuclidean:
            return {gen_rotated_sq, gen_rotated};
        case MeanKind::Renyi:
            return {gen_rotated_eq, gen_rotated_sq, gen_rotated};
        case MeanKind::Geometric:
        case MeanKind::KuboAndo:
            return {gen_rotated_eq, gen_rank_one_vs_diag, gen_rotated};
        case MeanKind::SpectralGeometric:
            return {gen_riccati_sg, gen_rotated_eq, gen_rotated};
        case MeanKind::SpectralGeometricTilde:
            return {gen_riccati_sgt, gen_riccati_sg, gen_rotated_eq, gen_rotated};
    }
    return {gen_rotated};
}

std::optional<Witness> try_candidate(const InequalityClaim& claim, const Candidate& cand) {
    PsdMat a = psd_of(cand.a);
    PsdMat b = psd_of(cand.b);
    ClaimEval ev = [&]() -> ClaimEval {
        try {
            return evaluate_claim(claim, a, b);
        } catch (const Error&) {
            return ClaimEval{kInf, 0.0, {}};  // support violation etc: not a usable candidate
        }
    }();
    if (!(ev.margin < -ev.guard) || ev.verdict.holds) return std::nullopt;
    Witness w{cand.a, cand.b, claim, ev.margin, cand.construction, cand.params};
    if (!witness_reverifies(w)) return std::nullopt;
    return w;
}

}  // namespace

std::optional<Witness> find_counterexample(const InequalityClaim& claim, const SearchBudget& budget,
                                           std::uint64_t seed) {
    int family_used = 0;
    for (DeviceGen gen : devices_for(claim.lhs.kind)) {
        std::vector<Candidate> cands;
        gen(claim, cands);
        for (const Candidate& c : cands) {
            if (family_used >= budget.family_points) break;
            if (!budget.only_construction.empty() && c.construction != budget.only_construction) continue;
            ++family_used;
            if (auto w = try_candidate(claim, c)) return w;
        }
    }
    if (!budget.only_construction.empty()) return std::nullopt;
    for (int i = 0; i < budget.random_trials; ++i) {
        std::mt19937_64 rng = sample_rng(seed, 0x5EA2C8ULL + static_cast<std::uint64_t>(i));
        const int dim = (i % 2 == 0) ? 2 : 3;
        PsdMat a = sample_psd(rng, dim, 1e-2, 1e2, 0);
        PsdMat b = sample_psd(rng, dim, 1e-2, 1e2, 0);
        Candidate c{a.mat(), b.mat(), "random", {{"trial", static_cast<double>(i)}}};
        if (auto w = try_candidate(claim, c)) return w;
    }
    return std::nullopt;
}

const char* row_status_name(RowStatus s) {
    switch (s) {
        case RowStatus::Exact: return "exact";
        case RowStatus::Gap: return "gap";
        case RowStatus::None: return "none";
        case RowStatus::Open: return "open";
    }
    return "?";
}

namespace {

// Fuzzy comparisons for the printed conditions: grid points that land exactly
// on a boundary (e.g. p = q/(1-alpha) up to rounding) must not be classified
// strictly outside it.
constexpr double kPredSlack = 1e-9;
bool fleq(double a, double b) { return a <= b + kPredSlack * std::max({1.0, std::abs(a), std::abs(b)}); }
bool fgeq(double a, double b) { return fleq(b, a); }
bool flt(double a, double b) { return !fgeq(a, b); }
bool feq(double a, double b) { return fleq(a, b) && fleq(b, a); }

ParamPred pred_false() {
    return [](double, double, double) { return false; };
}
ParamPred pred_true() {
    return [](double, double, double) { return true; };
}

TableRow make_row(std::string label, OrderKind order, RowStatus status, std::string suff_text,
                  std::string nec_text, ParamPred suff, ParamPred nec) {
    TableRow r;
    r.label = std::move(label);
    r.order = order;
    r.status = status;
    r.sufficient_text = std::move(suff_text);
    r.necessary_text = std::move(nec_text);
    r.sufficient = suff;
    r.necessary = nec;
    if (suff) r.verify_when = suff;
    if (nec) {
        r.counterexample_when = [nec](double a, double p, double q) { return !nec(a, p, q); };
    }
    return r;
}

std::vector<ConditionTable> build_tables() {
    std::vector<ConditionTable> tables;

    // 4.1: A_p vs A_q
    {
        ConditionTable t{"4.1", MeanKind::Arithmetic, {}};
        ParamPred loewner = [](double, double p, double q) {
            return feq(p, q) || (fgeq(p, 1.0) && fleq(p, q)) ||
                   (fgeq(p, 0.5) && flt(p, 1.0) && fgeq(q, 1.0));
        };
        ParamPred ple = [](double, double p, double q) { return fleq(p, q); };
        t.rows.push_back(make_row("A_p <= A_q", OrderKind::Loewner, RowStatus::Exact,
                                  "p=q or 1<=p<q or 1/2<=p<1<=q", "p=q or 1<=p<q or 1/2<=p<1<=q",
                                  loewner, loewner));
        for (OrderKind k : {OrderKind::Chaotic, OrderKind::Near, OrderKind::Eigen,
                            OrderKind::WeakMajor, OrderKind::Trace}) {
            t.rows.push_back(make_row(std::string("A_p ") + order_kind_name(k) + " A_q", k,
                                      RowStatus::Exact, "p<=q", "p<=q", ple, ple));
        }
        tables.push_back(std::move(t));
    }

    // 4.2: LE vs A_q
    {
        ConditionTable t{"4.2", MeanKind::LogEuclidean, {}};
        t.rows.push_back(make_row("LE <= A_q", OrderKind::Loewner, RowStatus::None, "none", "",
                                  pred_false(), pred_false()));
        for (OrderKind k : {OrderKind::Chaotic, OrderKind::Near, OrderKind::Eigen,
                            OrderKind::WeakMajor, OrderKind::Trace}) {
            t.rows.push_back(make_row(std::string("LE ") + order_kind_name(k) + " A_q", k,
                                      RowStatus::Exact, "arbitrary q", "arbitrary q", pred_true(),
                                      pred_true()));
        }
        tables.push_back(std::move(t));
    }

    // 4.3: R_p vs A_q
    {
        ConditionTable t{"4.3", MeanKind::Renyi, {}};
        for (OrderKind k : {OrderKind::Loewner, OrderKind::Chaotic, OrderKind::Near}) {
            t.rows.push_back(make_row(std::string("R_p ") + order_kind_name(k) + " A_q", k,
                                      RowStatus::None, "none", "", pred_false(), pred_false()));
        }
        ParamPred suff_lam = [](double, double p, double q) { return fleq(p / 2.0, q); };
        ParamPred nec_lam = [](double a, double p, double q) { return fleq(a * (1.0 - a) * p, q); };
        for (OrderKind k : {OrderKind::Eigen, OrderKind::WeakMajor}) {
            t.rows.push_back(make_row(std::string("R_p ") + order_kind_name(k) + " A_q", k,
                                      RowStatus::Gap, "p/2 <= q", "alpha(1-alpha)p <= q", suff_lam,
                                      nec_lam));
        }
        t.rows.push_back(make_row(
            "R_p trace A_q", OrderKind::Trace, RowStatus::Gap, "q>=1 or p/2<=q",
            "q>=1 or alpha(1-alpha)p<=q",
            [](double, double p, double q) { return fgeq(q, 1.0) || fleq(p / 2.0, q); },
            [](double a, double p, double q) { return fgeq(q, 1.0) || fleq(a * (1.0 - a) * p, q); }));
        // exact trace frontier at alpha = 1/2, p = 1
        ParamPred quarter = [](double, double, double q) { return fgeq(q, 0.25); };
        TableRow e413 = make_row("Tr R_{1/2,1} <= Tr A_{1/2,q}", OrderKind::Trace, RowStatus::Exact,
                                 "q >= 1/4", "q >= 1/4", quarter, quarter);
        e413.domain = [](double a, double p, double) { return feq(a, 0.5) && feq(p, 1.0); };
        t.rows.push_back(std::move(e413));
        tables.push_back(std::move(t));
    }

    // 4.4: G_p vs A_q
    {
        ConditionTable t{"4.4", MeanKind::Geometric, {}};
        ParamPred loewner = [](double, double p, double q) { return fgeq(p, 1.0) && fleq(p, q); };
        t.rows.push_back(make_row("G_p <= A_q", OrderKind::Loewner, RowStatus::Exact, "1<=p<=q",
                                  "1<=p<=q", loewner, loewner));
        ParamPred ple = [](double, double p, double q) { return p <= q; };
        for (OrderKind k : {OrderKind::Chaotic, OrderKind::Near, OrderKind::Eigen}) {
            t.rows.push_back(make_row(std::string("G_p ") + order_kind_name(k) + " A_q", k,
                                      RowStatus::Exact, "p<=q", "p<=q", ple, ple));
        }
        for (OrderKind k : {OrderKind::WeakMajor, OrderKind::Trace}) {
            t.rows.push_back(make_row(std::string("G_p ") + order_kind_name(k) + " A_q", k,
                                      RowStatus::Exact, "arbitrary p,q", "arbitrary p,q", pred_true(),
                                      pred_true()));
        }
        tables.push_back(std::move(t));
    }

    // 4.5: SG_p vs A_q
    {
        ConditionTable t{"4.5", MeanKind::SpectralGeometric, {}};
        for (OrderKind k : {OrderKind::Loewner, OrderKind::Chaotic}) {
            t.rows.push_back(make_row(std::string("SG_p ") + order_kind_name(k) + " A_q", k,
                                      RowStatus::None, "none", "", pred_false(), pred_false()));
        }
        ParamPred nec_near = [](double a, double p, double q) {
            return fgeq(q / p, 1.0 + std::max(a * (q - 1.0), (1.0 - a) * (q - 1.0)));
        };
        t.rows.push_back(make_row("SG_p near A_q", OrderKind::Near, RowStatus::Open, "?",
                                  "q/p >= 1+max{alpha(q-1),(1-alpha)(q-1)}", nullptr, nec_near));
        ParamPred nec_max = [](double a, double p, double q) {
            return fgeq(q / p, std::max(a, 1.0 - a));
        };
        t.rows.push_back(make_row("SG_p eigen A_q", OrderKind::Eigen, RowStatus::Open, "?",
                                  "q/p >= max{alpha,1-alpha}", nullptr, nec_max));
        t.rows.push_back(make_row(
            "SG_p wmaj A_q", OrderKind::WeakMajor, RowStatus::Gap, "p/q <= 2 min{alpha,1-alpha}",
            "q/p >= max{alpha,1-alpha}",
            [](double a, double p, double q) { return fleq(p / q, 2.0 * std::min(a, 1.0 - a)); },
            nec_max));
        t.rows.push_back(make_row(
            "SG_p trace A_q", OrderKind::Trace, RowStatus::Gap,
            "q>=1 or p/q<=2 min{alpha,1-alpha}", "q>=1 or p<=2q",
            [](double a, double p, double q) {
                return fgeq(q, 1.0) || fleq(p / q, 2.0 * std::min(a, 1.0 - a));
            },
            [](double, double p, double q) { return fgeq(q, 1.0) || fleq(p, 2.0 * q); }));
        tables.push_back(std::move(t));
    }

    // 4.6: SG~_p vs A_q
    {
        ConditionTable t{"4.6", MeanKind::SpectralGeometricTilde, {}};
        for (OrderKind k : {OrderKind::Loewner, OrderKind::Chaotic}) {
            t.rows.push_back(make_row(std::string("SGt_p ") + order_kind_name(k) + " A_q", k,
                                      RowStatus::None, "none", "", pred_false(), pred_false()));
        }
        // near: fails for every alpha != 1/2; open at alpha = 1/2
        TableRow near = make_row("SGt_p near A_q", OrderKind::Near, RowStatus::Open,
                                 "none for alpha != 1/2", "?", pred_false(), nullptr);
        near.counterexample_when = [](double a, double, double) { return !feq(a, 0.5); };
        near.verify_when = nullptr;
        t.rows.push_back(std::move(near));
        ParamPred nec_lam = [](double a, double p, double q) { return fleq(p, q / (1.0 - a)); };
        t.rows.push_back(make_row("SGt_p eigen A_q", OrderKind::Eigen, RowStatus::Open, "?",
                                  "p <= q/(1-alpha)", nullptr, nec_lam));
        t.rows.push_back(make_row(
            "SGt_p wmaj A_q", OrderKind::WeakMajor, RowStatus::Gap, "p <= 2 alpha q",
            "p <= q/(1-alpha)",
            [](double a, double p, double q) { return fleq(p, 2.0 * a * q); }, nec_lam));
        t.rows.push_back(make_row(
            "SGt_p trace A_q", OrderKind::Trace, RowStatus::Gap, "q>=1 or p<=2 alpha q",
            "q>=1 or p<=q/(1-alpha)",
            [](double a, double p, double q) { return fgeq(q, 1.0) || fleq(p, 2.0 * a * q); },
            [](double a, double p, double q) { return fgeq(q, 1.0) || fleq(p, q / (1.0 - a)); }));
        tables.push_back(std::move(t));
    }

    return tables;
}

}  // namespace

const std::vector<ConditionTable>& condition_tables() {
    static const std::vector<ConditionTable> tables = build_tables();
    return tables;
}

const ConditionTable& condition_table(const std::string& section) {
    for (const auto& t : condition_tables()) {
        if (t.section == section) return t;
    }
    throw Error(ErrorKind::InvalidInput, "no such table section '" + section + "' (use 4.1 .. 4.6)");
}

TableReport reproduce_table(const std::string& section, const GridSpec& grid, std::uint64_t seed,
                            int samples_per_point) {
    const ConditionTable& table = condition_table(section);
    TableReport rep;
    rep.section = section;
    int row_index = 0;
    for (const TableRow& row : table.rows) {
        ++row_index;
        for (double alpha : grid.alphas)
            for (double p : grid.ps)
                for (double q : grid.qs) {
                    if (row.domain && !row.domain(alpha, p, q)) continue;
                    InequalityClaim claim;
                    claim.lhs = MeanSpec{table.lhs, alpha, p};
                    claim.rhs = MeanSpec{MeanKind::Arithmetic, alpha, q};
                    claim.order = row.order;
                    TableCell cell;
                    cell.row_label = row.label;
                    cell.order = row.order;
                    cell.alpha = alpha;
                    cell.p = p;
                    cell.q = q;
                    if (row.verify_when && row.verify_when(alpha, p, q)) {
                        cell.zone = "verify";
                        EnsembleConfig ens;
                        ens.dim = 0;
                        ens.count = samples_per_point;
                        ens.spec_min = 1e-2;
                        ens.spec_max = 1e2;
                        ens.seed = hash_combine(
                            hash_combine(hash_combine(seed, row_index), hash_double(alpha)),
                            hash_combine(hash_double(p), hash_double(q)));
                        VerifyOutcome out = verify_inequality(claim, ens);
                        cell.metric = out.min_margin;
                        cell.result = out.violations == 0 ? "ok" : "mismatch";
                    } else if (row.counterexample_when && row.counterexample_when(alpha, p, q)) {
                        cell.zone = "counterexample";
                        auto w = find_counterexample(claim, SearchBudget{}, seed);
                        if (w) {
                            cell.result = "ok";
                            cell.metric = w->margin;
                            cell.construction = w->construction;
                        } else {
                            cell.result = "mismatch";
                        }
                    } else {
                        cell.zone = "open";
                        cell.result = "unchecked";
                    }
                    if (cell.result == "mismatch") ++rep.mismatches;
                    rep.cells.push_back(std::move(cell));
                }
    }
    return rep;
}

std::string TableReport::csv() const {
    std::ostringstream os;
    os << "section,row,order,alpha,p,q,zone,result,metric,construction\n";
    for (const auto& c : cells) {
        os << section << ',' << c.row_label << ',' << order_kind_name(c.order) << ','
           << format_double(c.alpha) << ',' << format_double(c.p) << ',' << format_double(c.q) << ','
           << c.zone << ',' << c.result << ',' << format_double(c.metric) << ',' << c.construction
           << '\n';
    }
    return os.str();
}

std::string TableReport::pretty() const {
    std::ostringstream os;
    os << "table " << section << ": " << mismatches << " mismatch(es)\n";
    std::string row;
    for (const auto& c : cells) {
        if (c.row_label != row) {
            row = c.row_label;
            os << "\n" << row << "\n  ";
        }
        const char* mark = "?";
        if (c.result == "mismatch") mark = "!";
        else if (c.zone == "verify" && c.result == "ok") mark = "\u2713";
        else if (c.zone == "counterexample" && c.result == "ok") mark = "\u2717";
        os << mark;
    }
    os << "\n\nlegend: \u2713 inequality verified, \u2717 expected counterexample found, ? open/unchecked, ! mismatch\n";
    return os.str();
}

LtkReport ltk_verify(const MeanSpec& spec, const PsdMat& a, const PsdMat& b,
                     std::span<const double> p_ladder, double tol) {
    spec.validate();
    LtkReport rep;
    rep.tol = tol;
    rep.p_ladder.assign(p_ladder.begin(), p_ladder.end());
    if (rep.p_ladder.empty()) rep.p_ladder = {1.0, 0.5, 0.1, 0.01, 1e-3, 1e-4};

    double alpha = spec.alpha;
    if (spec.kind == MeanKind::KuboAndo) {
        const double h = 1e-6;
        alpha = (spec.rep_fn(1.0 + h) - spec.rep_fn(1.0 - h)) / (2.0 * h);
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(ErrorKind::InvalidInput, "LTK limit needs 0 < alpha < 1");
    }
    PsdMat target = log_euclidean(a, b, alpha);
    for (double p : rep.p_ladder) {
        MeanSpec at_p = spec;
        at_p.p = p;
        MeanResult m = evaluate_mean(at_p, a, b);
        const double gap = opnorm(HermMat(m.value.mat() - target.mat()));
        rep.gaps.push_back(gap);
        rep.ratios.push_back(gap / p);
    }
    rep.final_gap = rep.gaps.back();
    rep.converged = rep.final_gap <= tol;
    const size_t n = rep.gaps.size();
    rep.tail_monotone = true;
    for (size_t i = n >= 3 ? n - 3 : 0; i + 1 < n; ++i) {
        if (rep.gaps[i + 1] > rep.gaps[i] * 1.05 + 1e-12) rep.tail_monotone = false;
    }
    // "gap(p)/p bounded" = the ratios do not blow up as p -> 0: every ratio
    // stays within an order of magnitude of the coarse-p reference.
    const double rmax = *std::max_element(rep.ratios.begin(), rep.ratios.end());
    const double ref = std::max(rep.ratios.front(), rep.ratios.size() > 1 ? rep.ratios[1] : 0.0);
    rep.ratio_bounded = rmax <= 10.0 * ref + 1e-6;
    return rep;
}

EqualityDiagnosis equality_cases(const MeanSpec& lhs, const MeanSpec& rhs, const PsdMat& a,
                                 const PsdMat& b) {
    MeanResult ml = evaluate_mean(lhs, a, b);
    MeanResult mr = evaluate_mean(rhs, a, b);
    EqualityDiagnosis d;
    d.tr_lhs = ml.value.herm().trace();
    d.tr_rhs = mr.value.herm().trace();
    d.tr_gap = std::abs(d.tr_lhs - d.tr_rhs);
    d.ab_dist = opnorm(HermMat(a.mat() - b.mat()));
    const double scale = std::max({1.0, a.lambda_max(), b.lambda_max()});
    d.equal_trace = d.tr_gap <= 1e-8 * std::max(1.0, std::abs(d.tr_lhs));
    d.equal_inputs = d.ab_dist <= 1e-6 * scale;
    d.violation = d.equal_trace && !d.equal_inputs;
    return d;
}

}  // namespace matorder
