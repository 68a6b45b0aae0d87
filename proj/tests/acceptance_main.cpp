// Acceptance suite: one pass/fail line per criterion. Exit code 0 iff every
// selected criterion passes. Run with --only N to run a single criterion.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "matorder/lab.hpp"
#include "matorder/matrix_io.hpp"
#include "matorder/perturb.hpp"
#include "test_helpers.hpp"

using namespace matorder;
using namespace matorder::testing;

namespace {

struct Checker {
    std::ostringstream log;
    bool ok = true;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            log << "    FAILED: " << what << "\n";
        }
    }
};

double lmin_of(const Matrix& h) { return eigh(HermMat(Matrix(h))).eigenvalues.minCoeff(); }

// ---- criterion 1: AGM chain ------------------------------------------------

void crit_agm(Checker& c) {
    for (int i = 0; i < 200; ++i) {
        std::mt19937_64 rng = sample_rng(7, i);
        const int dim = 2 + i % 3;
        PsdMat a = sample_psd(rng, dim, 1e-3, 1e3, 0);
        PsdMat b = sample_psd(rng, dim, 1e-3, 1e3, 0);
        const double alpha = 0.2 + 0.15 * (i % 5);
        Matrix am = arithmetic_quasi(a, b, alpha, 1.0).mat();
        Matrix gm = geometric_quasi(a, b, alpha, 1.0).value.mat();
        Matrix hm = harmonic_quasi(a, b, alpha, 1.0).value.mat();
        c.expect(lmin_of(am - gm) >= -1e-9, "A - G indefinite at sample " + std::to_string(i));
        c.expect(lmin_of(gm - hm) >= -1e-9, "G - H indefinite at sample " + std::to_string(i));
        if (!c.ok) break;
    }
}

// ---- criterion 2: table 4.1 ------------------------------------------------

void crit_table41(Checker& c) {
    TableReport rep = reproduce_table("4.1", GridSpec{}, 7, 200);
    c.expect(rep.mismatches == 0, "table 4.1 produced " + std::to_string(rep.mismatches) + " mismatches");

    SearchBudget sq;
    sq.only_construction = "rotated-pair-x=y^2";
    auto w1 = find_counterexample(parse_claim("arith:loewner:0.5:0.3:1"), sq);
    c.expect(w1.has_value(), "no x=y^2 witness for A_{0.3} <= A_1");
    if (w1) c.expect(w1->construction == "rotated-pair-x=y^2", "wrong device for (0.3, 1)");

    SearchBudget tl;
    tl.only_construction = "tilted-rank-one";
    auto w2 = find_counterexample(parse_claim("arith:loewner:0.5:0.4:0.8"), tl);
    c.expect(w2.has_value(), "no tilted-family witness for A_{0.4} <= A_{0.8}");
}

// ---- criterion 3: LE vs arithmetic -----------------------------------------

void crit_le(Checker& c) {
    for (double q : {0.5, 1.0, 2.0}) {
        auto w = find_counterexample(parse_claim("le:loewner:0.5:1:" + format_double(q)));
        c.expect(w.has_value(), "no Loewner witness for LE vs A_q at q=" + format_double(q));
        if (w) {
            c.expect(w->a.rows() == 2, "witness is not 2x2");
            c.expect(w->margin < -1e-8, "witness margin too shallow: " + format_double(w->margin));
        }
        EnsembleConfig ens;
        ens.dim = 0;
        ens.count = 200;
        ens.rank_deficiency = -1;
        ens.spec_min = 0.1;
        ens.spec_max = 10.0;
        InequalityClaim chao = parse_claim("le:chao:0.5:1:" + format_double(q));
        VerifyOutcome out = verify_inequality(chao, ens);
        c.expect(out.violations == 0,
                 "LE <=_chao A_q violated " + std::to_string(out.violations) + " times at q=" + format_double(q));
    }
}

// ---- criterion 4: Renyi section --------------------------------------------

void crit_renyi(Checker& c) {
    auto w = find_counterexample(parse_claim("renyi:near:0.5:1:1"));
    c.expect(w.has_value(), "no near-order witness for R vs A at (0.5,1,1)");

    EnsembleConfig ens;
    ens.dim = 0;
    ens.count = 200;
    ens.spec_min = 1e-2;
    ens.spec_max = 1e2;
    VerifyOutcome out = verify_inequality(parse_claim("renyi:eigen:0.5:2:1"), ens);
    c.expect(out.violations == 0, "R <=_lambda A violated with p/2 <= q");

    // the q >= 1/4 trace frontier at alpha = 1/2, p = 1
    auto violations_at = [&](double q) {
        InequalityClaim claim = parse_claim("renyi:trace:0.5:1:" + format_double(q));
        int bad = 0;
        for (int i = 0; i < 500; ++i) {
            std::mt19937_64 rng = sample_rng(413, i);
            PsdMat a = sample_psd(rng, 3, 1e-3, 1e3, 0);
            PsdMat b = sample_psd(rng, 3, 1e-3, 1e3, 0);
            PsdMat lhs = renyi_mean(a, b, 0.5, 1.0);
            PsdMat rhs = arithmetic_quasi(a, b, 0.5, q);
            OrderVerdict v = trace_le(lhs, rhs);
            if (!v.holds && v.margin < -10 * decision_tol(lhs, rhs)) ++bad;
        }
        (void)claim;
        return bad;
    };
    c.expect(violations_at(0.2) > 0, "no trace violation found at q = 0.2");
    c.expect(violations_at(0.25) == 0, "trace violation at q = 0.25");
    c.expect(violations_at(0.3) == 0, "trace violation at q = 0.3");
}

// ---- criterion 5: geometric section ----------------------------------------

void crit_geometric(Checker& c) {
    const double grid[6][3] = {{0.3, 1.0, 1.0}, {0.5, 1.0, 2.0}, {0.7, 1.0, 1.5},
                               {0.5, 1.5, 2.0}, {0.3, 2.0, 2.0}, {0.7, 1.5, 1.5}};
    for (const auto& g : grid) {
        EnsembleConfig ens;
        ens.dim = 0;
        ens.count = 200;
        ens.spec_min = 1e-2;
        ens.spec_max = 1e2;
        InequalityClaim claim;
        claim.lhs = MeanSpec{MeanKind::Geometric, g[0], g[1]};
        claim.rhs = MeanSpec{MeanKind::Arithmetic, g[0], g[2]};
        claim.order = OrderKind::Loewner;
        VerifyOutcome out = verify_inequality(claim, ens);
        c.expect(out.violations == 0, "G <= A violated in the sufficiency region");
    }

    SearchBudget ro;
    ro.only_construction = "rank-one-vs-diag";
    auto wlow = find_counterexample(parse_claim("geom:loewner:0.5:0.5:1"), ro);
    c.expect(wlow.has_value(), "no rank-one witness for G with p < 1");

    auto whigh = find_counterexample(parse_claim("geom:loewner:0.5:2:1"));
    c.expect(whigh.has_value(), "no witness for G with p > q");

    for (double p : {0.5, 2.0}) {
        auto w = find_counterexample(parse_claim("geom:loewner:0.4:" + format_double(p) + ":1"));
        c.expect(w.has_value(), "Cor 4.18: no witness for G_p vs the weighted arithmetic mean at p=" +
                                    format_double(p));
    }
}

// ---- criterion 6: spectral geometric ----------------------------------------

void crit_sg(Checker& c) {
    auto w = find_counterexample(parse_claim("sg:chao:0.5:1:1"));
    c.expect(w.has_value(), "no chaotic witness for F(A,B) vs (A+B)/2");
    if (w) {
        c.expect(w->a.rows() == 2, "witness is not 2x2");
        c.expect(w->margin < -1e-6, "witness margin too shallow: " + format_double(w->margin));
    }

    EnsembleConfig ens;
    ens.dim = 0;
    ens.count = 200;
    ens.spec_min = 1e-2;
    ens.spec_max = 1e2;
    VerifyOutcome out = verify_inequality(parse_claim("sg:wlog:0.5:0.9:1"), ens);
    c.expect(out.violations == 0, "SG w-log-majorization violated with p/q <= 2 min(alpha, 1-alpha)");
}

// ---- criterion 7: tilde spectral geometric ----------------------------------

void crit_sgt(Checker& c) {
    auto w = find_counterexample(parse_claim("sgt:near:0.25:1:1"));
    c.expect(w.has_value(), "no near-order witness for SGt at alpha = 0.25");
    if (w) {
        c.expect(w->construction.rfind("riccati-sgt", 0) == 0,
                 "witness not from the y = x^(2a-1) family: " + w->construction);
    }

    EnsembleConfig ens;
    ens.dim = 0;
    ens.count = 200;
    ens.spec_min = 1e-2;
    ens.spec_max = 1e2;
    VerifyOutcome out = verify_inequality(parse_claim("sgt:logmaj:0.5:0.4:1:renyi"), ens);
    c.expect(out.violations == 0, "SGt log-majorization by the Renyi mean violated with p <= alpha q");
}

// ---- criterion 8: perturbation suite -----------------------------------------

void crit_perturb(Checker& c) {
    int points = 0;
    auto check_set = [&](const CoeffSet& cs, const MeanSpec& spec, double x, double y) {
        auto fn = [&](double theta) {
            auto [a0, bt] = family_eval(RotatedPair{x, y}, theta);
            return evaluate_mean(spec, a0, bt).value.mat();
        };
        EntryExpansion o = numeric_coeff_oracle(fn, 2);
        const double pairs[3][2] = {
            {cs.c11, o.quad(0, 0)}, {cs.c22, o.quad(1, 1)}, {cs.c12, o.lin(0, 1)}};
        for (const auto& pr : pairs) {
            const double rel = std::abs(pr[0] - pr[1]) / std::max(1.0, std::abs(pr[0]));
            if (rel >= 1e-4) {
                c.expect(false, "coefficient mismatch (" + cs.lemma_tag + "): closed " +
                                    format_double(pr[0]) + " vs oracle " + format_double(pr[1]));
                return;
            }
        }
        ++points;
    };

    const double alphas[] = {0.2, 0.5, 0.8};
    const double pees[] = {0.3, 0.7, 1.0, 1.5, 2.5};
    const double xs[] = {0.1, 0.5, 2.0, 8.0};
    for (double alpha : alphas) {
        for (double p : pees) {
            for (double x : xs)
                for (double y : xs) {
                    try {
                        check_set(coeffs_arithmetic(alpha, p, x, y), MeanSpec{MeanKind::Arithmetic, alpha, p},
                                  x, y);
                    } catch (const Error&) {
                    }
                }
            for (double x : xs) {
                try {
                    check_set(coeffs_renyi(alpha, p, x), MeanSpec{MeanKind::Renyi, alpha, p}, x, x);
                } catch (const Error&) {
                }
                try {
                    check_set(coeffs_geometric(alpha, p, x), MeanSpec{MeanKind::Geometric, alpha, p}, x, x);
                } catch (const Error&) {
                }
                try {
                    check_set(coeffs_arithmetic_equal(alpha, p, x), MeanSpec{MeanKind::Arithmetic, alpha, p},
                              x, x);
                } catch (const Error&) {
                }
            }
        }
        for (double x : xs)
            for (double y : xs) {
                try {
                    check_set(coeffs_log_euclidean(alpha, x, y), MeanSpec{MeanKind::LogEuclidean, alpha, 1.0},
                              x, y);
                } catch (const Error&) {
                }
            }
    }
    // tilted-family determinant coefficients against the matrices.
    // Exponents stay at or below 1/2 so the neglected theta^{2/p} rung of the
    // expansion does not pollute the finite differences.
    for (double alpha : alphas)
        for (double p : {0.2, 0.3, 0.5})
            for (double q : {0.4, 0.5}) {
                if (p == q) continue;
                const double closed = det_gap_tilted(alpha, p, q);
                auto fn = [&](double t) {
                    auto [a0, bt] = family_eval(TiltedRankOne{}, t);
                    Matrix d = arithmetic_quasi(a0, bt, alpha, q).mat() -
                               arithmetic_quasi(a0, bt, alpha, p).mat();
                    Matrix out = Matrix::Zero(2, 2);
                    out(0, 0) = d(0, 0) * d(1, 1) - d(0, 1) * d(1, 0);
                    return out;
                };
                EntryExpansion o = numeric_coeff_oracle(fn, 2);
                const double rel = std::abs(closed - o.quad(0, 0)) / std::max(1.0, std::abs(closed));
                if (rel >= 1e-4) {
                    c.expect(false, "tilted det coefficient mismatch at alpha=" + format_double(alpha));
                } else {
                    ++points;
                }
            }
    c.expect(points >= 300, "only " + std::to_string(points) + " non-degenerate grid points checked");
    c.log << "    grid points checked: " << points << "\n";
}

// ---- criterion 9: Lie-Trotter-Kato -------------------------------------------

void crit_ltk(Checker& c) {
    for (int i = 0; i < 20; ++i) {
        std::mt19937_64 rng = sample_rng(900, i);
        const int dim = 2 + i % 3;
        const bool deficient = (i % 2 == 1) && dim >= 3;
        PsdMat a = [&] {
            if (!deficient) return sample_psd(rng, dim, 0.25, 4.0, 0);
            // common kernel: nontrivial P0 and s(A) = s(B)
            return sample_psd(rng, dim, 0.25, 4.0, 1);
        }();
        PsdMat b = [&] {
            if (!deficient) return sample_psd(rng, dim, 0.25, 4.0, 0);
            Matrix v = a.support_isometry();
            PsdMat core = sample_psd(rng, a.rank(), 0.25, 4.0, 0);
            return PsdMat(HermMat(v * core.mat() * v.adjoint()));
        }();
        const double alpha = 0.25 + 0.1 * (i % 5);
        for (MeanKind k : {MeanKind::Arithmetic, MeanKind::Harmonic, MeanKind::Geometric,
                           MeanKind::SpectralGeometric, MeanKind::SpectralGeometricTilde,
                           MeanKind::Renyi}) {
            LtkReport rep = ltk_verify(MeanSpec{k, alpha, 1.0}, a, b);
            c.expect(rep.final_gap <= 1e-3, std::string("gap ") + format_double(rep.final_gap) + " for " +
                                                mean_kind_name(k) + " at pair " + std::to_string(i));
            if (k == MeanKind::Geometric || k == MeanKind::Harmonic) {
                c.expect(rep.ratio_bounded, std::string("gap/p unbounded for ") + mean_kind_name(k) +
                                                " at pair " + std::to_string(i));
            }
            if (!c.ok) return;
        }
    }
}

// ---- criterion 10: ordering chain --------------------------------------------

void crit_chain(Checker& c) {
    int violations = 0;
    for (int i = 0; i < 10000; ++i) {
        std::mt19937_64 rng = sample_rng(1000, i);
        const int dim = 2 + i % 3;
        PsdMat x = sample_psd(rng, dim, 1e-2, 1e2, 0);
        PsdMat y = sample_psd(rng, dim, 1e-2, 1e2, 0);
        if (!implication_chain(x, y).consistent()) ++violations;
    }
    c.expect(violations == 0, std::to_string(violations) + " chain violations in 10^4 pairs");

    int checked = 0, agreed = 0;
    for (int i = 0; i < 500; ++i) {
        std::mt19937_64 rng = sample_rng(1001, i);
        PsdMat x = sample_psd(rng, 3, 1e-1, 1e1, 0);
        PsdMat y = sample_psd(rng, 3, 1e-1, 1e1, 0);
        OrderVerdict v = chaotic_le(x, y);
        if (!std::isfinite(v.margin) || std::abs(v.margin) <= 10 * decision_tol(x, y)) continue;
        ++checked;
        Matrix g = geo_mean_alpha(gpower(x, 1e-3), gpower(y, -1e-3), 0.5);
        const bool crit = eigh(HermMat(std::move(g))).eigenvalues(0) <= 1.0 + 1e-8;
        if (crit == v.holds) ++agreed;
    }
    c.expect(checked == agreed, "chaotic criterion disagreement (" + std::to_string(agreed) + "/" +
                                    std::to_string(checked) + ")");
    c.log << "    chaotic-criterion pairs checked: " << checked << "\n";
}

// ---- criterion 11: determinism -------------------------------------------------

#ifndef MATORDER_CLI_PATH
#define MATORDER_CLI_PATH "matorder"
#endif

void crit_determinism(Checker& c) {
    namespace fs = std::filesystem;
    fs::path base = fs::temp_directory_path() / "matorder_determinism";
    std::error_code ec;
    fs::remove_all(base, ec);
    fs::create_directories(base / "run1");
    fs::create_directories(base / "run2");
    for (int run = 1; run <= 2; ++run) {
        std::string cmd = std::string("\"") + MATORDER_CLI_PATH + "\" table 4.1 --seed 7 --out " +
                          (base / ("run" + std::to_string(run))).string() + " > /dev/null 2>&1";
        const int rc = std::system(cmd.c_str());
        c.expect(rc == 0, "table run " + std::to_string(run) + " exited with " + std::to_string(rc));
    }
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string csv1 = slurp(base / "run1" / "table_4_1.csv");
    const std::string csv2 = slurp(base / "run2" / "table_4_1.csv");
    c.expect(!csv1.empty(), "first CSV is empty");
    c.expect(csv1 == csv2, "CSV output differs between identical runs");
}

struct Criterion {
    int id;
    const char* name;
    double budget_s;  // stated runtime bound; 0 = none
    std::function<void(Checker&)> fn;
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::string(argv[i]) == "--only" && i + 1 < argc) only = std::atoi(argv[i + 1]);
    }

    const std::vector<Criterion> criteria = {
        {1, "AGM chain H <= G <= A on 200 seeded PD pairs", 5.0, crit_agm},
        {2, "table 4.1 reproduction (zero mismatches, both devices)", 120.0, crit_table41},
        {3, "LE vs A_q: Loewner witnesses and chaotic sufficiency", 0.0, crit_le},
        {4, "Renyi section: near witness, lambda sufficiency, q >= 1/4 frontier", 0.0, crit_renyi},
        {5, "geometric section: sufficiency grid and necessity devices", 0.0, crit_geometric},
        {6, "spectral geometric: chaotic witness and w-log sufficiency", 0.0, crit_sg},
        {7, "tilde spectral geometric: near witness and log-majorization", 0.0, crit_sgt},
        {8, "perturbation coefficients vs finite-difference oracle", 30.0, crit_perturb},
        {9, "Lie-Trotter-Kato limits at p = 1e-4", 30.0, crit_ltk},
        {10, "implication chain and chaotic criterion over ensembles", 0.0, crit_chain},
        {11, "byte-identical CSV for table 4.1 --seed 7", 0.0, crit_determinism},
    };

    int failures = 0;
    for (const auto& crit : criteria) {
        if (only != 0 && crit.id != only) continue;
        Checker c;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            crit.fn(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (crit.budget_s > 0 && secs > crit.budget_s) {
            c.expect(false, "runtime " + std::to_string(secs) + "s exceeds " +
                                std::to_string(crit.budget_s) + "s");
        }
        std::printf("[%s] criterion %d: %s (%.2fs)\n", c.ok ? "PASS" : "FAIL", crit.id, crit.name,
                    secs);
        if (!c.ok) {
            std::fputs(c.log.str().c_str(), stdout);
            ++failures;
        }
    }
    return failures == 0 ? 0 : 1;
}
