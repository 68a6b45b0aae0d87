#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "matorder/lab.hpp"
#include "matorder/matrix_io.hpp"
#include "matorder/perturb.hpp"

namespace py = pybind11;
using namespace matorder;

namespace {

PsdMat as_psd(const Matrix& m) { return PsdMat(HermMat(m)); }

MeanSpec make_spec(const std::string& kind, double alpha, double p) {
    auto k = parse_mean_kind(kind);
    if (!k) throw Error(ErrorKind::ParseError, "unknown mean kind '" + kind + "'");
    MeanSpec spec{*k, alpha, p};
    spec.validate();
    return spec;
}

py::dict verdict_dict(const OrderVerdict& v) {
    py::dict d;
    d["order"] = order_kind_name(v.order);
    d["holds"] = v.holds;
    d["margin"] = v.margin;
    d["boundary"] = v.boundary;
    d["support_ok"] = v.support_ok;
    if (v.fail_index >= 0) d["fail_index"] = v.fail_index;
    if (!v.note.empty()) d["note"] = v.note;
    return d;
}

py::dict witness_dict(const Witness& w) {
    py::dict d;
    d["a"] = w.a;
    d["b"] = w.b;
    d["claim"] = w.claim.to_string();
    d["margin"] = w.margin;
    d["construction"] = w.construction;
    py::dict params;
    for (const auto& [k, v] : w.params) params[py::str(k)] = v;
    d["params"] = params;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "quasi matrix means of PSD matrices, matrix orderings, and the comparison tables";

    py::register_exception<Error>(m, "MatorderError");

    m.def(
        "mean",
        [](const std::string& kind, double alpha, double p, const Matrix& a, const Matrix& b) {
            MeanResult r = evaluate_mean(make_spec(kind, alpha, p), as_psd(a), as_psd(b));
            return r.value.mat();
        },
        py::arg("kind"), py::arg("alpha"), py::arg("p"), py::arg("a"), py::arg("b"),
        "Evaluate a quasi matrix mean; returns the dense value.");

    m.def(
        "kubo_ando",
        [](const Matrix& a, const Matrix& b, const std::function<double(double)>& f) {
            return kubo_ando(as_psd(a), as_psd(b), f).value.mat();
        },
        py::arg("a"), py::arg("b"), py::arg("rep_fn"),
        "Kubo-Ando mean for a representing function with rep_fn(1) = 1.");

    m.def(
        "order",
        [](const std::string& kind, const Matrix& x, const Matrix& y) {
            auto k = parse_order_kind(kind);
            if (!k) throw Error(ErrorKind::ParseError, "unknown order kind '" + kind + "'");
            return verdict_dict(check_order(*k, as_psd(x), as_psd(y)));
        },
        py::arg("kind"), py::arg("x"), py::arg("y"));

    m.def(
        "implication_chain",
        [](const Matrix& x, const Matrix& y) {
            ChainReport rep = implication_chain(as_psd(x), as_psd(y));
            py::list verdicts;
            for (const auto& v : rep.verdicts) verdicts.append(verdict_dict(v));
            py::dict d;
            d["verdicts"] = verdicts;
            d["consistent"] = rep.consistent();
            return d;
        },
        py::arg("x"), py::arg("y"));

    m.def(
        "support_projection",
        [](const Matrix& a) { return support(as_psd(a)).mat.mat(); }, py::arg("a"));

    m.def(
        "gpower", [](const Matrix& a, double r) { return gpower(as_psd(a), r).mat(); },
        py::arg("a"), py::arg("r"), "Generalized power (support convention at r = 0).");

    m.def(
        "find_counterexample",
        [](const std::string& claim, std::uint64_t seed) -> py::object {
            auto w = find_counterexample(parse_claim(claim), SearchBudget{}, seed);
            if (!w) return py::none();
            return witness_dict(*w);
        },
        py::arg("claim"), py::arg("seed") = kDefaultSeed);

    m.def(
        "verify_inequality",
        [](const std::string& claim, int count, int dim, std::uint64_t seed) {
            EnsembleConfig ens;
            ens.count = count;
            ens.dim = dim;
            ens.seed = seed;
            VerifyOutcome out = verify_inequality(parse_claim(claim), ens);
            py::dict d;
            d["samples"] = out.samples;
            d["violations"] = out.violations;
            d["min_margin"] = out.min_margin;
            return d;
        },
        py::arg("claim"), py::arg("count") = 200, py::arg("dim") = 0, py::arg("seed") = kDefaultSeed);

    m.def(
        "ltk",
        [](const std::string& kind, double alpha, const Matrix& a, const Matrix& b, double tol) {
            LtkReport rep = ltk_verify(make_spec(kind, alpha, 1.0), as_psd(a), as_psd(b), {}, tol);
            py::dict d;
            d["p"] = rep.p_ladder;
            d["gaps"] = rep.gaps;
            d["ratios"] = rep.ratios;
            d["final_gap"] = rep.final_gap;
            d["converged"] = rep.converged;
            return d;
        },
        py::arg("kind"), py::arg("alpha"), py::arg("a"), py::arg("b"), py::arg("tol") = 1e-3);

    m.def(
        "condition_table",
        [](const std::string& section) {
            const ConditionTable& t = condition_table(section);
            py::list rows;
            for (const auto& r : t.rows) {
                py::dict d;
                d["label"] = r.label;
                d["order"] = order_kind_name(r.order);
                d["status"] = row_status_name(r.status);
                d["sufficient"] = r.sufficient_text;
                d["necessary"] = r.necessary_text;
                rows.append(d);
            }
            return rows;
        },
        py::arg("section"));

    m.def(
        "coeffs",
        [](const std::string& lemma, double alpha, double p, double x, double y) {
            CoeffSet cs;
            if (lemma == "3.3") cs = coeffs_arithmetic(alpha, p, x, y);
            else if (lemma == "3.4") cs = coeffs_log_euclidean(alpha, x, y);
            else if (lemma == "3.5") cs = coeffs_renyi(alpha, p, x);
            else if (lemma == "4.17") cs = coeffs_geometric(alpha, p, x);
            else if (lemma == "4.6") cs = coeffs_arithmetic_equal(alpha, p, x);
            else throw Error(ErrorKind::ParseError, "unknown lemma '" + lemma + "'");
            py::dict d;
            d["c11"] = cs.c11;
            d["c22"] = cs.c22;
            d["c12"] = cs.c12;
            d["base22"] = cs.base22;
            d["lemma"] = cs.lemma_tag;
            return d;
        },
        py::arg("lemma"), py::arg("alpha"), py::arg("p"), py::arg("x"), py::arg("y") = 1.0);

    m.attr("DEFAULT_SEED") = kDefaultSeed;
}
