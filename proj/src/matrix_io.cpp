#include "matorder/matrix_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace matorder {

json matrix_to_json(const Matrix& m) {
    json entries = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back({m(i, j).real(), m(i, j).imag()});
        }
        entries.push_back(std::move(row));
    }
    return json{{"dim", m.rows()}, {"entries", std::move(entries)}};
}

Matrix matrix_from_json(const json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("entries")) {
        throw Error(ErrorKind::ParseError, "matrix JSON needs {dim, entries}");
    }
    const int n = j.at("dim").get<int>();
    if (n < 1) throw Error(ErrorKind::ParseError, "dim must be >= 1");
    const json& entries = j.at("entries");
    if (!entries.is_array() || static_cast<int>(entries.size()) != n) {
        throw Error(ErrorKind::ParseError, "entries must be a dim x dim array");
    }
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        const json& row = entries.at(i);
        if (!row.is_array() || static_cast<int>(row.size()) != n) {
            throw Error(ErrorKind::ParseError, "entries must be a dim x dim array");
        }
        for (int jj = 0; jj < n; ++jj) {
            const json& e = row.at(jj);
            if (e.is_number()) {
                m(i, jj) = Complex(e.get<double>(), 0.0);
            } else if (e.is_array() && e.size() == 2) {
                m(i, jj) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
            } else {
                throw Error(ErrorKind::ParseError, "entry must be [re, im] or a real number");
            }
        }
    }
    if (!m.allFinite()) throw Error(ErrorKind::ParseError, "non-finite entries");
    const double herm_err = (m - m.adjoint().eval()).cwiseAbs().maxCoeff();
    if (herm_err > 1e-8 * std::max(1.0, m.cwiseAbs().maxCoeff())) {
        throw Error(ErrorKind::ParseError,
                    "matrix is not Hermitian within 1e-8 (deviation " + std::to_string(herm_err) + ")");
    }
    return m;
}

HermMat herm_from_json(const json& j) { return HermMat(matrix_from_json(j)); }

PsdMat psd_from_json(const json& j, double support_tol) {
    return PsdMat(herm_from_json(j), support_tol);
}

Matrix matrix_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error(ErrorKind::ParseError, path + ": " + e.what());
    }
    return matrix_from_json(j);
}

json mean_spec_to_json(const MeanSpec& spec) {
    if (spec.kind == MeanKind::KuboAndo) {
        throw Error(ErrorKind::InvalidInput, "kubo-ando representing functions are not serializable");
    }
    json j{{"kind", mean_kind_name(spec.kind)}, {"alpha", spec.alpha}};
    if (spec.kind != MeanKind::LogEuclidean) j["p"] = spec.p;
    return j;
}

MeanSpec mean_spec_from_json(const json& j) {
    MeanSpec spec;
    auto kind = parse_mean_kind(j.at("kind").get<std::string>());
    if (!kind) throw Error(ErrorKind::ParseError, "unknown mean kind");
    spec.kind = *kind;
    spec.alpha = j.at("alpha").get<double>();
    spec.p = j.value("p", 1.0);
    spec.validate();
    return spec;
}

json mean_result_to_json(const MeanResult& r) {
    json j;
    j["value"] = matrix_to_json(r.value.mat());
    j["support_rank"] = r.support_note.rank;
    if (!r.regularization_trace.empty()) {
        json tr = json::array();
        for (const auto& step : r.regularization_trace) {
            tr.push_back({{"eps", step.eps}, {"delta", step.delta}});
        }
        j["regularization_trace"] = std::move(tr);
    }
    return j;
}

json verdict_to_json(const OrderVerdict& v) {
    json j;
    j["order"] = order_kind_name(v.order);
    j["holds"] = v.holds;
    if (std::isfinite(v.margin)) {
        j["margin"] = v.margin;
    } else {
        j["margin"] = v.margin > 0 ? "inf" : "-inf";
    }
    json detail;
    detail["support_ok"] = v.support_ok;
    detail["boundary"] = v.boundary;
    if (v.fail_index >= 0) detail["fail_index"] = v.fail_index;
    if (!v.note.empty()) detail["note"] = v.note;
    j["detail"] = std::move(detail);
    return j;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace matorder
