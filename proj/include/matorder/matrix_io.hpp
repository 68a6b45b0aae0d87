#pragma once

#include <json.hpp>
#include <string>

#include "matorder/linalg.hpp"
#include "matorder/means.hpp"
#include "matorder/orders.hpp"

namespace matorder {

using json = nlohmann::json;

/// Matrix schema: {"dim": n, "entries": [[[re,im],...],...]} row-major.
/// Hermiticity is validated to 1e-8 on load, then the matrix is symmetrized.
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

HermMat herm_from_json(const json& j);
PsdMat psd_from_json(const json& j, double support_tol = kDefaultSupportTol);
Matrix matrix_from_file(const std::string& path);

/// MeanSpec schema: {"kind":"renyi","alpha":0.5,"p":1.0}. KuboAndo rep_fn is
/// not serializable and is rejected.
json mean_spec_to_json(const MeanSpec& spec);
MeanSpec mean_spec_from_json(const json& j);

json mean_result_to_json(const MeanResult& r);

/// Verdict schema: {"order":"near","holds":false,"margin":-0.031,"detail":{...}}.
/// Non-finite margins are emitted as the strings "inf" / "-inf".
json verdict_to_json(const OrderVerdict& v);

std::string format_double(double v);  // shortest round-trip-stable form

}  // namespace matorder
