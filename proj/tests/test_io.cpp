#include <doctest.h>

#include "matorder/matrix_io.hpp"
#include "test_helpers.hpp"

using namespace matorder;
using namespace matorder::testing;

TEST_CASE("matrix JSON round-trip preserves entries") {
    std::mt19937_64 rng(51);
    for (int t = 0; t < 10; ++t) {
        Matrix m = random_herm(rng, 2 + t % 3);
        Matrix back = matrix_from_json(json::parse(matrix_to_json(m).dump()));
        CHECK(max_abs_diff(m, back) <= 1e-15 * std::max(1.0, m.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("matrix JSON accepts bare reals and validates Hermiticity") {
    json j = {{"dim", 2}, {"entries", {{1.0, 0.5}, {0.5, 2.0}}}};
    Matrix m = matrix_from_json(j);
    CHECK(m(0, 1).real() == doctest::Approx(0.5));

    json bad = {{"dim", 2}, {"entries", {{1.0, 0.5}, {0.7, 2.0}}}};
    CHECK_THROWS_AS(matrix_from_json(bad), Error);

    json shape = {{"dim", 3}, {"entries", {{1.0, 0.0}, {0.0, 1.0}}}};
    CHECK_THROWS_AS(matrix_from_json(shape), Error);
}

TEST_CASE("mean spec JSON") {
    MeanSpec spec = mean_spec_from_json(json{{"kind", "renyi"}, {"alpha", 0.5}, {"p", 1.0}});
    CHECK(spec.kind == MeanKind::Renyi);
    CHECK(mean_spec_to_json(spec).at("kind") == "renyi");
    CHECK_THROWS_AS(mean_spec_from_json(json{{"kind", "nope"}, {"alpha", 0.5}}), Error);
}

TEST_CASE("verdict JSON carries the sentinel margins as strings") {
    OrderVerdict v;
    v.order = OrderKind::Chaotic;
    v.holds = false;
    v.margin = -std::numeric_limits<double>::infinity();
    v.support_ok = false;
    json j = verdict_to_json(v);
    CHECK(j.at("margin") == "-inf");
    CHECK(j.at("detail").at("support_ok") == false);
}
