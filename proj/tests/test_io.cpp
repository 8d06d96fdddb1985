#include "doctest.h"

#include "qgb/errors.hpp"
#include "qgb/fig2.hpp"
#include "qgb/instances.hpp"
#include "qgb/io.hpp"

#include <cmath>

using namespace qgb;

namespace {

std::string error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

Json small_instance() {
    return parse_json(R"({
  "sample_space": ["a", "b"],
  "prior": [0.5, 0.5],
  "n": 1,
  "mode": "iid_local",
  "spaces": {"te": 1, "tr": 2, "hyp": 2},
  "data_states": {
    "a": {"rows": 2, "cols": 2, "data": [1, 0, 0, 0]},
    "b": {"rows": 2, "cols": 2, "data": [0, 0, 0, 1]}
  },
  "povms": {
    "a": {"w0": {"rows": 2, "cols": 2, "data": [1, 0, 0, 0]}, "w1": {"rows": 2, "cols": 2, "data": [0, 0, 0, 1]}},
    "b": {"w0": {"rows": 2, "cols": 2, "data": [1, 0, 0, 0]}, "w1": {"rows": 2, "cols": 2, "data": [0, 0, 0, 1]}}
  },
  "losses": {
    "w0": {"rows": 2, "cols": 2, "data": [0, 0, 0, 1]},
    "w1": {"a": {"rows": 2, "cols": 2, "data": [1, 0, 0, 0]}, "b": {"rows": 2, "cols": 2, "data": [0, 0, 0, 1]}}
  },
  "mu": 0.5,
  "tau": 0.5
})",
                      "inline");
}

}  // namespace

TEST_CASE("matrix encoding round trip") {
    Mat m(2, 3);
    m << cplx(1, 2), cplx(0, -1), cplx(3.5, 0), cplx(-2, 0.25), cplx(0, 0), cplx(1e-17, 7);
    const Mat back = matrix_from_json(matrix_to_json(m), "m");
    CHECK((back - m).norm() == 0.0);
    const Json bad = parse_json(R"({"rows": 2, "cols": 2, "data": [1, 2, 3]})", "x");
    CHECK(error_of([&] { matrix_from_json(bad, "rho"); }).find("rho/data") != std::string::npos);
    const Json bad_entry = parse_json(R"({"rows": 1, "cols": 1, "data": [[1, 2, 3]]})", "x");
    CHECK(error_of([&] { matrix_from_json(bad_entry, "rho"); }).find("rho/data/0") != std::string::npos);
}

TEST_CASE("states with and without a space wrapper") {
    const Json j = parse_json(
        R"({"rows": 2, "cols": 2, "data": [[0.75, 0], [0, 0], [0, 0], [0.25, 0]], "space": [{"label": "q", "dim": 2}]})", "x");
    const State s = state_from_json(j, "rho");
    CHECK(s.space().factors()[0].label == "q");
    const Json plain = parse_json(R"({"rows": 1, "cols": 1, "data": [1]})", "x");
    CHECK(state_from_json(plain, "rho").space().factors()[0].label == "sys");
    const Json neg = parse_json(R"({"rows": 2, "cols": 2, "data": [1.5, 0, 0, -0.5]})", "x");
    CHECK(error_of([&] { state_from_json(neg, "sigma"); }).find("sigma") != std::string::npos);
    const Json mismatch = parse_json(R"({"rows": 2, "cols": 2, "data": [1, 0, 0, 0], "space": [{"label": "q", "dim": 3}]})", "x");
    CHECK_THROWS_AS(state_from_json(mismatch, "rho"), ConfigError);
}

TEST_CASE("syntax errors report line and column") {
    const std::string text = "{\n  \"prior\": [0.5,\n  0.5,,]\n}";
    const std::string msg = error_of([&] { parse_json(text, "inst.json"); });
    CHECK(msg.rfind("inst.json:3:", 0) == 0);
    CHECK_THROWS_AS(load_json("/nonexistent/qgb.json"), ConfigError);
}

TEST_CASE("instance parsing with defaults") {
    const LearningInstance inst = instance_from_json(small_instance());
    CHECK(inst.hypotheses == std::vector<std::string>{"w0", "w1"});
    CHECK(inst.channels[0][0].kraus().size() == 1);
    CHECK((inst.channels[1][1].kraus()[0] - Mat::Identity(2, 2)).norm() == 0.0);
    CHECK(inst.losses[0][0].matrix() == inst.losses[0][1].matrix());
    CHECK(*inst.mu == 0.5);
    const InducedJoint j = induce(inst);
    CHECK(std::abs(j.p(0, 0) - 0.5) < 1e-12);
    CHECK(std::abs(j.p(1, 1) - 0.5) < 1e-12);
}

TEST_CASE("instance field diagnostics") {
    Json j = small_instance();
    j["losses"]["w1"]["b"]["data"] = Json::array({1, 0, 0});
    CHECK(error_of([&] { instance_from_json(j); }).find("losses/w1/b/data") != std::string::npos);

    j = small_instance();
    j["povms"]["b"]["w1"]["data"] = Json::array({0, 0, 0, 0.5});
    CHECK(error_of([&] { instance_from_json(j); }).find("povms/b") != std::string::npos);

    j = small_instance();
    j["bogus"] = 1;
    CHECK(error_of([&] { instance_from_json(j); }).find("bogus") != std::string::npos);

    j = small_instance();
    j.erase("spaces");
    CHECK(error_of([&] { instance_from_json(j); }).find("spaces") != std::string::npos);

    j = small_instance();
    j["mode"] = "batch";
    CHECK(error_of([&] { instance_from_json(j); }).find("mode") != std::string::npos);

    j = small_instance();
    j["prior"] = Json::array({0.7, 0.7});
    CHECK_THROWS_AS(instance_from_json(j), ConfigError);

    j = small_instance();
    j["losses"].erase("w1");
    CHECK(error_of([&] { instance_from_json(j); }).find("w1") != std::string::npos);
}

TEST_CASE("instance round trip preserves the induced joint") {
    Rng rng(31);
    std::vector<LearningInstance> cases;
    RandomInstanceSpec spec;
    cases.push_back(random_instance(spec, rng));
    spec.mode = InstanceMode::iid_local;
    spec.n = 2;
    cases.push_back(random_instance(spec, rng));
    cases.push_back(build_fig2_instance(default_fig2_config(), 0.7));
    for (const auto& inst : cases) {
        const Json dumped = instance_to_json(inst);
        const LearningInstance back = instance_from_json(parse_json(dumped.dump(2), "dump"));
        const InducedJoint a = induce(inst), b = induce(back);
        REQUIRE(a.joint.size() == b.joint.size());
        for (std::size_t k = 0; k < a.joint.size(); ++k) CHECK(std::abs(a.joint[k] - b.joint[k]) < 1e-15);
        CHECK(std::abs(expected_gen(a, inst) - expected_gen(b, back)) < 1e-15);
        CHECK(instance_to_json(back).dump() == dumped.dump());
    }
}
