#include "doctest.h"
#include "oracles.hpp"

#include "qgb/divergence.hpp"
#include "qgb/errors.hpp"
#include "qgb/random.hpp"

#include <cmath>

using namespace qgb;

namespace {

State diag_state(const std::vector<double>& v) {
    return State(HilbertSpace::single("A", static_cast<int>(v.size())), oracle::diag(v));
}

std::pair<State, State> random_pair(Rng& rng, int d) {
    const HilbertSpace s = HilbertSpace::single("A", d);
    return {random_density(s, d, rng), random_density(s, d, rng)};
}

}  // namespace

TEST_CASE("classical Renyi examples") {
    const std::vector<double> p{0.75, 0.25}, q{0.5, 0.5};
    CHECK(classical_renyi(p, p, 2.0).value == doctest::Approx(0.0));
    CHECK(classical_renyi(p, p, 0.3).value == doctest::Approx(0.0));
    CHECK(classical_renyi(p, q, 2.0).value == doctest::Approx(std::log(1.25)).epsilon(1e-12));
    const std::vector<double> one{1.0, 0.0};
    CHECK(classical_renyi(one, q, 2.0).value == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(classical_renyi(q, one, 2.0).infinite);
    CHECK_FALSE(classical_renyi(q, one, 0.5).infinite);
    CHECK_THROWS_AS(classical_renyi(p, q, 1.0), DomainError);
    CHECK_THROWS_AS(classical_renyi(p, q, 0.0), DomainError);
}

TEST_CASE("classical KL examples and the order-one bracket") {
    const std::vector<double> p{0.75, 0.25}, q{0.5, 0.5};
    const double kl = 0.75 * std::log(1.5) + 0.25 * std::log(0.5);
    CHECK(classical_kl(p, q).value == doctest::Approx(kl).epsilon(1e-12));
    CHECK(classical_kl(p, q).value == doctest::Approx(0.130812).epsilon(1e-5));
    CHECK(classical_kl(p, p).value == 0.0);
    const double lo = classical_renyi(p, q, 1.0 - 1e-4).value;
    const double hi = classical_renyi(p, q, 1.0 + 1e-4).value;
    CHECK(lo <= kl);
    CHECK(kl <= hi);
    CHECK(hi - lo <= 5e-4);
    CHECK(classical_renyi(p, q, 1.0 + 1e-7).value == doctest::Approx(kl).epsilon(1e-12));
}

TEST_CASE("smooth max divergence examples") {
    const std::vector<double> p{0.5, 0.5}, q{0.25, 0.75};
    CHECK(smooth_max_divergence(p, q, 0.0).value == doctest::Approx(std::log(2.0)));
    CHECK(smooth_max_divergence(p, q, 0.5).value == doctest::Approx(std::log(2.0 / 3.0)));
    CHECK(smooth_max_divergence(p, p, 0.3).value == doctest::Approx(0.0));
    CHECK(smooth_max_divergence(p, std::vector<double>{1.0, 0.0}, 0.1).infinite);
    CHECK_THROWS_AS(smooth_max_divergence(p, q, 1.0), DomainError);
}

TEST_CASE("Petz examples") {
    const State r = diag_state({0.75, 0.25}), s = diag_state({0.5, 0.5});
    CHECK(petz_renyi(r, r, 2.0).value == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(petz_renyi(r, s, 2.0).value == doctest::Approx(0.223144).epsilon(1e-6));
    Rng rng(41);
    for (int t = 0; t < 20; ++t) {
        auto [a, b] = random_pair(rng, 2);
        const double ref = -2.0 * std::log((oracle::mpow(a.matrix(), 0.5) * oracle::mpow(b.matrix(), 0.5)).trace().real());
        CHECK(std::abs(petz_renyi(a, b, 0.5).value - ref) < 1e-10);
    }
}

TEST_CASE("sandwiched matches the oracle and the commuting reduction") {
    Rng rng(42);
    for (int t = 0; t < 30; ++t) {
        const int d = 2 + t % 3;
        auto [a, b] = random_pair(rng, d);
        for (double al : {0.3, 0.7, 1.5, 2.0, 3.0}) {
            CHECK(std::abs(sandwiched_renyi(a, b, al).value - oracle::sandwiched(a.matrix(), b.matrix(), al)) < 1e-9);
            CHECK(std::abs(petz_renyi(a, b, al).value - oracle::petz(a.matrix(), b.matrix(), al)) < 1e-9);
        }
    }
    const std::vector<double> p{0.6, 0.3, 0.1}, q{0.2, 0.5, 0.3};
    for (double al : {0.3, 0.5, 2.0})
        CHECK(std::abs(sandwiched_renyi(diag_state(p), diag_state(q), al).value - oracle::renyi(p, q, al)) < 1e-10);
}

TEST_CASE("reverse sandwiched identity and commuting value") {
    Rng rng(43);
    for (int t = 0; t < 20; ++t) {
        auto [a, b] = random_pair(rng, 2);
        const double ref = 0.3 / 0.7 * oracle::sandwiched(b.matrix(), a.matrix(), 0.7);
        CHECK(std::abs(reverse_sandwiched(a, b, 0.3).value - ref) < 1e-10);
    }
    const std::vector<double> p{0.6, 0.4}, q{0.1, 0.9};
    const double classical_rev = 0.3 / 0.7 * oracle::renyi(q, p, 0.7);
    CHECK(std::abs(reverse_sandwiched(diag_state(p), diag_state(q), 0.3).value - classical_rev) < 1e-10);
    // the classical reverse value collapses to the ordinary order-alpha value
    CHECK(std::abs(classical_rev - oracle::renyi(p, q, 0.3)) < 1e-12);
    CHECK_THROWS_AS(reverse_sandwiched(diag_state(p), diag_state(q), 2.0), DomainError);
}

TEST_CASE("sandwiched keeps small eigenvalues at small orders") {
    const std::vector<double> p{0.73, 0.02, 0.25}, q{0.44, 0.22, 0.34};
    for (double a : {0.05, 0.1, 0.3}) {
        CHECK(std::abs(sandwiched_renyi(diag_state(q), diag_state(p), a).value - oracle::renyi(q, p, a)) < 1e-10);
        CHECK(std::abs(reverse_sandwiched(diag_state(p), diag_state(q), 1.0 - a).value - oracle::renyi(p, q, 1.0 - a)) <
              1e-10);
    }
}

TEST_CASE("modified sandwiched branches and continuity at one half") {
    Rng rng(44);
    for (int t = 0; t < 30; ++t) {
        auto [a, b] = random_pair(rng, 2 + t % 3);
        CHECK(std::abs(reverse_sandwiched(a, b, 0.5).value - sandwiched_renyi(a, b, 0.5).value) < 1e-9);
        CHECK(std::abs(modified_sandwiched(a, b, 0.5 - 1e-12).value - modified_sandwiched(a, b, 0.5).value) < 1e-9);
        CHECK(std::abs(modified_sandwiched(a, a, 0.3).value) < 1e-10);
    }
}

TEST_CASE("relative entropy examples") {
    const State r = diag_state({0.75, 0.25}), s = diag_state({0.5, 0.5});
    CHECK(quantum_relative_entropy(r, s).value == doctest::Approx(0.130812).epsilon(1e-5));
    CHECK(std::abs(quantum_relative_entropy(r, r).value) < 1e-14);
    CHECK(quantum_relative_entropy(s, diag_state({1.0, 0.0})).infinite);
    Rng rng(45);
    for (int t = 0; t < 20; ++t) {
        auto [a, b] = random_pair(rng, 3);
        const double d = quantum_relative_entropy(a, b).value;
        CHECK(std::abs(d - oracle::relative_entropy(a.matrix(), b.matrix())) < 1e-10);
        CHECK(petz_renyi(a, b, 1.0 - 1e-4).value <= d + 1e-12);
        CHECK(petz_renyi(a, b, 1.0 + 1e-4).value >= d - 1e-12);
        CHECK(petz_renyi(a, b, 1.0 + 1e-4).value - petz_renyi(a, b, 1.0 - 1e-4).value <= 5e-3);
    }
}

TEST_CASE("support conventions") {
    const State p0 = diag_state({1.0, 0.0}), p1 = diag_state({0.0, 1.0}), mix = diag_state({0.5, 0.5});
    CHECK(petz_renyi(mix, p0, 2.0).infinite);
    CHECK_FALSE(petz_renyi(mix, p0, 0.5).infinite);
    CHECK(petz_renyi(p0, p1, 0.5).infinite);
    CHECK(sandwiched_renyi(p0, p1, 0.7).infinite);
    CHECK(sandwiched_renyi(mix, p0, 1.5).infinite);
    CHECK(petz_renyi(p0, mix, 2.0).value == doctest::Approx(std::log(2.0)));
    CHECK(sandwiched_renyi(p0, mix, 2.0).value == doctest::Approx(std::log(2.0)));
}

TEST_CASE("nonnegativity and monotonicity in the order") {
    Rng rng(46);
    const std::vector<double> grid{0.2, 0.4, 0.6, 0.8, 0.95, 1.05, 1.3, 1.7, 2.0, 2.5, 3.0};
    for (int t = 0; t < 200; ++t) {
        auto [a, b] = random_pair(rng, 2 + t % 3);
        double prev_p = -1, prev_s = -1;
        for (double al : grid) {
            const double p = petz_renyi(a, b, al).value;
            const double s = sandwiched_renyi(a, b, al).value;
            CHECK(p >= -1e-9);
            CHECK(s >= -1e-9);
            CHECK(p >= prev_p - 1e-9);
            CHECK(s >= prev_s - 1e-9);
            CHECK(s <= p + 1e-9);
            CHECK(modified_sandwiched(a, b, al).value <= p + 1e-9);
            prev_p = p;
            prev_s = s;
        }
    }
}

TEST_CASE("additivity over tensor products") {
    Rng rng(47);
    for (int t = 0; t < 40; ++t) {
        auto [a, b] = random_pair(rng, 2);
        auto [c, d] = random_pair(rng, 2);
        const State ac = tensor(a, c), bd = tensor(b, d);
        for (double al : {0.4, 0.8, 1.5, 2.5}) {
            CHECK(std::abs(petz_renyi(ac, bd, al).value - petz_renyi(a, b, al).value - petz_renyi(c, d, al).value) < 1e-9);
            CHECK(std::abs(sandwiched_renyi(ac, bd, al).value - sandwiched_renyi(a, b, al).value -
                           sandwiched_renyi(c, d, al).value) < 1e-9);
        }
    }
}

TEST_CASE("data processing under random channels") {
    Rng rng(48);
    for (int t = 0; t < 30; ++t) {
        const HilbertSpace in = HilbertSpace::single("A", 3), out = HilbertSpace::single("B", 2);
        const Channel ch = random_cptp(in, out, 2, rng);
        const State a = random_density(in, 3, rng), b = random_density(in, 3, rng);
        const State ca = ch.apply(a), cb = ch.apply(b);
        for (double al : {0.5, 0.8, 1.5, 3.0})
            CHECK(sandwiched_renyi(ca, cb, al).value <= sandwiched_renyi(a, b, al).value + 1e-8);
        for (double al : {0.2, 0.6, 1.4, 2.0})
            CHECK(petz_renyi(ca, cb, al).value <= petz_renyi(a, b, al).value + 1e-8);
        for (double al : {0.1, 0.3, 0.7, 2.0})
            CHECK(modified_sandwiched(ca, cb, al).value <= modified_sandwiched(a, b, al).value + 1e-8);
    }
}

TEST_CASE("variational objective") {
    Rng rng(49);
    for (int t = 0; t < 50; ++t) {
        const int d = 2 + t % 3;
        auto [a, b] = random_pair(rng, d);
        const HilbertSpace& s = a.space();
        const Observable h = random_hermitian(s, 3.0, rng);
        for (double al : {0.3, 0.7, 1.5, 2.5}) {
            const double v = variational_objective(a, b, al, h);
            CHECK(v <= petz_renyi(a, b, al).value + 1e-9);
            CHECK(v <= modified_sandwiched(a, b, al).value + 1e-9);
            const Observable hs(s, h.matrix() + 7.5 * Mat::Identity(d, d));
            CHECK(std::abs(variational_objective(a, b, al, hs) - v) < 1e-10);
        }
        CHECK(std::abs(variational_objective(a, b, 0.5, Observable(s, 4.0 * Mat::Identity(d, d)))) < 1e-12);
    }
    const std::vector<double> p{0.5, 0.3, 0.2}, q{0.2, 0.3, 0.5};
    const State r = diag_state(p), sg = diag_state(q);
    const Observable hopt(r.space(), oracle::diag({std::log(p[0] / q[0]), std::log(p[1] / q[1]), std::log(p[2] / q[2])}));
    for (double al : {0.4, 2.0}) CHECK(std::abs(variational_objective(r, sg, al, hopt) - oracle::renyi(p, q, al)) < 1e-6);
}
