#include "doctest.h"
#include "oracles.hpp"

#include "qgb/errors.hpp"
#include "qgb/framework.hpp"
#include "qgb/instances.hpp"

#include <cmath>
#include <map>

using namespace qgb;

namespace {

double scalar_gen(const std::vector<double>& prior, int n, const std::vector<std::vector<double>>& values, int w, int s) {
    const int k = static_cast<int>(prior.size());
    int num_s = 1;
    for (int i = 0; i < n; ++i) num_s *= k;
    auto avg = [&](int t) {
        double v = 0.0, p = 1.0;
        for (int i = 0; i < n; ++i) {
            const int z = t % k;
            t /= k;
            v += values[w][z];
            p *= prior[z];
        }
        return std::pair{v / n, p};
    };
    double expected = 0.0;
    for (int t = 0; t < num_s; ++t) {
        const auto [v, p] = avg(t);
        expected += p * v;
    }
    return expected - avg(s).first;
}

LearningInstance trivial_learner(const std::vector<double>& prior, const std::vector<State>& data, const Mat& loss) {
    LearningInstance inst;
    inst.prior = prior;
    for (std::size_t z = 0; z < prior.size(); ++z) inst.sample_space.push_back("z" + std::to_string(z));
    inst.hypotheses = {"only"};
    inst.te = HilbertSpace::single("te", 2);
    inst.tr = HilbertSpace::single("tr", 2);
    inst.hyp = HilbertSpace::single("hyp", 2);
    inst.data_states = data;
    for (std::size_t z = 0; z < prior.size(); ++z)
        inst.povms.emplace_back(inst.tr, std::vector<PovmElement>{{"only", Observable::identity(inst.tr)}});
    inst.channels = {std::vector<Channel>(prior.size(), Channel::identity(inst.tr, inst.hyp))};
    inst.losses = {std::vector<Observable>(prior.size(), Observable(inst.te.tensor(inst.hyp), loss))};
    return inst;
}

}  // namespace

TEST_CASE("trivial learner reproduces the data states") {
    Rng rng(1);
    const HilbertSpace tt = HilbertSpace::single("te", 2).tensor(HilbertSpace::single("tr", 2));
    const std::vector<State> data{random_density(tt, 4, rng), random_density(tt, 4, rng)};
    const LearningInstance inst = trivial_learner({0.3, 0.7}, data, Mat::Identity(4, 4));
    const InducedJoint j = induce(inst);
    CHECK(j.p(0, 0) == doctest::Approx(0.3));
    CHECK(j.p(0, 1) == doctest::Approx(0.7));
    for (int s = 0; s < 2; ++s) CHECK((j.pairs[0][s].sigma.matrix() - data[s].matrix()).norm() < 1e-12);
    CHECK(empirical_loss(j, inst, 0, 0) == doctest::Approx(1.0));
    CHECK(std::abs(expected_gen(j, inst)) < 1e-12);
}

TEST_CASE("zero loss gives zero losses") {
    Rng rng(2);
    const HilbertSpace tt = HilbertSpace::single("te", 2).tensor(HilbertSpace::single("tr", 2));
    const LearningInstance inst = trivial_learner({0.5, 0.5}, {random_density(tt, 4, rng), random_density(tt, 4, rng)}, Mat::Zero(4, 4));
    const InducedJoint j = induce(inst);
    CHECK(empirical_loss(j, inst, 0, 1) == 0.0);
    CHECK(true_loss_new(j, inst, 0) == 0.0);
}

TEST_CASE("induced joint invariants on random instances") {
    Rng rng(3);
    for (int t = 0; t < 20; ++t) {
        RandomInstanceSpec spec;
        spec.num_w = 2 + t % 2;
        spec.num_z = 2 + t % 3;
        const LearningInstance inst = random_instance(spec, rng);
        const InducedJoint j = induce(inst);
        double total = 0.0;
        for (int s = 0; s < j.num_s; ++s) {
            double row = 0.0;
            for (int w = 0; w < j.num_w; ++w) {
                row += j.pairs[w][s].p_w_given_s;
                CHECK(j.pairs[w][s].p_w_given_s >= -1e-12);
            }
            CHECK(std::abs(row - 1.0) < 1e-10);
        }
        for (double p : j.joint) total += p;
        CHECK(std::abs(total - 1.0) < 1e-10);
        for (int w = 0; w < j.num_w; ++w) {
            if (!j.in_support(w)) continue;
            Mat mix = Mat::Zero(2, 2);
            for (int s = 0; s < j.num_s; ++s)
                if (j.pairs[w][s].present) mix += j.posterior(s, w) * j.pairs[w][s].sigma_hyp.matrix();
            CHECK((mix - j.sigma_hyp_w[w]->matrix()).norm() < 1e-10);
            CHECK(std::abs(j.sigma_hyp_w[w]->matrix().trace().real() - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("post-measurement state matches a direct oracle") {
    Rng rng(4);
    RandomInstanceSpec spec;
    const LearningInstance inst = random_instance(spec, rng);
    const InducedJoint j = induce(inst);
    for (int w = 0; w < 2; ++w)
        for (int s = 0; s < 2; ++s) {
            const Mat e = inst.effect(s, w);
            const Mat sq = kron(Mat::Identity(2, 2), oracle::mpow(e, 0.5));
            const Mat rho = inst.data_state(s);
            const double p = (kron(Mat::Identity(2, 2), e) * rho).trace().real();
            CHECK(j.pairs[w][s].p_w_given_s == doctest::Approx(p).epsilon(1e-12));
            const Mat post = sq * rho * sq / p;
            Mat out = Mat::Zero(4, 4);
            for (const auto& k : inst.channels[w][s].kraus()) {
                const Mat kk = kron(Mat::Identity(2, 2), k);
                out += kk * post * kk.adjoint();
            }
            CHECK((out - j.pairs[w][s].sigma.matrix()).norm() < 1e-10);
        }
}

TEST_CASE("product data states give product post-measurement states") {
    Rng rng(5);
    RandomInstanceSpec spec;
    spec.product_data = true;
    const LearningInstance inst = random_instance(spec, rng);
    const InducedJoint j = induce(inst);
    for (int w = 0; w < 2; ++w)
        for (int s = 0; s < 2; ++s) {
            const Mat prod = kron(j.rho_te[s].matrix(), j.pairs[w][s].sigma_hyp.matrix());
            CHECK((prod - j.pairs[w][s].sigma.matrix()).norm() < 1e-10);
        }
}

TEST_CASE("new and old true losses coincide for s-independent hypothesis states") {
    Rng rng(6);
    const HilbertSpace tt = HilbertSpace::single("te", 2).tensor(HilbertSpace::single("tr", 2));
    const State fixed_tr = random_density(HilbertSpace::single("tr", 2), 2, rng);
    std::vector<State> data;
    for (int z = 0; z < 2; ++z) data.push_back(tensor(random_density(HilbertSpace::single("te", 2), 2, rng), fixed_tr));
    LearningInstance inst = trivial_learner({0.4, 0.6}, data, random_hermitian(HilbertSpace::single("x", 4), 1.0, rng).matrix());
    const InducedJoint j = induce(inst);
    CHECK(true_loss_new(j, inst, 0) == doctest::Approx(true_loss_old(j, inst, 0)).epsilon(1e-12));
    CHECK(std::abs(expected_gen(j, inst)) < 1e-12);
}

TEST_CASE("classical embedding matches the scalar generalization error") {
    Rng rng(7);
    for (int n : {1, 2}) {
        for (int t = 0; t < 10; ++t) {
            const std::vector<double> prior = random_simplex(2, rng);
            const int num_s = n == 1 ? 2 : 4;
            std::vector<std::vector<double>> cond;
            for (int s = 0; s < num_s; ++s) cond.push_back(random_simplex(3, rng));
            std::vector<std::vector<double>> values{{0.1, -0.4}, {0.9, 0.2}, {-0.7, 0.5}};
            const LearningInstance inst = classical_embedding(prior, n, cond, values);
            const InducedJoint j = induce(inst);
            double eg = 0.0;
            for (int w = 0; w < 3; ++w)
                for (int s = 0; s < num_s; ++s) {
                    // tuples are stored with z_1 most significant; the oracle reads z_1 least significant
                    const int rev = n == 1 ? s : (s % 2) * 2 + s / 2;
                    const double ref = scalar_gen(prior, n, values, w, rev);
                    CHECK(std::abs(gen_error(j, inst, w, s) - ref) < 1e-12);
                    CHECK(std::abs(gen_error_old(j, inst, w, s) - ref) < 1e-12);
                    eg += j.p(w, s) * ref;
                }
            CHECK(std::abs(expected_gen(j, inst) - eg) < 1e-12);
        }
    }
}

TEST_CASE("fully independent instance has zero generalization error") {
    const LearningInstance inst = classical_embedding({0.3, 0.7}, 1, {{0.2, 0.8}, {0.2, 0.8}}, {{1.0, -1.0}, {0.5, 0.25}});
    const InducedJoint j = induce(inst);
    CHECK(std::abs(expected_gen(j, inst)) < 1e-12);
}

TEST_CASE("n-copy local layout") {
    Rng rng(8);
    RandomInstanceSpec spec;
    spec.mode = InstanceMode::iid_local;
    spec.n = 2;
    spec.kraus = 1;
    const LearningInstance inst = random_instance(spec, rng);
    CHECK(inst.num_s() == 4);
    const InducedJoint j = induce(inst);
    for (int s = 0; s < 4; ++s) {
        const auto d = inst.digits(s);
        const HilbertSpace tt = inst.te.tensor(inst.tr);
        const Mat te0 = partial_trace(inst.data_states[d[0]].matrix(), tt, {"te"});
        const Mat te1 = partial_trace(inst.data_states[d[1]].matrix(), tt, {"te"});
        CHECK((j.rho_te[s].matrix() - kron(te0, te1)).norm() < 1e-12);
    }
    // L-hat for a product test/hyp state equals the average of local expectations
    const State a = random_density(inst.te.tensor(inst.hyp), 4, rng);
    const State b = random_density(inst.te.tensor(inst.hyp), 4, rng);
    const std::vector<int> perm{0, 2, 1, 3};
    const Mat ab = permute_factors(kron(a.matrix(), b.matrix()), {2, 2, 2, 2}, perm);
    for (int w = 0; w < 2; ++w)
        for (int s = 0; s < 4; ++s) {
            const auto d = inst.digits(s);
            const double direct = (inst.loss(w, s) * ab).trace().real();
            const double ref = 0.5 * (inst.losses[w][d[0]].expectation(a.matrix()) + inst.losses[w][d[1]].expectation(b.matrix()));
            CHECK(std::abs(direct - ref) < 1e-12);
        }
}

TEST_CASE("sampling from the joint") {
    Rng rng(9);
    RandomInstanceSpec spec;
    spec.num_w = 3;
    const LearningInstance inst = random_instance(spec, rng);
    const InducedJoint j = induce(inst);
    const auto a = sample_ws(j, 10000, 17), b = sample_ws(j, 10000, 17);
    CHECK(a == b);
    std::map<std::pair<int, int>, int> freq;
    for (const auto& x : a) ++freq[x];
    int best = 0;
    for (std::size_t k = 1; k < j.joint.size(); ++k)
        if (j.joint[k] > j.joint[best]) best = static_cast<int>(k);
    const double p = j.joint[best];
    const double f = freq[{best / j.num_s, best % j.num_s}] / 10000.0;
    CHECK(std::abs(f - p) <= 3.0 * std::sqrt(p * (1 - p) / 10000.0));

    const LearningInstance single = classical_embedding({1.0, 0.0}, 1, {{1.0, 0.0}, {1.0, 0.0}}, {{0.0, 0.0}, {1.0, 1.0}});
    const InducedJoint js = induce(single);
    for (const auto& x : sample_ws(js, 100, 3)) CHECK(x == std::pair{0, 0});
}

TEST_CASE("configuration errors") {
    LearningInstance inst = classical_embedding({0.5, 0.5}, 1, {{0.5, 0.5}, {0.5, 0.5}}, {{0.0, 1.0}, {1.0, 0.0}});
    inst.prior = {0.5, 0.6};
    CHECK_THROWS_AS(induce(inst), ConfigError);
    inst.prior = {0.5, 0.5};
    inst.losses[0].pop_back();
    CHECK_THROWS_AS(induce(inst), ConfigError);
    CHECK_THROWS_AS(instance_mode_from_string("batch"), ConfigError);
}

TEST_CASE("certificates and audit") {
    LearningInstance inst = classical_embedding({0.5, 0.5}, 1, {{0.9, 0.1}, {0.2, 0.8}}, {{1.0, -1.0}, {0.5, 0.25}});
    const SubGaussianCert c = effective_cert(inst);
    CHECK(c.source == CertSource::spectral_width);
    CHECK(c.tau == doctest::Approx(1.0));
    CHECK(c.mu == 0.0);
    const InducedJoint j = induce(inst);
    CHECK(audit_instance(j, inst).empty());
    inst.tau = 0.1;
    CHECK(effective_cert(inst).tau == 0.1);
    CHECK_FALSE(audit_instance(j, inst).empty());
}
