#include "qgb/framework.hpp"

#include "qgb/errors.hpp"
#include "qgb/parallel.hpp"
#include "qgb/random.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qgb {

std::string to_string(InstanceMode m) {
    return m == InstanceMode::general ? "general" : "iid_local";
}

InstanceMode instance_mode_from_string(const std::string& s) {
    if (s == "general") return InstanceMode::general;
    if (s == "iid_local") return InstanceMode::iid_local;
    throw ConfigError("unknown mode '" + s + "' (expected general or iid_local)");
}

namespace {

int ipow(int b, int e) {
    long long r = 1;
    for (int i = 0; i < e; ++i) {
        r *= b;
        if (r > (1LL << 30)) throw ConfigError("sample space too large to enumerate");
    }
    return static_cast<int>(r);
}

Mat kron_all(const std::vector<Mat>& ms) {
    Mat out = Mat::Identity(1, 1);
    for (const auto& m : ms) out = kron(out, m);
    return out;
}

Mat sqrt_psd(const Mat& e) {
    const Eig eig = herm_eig(hermitize(e));
    return apply_spectral(eig, [](double x) { return std::sqrt(std::max(x, 0.0)); }, false);
}

const HilbertSpace& pair_space(int a, int b, const char* la, const char* lb, HilbertSpace& storage) {
    storage = HilbertSpace({Factor{la, a}, Factor{lb, b}}, 1 << 20);
    return storage;
}

}  // namespace

int LearningInstance::num_s() const {
    return ipow(num_z(), n);
}

std::vector<int> LearningInstance::digits(int s) const {
    std::vector<int> d(n);
    for (int i = n - 1; i >= 0; --i) {
        d[i] = s % num_z();
        s /= num_z();
    }
    return d;
}

double LearningInstance::prior_of(int s) const {
    double p = 1.0;
    for (int z : digits(s)) p *= prior[z];
    return p;
}

int LearningInstance::te_dim() const {
    return mode == InstanceMode::iid_local ? ipow(te.dim(), n) : te.dim();
}

int LearningInstance::tr_dim() const {
    return mode == InstanceMode::iid_local ? ipow(tr.dim(), n) : tr.dim();
}

int LearningInstance::hyp_dim() const {
    return mode == InstanceMode::iid_local ? ipow(hyp.dim(), n) : hyp.dim();
}

Mat LearningInstance::data_state(int s) const {
    if (mode == InstanceMode::general) return data_states[s].matrix();
    const auto d = digits(s);
    std::vector<Mat> parts;
    std::vector<int> dims;
    for (int z : d) {
        parts.push_back(data_states[z].matrix());
        dims.push_back(te.dim());
        dims.push_back(tr.dim());
    }
    std::vector<int> perm;
    for (int i = 0; i < n; ++i) perm.push_back(2 * i);
    for (int i = 0; i < n; ++i) perm.push_back(2 * i + 1);
    return permute_factors(kron_all(parts), dims, perm);
}

Mat LearningInstance::effect(int s, int w) const {
    for (const auto& el : povms[s].elements())
        if (el.outcome == hypotheses[w]) return el.effect.matrix();
    return Mat::Zero(tr_dim(), tr_dim());
}

std::vector<Mat> LearningInstance::kraus(int w, int s) const {
    if (mode == InstanceMode::general) return channels[w][s].kraus();
    std::vector<Mat> acc{Mat::Identity(1, 1)};
    for (int z : digits(s)) {
        std::vector<Mat> next;
        for (const auto& a : acc)
            for (const auto& k : channels[w][z].kraus()) next.push_back(kron(a, k));
        acc = std::move(next);
    }
    return acc;
}

Mat LearningInstance::loss(int w, int s) const {
    if (mode == InstanceMode::general) return losses[w][s].matrix();
    const auto d = digits(s);
    if (n == 1) return losses[w][d[0]].matrix();
    const int dt = te.dim(), dh = hyp.dim();
    std::vector<int> natural_dims;
    for (int i = 0; i < n; ++i) natural_dims.push_back(dt);
    for (int i = 0; i < n; ++i) natural_dims.push_back(dh);
    const int rest = ipow(dt * dh, n - 1);
    Mat total = Mat::Zero(te_dim() * hyp_dim(), te_dim() * hyp_dim());
    for (int i = 0; i < n; ++i) {
        std::vector<int> cur{i, n + i};
        for (int j = 0; j < n; ++j)
            if (j != i) cur.push_back(j);
        for (int j = 0; j < n; ++j)
            if (j != i) cur.push_back(n + j);
        std::vector<int> cur_dims, perm(2 * n);
        for (int f : cur) cur_dims.push_back(natural_dims[f]);
        for (int k = 0; k < 2 * n; ++k)
            perm[k] = static_cast<int>(std::find(cur.begin(), cur.end(), k) - cur.begin());
        const Mat m = kron(losses[w][d[i]].matrix(), Mat::Identity(rest, rest));
        total += permute_factors(m, cur_dims, perm);
    }
    return total / static_cast<double>(n);
}

void LearningInstance::validate() const {
    if (sample_space.empty()) throw ConfigError("sample_space is empty");
    if (prior.size() != sample_space.size()) throw ConfigError("prior length does not match sample_space");
    double sum = 0.0;
    for (double p : prior) {
        if (!(p >= 0.0)) throw ConfigError("prior has a negative entry");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-10) throw ConfigError("prior does not sum to 1");
    if (n < 1) throw ConfigError("n must be positive");
    if (hypotheses.empty()) throw ConfigError("hypothesis set is empty");
    if (static_cast<long long>(num_w()) * num_s() > kEnumerationCap)
        throw ConfigError("|W| * |Z|^n exceeds the enumeration cap of 4096");
    const int data_count = mode == InstanceMode::general ? num_s() : num_z();
    if (static_cast<int>(data_states.size()) != data_count) throw ConfigError("data_states has the wrong number of entries");
    for (const auto& r : data_states)
        if (r.dim() != te.dim() * tr.dim()) throw ConfigError("data state dimension does not match te x tr");
    if (static_cast<int>(povms.size()) != num_s()) throw ConfigError("povms must have one entry per sample tuple");
    for (const auto& p : povms) {
        if (p.space().dim() != tr_dim()) throw ConfigError("POVM does not act on the training register");
        for (const auto& el : p.elements())
            if (std::find(hypotheses.begin(), hypotheses.end(), el.outcome) == hypotheses.end())
                throw ConfigError("POVM outcome '" + el.outcome + "' is not a hypothesis");
    }
    if (static_cast<int>(channels.size()) != num_w() || static_cast<int>(losses.size()) != num_w())
        throw ConfigError("channels and losses need one row per hypothesis");
    for (int w = 0; w < num_w(); ++w) {
        if (static_cast<int>(channels[w].size()) != data_count || static_cast<int>(losses[w].size()) != data_count)
            throw ConfigError("channels and losses need one entry per sample for hypothesis '" + hypotheses[w] + "'");
        for (const auto& c : channels[w])
            if (c.input().dim() != tr.dim() || c.output().dim() != hyp.dim())
                throw ConfigError("channel shape does not map tr to hyp");
        for (const auto& l : losses[w])
            if (l.dim() != te.dim() * hyp.dim()) throw ConfigError("loss observable does not act on te x hyp");
    }
    if (mu && !(*mu >= 0.0 && std::isfinite(*mu))) throw ConfigError("mu must be finite and nonnegative");
    if (tau && !(*tau >= 0.0 && std::isfinite(*tau))) throw ConfigError("tau must be finite and nonnegative");
}

double InducedJoint::posterior(int s, int w) const {
    return marginal_w[w] > 0.0 ? p(w, s) / marginal_w[w] : 0.0;
}

const State& InducedJoint::hyp_state(int w, int s) const {
    const auto& r = pairs[w][s];
    return r.present ? r.sigma_hyp : fallback_hyp[w][s];
}

InducedJoint induce(const LearningInstance& inst) {
    inst.validate();
    InducedJoint j;
    j.num_w = inst.num_w();
    j.num_s = inst.num_s();
    const int dte = inst.te_dim(), dtr = inst.tr_dim(), dhyp = inst.hyp_dim();
    HilbertSpace te_tr;
    pair_space(dte, dtr, "te", "tr", te_tr);
    pair_space(dte, dhyp, "te", "hyp", j.te_hyp);
    j.hyp = HilbertSpace({Factor{"hyp", dhyp}}, 1 << 20);
    const HilbertSpace te_only({Factor{"te", dte}}, 1 << 20);
    const HilbertSpace tr_only({Factor{"tr", dtr}}, 1 << 20);

    j.prior_s.resize(j.num_s);
    for (int s = 0; s < j.num_s; ++s) j.prior_s[s] = inst.prior_of(s);
    j.joint.assign(static_cast<std::size_t>(j.num_w) * j.num_s, 0.0);
    j.rho_te.resize(j.num_s);
    j.pairs.assign(j.num_w, std::vector<PairRecord>(j.num_s));
    j.fallback_hyp.assign(j.num_w, std::vector<State>(j.num_s));
    std::vector<double> row_defect(j.num_s, 0.0);

    const Mat id_te = Mat::Identity(dte, dte);
    parallel_for(static_cast<std::size_t>(j.num_s), [&](std::size_t si) {
        const int s = static_cast<int>(si);
        const Mat rho = inst.data_state(s);
        j.rho_te[s] = State::normalized(te_only, partial_trace(rho, te_tr, {"te"}));
        const Mat rho_tr = partial_trace(rho, te_tr, {"tr"});
        std::vector<double> cond(j.num_w);
        double row = 0.0;
        for (int w = 0; w < j.num_w; ++w) {
            const Mat e = inst.effect(s, w);
            cond[w] = std::max(0.0, (e * rho_tr).trace().real());
            row += cond[w];
        }
        row_defect[s] = row - 1.0;
        for (int w = 0; w < j.num_w; ++w) {
            const auto kr = inst.kraus(w, s);
            Mat fb = Mat::Zero(dhyp, dhyp);
            for (const auto& k : kr) fb += k * rho_tr * k.adjoint();
            j.fallback_hyp[w][s] = State::normalized(j.hyp, fb);
            const double pw = cond[w] / row;
            PairRecord& rec = j.pairs[w][s];
            rec.p_w_given_s = pw;
            if (pw <= kDropProb) continue;
            const Mat sq = kron(id_te, sqrt_psd(inst.effect(s, w)));
            const Mat post = sq * rho * sq.adjoint() / cond[w];
            Mat sig = Mat::Zero(dte * dhyp, dte * dhyp);
            for (const auto& k : kr) {
                const Mat kk = kron(id_te, k);
                sig += kk * post * kk.adjoint();
            }
            rec.present = true;
            rec.sigma = State::normalized(j.te_hyp, sig);
            rec.sigma_hyp = State::normalized(j.hyp, partial_trace(rec.sigma.matrix(), j.te_hyp, {"hyp"}));
            j.joint[static_cast<std::size_t>(w) * j.num_s + s] = j.prior_s[s] * pw;
        }
    });
    for (int s = 0; s < j.num_s; ++s)
        if (std::abs(row_defect[s]) > 1e-10) {
            j.warnings.push_back("measurement probabilities for sample " + std::to_string(s) +
                                 " deviate from 1 by " + std::to_string(row_defect[s]) + "; renormalized");
        }

    j.marginal_w.assign(j.num_w, 0.0);
    for (int w = 0; w < j.num_w; ++w)
        for (int s = 0; s < j.num_s; ++s) j.marginal_w[w] += j.p(w, s);
    j.sigma_hyp_w.resize(j.num_w);
    for (int w = 0; w < j.num_w; ++w) {
        if (!j.in_support(w)) continue;
        Mat acc = Mat::Zero(dhyp, dhyp);
        for (int s = 0; s < j.num_s; ++s)
            if (j.pairs[w][s].present) acc += j.posterior(s, w) * j.pairs[w][s].sigma_hyp.matrix();
        j.sigma_hyp_w[w] = State::normalized(j.hyp, acc);
    }
    return j;
}

double empirical_loss(const InducedJoint& j, const LearningInstance& inst, int w, int s) {
    const auto& r = j.pairs[w][s];
    if (!r.present) throw DomainError("pair (w, s) has zero probability");
    return (inst.loss(w, s) * r.sigma.matrix()).trace().real();
}

namespace {

double true_loss_with(const InducedJoint& j, const LearningInstance& inst, int w,
                      const std::function<const Mat&(int)>& hyp_of) {
    double acc = 0.0;
    for (int s = 0; s < j.num_s; ++s) {
        if (j.prior_s[s] == 0.0) continue;
        const Mat prod = kron(j.rho_te[s].matrix(), hyp_of(s));
        acc += j.prior_s[s] * (inst.loss(w, s) * prod).trace().real();
    }
    return acc;
}

}  // namespace

double true_loss_new(const InducedJoint& j, const LearningInstance& inst, int w) {
    if (!j.sigma_hyp_w[w]) throw DomainError("hypothesis '" + inst.hypotheses[w] + "' is outside the support of P_W");
    const Mat& h = j.sigma_hyp_w[w]->matrix();
    return true_loss_with(j, inst, w, [&](int) -> const Mat& { return h; });
}

double true_loss_old(const InducedJoint& j, const LearningInstance& inst, int w) {
    return true_loss_with(j, inst, w, [&](int s) -> const Mat& { return j.hyp_state(w, s).matrix(); });
}

ExpectedLosses expected_losses(const InducedJoint& j, const LearningInstance& inst) {
    ExpectedLosses out;
    for (int w = 0; w < j.num_w; ++w) {
        if (!j.in_support(w)) continue;
        out.true_new += j.marginal_w[w] * true_loss_new(j, inst, w);
        out.true_old += j.marginal_w[w] * true_loss_old(j, inst, w);
        for (int s = 0; s < j.num_s; ++s)
            if (j.pairs[w][s].present) out.empirical += j.p(w, s) * empirical_loss(j, inst, w, s);
    }
    return out;
}

double gen_error(const InducedJoint& j, const LearningInstance& inst, int w, int s) {
    return true_loss_new(j, inst, w) - empirical_loss(j, inst, w, s);
}

double gen_error_old(const InducedJoint& j, const LearningInstance& inst, int w, int s) {
    return true_loss_old(j, inst, w) - empirical_loss(j, inst, w, s);
}

double expected_gen(const InducedJoint& j, const LearningInstance& inst) {
    const ExpectedLosses e = expected_losses(j, inst);
    return e.true_new - e.empirical;
}

double expected_gen_old(const InducedJoint& j, const LearningInstance& inst) {
    const ExpectedLosses e = expected_losses(j, inst);
    return e.true_old - e.empirical;
}

std::vector<std::pair<int, int>> sample_ws(const InducedJoint& j, int count, std::uint64_t seed) {
    constexpr int chunk = 4096;
    std::vector<std::pair<int, int>> out(static_cast<std::size_t>(std::max(count, 0)));
    const std::size_t chunks = (out.size() + chunk - 1) / chunk;
    parallel_for(chunks, [&](std::size_t c) {
        Rng rng(derive_seed(seed, c));
        std::discrete_distribution<int> dist(j.joint.begin(), j.joint.end());
        const std::size_t lo = c * chunk, hi = std::min(out.size(), lo + chunk);
        for (std::size_t i = lo; i < hi; ++i) {
            const int k = dist(rng);
            out[i] = {k / j.num_s, k % j.num_s};
        }
    });
    return out;
}

SubGaussianCert effective_cert(const LearningInstance& inst) {
    SubGaussianCert c;
    c.source = CertSource::user_supplied;
    const bool local = inst.mode == InstanceMode::iid_local;
    const int count = local ? inst.num_z() : inst.num_s();
    double mu = 0.0, tau = 0.0;
    for (int w = 0; w < inst.num_w(); ++w) {
        double hi = -1e300, lo = 1e300;
        for (int k = 0; k < count; ++k) {
            const Observable& l = inst.losses[w][k];
            mu = std::max(mu, (l.lambda_max() - l.lambda_min()) / 2.0);
            hi = std::max(hi, l.lambda_max());
            lo = std::min(lo, l.lambda_min());
        }
        tau = std::max(tau, (hi - lo) / 2.0);
    }
    if (!inst.mu || !inst.tau) c.source = CertSource::spectral_width;
    c.mu = inst.mu.value_or(mu);
    c.tau = inst.tau.value_or(tau);
    return c;
}

namespace {

bool quantum_subgaussian_on_grid(const Observable& l, const State& rho, double mu, const std::vector<double>& grid) {
    for (double lam : grid) {
        try {
            if (quantum_mgf(l, rho, lam) > lam * lam * mu * mu / 2.0 + 1e-9) return false;
        } catch (const RangeError&) {
        }
    }
    return true;
}

bool classical_subgaussian_on_grid(const std::vector<double>& f, const std::vector<double>& p, double tau,
                                   const std::vector<double>& grid) {
    for (double lam : grid) {
        try {
            if (classical_mgf(f, p, lam) > lam * lam * tau * tau / 2.0 + 1e-9) return false;
        } catch (const RangeError&) {
        }
    }
    return true;
}

}  // namespace

std::vector<std::string> audit_instance(const InducedJoint& j, const LearningInstance& inst) {
    std::vector<std::string> out = j.warnings;
    const auto grid = default_lambda_grid();
    if (inst.mu) {
        int bad = 0;
        for (int w = 0; w < j.num_w; ++w) {
            if (!j.in_support(w)) continue;
            for (int s = 0; s < j.num_s; ++s) {
                if (!j.pairs[w][s].present) continue;
                const Observable l(j.te_hyp, inst.loss(w, s));
                const State prod_ws(j.te_hyp, kron(j.rho_te[s].matrix(), j.pairs[w][s].sigma_hyp.matrix()));
                const State prod_w(j.te_hyp, kron(j.rho_te[s].matrix(), j.sigma_hyp_w[w]->matrix()));
                if (!quantum_subgaussian_on_grid(l, prod_ws, *inst.mu, grid) ||
                    !quantum_subgaussian_on_grid(l, prod_w, *inst.mu, grid))
                    ++bad;
            }
        }
        if (bad > 0)
            out.push_back("supplied mu fails the quantum sub-Gaussian check on " + std::to_string(bad) +
                          " (w, s) pairs");
    }
    if (inst.tau) {
        int bad = 0;
        for (int w = 0; w < j.num_w; ++w) {
            if (!j.in_support(w)) continue;
            std::vector<double> f_new(j.num_s), f_old(j.num_s);
            for (int s = 0; s < j.num_s; ++s) {
                const Mat l = inst.loss(w, s);
                f_new[s] = (l * kron(j.rho_te[s].matrix(), j.sigma_hyp_w[w]->matrix())).trace().real();
                f_old[s] = (l * kron(j.rho_te[s].matrix(), j.hyp_state(w, s).matrix())).trace().real();
            }
            if (!classical_subgaussian_on_grid(f_new, j.prior_s, *inst.tau, grid) ||
                !classical_subgaussian_on_grid(f_old, j.prior_s, *inst.tau, grid))
                ++bad;
        }
        if (bad > 0)
            out.push_back("supplied tau fails the classical sub-Gaussian check for " + std::to_string(bad) +
                          " hypotheses");
    }
    if (inst.mode == InstanceMode::iid_local && inst.n > 1) {
        const int dh = inst.hyp.dim();
        std::vector<Factor> fs;
        for (int i = 0; i < inst.n; ++i) fs.push_back(Factor{"h" + std::to_string(i), dh});
        const HilbertSpace copies(fs, 1 << 20);
        double worst = 0.0;
        for (int w = 0; w < j.num_w; ++w)
            for (int s = 0; s < j.num_s; ++s) {
                if (!j.pairs[w][s].present) continue;
                const Mat& h = j.pairs[w][s].sigma_hyp.matrix();
                Mat prod = Mat::Identity(1, 1);
                for (const auto& f : fs) prod = kron(prod, partial_trace(h, copies, {f.label}));
                worst = std::max(worst, (h - prod).norm());
            }
        if (worst > 1e-8)
            out.push_back("hypothesis states are correlated across copies; per-sample bounds assume a product structure");
    }
    return out;
}

}  // namespace qgb
