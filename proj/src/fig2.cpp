#include "qgb/fig2.hpp"

#include "qgb/bounds.hpp"
#include "qgb/errors.hpp"
#include "qgb/optimize.hpp"
#include "qgb/parallel.hpp"

#include <cmath>
#include <filesystem>

namespace qgb {

namespace {

Vec unit(const std::array<cplx, 2>& v) {
    Vec out(2);
    out << v[0], v[1];
    return out / out.norm();
}

BoundOptions below_one_options(const Fig2Config& cfg) {
    BoundOptions o;
    o.alpha_below_one = cfg.optimizer_grid;
    o.gamma_below_one = cfg.optimizer_grid;
    o.golden_iterations = cfg.golden_iterations;
    return o;
}

}  // namespace

Fig2Config default_fig2_config() {
    Fig2Config cfg;
    for (int k = 0; k <= 6; ++k) cfg.p_grid.push_back(0.5 + 0.05 * k);
    cfg.alpha_grid = linear_grid(0.4, 1.0, 25, false);
    cfg.optimizer_grid = log_grid(0.05, 0.95, 25);
    return cfg;
}

Fig2States fig2_states(const Fig2Config& cfg) {
    Fig2States st;
    const std::array<double, 2> cos2{cfg.cos2_theta, cfg.cos2_beta};
    const std::array<std::array<cplx, 2>, 2> raw{cfg.phi0, cfg.phi1};
    for (int z = 0; z < 2; ++z) {
        st.phi[z] = unit(raw[z]);
        Vec perp(2);
        perp << -std::conj(st.phi[z](1)), std::conj(st.phi[z](0));
        st.phi_perp[z] = cfg.perp_sign * perp;
        const double c = std::sqrt(cos2[z]);
        const double s = std::sqrt(1.0 - cos2[z]);
        st.psi[z] = c * st.phi[z] + s * st.phi_perp[z];
    }
    return st;
}

LearningInstance build_fig2_instance(const Fig2Config& cfg, double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("p must lie in (0, 1)");
    const Fig2States st = fig2_states(cfg);
    LearningInstance inst;
    inst.sample_space = {"z0", "z1"};
    inst.hypotheses = {"w0", "w1"};
    inst.prior = {p, 1.0 - p};
    inst.n = 1;
    inst.mode = InstanceMode::iid_local;
    inst.te = HilbertSpace::single("te", 2);
    inst.tr = HilbertSpace::single("tr", 2);
    inst.hyp = HilbertSpace::single("hyp", 2);
    const HilbertSpace te_tr = inst.te.tensor(inst.tr);
    const HilbertSpace te_hyp = inst.te.tensor(inst.hyp);
    for (int z = 0; z < 2; ++z) {
        const Mat proj = st.psi[z] * st.psi[z].adjoint();
        inst.data_states.emplace_back(te_tr, kron(proj, proj));
        inst.povms.emplace_back(inst.tr, std::vector<PovmElement>{
                                             {"w0", Observable(inst.tr, st.phi[z] * st.phi[z].adjoint())},
                                             {"w1", Observable(inst.tr, st.phi_perp[z] * st.phi_perp[z].adjoint())}});
    }
    Mat loss = -cfg.mu * Mat::Identity(4, 4);
    loss(0, 0) += 2.0 * cfg.mu;
    inst.channels.resize(2);
    inst.losses.resize(2);
    for (int w = 0; w < 2; ++w)
        for (int z = 0; z < 2; ++z) {
            inst.channels[w].push_back(Channel::identity(inst.tr, inst.hyp));
            inst.losses[w].emplace_back(te_hyp, loss);
        }
    inst.mu = cfg.mu;
    inst.tau = cfg.tau;
    inst.validate();
    return inst;
}

Table sweep_p(const Fig2Config& cfg) {
    Table t;
    t.columns = {"p", "B_kl", "B_mod", "B_petz", "alpha_mod", "gamma_mod", "alpha_petz", "gamma_petz",
                 "abs_expected_gen"};
    std::vector<double> ps = cfg.p_grid;
    std::sort(ps.begin(), ps.end());
    t.rows.assign(ps.size(), {});
    const BoundOptions opts = below_one_options(cfg);
    parallel_for(ps.size(), [&](std::size_t i) {
        const LearningInstance inst = build_fig2_instance(cfg, ps[i]);
        const InducedJoint j = induce(inst);
        const BoundReport kl = bound_kl(j, inst, opts);
        const BoundReport mod = bound_renyi(j, inst, DivKind::modified_sandwiched, opts);
        const BoundReport petz = bound_renyi(j, inst, DivKind::petz, opts);
        const auto inf_or = [](const BoundReport& r) { return r.vacuous ? INFINITY : r.optimum; };
        t.rows[i] = {ps[i],
                     inf_or(kl),
                     inf_or(mod),
                     inf_or(petz),
                     mod.argmin_alpha.value_or(NAN),
                     mod.argmin_gamma.value_or(NAN),
                     petz.argmin_alpha.value_or(NAN),
                     petz.argmin_gamma.value_or(NAN),
                     std::abs(expected_gen(j, inst))};
    });
    return t;
}

Table sweep_alpha(const Fig2Config& cfg) {
    Table t;
    t.columns = {"alpha", "B_kl", "B_mod", "B_petz", "abs_expected_gen"};
    std::vector<double> as = cfg.alpha_grid;
    std::sort(as.begin(), as.end());
    for (double a : as)
        if (!(a > 0.0 && a < 1.0)) throw DomainError("the alpha sweep uses alpha in (0, 1)");
    const LearningInstance inst = build_fig2_instance(cfg, cfg.p_star);
    const InducedJoint j = induce(inst);
    const BoundReport kl = bound_kl(j, inst, below_one_options(cfg));
    const double b_kl = kl.vacuous ? INFINITY : kl.optimum;
    const double gen = std::abs(expected_gen(j, inst));
    t.rows.assign(as.size(), {});
    parallel_for(as.size(), [&](std::size_t i) {
        const double a = as[i];
        const TermValue c = classical_gamma_term(j, a, cfg.tau);
        const auto total = [&](DivKind kind) {
            const TermValue q = quantum_term(j, a, kind, cfg.mu);
            return (q.infinite || c.infinite) ? INFINITY : q.value + c.value;
        };
        t.rows[i] = {a, b_kl, total(DivKind::modified_sandwiched), total(DivKind::petz), gen};
    });
    return t;
}

PlotSpec fig2a_plot() {
    return {"Expected generalization bounds versus p", "p", "bound", "p", {"B_kl", "B_mod", "B_petz"}};
}

PlotSpec fig2b_plot() {
    return {"Expected generalization bounds versus alpha (p = 0.6)", "alpha", "bound", "alpha",
            {"B_kl", "B_mod", "B_petz"}};
}

std::vector<std::string> emit_fig2(const Fig2Config& cfg, const std::string& which, const std::string& out_dir) {
    if (which != "p" && which != "alpha" && which != "both") throw ConfigError("--which must be p, alpha or both");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create directory '" + out_dir + "'");
    const std::filesystem::path dir(out_dir);
    std::vector<std::string> written;
    const auto emit = [&](const Table& t, const PlotSpec& spec, const std::string& stem) {
        const std::string csv = (dir / (stem + ".csv")).string();
        const std::string svg = (dir / (stem + ".svg")).string();
        write_text(csv, to_csv(t));
        write_text(svg, to_svg(t, spec));
        written.push_back(csv);
        written.push_back(svg);
    };
    if (which != "alpha") emit(sweep_p(cfg), fig2a_plot(), "fig2a");
    if (which != "p") emit(sweep_alpha(cfg), fig2b_plot(), "fig2b");
    return written;
}

}  // namespace qgb
