#include "qgb/instances.hpp"

#include "qgb/errors.hpp"

#include <random>

namespace qgb {

namespace {

std::vector<std::string> labels(const char* prefix, int k) {
    std::vector<std::string> out;
    for (int i = 0; i < k; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

Povm relabel(const Povm& p, const std::vector<std::string>& names) {
    std::vector<PovmElement> els;
    for (std::size_t i = 0; i < p.elements().size(); ++i) els.push_back({names[i], p.elements()[i].effect});
    return Povm(p.space(), std::move(els));
}

}  // namespace

LearningInstance random_instance(const RandomInstanceSpec& spec, Rng& rng) {
    LearningInstance inst;
    inst.sample_space = labels("z", spec.num_z);
    inst.hypotheses = labels("w", spec.num_w);
    inst.prior = random_simplex(spec.num_z, rng);
    inst.n = spec.n;
    inst.mode = spec.mode;
    if (spec.mode == InstanceMode::general && spec.n != 1)
        throw ConfigError("random general instances are generated with n = 1");
    inst.te = HilbertSpace::single("te", spec.dim);
    inst.tr = HilbertSpace::single("tr", spec.dim);
    inst.hyp = HilbertSpace::single("hyp", spec.dim);
    const HilbertSpace te_tr = inst.te.tensor(inst.tr);
    const HilbertSpace te_hyp = inst.te.tensor(inst.hyp);
    for (int z = 0; z < spec.num_z; ++z) {
        if (spec.product_data)
            inst.data_states.push_back(tensor(random_density(inst.te, spec.dim, rng), random_density(inst.tr, spec.dim, rng)));
        else
            inst.data_states.push_back(random_density(te_tr, te_tr.dim(), rng));
    }
    const int num_s = inst.num_s();
    const HilbertSpace tr_full = HilbertSpace::single("tr", inst.tr_dim());
    for (int s = 0; s < num_s; ++s) inst.povms.push_back(relabel(random_povm(tr_full, spec.num_w, rng), inst.hypotheses));
    inst.channels.resize(spec.num_w);
    inst.losses.resize(spec.num_w);
    for (int w = 0; w < spec.num_w; ++w)
        for (int z = 0; z < spec.num_z; ++z) {
            inst.channels[w].push_back(random_cptp(inst.tr, inst.hyp, spec.kraus, rng));
            inst.losses[w].push_back(random_hermitian(te_hyp, spec.loss_scale, rng));
        }
    inst.validate();
    return inst;
}

LearningInstance classical_embedding(const std::vector<double>& prior, int n,
                                     const std::vector<std::vector<double>>& cond,
                                     const std::vector<std::vector<double>>& values) {
    LearningInstance inst;
    inst.prior = prior;
    inst.sample_space = labels("z", static_cast<int>(prior.size()));
    inst.hypotheses = labels("w", static_cast<int>(values.size()));
    inst.n = n;
    inst.mode = InstanceMode::iid_local;
    inst.te = HilbertSpace::single("te", 1);
    inst.tr = HilbertSpace::single("tr", 1);
    inst.hyp = HilbertSpace::single("hyp", 1);
    const HilbertSpace one = inst.te.tensor(inst.tr);
    const HilbertSpace te_hyp = inst.te.tensor(inst.hyp);
    for (std::size_t z = 0; z < prior.size(); ++z) inst.data_states.push_back(State(one, Mat::Identity(1, 1)));
    if (static_cast<int>(cond.size()) != inst.num_s()) throw ConfigError("cond needs one row per sample tuple");
    for (const auto& row : cond) {
        std::vector<PovmElement> els;
        for (std::size_t w = 0; w < row.size(); ++w)
            els.push_back({inst.hypotheses[w], Observable(inst.tr, Mat::Constant(1, 1, row[w]))});
        inst.povms.emplace_back(inst.tr, std::move(els));
    }
    inst.channels.resize(values.size());
    inst.losses.resize(values.size());
    for (std::size_t w = 0; w < values.size(); ++w)
        for (std::size_t z = 0; z < prior.size(); ++z) {
            inst.channels[w].push_back(Channel::identity(inst.tr, inst.hyp));
            inst.losses[w].push_back(Observable(te_hyp, Mat::Constant(1, 1, values[w][z])));
        }
    inst.validate();
    return inst;
}

LearningInstance random_classical_embedding(int num_w, int num_z, int n, Rng& rng) {
    const std::vector<double> prior = random_simplex(num_z, rng);
    int num_s = 1;
    for (int i = 0; i < n; ++i) num_s *= num_z;
    std::vector<std::vector<double>> cond;
    for (int s = 0; s < num_s; ++s) cond.push_back(random_simplex(num_w, rng));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::vector<double>> values(num_w, std::vector<double>(num_z));
    for (auto& row : values)
        for (auto& v : row) v = u(rng);
    return classical_embedding(prior, n, cond, values);
}

}  // namespace qgb
