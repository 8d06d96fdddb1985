#include "qgb/io.hpp"

#include "qgb/errors.hpp"

#include <fstream>
#include <sstream>

namespace qgb {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
    throw ConfigError("field '" + field + "': " + msg);
}

template <class F>
auto wrap(const std::string& field, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        if (what.rfind("field '", 0) == 0) throw;
        fail(field, what);
    } catch (const DomainError& e) {
        fail(field, e.what());
    }
}

const Json& member(const Json& j, const std::string& key, const std::string& field) {
    if (!j.is_object()) fail(field, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) fail(field, "missing key '" + key + "'");
    return *it;
}

double number(const Json& j, const std::string& field) {
    if (!j.is_number()) fail(field, "expected a number");
    return j.get<double>();
}

int integer(const Json& j, const std::string& field) {
    if (!j.is_number_integer()) fail(field, "expected an integer");
    return j.get<int>();
}

std::vector<std::string> string_list(const Json& j, const std::string& field) {
    if (!j.is_array()) fail(field, "expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_string()) fail(field + "/" + std::to_string(i), "expected a string");
        out.push_back(j[i].get<std::string>());
    }
    return out;
}

std::pair<int, int> line_column(const std::string& text, std::size_t offset) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot read '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int single_dim(const Json& spaces, const std::string& key) {
    const std::string field = "spaces/" + key;
    const int d = integer(member(spaces, key, "spaces"), field);
    if (d < 1) fail(field, "dimension must be positive");
    return d;
}

// Entries keyed by hypothesis then sample; a bare value applies to every sample.
template <class T, class Parse>
std::vector<std::vector<T>> per_w_per_sample(const Json* node, const std::string& name, const LearningInstance& inst,
                                             const std::vector<std::string>& sample_labels, Parse&& parse,
                                             const std::function<T()>& fallback) {
    std::vector<std::vector<T>> out(inst.num_w());
    for (int w = 0; w < inst.num_w(); ++w) {
        const std::string& wl = inst.hypotheses[w];
        const Json* row = nullptr;
        if (node) {
            if (!node->is_object()) fail(name, "expected an object keyed by hypothesis");
            const auto it = node->find(wl);
            if (it != node->end()) row = &*it;
        }
        for (std::size_t k = 0; k < sample_labels.size(); ++k) {
            const std::string field = name + "/" + wl + "/" + sample_labels[k];
            if (!row) {
                if (!fallback) fail(name, "missing entry for hypothesis '" + wl + "'");
                out[w].push_back(fallback());
                continue;
            }
            const bool keyed = row->is_object() && !row->contains("rows") && !row->contains("data");
            if (!keyed) {
                out[w].push_back(parse(*row, name + "/" + wl));
                continue;
            }
            const auto it = row->find(sample_labels[k]);
            if (it == row->end()) {
                if (!fallback) fail(name + "/" + wl, "missing sample '" + sample_labels[k] + "'");
                out[w].push_back(fallback());
            } else {
                out[w].push_back(parse(*it, field));
            }
        }
    }
    return out;
}

}  // namespace

Json parse_json(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        std::string msg = e.what();
        const auto pos = msg.find("syntax error");
        if (pos != std::string::npos) msg = msg.substr(pos);
        throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
    }
}

Json load_json(const std::string& path) { return parse_json(read_file(path), path); }

Mat matrix_from_json(const Json& j, const std::string& field) {
    const int rows = integer(member(j, "rows", field), field + "/rows");
    const int cols = integer(member(j, "cols", field), field + "/cols");
    if (rows < 1 || cols < 1) fail(field, "rows and cols must be positive");
    const Json& data = member(j, "data", field);
    if (!data.is_array()) fail(field + "/data", "expected an array");
    if (data.size() != static_cast<std::size_t>(rows) * cols)
        fail(field + "/data", "expected " + std::to_string(rows * cols) + " entries, found " + std::to_string(data.size()));
    Mat m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            const std::size_t k = static_cast<std::size_t>(r) * cols + c;
            const Json& e = data[k];
            const std::string ef = field + "/data/" + std::to_string(k);
            if (e.is_number()) {
                m(r, c) = cplx(e.get<double>(), 0.0);
            } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
                m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
            } else {
                fail(ef, "expected [re, im] or a number");
            }
        }
    return m;
}

Json matrix_to_json(const Mat& m) {
    Json data = Json::array();
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) data.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

HilbertSpace space_from_json(const Json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) fail(field, "expected a non-empty array of factors");
    std::vector<Factor> fs;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string ff = field + "/" + std::to_string(i);
        const Json& label = member(j[i], "label", ff);
        if (!label.is_string()) fail(ff + "/label", "expected a string");
        fs.push_back({label.get<std::string>(), integer(member(j[i], "dim", ff), ff + "/dim")});
    }
    return wrap(field, [&] { return HilbertSpace(fs); });
}

Json space_to_json(const HilbertSpace& h) {
    Json out = Json::array();
    for (const auto& f : h.factors()) out.push_back(Json{{"label", f.label}, {"dim", f.dim}});
    return out;
}

State state_from_json(const Json& j, const std::string& field, const std::string& default_label) {
    const Mat m = matrix_from_json(j, field);
    return wrap(field, [&] {
        const HilbertSpace h = j.contains("space") ? space_from_json(j["space"], field + "/space")
                                                   : HilbertSpace::single(default_label, static_cast<int>(m.rows()));
        return State(h, m);
    });
}

Observable observable_from_json(const Json& j, const std::string& field, const std::string& default_label) {
    const Mat m = matrix_from_json(j, field);
    return wrap(field, [&] {
        const HilbertSpace h = j.contains("space") ? space_from_json(j["space"], field + "/space")
                                                   : HilbertSpace::single(default_label, static_cast<int>(m.rows()));
        return Observable(h, m);
    });
}

std::string sample_label(const LearningInstance& inst, int s) {
    std::string out;
    for (int z : inst.digits(s)) out += (out.empty() ? "" : ",") + inst.sample_space[z];
    return out;
}

LearningInstance instance_from_json(const Json& j) {
    if (!j.is_object()) fail("", "instance must be a JSON object");
    static const std::vector<std::string> known{"sample_space", "prior", "n", "mode", "hypotheses", "spaces",
                                                "data_states", "povms", "channels", "losses", "mu", "tau", "description"};
    for (const auto& [k, v] : j.items())
        if (std::find(known.begin(), known.end(), k) == known.end()) fail(k, "unknown key");
    LearningInstance inst;
    inst.sample_space = string_list(member(j, "sample_space", ""), "sample_space");
    const Json& prior = member(j, "prior", "");
    if (!prior.is_array()) fail("prior", "expected an array");
    for (std::size_t i = 0; i < prior.size(); ++i) inst.prior.push_back(number(prior[i], "prior/" + std::to_string(i)));
    inst.n = j.contains("n") ? integer(j["n"], "n") : 1;
    if (j.contains("mode")) {
        if (!j["mode"].is_string()) fail("mode", "expected a string");
        inst.mode = wrap("mode", [&] { return instance_mode_from_string(j["mode"].get<std::string>()); });
    }
    const Json& spaces = member(j, "spaces", "");
    inst.te = HilbertSpace::single("te", single_dim(spaces, "te"));
    inst.tr = HilbertSpace::single("tr", single_dim(spaces, "tr"));
    inst.hyp = HilbertSpace::single("hyp", single_dim(spaces, "hyp"));
    wrap("prior", [&] {
        if (inst.prior.size() != inst.sample_space.size()) throw ConfigError("length does not match sample_space");
        if (inst.n < 1) throw ConfigError("n must be positive");
        return 0;
    });

    const int num_s = wrap("n", [&] { return inst.num_s(); });
    std::vector<std::string> s_labels;
    for (int s = 0; s < num_s; ++s) s_labels.push_back(sample_label(inst, s));
    const std::vector<std::string>& data_labels = inst.mode == InstanceMode::general ? s_labels : inst.sample_space;

    const Json& povms = member(j, "povms", "");
    if (!povms.is_object()) fail("povms", "expected an object keyed by sample");
    if (j.contains("hypotheses")) {
        inst.hypotheses = string_list(j["hypotheses"], "hypotheses");
    } else {
        const Json& first = member(povms, s_labels[0], "povms");
        if (!first.is_object()) fail("povms/" + s_labels[0], "expected an object keyed by hypothesis");
        for (const auto& [k, v] : first.items()) inst.hypotheses.push_back(k);
    }
    const HilbertSpace tr_full = HilbertSpace::single("tr", wrap("spaces", [&] { return inst.tr_dim(); }));
    for (int s = 0; s < num_s; ++s) {
        const std::string field = "povms/" + s_labels[s];
        const Json& p = member(povms, s_labels[s], "povms");
        if (!p.is_object()) fail(field, "expected an object keyed by hypothesis");
        std::vector<PovmElement> els;
        for (const auto& [w, m] : p.items())
            els.push_back({w, wrap(field + "/" + w, [&] { return Observable(tr_full, matrix_from_json(m, field + "/" + w)); })});
        inst.povms.push_back(wrap(field, [&] { return Povm(tr_full, std::move(els)); }));
    }

    const Json& data = member(j, "data_states", "");
    if (!data.is_object()) fail("data_states", "expected an object keyed by sample");
    const HilbertSpace te_tr = inst.te.tensor(inst.tr);
    for (const auto& label : data_labels) {
        const std::string field = "data_states/" + label;
        const Mat m = matrix_from_json(member(data, label, "data_states"), field);
        inst.data_states.push_back(wrap(field, [&] { return State(te_tr, m); }));
    }

    const HilbertSpace te_hyp = inst.te.tensor(inst.hyp);
    const Json* channels = j.contains("channels") ? &j["channels"] : nullptr;
    inst.channels = per_w_per_sample<Channel>(
        channels, "channels", inst, data_labels,
        [&](const Json& node, const std::string& field) {
            if (!node.is_array() || node.empty()) fail(field, "expected a non-empty list of Kraus matrices");
            std::vector<Mat> ks;
            for (std::size_t k = 0; k < node.size(); ++k) ks.push_back(matrix_from_json(node[k], field + "/" + std::to_string(k)));
            return wrap(field, [&] { return Channel(inst.tr, inst.hyp, ks); });
        },
        [&] { return wrap("channels", [&] { return Channel::identity(inst.tr, inst.hyp); }); });

    inst.losses = per_w_per_sample<Observable>(
        &member(j, "losses", ""), "losses", inst, data_labels,
        [&](const Json& node, const std::string& field) {
            const Mat m = matrix_from_json(node, field);
            return wrap(field, [&] { return Observable(te_hyp, m); });
        },
        {});

    if (j.contains("mu")) inst.mu = number(j["mu"], "mu");
    if (j.contains("tau")) inst.tau = number(j["tau"], "tau");
    wrap("instance", [&] {
        inst.validate();
        return 0;
    });
    return inst;
}

Json instance_to_json(const LearningInstance& inst) {
    Json j;
    j["sample_space"] = inst.sample_space;
    j["prior"] = inst.prior;
    j["n"] = inst.n;
    j["mode"] = to_string(inst.mode);
    j["hypotheses"] = inst.hypotheses;
    j["spaces"] = Json{{"te", inst.te.dim()}, {"tr", inst.tr.dim()}, {"hyp", inst.hyp.dim()}};
    std::vector<std::string> data_labels;
    if (inst.mode == InstanceMode::iid_local)
        data_labels = inst.sample_space;
    else
        for (int s = 0; s < inst.num_s(); ++s) data_labels.push_back(sample_label(inst, s));
    Json data = Json::object();
    for (std::size_t k = 0; k < data_labels.size(); ++k) data[data_labels[k]] = matrix_to_json(inst.data_states[k].matrix());
    j["data_states"] = data;
    Json povms = Json::object();
    for (int s = 0; s < inst.num_s(); ++s) {
        Json p = Json::object();
        for (const auto& el : inst.povms[s].elements()) p[el.outcome] = matrix_to_json(el.effect.matrix());
        povms[sample_label(inst, s)] = p;
    }
    j["povms"] = povms;
    Json channels = Json::object(), losses = Json::object();
    for (int w = 0; w < inst.num_w(); ++w) {
        Json cw = Json::object(), lw = Json::object();
        for (std::size_t k = 0; k < data_labels.size(); ++k) {
            Json ks = Json::array();
            for (const auto& m : inst.channels[w][k].kraus()) ks.push_back(matrix_to_json(m));
            cw[data_labels[k]] = ks;
            lw[data_labels[k]] = matrix_to_json(inst.losses[w][k].matrix());
        }
        channels[inst.hypotheses[w]] = cw;
        losses[inst.hypotheses[w]] = lw;
    }
    j["channels"] = channels;
    j["losses"] = losses;
    if (inst.mu) j["mu"] = *inst.mu;
    if (inst.tau) j["tau"] = *inst.tau;
    return j;
}

LearningInstance load_instance(const std::string& path) {
    const Json j = load_json(path);
    try {
        return instance_from_json(j);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

}  // namespace qgb
