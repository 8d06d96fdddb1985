#include "qgb/linalg.hpp"

#include "qgb/errors.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace qgb {

HilbertSpace::HilbertSpace(std::vector<Factor> factors, int dim_cap) : factors_(std::move(factors)) {
    std::set<std::string> seen;
    long long d = 1;
    for (const auto& f : factors_) {
        if (f.dim < 1) throw ConfigError("factor '" + f.label + "' has non-positive dimension");
        if (!seen.insert(f.label).second) throw ConfigError("duplicate factor label '" + f.label + "'");
        d *= f.dim;
        if (d > dim_cap) throw ConfigError("space dimension exceeds cap " + std::to_string(dim_cap));
    }
    dim_ = static_cast<int>(d);
}

HilbertSpace HilbertSpace::single(const std::string& label, int dim) {
    return HilbertSpace({Factor{label, dim}});
}

bool HilbertSpace::has(const std::string& label) const {
    return std::any_of(factors_.begin(), factors_.end(), [&](const Factor& f) { return f.label == label; });
}

int HilbertSpace::index_of(const std::string& label) const {
    for (std::size_t i = 0; i < factors_.size(); ++i)
        if (factors_[i].label == label) return static_cast<int>(i);
    throw ConfigError("unknown factor label '" + label + "' in space " + describe());
}

HilbertSpace HilbertSpace::restrict_to(const std::vector<std::string>& keep) const {
    for (const auto& k : keep) index_of(k);
    std::vector<Factor> out;
    for (const auto& f : factors_)
        if (std::find(keep.begin(), keep.end(), f.label) != keep.end()) out.push_back(f);
    return HilbertSpace(out);
}

HilbertSpace HilbertSpace::replace(const std::string& label, const Factor& with) const {
    auto fs = factors_;
    fs[index_of(label)] = with;
    return HilbertSpace(fs);
}

HilbertSpace HilbertSpace::tensor(const HilbertSpace& other) const {
    auto fs = factors_;
    for (auto f : other.factors_) {
        while (std::any_of(fs.begin(), fs.end(), [&](const Factor& g) { return g.label == f.label; }))
            f.label += "'";
        fs.push_back(f);
    }
    return HilbertSpace(fs);
}

std::string HilbertSpace::describe() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < factors_.size(); ++i)
        os << (i ? ", " : "") << factors_[i].label << ":" << factors_[i].dim;
    os << "]";
    return os.str();
}

Mat hermitize(const Mat& m) {
    return (m + m.adjoint()) * 0.5;
}

Eig herm_eig(const Mat& h) {
    if (h.rows() != h.cols()) throw DomainError("herm_eig: matrix is not square");
    const int d = static_cast<int>(h.rows());
    Mat a = hermitize(h);
    Mat v = Mat::Identity(d, d);

    const double scale = a.norm();
    const int max_sweeps = 100;
    bool converged = (d <= 1) || scale == 0.0;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < d; ++p)
            for (int q = p + 1; q < d; ++q) off += std::norm(a(p, q));
        if (off == 0.0 || std::sqrt(off) <= 1e-18 * scale) {
            converged = true;
            break;
        }
        for (int p = 0; p < d - 1; ++p) {
            for (int q = p + 1; q < d; ++q) {
                const double mag = std::abs(a(p, q));
                if (mag == 0.0) continue;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                if (sweep > 3 && std::abs(app) + 100.0 * mag == std::abs(app) &&
                    std::abs(aqq) + 100.0 * mag == std::abs(aqq)) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                const cplx phase = a(p, q) / mag;
                const double theta = (aqq - app) / (2.0 * mag);
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 0.5 / theta;
                } else {
                    t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const cplx v00 = c, v01 = s;
                const cplx v10 = -s * std::conj(phase), v11 = c * std::conj(phase);
                for (int k = 0; k < d; ++k) {
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * v00 + akq * v10;
                    a(k, q) = akp * v01 + akq * v11;
                }
                for (int k = 0; k < d; ++k) {
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = std::conj(v00) * apk + std::conj(v10) * aqk;
                    a(q, k) = std::conj(v01) * apk + std::conj(v11) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (int k = 0; k < d; ++k) {
                    const cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp * v00 + vkq * v10;
                    v(k, q) = vkp * v01 + vkq * v11;
                }
            }
        }
    }
    if (!converged) throw NumericalError("herm_eig: Jacobi sweeps did not converge");

    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, i).real() > a(j, j).real(); });
    Eig out;
    out.values.resize(d);
    out.vectors.resize(d, d);
    for (int i = 0; i < d; ++i) {
        out.values(i) = a(order[i], order[i]).real();
        out.vectors.col(i) = v.col(order[i]);
    }
    return out;
}

double support_threshold(const RVec& values) {
    if (values.size() == 0) return 0.0;
    return kSupportEps * std::max(values.cwiseAbs().maxCoeff(), 0.0);
}

Mat apply_spectral(const Eig& e, const std::function<double(double)>& f, bool support_only) {
    const int d = static_cast<int>(e.values.size());
    const double thr = support_threshold(e.values);
    RVec fv(d);
    for (int i = 0; i < d; ++i) {
        const double lam = e.values(i);
        if (support_only && lam <= thr) {
            fv(i) = 0.0;
            continue;
        }
        const double y = f(lam);
        if (!std::isfinite(y))
            throw DomainError("matrix function undefined at eigenvalue " + std::to_string(lam));
        fv(i) = y;
    }
    return e.vectors * fv.cast<cplx>().asDiagonal() * e.vectors.adjoint();
}

Observable::Observable(HilbertSpace space, const Mat& m) : space_(std::move(space)) {
    if (m.rows() != m.cols()) throw ConfigError("observable matrix is not square");
    if (m.rows() != space_.dim())
        throw ConfigError("matrix dimension " + std::to_string(m.rows()) + " does not match space " +
                          space_.describe());
    const double defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (defect > 1e-8 * std::max(1.0, m.cwiseAbs().maxCoeff()))
        throw ConfigError("matrix is not Hermitian (defect " + std::to_string(defect) + ")");
    m_ = hermitize(m);
    cache_ = std::make_shared<Cache>();
}

Observable Observable::identity(const HilbertSpace& space) {
    return Observable(space, Mat::Identity(space.dim(), space.dim()));
}

Observable Observable::zero(const HilbertSpace& space) {
    return Observable(space, Mat::Zero(space.dim(), space.dim()));
}

const Eig& Observable::eig() const {
    std::call_once(cache_->once, [&] { cache_->eig = herm_eig(m_); });
    return cache_->eig;
}

double Observable::expectation(const Mat& rho) const {
    return (m_.cwiseProduct(rho.transpose())).sum().real();
}

State::State(HilbertSpace space, const Mat& m) : Observable(std::move(space), m) {
    const double tr = trace_real(matrix());
    if (std::abs(tr - 1.0) > 1e-10) throw DomainError("state trace " + std::to_string(tr) + " is not 1");
    if (lambda_min() < -1e-10)
        throw DomainError("state has negative eigenvalue " + std::to_string(lambda_min()));
}

State State::normalized(HilbertSpace space, const Mat& m) {
    const double tr = m.trace().real();
    if (!(tr > 0.0)) throw NumericalError("cannot normalize an operator with non-positive trace");
    return State(std::move(space), m / tr);
}

State State::pure(HilbertSpace space, const Vec& psi) {
    const Vec u = psi / psi.norm();
    return State(std::move(space), u * u.adjoint());
}

State State::maximally_mixed(const HilbertSpace& space) {
    const int d = space.dim();
    return State(space, Mat::Identity(d, d) / static_cast<double>(d));
}

Povm::Povm(HilbertSpace space, std::vector<PovmElement> elements)
    : space_(std::move(space)), elements_(std::move(elements)) {
    if (elements_.empty()) throw ConfigError("POVM has no elements");
    const int d = space_.dim();
    Mat sum = Mat::Zero(d, d);
    for (const auto& e : elements_) {
        if (!(e.effect.space() == space_)) throw ConfigError("POVM element space mismatch");
        if (e.effect.lambda_min() < -1e-10) throw ConfigError("POVM element '" + e.outcome + "' is not PSD");
        sum += e.effect.matrix();
    }
    if (op_norm_diff_identity(sum) > kCompletenessTol) throw ConfigError("POVM elements do not sum to identity");
}

Channel::Channel(HilbertSpace in, HilbertSpace out, std::vector<Mat> kraus)
    : in_(std::move(in)), out_(std::move(out)), kraus_(std::move(kraus)) {
    if (kraus_.empty()) throw ConfigError("channel has no Kraus operators");
    const int din = in_.dim(), dout = out_.dim();
    Mat sum = Mat::Zero(din, din);
    for (const auto& k : kraus_) {
        if (k.rows() != dout || k.cols() != din) throw ConfigError("Kraus operator shape mismatch");
        sum += k.adjoint() * k;
    }
    if (op_norm_diff_identity(sum) > kCompletenessTol) throw ConfigError("channel is not trace preserving");
}

Channel Channel::identity(const HilbertSpace& in, const HilbertSpace& out) {
    if (in.dim() != out.dim()) throw ConfigError("identity channel needs equal dimensions");
    return Channel(in, out, {Mat::Identity(in.dim(), in.dim())});
}

Mat Channel::apply(const Mat& rho) const {
    Mat out = Mat::Zero(out_.dim(), out_.dim());
    for (const auto& k : kraus_) out += k * rho * k.adjoint();
    return out;
}

State Channel::apply(const State& rho) const {
    if (!(rho.space().dim() == in_.dim())) throw ConfigError("channel input dimension mismatch");
    return State::normalized(out_, apply(rho.matrix()));
}

Mat kron(const Mat& a, const Mat& b) {
    return Eigen::kroneckerProduct(a, b).eval();
}

Observable tensor(const Observable& a, const Observable& b) {
    return Observable(a.space().tensor(b.space()), kron(a.matrix(), b.matrix()));
}

State tensor(const State& a, const State& b) {
    return State::normalized(a.space().tensor(b.space()), kron(a.matrix(), b.matrix()));
}

State tensor_power(const State& a, int n, const std::string& label_prefix) {
    if (n < 1) throw ConfigError("tensor power needs n >= 1");
    std::vector<Factor> fs;
    Mat m = Mat::Identity(1, 1);
    for (int i = 0; i < n; ++i) {
        for (const auto& f : a.space().factors())
            fs.push_back(Factor{label_prefix + std::to_string(i) + "." + f.label, f.dim});
        m = kron(m, a.matrix());
    }
    return State::normalized(HilbertSpace(fs), m);
}

Observable matrix_function(const Observable& a, const std::function<double(double)>& f, bool support_only) {
    const auto& e = a.eig();
    const double thr = support_threshold(e.values);
    if (e.values(e.values.size() - 1) < -std::max(thr, 1e-10))
        throw DomainError("matrix_function: argument is not positive semidefinite");
    Eig clipped = e;
    for (int i = 0; i < clipped.values.size(); ++i)
        if (clipped.values(i) <= thr) clipped.values(i) = 0.0;
    return Observable(a.space(), apply_spectral(clipped, f, support_only));
}

Mat herm_exp(const Mat& h) {
    const Eig e = herm_eig(h);
    return apply_spectral(e, [](double x) { return std::exp(x); }, false);
}

namespace {

struct TraceLayout {
    std::vector<int> kept_index;  // [k * dt + t] -> full index
    int dk = 1, dt = 1;
};

TraceLayout layout(const HilbertSpace& space, const std::vector<std::string>& keep) {
    const auto& fs = space.factors();
    std::vector<bool> is_kept(fs.size(), false);
    for (const auto& k : keep) is_kept[space.index_of(k)] = true;
    TraceLayout lay;
    for (std::size_t i = 0; i < fs.size(); ++i) (is_kept[i] ? lay.dk : lay.dt) *= fs[i].dim;
    lay.kept_index.resize(static_cast<std::size_t>(lay.dk) * lay.dt);
    const int d = space.dim();
    std::vector<int> digits(fs.size());
    for (int full = 0; full < d; ++full) {
        int rem = full;
        for (int i = static_cast<int>(fs.size()) - 1; i >= 0; --i) {
            digits[i] = rem % fs[i].dim;
            rem /= fs[i].dim;
        }
        int k = 0, t = 0;
        for (std::size_t i = 0; i < fs.size(); ++i) {
            if (is_kept[i]) k = k * fs[i].dim + digits[i];
            else t = t * fs[i].dim + digits[i];
        }
        lay.kept_index[static_cast<std::size_t>(k) * lay.dt + t] = full;
    }
    return lay;
}

}  // namespace

Mat partial_trace(const Mat& a, const HilbertSpace& space, const std::vector<std::string>& keep) {
    if (a.rows() != space.dim() || a.cols() != space.dim()) throw ConfigError("partial_trace: shape mismatch");
    const TraceLayout lay = layout(space, keep);
    Mat out = Mat::Zero(lay.dk, lay.dk);
    for (int i = 0; i < lay.dk; ++i)
        for (int j = 0; j < lay.dk; ++j) {
            cplx s = 0.0;
            for (int t = 0; t < lay.dt; ++t)
                s += a(lay.kept_index[static_cast<std::size_t>(i) * lay.dt + t],
                       lay.kept_index[static_cast<std::size_t>(j) * lay.dt + t]);
            out(i, j) = s;
        }
    return out;
}

Observable partial_trace(const Observable& a, const std::vector<std::string>& keep) {
    return Observable(a.space().restrict_to(keep), partial_trace(a.matrix(), a.space(), keep));
}

State partial_trace(const State& a, const std::vector<std::string>& keep) {
    return State::normalized(a.space().restrict_to(keep), partial_trace(a.matrix(), a.space(), keep));
}

Mat embed(const Mat& op, const HilbertSpace& space, const std::string& label) {
    const int idx = space.index_of(label);
    const auto& fs = space.factors();
    if (op.cols() != fs[idx].dim) throw ConfigError("embed: operator does not match factor '" + label + "'");
    int before = 1, after = 1;
    for (int i = 0; i < idx; ++i) before *= fs[i].dim;
    for (std::size_t i = idx + 1; i < fs.size(); ++i) after *= fs[i].dim;
    return kron(kron(Mat::Identity(before, before), op), Mat::Identity(after, after));
}

Mat permute_factors(const Mat& a, const std::vector<int>& dims, const std::vector<int>& perm) {
    const std::size_t k = dims.size();
    if (perm.size() != k) throw ConfigError("permute_factors: permutation size mismatch");
    int total = 1;
    for (int d : dims) total *= d;
    if (a.rows() != total || a.cols() != total) throw ConfigError("permute_factors: shape mismatch");
    std::vector<int> seen(k, 0);
    for (int p : perm) {
        if (p < 0 || p >= static_cast<int>(k) || seen[p]++) throw ConfigError("permute_factors: invalid permutation");
    }
    std::vector<int> new_stride(k, 1);
    for (int i = static_cast<int>(k) - 2; i >= 0; --i) new_stride[i] = new_stride[i + 1] * dims[perm[i + 1]];
    std::vector<int> pos_of(k);
    for (std::size_t i = 0; i < k; ++i) pos_of[perm[i]] = static_cast<int>(i);
    std::vector<int> map(total);
    for (int idx = 0; idx < total; ++idx) {
        int rem = idx, out = 0;
        for (int f = static_cast<int>(k) - 1; f >= 0; --f) {
            const int digit = rem % dims[f];
            rem /= dims[f];
            out += digit * new_stride[pos_of[f]];
        }
        map[idx] = out;
    }
    Mat out(total, total);
    for (int i = 0; i < total; ++i)
        for (int j = 0; j < total; ++j) out(map[i], map[j]) = a(i, j);
    return out;
}

State apply_on_factor(const Channel& ch, const State& rho, const std::string& label, const std::string& out_label) {
    if (rho.space().factor_dim(label) != ch.input().dim())
        throw ConfigError("channel input does not match factor '" + label + "'");
    const HilbertSpace out_space = rho.space().replace(label, Factor{out_label, ch.output().dim()});
    Mat out = Mat::Zero(out_space.dim(), out_space.dim());
    for (const auto& k : ch.kraus()) {
        const Mat kf = embed(k, rho.space(), label);
        out += kf * rho.matrix() * kf.adjoint();
    }
    return State::normalized(out_space, out);
}

double schatten_norm(const Mat& a, double p) {
    if (!(p >= 1.0)) throw DomainError("schatten_norm: p must be >= 1");
    const RVec sv = Eigen::JacobiSVD<Mat>(a).singularValues();
    if (sv.size() == 0) return 0.0;
    const double smax = sv.maxCoeff();
    if (std::isinf(p) || smax == 0.0) return smax;
    double s = 0.0;
    for (int i = 0; i < sv.size(); ++i) s += std::pow(sv(i) / smax, p);
    return smax * std::pow(s, 1.0 / p);
}

double trace_real(const Mat& a) {
    return a.trace().real();
}

double op_norm_diff_identity(const Mat& a) {
    const Mat diff = a - Mat::Identity(a.rows(), a.cols());
    return Eigen::JacobiSVD<Mat>(diff).singularValues().maxCoeff();
}

Mat support_projector(const Eig& e) {
    return apply_spectral(e, [](double) { return 1.0; }, true);
}

bool supported_in(const State& rho, const State& sigma) {
    const Mat p = support_projector(sigma.eig());
    const Mat leak = rho.matrix() - p * rho.matrix() * p;
    return std::abs(leak.trace().real()) <= 1e-10;
}

bool orthogonal(const State& rho, const State& sigma) {
    const Mat pr = support_projector(rho.eig());
    const Mat ps = support_projector(sigma.eig());
    return std::abs((pr * ps).trace().real()) <= 1e-10;
}

}  // namespace qgb
