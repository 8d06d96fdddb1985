#include "qgb/random.hpp"

#include "qgb/errors.hpp"

#include <cmath>

namespace qgb {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    // splitmix64 finalizer over the combined word
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Mat ginibre(int rows, int cols, Rng& rng) {
    std::normal_distribution<double> n01(0.0, 1.0);
    Mat g(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) {
            const double re = n01(rng);
            const double im = n01(rng);
            g(i, j) = cplx(re, im);
        }
    return g;
}

Mat haar_unitary(int d, Rng& rng) {
    const Mat g = ginibre(d, d, rng);
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ() * Mat::Identity(d, d);
    const Mat r = qr.matrixQR();
    for (int i = 0; i < d; ++i) {
        const cplx rii = r(i, i);
        const double mag = std::abs(rii);
        if (mag > 0.0) q.col(i) *= rii / mag;
    }
    return q;
}

State random_density(const HilbertSpace& space, int rank, Rng& rng) {
    const int d = space.dim();
    if (rank < 1 || rank > d) throw ConfigError("random_density: rank must lie in [1, dim]");
    const Mat g = ginibre(d, rank, rng);
    return State::normalized(space, g * g.adjoint());
}

State random_density(const HilbertSpace& space, int rank, std::uint64_t seed) {
    Rng rng(seed);
    return random_density(space, rank, rng);
}

Povm random_povm(const HilbertSpace& space, int k, Rng& rng) {
    if (k < 1) throw ConfigError("random_povm: need at least one outcome");
    const int d = space.dim();
    std::vector<Mat> g(k);
    Mat sum = Mat::Zero(d, d);
    for (int i = 0; i < k; ++i) {
        const Mat a = ginibre(d, d, rng);
        g[i] = a * a.adjoint();
        sum += g[i];
    }
    const Mat inv_sqrt = apply_spectral(herm_eig(sum), [](double x) { return 1.0 / std::sqrt(x); }, true);
    std::vector<PovmElement> els;
    for (int i = 0; i < k; ++i)
        els.push_back({std::to_string(i), Observable(space, hermitize(inv_sqrt * g[i] * inv_sqrt))});
    return Povm(space, std::move(els));
}

Povm random_povm(const HilbertSpace& space, int k, std::uint64_t seed) {
    Rng rng(seed);
    return random_povm(space, k, rng);
}

Channel random_cptp(const HilbertSpace& in, const HilbertSpace& out, int kraus_count, Rng& rng) {
    const int din = in.dim(), dout = out.dim();
    if (kraus_count < 1 || kraus_count * dout < din)
        throw ConfigError("random_cptp: kraus_count * dim_out must be >= dim_in");
    const Mat g = ginibre(kraus_count * dout, din, rng);
    Eigen::HouseholderQR<Mat> qr(g);
    const Mat v = qr.householderQ() * Mat::Identity(kraus_count * dout, din);
    std::vector<Mat> kraus;
    for (int j = 0; j < kraus_count; ++j) kraus.push_back(v.block(j * dout, 0, dout, din));
    return Channel(in, out, std::move(kraus));
}

Channel random_cptp(const HilbertSpace& in, const HilbertSpace& out, int kraus_count, std::uint64_t seed) {
    Rng rng(seed);
    return random_cptp(in, out, kraus_count, rng);
}

Observable random_hermitian(const HilbertSpace& space, double scale, Rng& rng) {
    const Mat g = ginibre(space.dim(), space.dim(), rng);
    return Observable(space, hermitize(g) * (scale / std::sqrt(2.0 * space.dim())));
}

std::vector<double> random_simplex(int k, Rng& rng) {
    std::exponential_distribution<double> ex(1.0);
    std::vector<double> p(k);
    double s = 0.0;
    for (auto& x : p) s += (x = ex(rng));
    for (auto& x : p) x /= s;
    return p;
}

}  // namespace qgb
