#pragma once

#include "qgb/linalg.hpp"

#include <cstdint>
#include <random>

namespace qgb {

using Rng = std::mt19937_64;

// Derives an independent stream seed from (base, index); used for restart and worker schedules.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

Mat ginibre(int rows, int cols, Rng& rng);
Mat haar_unitary(int d, Rng& rng);

State random_density(const HilbertSpace& space, int rank, std::uint64_t seed);
State random_density(const HilbertSpace& space, int rank, Rng& rng);
Povm random_povm(const HilbertSpace& space, int k, std::uint64_t seed);
Povm random_povm(const HilbertSpace& space, int k, Rng& rng);
Channel random_cptp(const HilbertSpace& in, const HilbertSpace& out, int kraus_count, std::uint64_t seed);
Channel random_cptp(const HilbertSpace& in, const HilbertSpace& out, int kraus_count, Rng& rng);
Observable random_hermitian(const HilbertSpace& space, double scale, Rng& rng);
std::vector<double> random_simplex(int k, Rng& rng);

}  // namespace qgb
