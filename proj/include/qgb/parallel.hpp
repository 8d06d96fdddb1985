#pragma once

#include <cstddef>
#include <functional>

namespace qgb {

// Worker count used by parallel_for; QGB_THREADS overrides the configured value.
void set_threads(int n);
int threads();

// Runs fn(i) for i in [0, n). Results must be written to index-addressed slots so
// that output never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace qgb
