#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace mvsim {

/// Worker count for cell-local kernels. 1 is the deterministic reference mode.
int num_threads();
void set_num_threads(int n);

/// Runs body(j) for j in [0, n). Rows are split into contiguous chunks; every
/// index is written by exactly one worker, so results do not depend on the
/// thread count.
template <class Body>
void parallel_for(int n, Body&& body) {
  const int t = std::min(num_threads(), n / 16);
  if (t <= 1) {
    for (int j = 0; j < n; ++j) body(j);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(t));
  for (int w = 0; w < t; ++w) {
    const int lo = static_cast<int>(static_cast<long>(n) * w / t);
    const int hi = static_cast<int>(static_cast<long>(n) * (w + 1) / t);
    pool.emplace_back([lo, hi, &body] {
      for (int j = lo; j < hi; ++j) body(j);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace mvsim
