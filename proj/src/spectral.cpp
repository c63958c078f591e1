#include "spectral.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <utility>

namespace mvsim::spectral {

namespace {

Eigenbasis build(Basis kind, int n) {
  const double pi = std::numbers::pi;
  Eigenbasis b;
  switch (kind) {
    case Basis::cell_even: {
      b.q.resize(n, n);
      b.lambda.resize(n);
      for (int k = 0; k < n; ++k) {
        const double c = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
        for (int j = 0; j < n; ++j) b.q(j, k) = c * std::cos(k * pi * (j + 0.5) / n);
        b.lambda(k) = -(2.0 - 2.0 * std::cos(k * pi / n));
      }
      break;
    }
    case Basis::cell_odd: {
      b.q.resize(n, n);
      b.lambda.resize(n);
      for (int m = 0; m < n; ++m) {
        const int k = m + 1;
        const double c = k == n ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
        for (int j = 0; j < n; ++j) b.q(j, m) = c * std::sin(k * pi * (j + 0.5) / n);
        b.lambda(m) = -(2.0 - 2.0 * std::cos(k * pi / n));
      }
      break;
    }
    case Basis::node_dirichlet: {
      b.q.resize(n - 1, n - 1);
      b.lambda.resize(n - 1);
      const double c = std::sqrt(2.0 / n);
      for (int m = 0; m < n - 1; ++m) {
        const int k = m + 1;
        for (int i = 0; i < n - 1; ++i) b.q(i, m) = c * std::sin(k * pi * (i + 1) / n);
        b.lambda(m) = -(2.0 - 2.0 * std::cos(k * pi / n));
      }
      break;
    }
  }
  return b;
}

}  // namespace

const Eigenbasis& basis(Basis kind, int n) {
  thread_local std::map<std::pair<int, int>, Eigenbasis> cache;
  const auto key = std::make_pair(static_cast<int>(kind), n);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build(kind, n)).first;
  return it->second;
}

}  // namespace mvsim::spectral
