// Shared test helpers: a deterministic random stream, random density
// matrices, and independently coded oracles for the operations under test.
#pragma once

#include <cstdint>
#include <vector>

#include "weakwalk/channels.hpp"
#include "weakwalk/matcore.hpp"

namespace testkit {

// xorshift64 so fixtures are identical on every run and platform.
struct Rng {
  std::uint64_t state = 0x9e3779b97f4a7c15ULL;
  explicit Rng(std::uint64_t seed = 0x9e3779b97f4a7c15ULL) : state(seed) {}
  std::uint64_t next() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double symmetric() { return 2.0 * uniform() - 1.0; }
};

inline weakwalk::ComplexMatrix random_density(Rng& rng, int dim) {
  weakwalk::ComplexMatrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      a(i, j) = weakwalk::complexd(rng.symmetric(), rng.symmetric());
  weakwalk::ComplexMatrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

inline double max_abs_diff(const weakwalk::ComplexMatrix& a,
                           const weakwalk::ComplexMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// Definition-level Kraus action, written independently of the library.
inline weakwalk::ComplexMatrix kraus_sum(const weakwalk::KrausChannel& ch,
                                         const weakwalk::ComplexMatrix& rho) {
  weakwalk::ComplexMatrix out =
      weakwalk::ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (const weakwalk::ComplexMatrix& k : ch.ops) out += k * rho * k.adjoint();
  return out;
}

// Digit-decoding partial trace straight from the definition:
// out(kr, kc) = sum over traced digits d of rho(r, c) with matching d.
inline weakwalk::ComplexMatrix partial_trace_oracle(
    const weakwalk::ComplexMatrix& rho, const std::vector<int>& dims,
    const std::vector<int>& keep) {
  const int n = static_cast<int>(dims.size());
  std::vector<bool> kept(n, false);
  int kdim = 1;
  for (int k : keep) {
    kept[k] = true;
    kdim *= dims[k];
  }
  const int total = static_cast<int>(rho.rows());
  weakwalk::ComplexMatrix out = weakwalk::ComplexMatrix::Zero(kdim, kdim);
  std::vector<int> rd(n), cd(n);
  for (int r = 0; r < total; ++r) {
    int x = r;
    for (int s = n - 1; s >= 0; --s) {
      rd[s] = x % dims[s];
      x /= dims[s];
    }
    for (int c = 0; c < total; ++c) {
      int y = c;
      for (int s = n - 1; s >= 0; --s) {
        cd[s] = y % dims[s];
        y /= dims[s];
      }
      bool traced_match = true;
      for (int s = 0; s < n; ++s)
        if (!kept[s] && rd[s] != cd[s]) traced_match = false;
      if (!traced_match) continue;
      int kr = 0, kc = 0;
      for (int s = 0; s < n; ++s) {
        if (!kept[s]) continue;
        kr = kr * dims[s] + rd[s];
        kc = kc * dims[s] + cd[s];
      }
      out(kr, kc) += rho(r, c);
    }
  }
  return out;
}

}  // namespace testkit
