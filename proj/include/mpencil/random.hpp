#pragma once

// Seeded, splittable random streams. Each consumer derives its own stream
// from (seed, stream id) so results do not depend on thread count or call order.

#include <cstdint>
#include <random>

#include "mpencil/types.hpp"

namespace mpencil {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ (stream * 0xd1b54a32d192ed03ULL));
}

class RandomStream {
public:
  RandomStream(std::uint64_t seed, std::uint64_t stream) : engine_(derive_seed(seed, stream)) {}

  double normal() { return normal_(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

  Complex complex_normal() { return {normal(), normal()}; }

  ComplexVector complex_unit(Index n) {
    ComplexVector v(n);
    for (Index i = 0; i < n; ++i) v(i) = complex_normal();
    return v / v.norm();
  }

  ComplexDenseMatrix complex_matrix(Index rows, Index cols) {
    ComplexDenseMatrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) m(i, j) = complex_normal();
    return m;
  }

  std::mt19937_64& engine() { return engine_; }

private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace mpencil
