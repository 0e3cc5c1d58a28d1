#pragma once

#include <array>
#include <cstdint>

#include "ctgibbs/types.hpp"

namespace ctgibbs {

// Seeded random stream: xoshiro256++ engine, state expanded from the 64-bit
// seed with SplitMix64.  Identical (seed, call sequence) gives a bit-identical
// stream.  substream(tag) derives an independent stream from (seed, tag), so
// each consumer can own its stream and draw counts in one consumer do not
// shift another's sequence.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double uniform();

  // Standard normal via the Box-Muller transform (second variate cached).
  double normal();

  // Gamma(shape, rate) draw, density proportional to t^(shape-1) exp(-rate t).
  // Marsaglia-Tsang squeeze for shape >= 1, boosted from shape+1 below that.
  double gamma(double shape, double rate);

  Rng substream(std::uint64_t tag) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::array<std::uint64_t, 4> state_{};
  std::uint64_t seed_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// n i.i.d. standard normal entries.
Vec randn_vec(Eigen::Index n, Rng& rng);

}  // namespace ctgibbs
