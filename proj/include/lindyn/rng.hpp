#pragma once

#include <cstdint>
#include <random>

#include "lindyn/seq_vector.hpp"

namespace lindyn {

// Deterministic seeded randomness. mt19937_64 has a platform-independent
// output sequence, and every derived draw below uses only that sequence
// (no distribution objects, whose outputs vary between standard libraries),
// so identical seeds give identical runs everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // Uniform on [0, n), by rejection.
  std::uint64_t below(std::uint64_t n);

  // Uniform on [lo, hi], inclusive.
  std::int64_t range(std::int64_t lo, std::int64_t hi);

  bool coin() { return (next() & 1u) != 0; }

 private:
  std::mt19937_64 eng_;
};

// Random finitely supported vector on the grid (1/denominator)*Z with support
// inside [index_lo, index_lo + window) and l1 numerator total uniform on
// [0, max_numerator_total]; the total is split over the window by a uniform
// composition and each nonzero part gets a uniform sign. By construction
// ||v||_1 <= max_numerator_total / denominator, hence also ||v||_2 and
// ||v||_inf are bounded by the same value.
SeqVector random_grid_vector(Rng& rng, std::int64_t index_lo, std::int64_t window,
                             std::int64_t max_numerator_total, std::int64_t denominator,
                             IndexDomain domain = IndexDomain::Naturals);

}  // namespace lindyn
