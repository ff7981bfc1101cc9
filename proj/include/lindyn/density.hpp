#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "lindyn/rational.hpp"

namespace lindyn {

// Disjoint arithmetic progressions Delta_p = { a_p + j*L : j >= 0 }, one per
// class, each carrying blocks [m, m + N_p) of even size N_p. Built so that
//   min Delta_p = a_p >= N_p,
//   |n - m| >= N_p + N_q for members n in Delta_p, m in Delta_q, (p,n) != (q,m),
// and each progression has lower density exactly 1/L.
struct DensitySchedule {
  std::vector<std::int64_t> block_sizes;  // N_p: even, strictly increasing
  std::vector<std::int64_t> offsets;      // a_p = min Delta_p
  std::int64_t period = 0;                // L

  std::size_t classes() const { return block_sizes.size(); }
  // n in Delta_p?
  bool in_progression(std::size_t p, std::int64_t n) const;
  // The unique (p, j) with n = m + j, m in Delta_p, 0 <= j < N_p, if any.
  std::optional<std::pair<std::size_t, std::int64_t>> block_coordinates(std::int64_t n) const;
  // Members of Delta_p inside [lo, hi].
  std::vector<std::int64_t> members(std::size_t p, std::int64_t lo, std::int64_t hi) const;
};

// a_0 = N_0, a_{p+1} = a_p + N_p + N_{p+1}, L = a_last + N_last + N_0; every
// structural invariant is re-verified exhaustively over [0, 2L] before the
// schedule is returned.
DensitySchedule build_schedule(const std::vector<std::int64_t>& sizes);

// Exact lower-density estimate of a set of naturals over [1, n_max]: the
// minimum prefix ratio #(set within [1, N]) / N over N in [ceil(n_max/2), n_max].
Rational lower_density_estimate(const std::function<bool(std::int64_t)>& member,
                                std::int64_t n_max);

}  // namespace lindyn
