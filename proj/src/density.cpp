#include "lindyn/density.hpp"

#include <string>

#include "lindyn/errors.hpp"

namespace lindyn {

bool DensitySchedule::in_progression(std::size_t p, std::int64_t n) const {
  if (p >= offsets.size()) throw DomainError("schedule class out of range");
  const std::int64_t r = n - offsets[p];
  return r >= 0 && r % period == 0;
}

std::optional<std::pair<std::size_t, std::int64_t>> DensitySchedule::block_coordinates(
    std::int64_t n) const {
  for (std::size_t p = 0; p < offsets.size(); ++p) {
    const std::int64_t r = n - offsets[p];
    if (r < 0) continue;
    const std::int64_t j = r % period;
    if (j < block_sizes[p]) return std::make_pair(p, j);
  }
  return std::nullopt;
}

std::vector<std::int64_t> DensitySchedule::members(std::size_t p, std::int64_t lo,
                                                   std::int64_t hi) const {
  if (p >= offsets.size()) throw DomainError("schedule class out of range");
  std::vector<std::int64_t> out;
  std::int64_t m = offsets[p];
  if (m < lo) m += ((lo - m) + period - 1) / period * period;
  for (; m <= hi; m += period) out.push_back(m);
  return out;
}

DensitySchedule build_schedule(const std::vector<std::int64_t>& sizes) {
  if (sizes.empty()) throw DomainError("schedule needs at least one block size");
  for (std::size_t p = 0; p < sizes.size(); ++p) {
    if (sizes[p] < 2 || sizes[p] % 2 != 0) {
      throw DomainError("block sizes must be even and positive, got " +
                        std::to_string(sizes[p]));
    }
    if (p > 0 && sizes[p] <= sizes[p - 1]) {
      throw DomainError("block sizes must increase strictly");
    }
  }
  DensitySchedule s;
  s.block_sizes = sizes;
  s.offsets.resize(sizes.size());
  s.offsets[0] = sizes[0];
  for (std::size_t p = 1; p < sizes.size(); ++p) {
    s.offsets[p] = s.offsets[p - 1] + sizes[p - 1] + sizes[p];
  }
  s.period = s.offsets.back() + sizes.back() + sizes.front();

  // Exhaustive re-verification over two periods: offsets clear their own
  // block size, members of distinct (class, member) pairs are separated by
  // at least the sum of their block sizes, and each progression meets
  // [1, 2L] in exactly two members (density 1/L).
  std::vector<std::pair<std::int64_t, std::size_t>> hits;
  for (std::size_t p = 0; p < sizes.size(); ++p) {
    if (s.offsets[p] < sizes[p]) throw DomainError("schedule offset below its block size");
    std::int64_t count = 0;
    for (std::int64_t n = 0; n <= 2 * s.period; ++n) {
      if (s.in_progression(p, n)) {
        hits.emplace_back(n, p);
        if (n >= 1 && n <= 2 * s.period) ++count;
      }
    }
    if (count != 2) throw DomainError("schedule progression density is not 1/L");
  }
  for (std::size_t i = 0; i < hits.size(); ++i) {
    for (std::size_t j = i + 1; j < hits.size(); ++j) {
      const auto& [n, p] = hits[i];
      const auto& [m, q] = hits[j];
      const std::int64_t gap = n < m ? m - n : n - m;
      if (gap < sizes[p] + sizes[q]) {
        throw DomainError("schedule members " + std::to_string(n) + " and " +
                          std::to_string(m) + " are too close");
      }
    }
  }
  return s;
}

Rational lower_density_estimate(const std::function<bool(std::int64_t)>& member,
                                std::int64_t n_max) {
  if (n_max < 1) throw DomainError("density window must be nonempty");
  const std::int64_t lo = (n_max + 1) / 2;
  std::int64_t count = 0;
  std::optional<Rational> best;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    if (member(n)) ++count;
    if (n < lo) continue;
    Rational ratio(count, n);
    if (!best.has_value() || ratio < *best) best = ratio;
  }
  return *best;
}

}  // namespace lindyn
