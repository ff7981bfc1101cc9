#include "lindyn/rng.hpp"

#include <set>

namespace lindyn {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw DomainError("Rng::below(0)");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t r;
  do {
    r = next();
  } while (r >= limit);
  return r % n;
}

std::int64_t Rng::range(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw DomainError("Rng::range with lo > hi");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1u;
  return lo + static_cast<std::int64_t>(below(span));
}

SeqVector random_grid_vector(Rng& rng, std::int64_t index_lo, std::int64_t window,
                             std::int64_t max_numerator_total, std::int64_t denominator,
                             IndexDomain domain) {
  if (window < 1) throw DomainError("random_grid_vector needs window >= 1");
  if (denominator < 1) throw DomainError("random_grid_vector needs denominator >= 1");
  if (max_numerator_total < 0) throw DomainError("negative numerator budget");

  const auto t = static_cast<std::int64_t>(
      rng.below(static_cast<std::uint64_t>(max_numerator_total) + 1u));

  // Uniform composition of t into `window` nonnegative parts via stars and
  // bars: choose window-1 distinct bar slots among t + window - 1 positions
  // (Floyd's sampling), gaps between consecutive bars are the parts.
  std::set<std::int64_t> bars;
  const std::int64_t slots = t + window - 1;
  for (std::int64_t j = slots - (window - 1); j < slots; ++j) {
    const auto r = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(j) + 1u));
    if (!bars.insert(r).second) bars.insert(j);
  }

  SeqVector v(domain);
  std::int64_t prev = -1;
  std::int64_t part_index = 0;
  const Rational unit(1, static_cast<long>(denominator));
  const auto emit = [&](std::int64_t part) {
    if (part > 0) {
      const Rational mag = Rational(static_cast<long>(part)) * unit;
      v.set_entry(index_lo + part_index, rng.coin() ? mag : -mag);
    }
    ++part_index;
  };
  for (const auto b : bars) {
    emit(b - prev - 1);
    prev = b;
  }
  emit(slots - prev - 1);
  return v;
}

}  // namespace lindyn
