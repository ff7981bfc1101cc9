#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <utility>

#include "lindyn/rational.hpp"

namespace lindyn {

// Index domain of a sequence space: c00(N) with indices 0,1,2,... or
// c00(Z) with signed indices.
enum class IndexDomain { Naturals, Integers };

std::string to_string(IndexDomain d);

// Finitely supported sequence with exact rational entries. Entries are kept
// sparse and normalized: no explicit zeros are ever stored, so equality is
// plain entry-map equality. Indices must respect the domain (>= 0 on
// Naturals).
class SeqVector {
 public:
  explicit SeqVector(IndexDomain d = IndexDomain::Naturals) : domain_(d) {}

  static SeqVector zero(IndexDomain d = IndexDomain::Naturals) { return SeqVector(d); }
  static SeqVector basis(std::int64_t i, IndexDomain d = IndexDomain::Naturals);
  static SeqVector from_entries(
      std::initializer_list<std::pair<std::int64_t, Rational>> entries,
      IndexDomain d = IndexDomain::Naturals);

  // Text form: "{}" for zero, else "{i:q, j:q}" with indices strictly
  // increasing and rationals in canonical num/den form.
  std::string str() const;
  static SeqVector parse(std::string_view text, IndexDomain d = IndexDomain::Naturals);

  IndexDomain domain() const { return domain_; }
  const std::map<std::int64_t, Rational>& entries() const { return entries_; }
  Rational entry(std::int64_t i) const;
  void set_entry(std::int64_t i, const Rational& value);

  bool is_zero() const { return entries_.empty(); }
  std::size_t support_size() const { return entries_.size(); }
  std::int64_t min_index() const;  // requires a nonzero vector
  std::int64_t max_index() const;

  // this += a * w, in place. The workhorse of every linear computation here.
  SeqVector& add_scaled(const Rational& a, const SeqVector& w);

  friend SeqVector operator+(const SeqVector& v, const SeqVector& w);
  friend SeqVector operator-(const SeqVector& v, const SeqVector& w);
  friend SeqVector operator*(const Rational& a, const SeqVector& v);
  friend bool operator==(const SeqVector& v, const SeqVector& w);

  // Test hook: asserts normalization (no stored zeros, indices in domain).
  void check_invariants() const;

 private:
  void require_index(std::int64_t i) const;
  void require_same_domain(const SeqVector& w) const;

  IndexDomain domain_;
  std::map<std::int64_t, Rational> entries_;
};

}  // namespace lindyn
