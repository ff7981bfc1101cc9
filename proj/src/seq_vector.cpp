#include "lindyn/seq_vector.hpp"

#include <cctype>
#include <sstream>

namespace lindyn {

std::string to_string(IndexDomain d) {
  return d == IndexDomain::Naturals ? "naturals" : "integers";
}

SeqVector SeqVector::basis(std::int64_t i, IndexDomain d) {
  SeqVector v(d);
  v.set_entry(i, Rational(1));
  return v;
}

SeqVector SeqVector::from_entries(
    std::initializer_list<std::pair<std::int64_t, Rational>> entries, IndexDomain d) {
  SeqVector v(d);
  for (const auto& [i, q] : entries) v.set_entry(i, q);
  return v;
}

Rational SeqVector::entry(std::int64_t i) const {
  const auto it = entries_.find(i);
  return it == entries_.end() ? Rational(0) : it->second;
}

void SeqVector::require_index(std::int64_t i) const {
  if (domain_ == IndexDomain::Naturals && i < 0) {
    throw DomainError("negative index " + std::to_string(i) +
                      " on a naturals-indexed vector");
  }
}

void SeqVector::require_same_domain(const SeqVector& w) const {
  if (domain_ != w.domain_) {
    throw DomainError("index domain mismatch: " + to_string(domain_) + " vs " +
                      to_string(w.domain_));
  }
}

void SeqVector::set_entry(std::int64_t i, const Rational& value) {
  require_index(i);
  if (value.is_zero()) {
    entries_.erase(i);
  } else {
    entries_[i] = value;
  }
}

std::int64_t SeqVector::min_index() const {
  if (entries_.empty()) throw DomainError("min_index of the zero vector");
  return entries_.begin()->first;
}

std::int64_t SeqVector::max_index() const {
  if (entries_.empty()) throw DomainError("max_index of the zero vector");
  return entries_.rbegin()->first;
}

SeqVector& SeqVector::add_scaled(const Rational& a, const SeqVector& w) {
  require_same_domain(w);
  if (a.is_zero()) return *this;
  for (const auto& [i, q] : w.entries_) {
    auto [it, inserted] = entries_.try_emplace(i, Rational(0));
    it->second += a * q;
    if (it->second.is_zero()) entries_.erase(it);
  }
  return *this;
}

SeqVector operator+(const SeqVector& v, const SeqVector& w) {
  SeqVector r = v;
  r.add_scaled(Rational(1), w);
  return r;
}

SeqVector operator-(const SeqVector& v, const SeqVector& w) {
  SeqVector r = v;
  r.add_scaled(Rational(-1), w);
  return r;
}

SeqVector operator*(const Rational& a, const SeqVector& v) {
  SeqVector r(v.domain());
  r.add_scaled(a, v);
  return r;
}

bool operator==(const SeqVector& v, const SeqVector& w) {
  return v.domain_ == w.domain_ && v.entries_ == w.entries_;
}

std::string SeqVector::str() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [i, q] : entries_) {
    if (!first) os << ", ";
    first = false;
    os << i << ':' << q.str();
  }
  os << '}';
  return os.str();
}

SeqVector SeqVector::parse(std::string_view text, IndexDomain d) {
  const auto fail = [&text](const std::string& why) -> SeqVector {
    throw ParseError("invalid vector '" + std::string(text) + "': " + why);
  };
  std::size_t i = 0;
  const auto skip_ws = [&] {
    while (i < text.size() && text[i] == ' ') ++i;
  };
  if (text.empty() || text.front() != '{') return fail("missing '{'");
  ++i;
  SeqVector v(d);
  skip_ws();
  if (i < text.size() && text[i] == '}') {
    ++i;
  } else {
    while (true) {
      skip_ws();
      std::size_t idx_begin = i;
      if (i < text.size() && (text[i] == '+' || text[i] == '-')) ++i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (i == idx_begin) return fail("expected index");
      std::int64_t idx = 0;
      try {
        idx = std::stoll(std::string(text.substr(idx_begin, i - idx_begin)));
      } catch (const std::exception&) {
        return fail("index out of range");
      }
      if (i >= text.size() || text[i] != ':') return fail("expected ':' after index");
      ++i;
      std::size_t q_begin = i;
      while (i < text.size() && text[i] != ',' && text[i] != '}') ++i;
      if (i >= text.size()) return fail("unterminated entry");
      const Rational q = Rational::parse(text.substr(q_begin, i - q_begin));
      if (v.entries_.count(idx)) return fail("duplicate index " + std::to_string(idx));
      if (q.is_zero()) return fail("explicit zero entry at index " + std::to_string(idx));
      v.set_entry(idx, q);
      if (text[i] == '}') {
        ++i;
        break;
      }
      ++i;  // consume ','
    }
  }
  if (i != text.size()) return fail("trailing characters");
  return v;
}

void SeqVector::check_invariants() const {
  for (const auto& [i, q] : entries_) {
    require_index(i);
    if (q.is_zero()) throw DomainError("stored zero entry at index " + std::to_string(i));
  }
}

}  // namespace lindyn
