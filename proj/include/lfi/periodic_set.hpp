#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <iterator>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace lfi {

inline constexpr std::array<std::uint64_t, 10> kPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};

// p_k with p_1 = 2.
inline std::uint64_t nth_prime(int k) {
  if (k < 1 || k > static_cast<int>(kPrimes.size())) throw std::out_of_range("prime index out of range");
  return kPrimes[static_cast<std::size_t>(k - 1)];
}

// p_1 · … · p_k, with primorial(0) = 1.
inline std::uint64_t primorial(int k) {
  std::uint64_t m = 1;
  for (int i = 1; i <= k; ++i) m *= nth_prime(i);
  return m;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t m) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p : kPrimes)
    if (m % p == 0) {
      out.push_back(p);
      m /= p;
    }
  if (m != 1) throw std::invalid_argument("modulus must be a square-free product of primes up to 29");
  return out;
}

// A subset of ℤ that is a union of residue classes modulo a square-free m.
// Always canonical: m is the least period, so equality is representational.
class PeriodicSet {
 public:
  using Bits = boost::dynamic_bitset<std::uint64_t>;

  // Upper bound on the modulus of any intermediate result.
  static constexpr std::uint64_t kMaxModulus = 250'000'000;
  // Beyond this modulus to_string summarizes instead of covering.
  static constexpr std::uint64_t kMaxPrintModulus = 510'510;

  PeriodicSet() : modulus_(1), bits_(1) {}

  static PeriodicSet empty() { return {}; }
  static PeriodicSet all() {
    PeriodicSet s;
    s.bits_.set();
    return s;
  }
  // [r]_m.
  static PeriodicSet residue(std::int64_t r, std::uint64_t m) {
    prime_factors(m);
    Bits b(m);
    b.set(floor_mod(r, m));
    return from_bits(m, std::move(b));
  }
  // Bit r set iff [r]_m is included.
  static PeriodicSet from_bits(std::uint64_t m, Bits bits) {
    if (bits.size() != m) throw std::invalid_argument("residue bitmap size must equal the modulus");
    prime_factors(m);
    PeriodicSet s;
    s.modulus_ = m;
    s.bits_ = std::move(bits);
    s.canonicalize();
    return s;
  }
  template <class Pred>
  static PeriodicSet from_predicate(std::uint64_t m, Pred&& pred) {
    Bits b(m);
    for (std::uint64_t r = 0; r < m; ++r)
      if (pred(r)) b.set(r);
    return from_bits(m, std::move(b));
  }

  std::uint64_t modulus() const { return modulus_; }
  const Bits& residues() const { return bits_; }
  std::vector<std::uint64_t> primes() const { return prime_factors(modulus_); }

  bool contains(std::int64_t z) const { return bits_.test(floor_mod(z, modulus_)); }
  bool is_empty() const { return bits_.none(); }
  bool is_all() const { return bits_.all(); }
  std::size_t density_numerator() const { return bits_.count(); }

  // Least non-negative member, as a residue of the modulus.
  std::optional<std::uint64_t> least_residue() const {
    const auto i = bits_.find_first();
    if (i == Bits::npos) return std::nullopt;
    return static_cast<std::uint64_t>(i);
  }

  Bits residues_at(std::uint64_t m) const { return tile(bits_, modulus_, m); }

  PeriodicSet operator~() const {
    PeriodicSet s = *this;
    s.bits_.flip();
    return s;
  }
  friend PeriodicSet operator|(const PeriodicSet& a, const PeriodicSet& b) {
    return combine(a, b, [](Bits& x, const Bits& y) { x |= y; });
  }
  friend PeriodicSet operator&(const PeriodicSet& a, const PeriodicSet& b) {
    return combine(a, b, [](Bits& x, const Bits& y) { x &= y; });
  }
  friend PeriodicSet operator-(const PeriodicSet& a, const PeriodicSet& b) {
    return combine(a, b, [](Bits& x, const Bits& y) { x -= y; });
  }
  bool is_subset_of(const PeriodicSet& other) const { return (*this - other).is_empty(); }

  friend bool operator==(const PeriodicSet& a, const PeriodicSet& b) {
    return a.modulus_ == b.modulus_ && a.bits_ == b.bits_;
  }
  friend bool operator<(const PeriodicSet& a, const PeriodicSet& b) {
    if (a.modulus_ != b.modulus_) return a.modulus_ < b.modulus_;
    return a.bits_ < b.bits_;
  }

  // Union of [r]_d and [r]_p^c terms, or the complement of one when shorter.
  std::string to_string() const;

 private:
  static std::uint64_t floor_mod(std::int64_t z, std::uint64_t m) {
    const auto mm = static_cast<std::int64_t>(m);
    return static_cast<std::uint64_t>(((z % mm) + mm) % mm);
  }

  // Repeats the period-m pattern up to length big (a multiple of m).
  static Bits tile(const Bits& bits, std::uint64_t m, std::uint64_t big) {
    Bits out = bits;
    out.resize(big);
    for (std::uint64_t filled = m; filled < big; filled *= 2) out |= out << filled;
    return out;
  }

  template <class Op>
  static PeriodicSet combine(const PeriodicSet& a, const PeriodicSet& b, Op op) {
    const std::uint64_t m = std::lcm(a.modulus_, b.modulus_);
    if (m > kMaxModulus) throw std::length_error("periodic set modulus exceeds the supported bound");
    Bits x = tile(a.bits_, a.modulus_, m);
    op(x, b.modulus_ == m ? b.bits_ : tile(b.bits_, b.modulus_, m));
    PeriodicSet s;
    s.modulus_ = m;
    s.bits_ = std::move(x);
    s.canonicalize();
    return s;
  }

  void canonicalize() {
    bool changed = true;
    while (changed && modulus_ > 1) {
      changed = false;
      for (std::uint64_t p : prime_factors(modulus_)) {
        const std::uint64_t q = modulus_ / p;
        const Bits rotated = (bits_ >> q) | (bits_ << (modulus_ - q));
        if (rotated == bits_) {
          bits_.resize(q);
          modulus_ = q;
          changed = true;
          break;
        }
      }
    }
  }

  std::uint64_t modulus_;
  Bits bits_;
};

namespace detail {

struct ResidueTerm {
  std::uint64_t r;
  std::uint64_t d;
  bool complemented;
  std::string str() const {
    return "[" + std::to_string(r) + "]_" + std::to_string(d) + (complemented ? "^c" : "");
  }
};

// Greedy cover of bits (period m) by terms [r]_d, d | m, and [r]_p^c.
inline std::vector<ResidueTerm> cover(const PeriodicSet::Bits& bits, std::uint64_t m) {
  std::vector<ResidueTerm> chosen;
  if (bits.none()) return chosen;
  const auto primes = prime_factors(m);
  std::vector<std::uint64_t> divisors;
  for (std::size_t mask = 1; mask < (std::size_t{1} << primes.size()); ++mask) {
    std::uint64_t d = 1;
    for (std::size_t i = 0; i < primes.size(); ++i)
      if (mask >> i & 1) d *= primes[i];
    if (d <= 210 || std::popcount(mask) == 1) divisors.push_back(d);
  }
  std::sort(divisors.begin(), divisors.end());

  struct Candidate {
    ResidueTerm term;
    std::vector<std::uint64_t> members;  // residues mod m
  };
  // Plain terms first so they win ties against complemented ones.
  std::vector<Candidate> cands, comp_cands;
  for (std::uint64_t d : divisors) {
    std::vector<char> full(d, 1);
    for (std::uint64_t z = 0; z < m; ++z)
      if (!bits.test(z)) full[z % d] = 0;
    const bool prime = std::find(primes.begin(), primes.end(), d) != primes.end();
    const auto missing = static_cast<std::size_t>(std::count(full.begin(), full.end(), 0));
    for (std::uint64_t r = 0; r < d; ++r) {
      if (full[r]) {
        Candidate c{{r, d, false}, {}};
        for (std::uint64_t z = r; z < m; z += d) c.members.push_back(z);
        cands.push_back(std::move(c));
      } else if (prime && missing == 1) {
        Candidate c{{r, d, true}, {}};
        for (std::uint64_t z = 0; z < m; ++z)
          if (z % d != r) c.members.push_back(z);
        comp_cands.push_back(std::move(c));
      }
    }
  }
  std::move(comp_cands.begin(), comp_cands.end(), std::back_inserter(cands));

  PeriodicSet::Bits uncovered = bits;
  while (uncovered.any()) {
    std::size_t best = cands.size(), best_gain = 0;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      std::size_t gain = 0;
      for (std::uint64_t z : cands[i].members) gain += uncovered.test(z);
      if (gain > best_gain) {
        best_gain = gain;
        best = i;
      }
    }
    if (best == cands.size()) {
      for (auto z = uncovered.find_first(); z != PeriodicSet::Bits::npos; z = uncovered.find_next(z))
        chosen.push_back({z, m, false});
      break;
    }
    for (std::uint64_t z : cands[best].members) uncovered.reset(z);
    chosen.push_back(cands[best].term);
  }
  std::sort(chosen.begin(), chosen.end(), [](const ResidueTerm& a, const ResidueTerm& b) {
    return std::tie(a.d, a.complemented, a.r) < std::tie(b.d, b.complemented, b.r);
  });
  return chosen;
}

inline std::string join_terms(const std::vector<ResidueTerm>& terms) {
  std::string s;
  for (const auto& t : terms) s += (s.empty() ? "" : " ∪ ") + t.str();
  return s;
}

}  // namespace detail

inline std::string PeriodicSet::to_string() const {
  if (is_empty()) return "∅";
  if (is_all()) return "ℤ";
  if (modulus_ > kMaxPrintModulus)
    return "<" + std::to_string(bits_.count()) + " residues mod " + std::to_string(modulus_) + ">";
  const auto direct = detail::cover(bits_, modulus_);
  Bits flipped = bits_;
  flipped.flip();
  const auto comp = detail::cover(flipped, modulus_);
  if (comp.size() < direct.size()) {
    if (comp.size() == 1) return comp[0].str() + "^c";
    return "(" + detail::join_terms(comp) + ")^c";
  }
  return detail::join_terms(direct);
}

}  // namespace lfi
