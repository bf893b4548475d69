#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lfi {

// A subset of ℤ given as a finite union of intervals. Stored canonically:
// sorted, pairwise disjoint and non-adjacent, so equality is structural.
class IntervalSet {
 public:
  struct Interval {
    std::optional<std::int64_t> lo;  // nullopt: unbounded below
    std::optional<std::int64_t> hi;  // nullopt: unbounded above
    friend bool operator==(const Interval&, const Interval&) = default;
  };

  IntervalSet() = default;

  static IntervalSet empty() { return {}; }
  static IntervalSet all() { return from({{std::nullopt, std::nullopt}}); }
  static IntervalSet at_most(std::int64_t n) { return from({{std::nullopt, n}}); }
  static IntervalSet at_least(std::int64_t n) { return from({{n, std::nullopt}}); }
  static IntervalSet range(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) return {};
    return from({{lo, hi}});
  }
  static IntervalSet singleton(std::int64_t n) { return range(n, n); }

  // Any list of intervals; empty ones are dropped, the rest merged.
  static IntervalSet from(std::vector<Interval> parts) {
    std::erase_if(parts, [](const Interval& i) { return i.lo && i.hi && *i.lo > *i.hi; });
    std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) {
      if (!a.lo || !b.lo) return !a.lo && b.lo;
      return *a.lo < *b.lo;
    });
    IntervalSet s;
    for (const Interval& i : parts) {
      if (!s.parts_.empty()) {
        Interval& last = s.parts_.back();
        if (!last.hi) continue;
        if (!i.lo || *i.lo <= *last.hi + 1) {
          if (!i.hi || *i.hi > *last.hi) last.hi = i.hi;
          continue;
        }
      }
      s.parts_.push_back(i);
    }
    return s;
  }

  const std::vector<Interval>& intervals() const { return parts_; }
  bool is_empty() const { return parts_.empty(); }
  bool is_all() const { return parts_.size() == 1 && !parts_[0].lo && !parts_[0].hi; }

  bool contains(std::int64_t z) const {
    for (const Interval& i : parts_)
      if ((!i.lo || *i.lo <= z) && (!i.hi || z <= *i.hi)) return true;
    return false;
  }

  IntervalSet complement() const {
    std::vector<Interval> out;
    std::optional<std::int64_t> cursor;  // next uncovered point; nullopt = -inf
    bool open_below = true;
    for (const Interval& i : parts_) {
      if (i.lo) {
        if (open_below) out.push_back({std::nullopt, *i.lo - 1});
        else if (*cursor <= *i.lo - 1) out.push_back({cursor, *i.lo - 1});
      }
      open_below = false;
      if (!i.hi) return from(out);
      cursor = *i.hi + 1;
    }
    if (open_below) return all();
    out.push_back({cursor, std::nullopt});
    return from(out);
  }

  friend IntervalSet operator|(const IntervalSet& a, const IntervalSet& b) {
    std::vector<Interval> parts = a.parts_;
    parts.insert(parts.end(), b.parts_.begin(), b.parts_.end());
    return from(std::move(parts));
  }
  friend IntervalSet operator&(const IntervalSet& a, const IntervalSet& b) {
    return (a.complement() | b.complement()).complement();
  }
  IntervalSet operator~() const { return complement(); }
  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

  // (-inf,n] -> n
  std::optional<std::int64_t> as_lower_ray() const {
    if (parts_.size() == 1 && !parts_[0].lo && parts_[0].hi) return parts_[0].hi;
    return std::nullopt;
  }
  // [n,inf) -> n
  std::optional<std::int64_t> as_upper_ray() const {
    if (parts_.size() == 1 && parts_[0].lo && !parts_[0].hi) return parts_[0].lo;
    return std::nullopt;
  }

  std::string to_string() const {
    if (is_empty()) return "∅";
    if (is_all()) return "ℤ";
    std::string out;
    for (const Interval& i : parts_) {
      if (!out.empty()) out += " ∪ ";
      if (i.lo && i.hi && *i.lo == *i.hi) {
        out += "{" + std::to_string(*i.lo) + "}";
        continue;
      }
      out += i.lo ? "[" + std::to_string(*i.lo) : "(-inf";
      out += ",";
      out += i.hi ? std::to_string(*i.hi) + "]" : "inf)";
    }
    return out;
  }

 private:
  std::vector<Interval> parts_;
};

// The paraconsistent model on ℘(ℤ): half-lines are the inconsistent values.
struct IntervalModel {
  using element_type = IntervalSet;

  static bool inconsistent(const IntervalSet& x) { return x.as_lower_ray() || x.as_upper_ray(); }

  IntervalSet top() const { return IntervalSet::all(); }
  IntervalSet bottom() const { return IntervalSet::empty(); }
  IntervalSet meet(const IntervalSet& a, const IntervalSet& b) const { return a & b; }
  IntervalSet join(const IntervalSet& a, const IntervalSet& b) const { return a | b; }
  IntervalSet complement(const IntervalSet& a) const { return ~a; }
  IntervalSet neg(const IntervalSet& x) const {
    if (auto n = x.as_lower_ray()) return IntervalSet::at_least(*n);
    if (auto n = x.as_upper_ray()) return IntervalSet::at_most(*n);
    return ~x;
  }
  IntervalSet circ(const IntervalSet& x) const { return ~(x & neg(x)); }
};

}  // namespace lfi
