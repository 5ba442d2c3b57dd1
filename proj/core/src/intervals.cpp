#include "diophant/intervals.hpp"

#include <algorithm>

#include "diophant/errors.hpp"

namespace diophant {

namespace {

// Merges intervals already sorted by lo.
std::vector<RatInterval> merge_sorted(std::vector<RatInterval>& sorted) {
  std::vector<RatInterval> out;
  out.reserve(sorted.size());
  for (auto& iv : sorted) {
    if (!out.empty() && iv.lo <= out.back().hi) {
      if (iv.hi > out.back().hi) out.back().hi = std::move(iv.hi);
    } else {
      out.push_back(std::move(iv));
    }
  }
  return out;
}

}  // namespace

IntervalUnion IntervalUnion::normalize(std::vector<RatInterval> raw) {
  const Rational zero(0), one(1);
  std::vector<RatInterval> kept;
  kept.reserve(raw.size());
  for (auto& iv : raw) {
    if (iv.lo > iv.hi) {
      throw InvalidArgument("interval with lo > hi: [" + to_string(iv.lo) + ", " +
                            to_string(iv.hi) + "]");
    }
    if (iv.hi < zero || iv.lo > one) continue;
    if (iv.lo < zero) iv.lo = zero;
    if (iv.hi > one) iv.hi = one;
    kept.push_back(std::move(iv));
  }
  if (!std::is_sorted(kept.begin(), kept.end(),
                      [](const RatInterval& a, const RatInterval& b) { return a.lo < b.lo; })) {
    std::sort(kept.begin(), kept.end(),
              [](const RatInterval& a, const RatInterval& b) { return a.lo < b.lo; });
  }
  return IntervalUnion(merge_sorted(kept));
}

IntervalUnion IntervalUnion::from_canonical(std::vector<RatInterval> parts) {
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const bool ok = parts[i].lo >= 0 && parts[i].hi <= 1 && parts[i].lo <= parts[i].hi &&
                    (i == 0 || parts[i - 1].hi < parts[i].lo);
    if (!ok) throw InvariantFailure("interval parts are not in canonical form");
  }
  return IntervalUnion(std::move(parts));
}

bool IntervalUnion::contains(const Rational& x) const {
  // First part whose hi >= x.
  auto it = std::lower_bound(parts_.begin(), parts_.end(), x,
                             [](const RatInterval& iv, const Rational& v) { return iv.hi < v; });
  return it != parts_.end() && it->lo <= x;
}

bool IntervalUnion::includes(const IntervalUnion& other) const {
  for (const auto& iv : other.parts_) {
    auto it = std::lower_bound(parts_.begin(), parts_.end(), iv.lo,
                               [](const RatInterval& p, const Rational& v) { return p.hi < v; });
    if (it == parts_.end() || it->lo > iv.lo || it->hi < iv.hi) return false;
  }
  return true;
}

IntervalUnion normalize(std::vector<RatInterval> raw) {
  return IntervalUnion::normalize(std::move(raw));
}

Rational measure(const IntervalUnion& u) {
  Rational sum = 0;
  for (const auto& iv : u.parts()) sum += iv.hi - iv.lo;
  return sum;
}

IntervalUnion intersect(const IntervalUnion& u, const IntervalUnion& v) {
  std::vector<RatInterval> out;
  auto a = u.parts().begin();
  auto b = v.parts().begin();
  while (a != u.parts().end() && b != v.parts().end()) {
    const Rational& lo = a->lo > b->lo ? a->lo : b->lo;
    const Rational& hi = a->hi < b->hi ? a->hi : b->hi;
    if (lo <= hi) {
      // Adjacent pieces can touch when both inputs have a point contact.
      if (!out.empty() && out.back().hi >= lo) {
        if (hi > out.back().hi) out.back().hi = hi;
      } else {
        out.push_back({lo, hi});
      }
    }
    if (a->hi < b->hi) {
      ++a;
    } else {
      ++b;
    }
  }
  return IntervalUnion::from_canonical(std::move(out));
}

IntervalUnion unite(const IntervalUnion& u, const IntervalUnion& v) {
  std::vector<RatInterval> all;
  all.reserve(u.size() + v.size());
  std::merge(u.parts().begin(), u.parts().end(), v.parts().begin(), v.parts().end(),
             std::back_inserter(all),
             [](const RatInterval& x, const RatInterval& y) { return x.lo < y.lo; });
  return IntervalUnion::from_canonical(merge_sorted(all));
}

IntervalUnion unite_all(std::span<const IntervalUnion> sets) {
  std::vector<RatInterval> all;
  std::size_t total = 0;
  for (const auto& s : sets) total += s.size();
  all.reserve(total);
  for (const auto& s : sets) all.insert(all.end(), s.parts().begin(), s.parts().end());
  return IntervalUnion::normalize(std::move(all));
}

}  // namespace diophant
