#include "meritum/sparse.hpp"

namespace meritum {

namespace {

struct Tracker {
  double min = 0.0;
  double max = 0.0;
  bool seen = false;
  bool binary = true;  // all observed values in {0, 1}
};

}  // namespace

void FeatureScaler::fit(const std::vector<const SparseVector*>& samples) {
  std::map<std::string, Tracker> track;
  for (const SparseVector* v : samples) {
    for (const auto& [name, value] : *v) {
      Tracker& t = track[name];
      if (!t.seen) {
        t.min = t.max = value;
        t.seen = true;
      } else {
        t.min = std::min(t.min, value);
        t.max = std::max(t.max, value);
      }
      if (value != 0.0 && value != 1.0) t.binary = false;
    }
  }
  ranges_.clear();
  for (const auto& [name, t] : track) {
    if (t.binary) continue;
    ranges_[name] = Range{t.min, t.max};
  }
  fitted_ = true;
}

void FeatureScaler::fit(const std::vector<SparseVector>& samples) {
  std::vector<const SparseVector*> ptrs;
  ptrs.reserve(samples.size());
  for (const auto& s : samples) ptrs.push_back(&s);
  fit(ptrs);
}

SparseVector FeatureScaler::apply(const SparseVector& v) const {
  SparseVector out;
  for (const auto& [name, value] : v) {
    auto it = ranges_.find(name);
    if (it == ranges_.end()) {
      out.set(name, value);
      continue;
    }
    const Range& r = it->second;
    double scaled = 0.0;
    if (r.max > r.min) scaled = (value - r.min) / (r.max - r.min);
    scaled = std::clamp(scaled, 0.0, 1.0);
    out.set(name, scaled);
  }
  return out;
}

}  // namespace meritum
