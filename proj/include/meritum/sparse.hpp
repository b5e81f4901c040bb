#pragma once

#include <map>
#include <string>
#include <vector>

#include "meritum/common.hpp"

namespace meritum {

// Feature vector keyed by feature-name strings. Backed by an ordered map so
// that iteration, and therefore every accumulation of doubles, happens in a
// fixed order. Zero values are never stored.
class SparseVector {
 public:
  using Map = std::map<std::string, double>;

  SparseVector() = default;

  double get(const std::string& name) const {
    auto it = coords_.find(name);
    return it == coords_.end() ? 0.0 : it->second;
  }

  void set(const std::string& name, double value) {
    check_finite(value, "SparseVector::set");
    if (value == 0.0) coords_.erase(name);
    else coords_[name] = value;
  }

  void add(const std::string& name, double value) { set(name, get(name) + value); }

  void add(const SparseVector& other, double scale = 1.0) {
    for (const auto& [name, value] : other.coords_) add(name, scale * value);
  }

  void scale(double factor) {
    if (factor == 0.0) { coords_.clear(); return; }
    for (auto& [name, value] : coords_) value *= factor;
  }

  double dot(const SparseVector& other) const {
    // iterate the smaller map, in key order
    const Map& a = coords_.size() <= other.coords_.size() ? coords_ : other.coords_;
    const Map& b = coords_.size() <= other.coords_.size() ? other.coords_ : coords_;
    double sum = 0.0;
    for (const auto& [name, value] : a) {
      auto it = b.find(name);
      if (it != b.end()) sum += value * it->second;
    }
    return sum;
  }

  double norm() const {
    double s = 0.0;
    for (const auto& [name, value] : coords_) s += value * value;
    return std::sqrt(s);
  }

  SparseVector negated() const {
    SparseVector out;
    for (const auto& [name, value] : coords_) out.coords_[name] = -value;
    return out;
  }

  size_t size() const { return coords_.size(); }
  bool empty() const { return coords_.empty(); }
  void clear() { coords_.clear(); }

  bool operator==(const SparseVector& other) const { return coords_ == other.coords_; }

  Map::const_iterator begin() const { return coords_.begin(); }
  Map::const_iterator end() const { return coords_.end(); }

 private:
  Map coords_;
};

inline SparseVector diff(const SparseVector& a, const SparseVector& b) {
  SparseVector out = a;
  out.add(b, -1.0);
  return out;
}

// Per-feature min-max normalization fitted on training data. Features whose
// training values all lie in {0, 1} are left untouched so that indicator
// features survive; everything else maps through (v - min) / (max - min),
// with degenerate (constant) features collapsing to 0. At apply time values
// are clipped to [0, 1]. Only stored coordinates are transformed; implicit
// zeros stay implicit.
class FeatureScaler {
 public:
  struct Range {
    double min = 0.0;
    double max = 0.0;
  };

  void fit(const std::vector<const SparseVector*>& samples);
  void fit(const std::vector<SparseVector>& samples);

  SparseVector apply(const SparseVector& v) const;

  const std::map<std::string, Range>& ranges() const { return ranges_; }
  bool fitted() const { return fitted_; }

  // serialization hooks used by the model file
  std::map<std::string, Range>& mutable_ranges() { return ranges_; }
  void mark_fitted() { fitted_ = true; }

 private:
  std::map<std::string, Range> ranges_;
  bool fitted_ = false;
};

}  // namespace meritum
