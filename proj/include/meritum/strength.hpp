#pragma once

#include <string>
#include <vector>

#include "meritum/features.hpp"
#include "meritum/sparse.hpp"

namespace meritum {

enum class Strength { Strong, Weak };

const char* to_string(Strength s);

// One strength per (topic, side); the shape of the type enforces the
// single-strength consistency constraint.
struct StrengthAssignment {
  std::vector<Strength> pro;
  std::vector<Strength> con;

  int K() const { return static_cast<int>(pro.size()); }
  static StrengthAssignment all_strong(int K) {
    return {std::vector<Strength>(K, Strength::Strong),
            std::vector<Strength>(K, Strength::Strong)};
  }
  bool operator==(const StrengthAssignment&) const = default;
};

struct ConstraintConfig {
  bool use_C3 = false;  // exclusive strength: a topic cannot be strong for both sides
};

bool is_interaction_feature(const std::string& name);  // ix: prefix
bool is_addressing_feature(const std::string& name);   // ix: minus topic_shift

// Couple one argument's base vector with the strengths of its topic. Every
// coordinate f=v is emitted as f=v and f|s=v where s is this side's strength;
// addressing coordinates additionally get f|s_self,s_oppo=v. With
// oppo_pairing=false the pairing coordinates are suppressed.
SparseVector couple(const SparseVector& base, int topic, const StrengthAssignment& h, Side side,
                    bool oppo_pairing = true);

// Coordinate-wise sum of the coupled vectors of one side's arguments.
SparseVector side_vector(const std::vector<ArgumentFeatures>& args, const StrengthAssignment& h,
                         bool oppo_pairing = true);

struct DiffScores {
  SparseVector diff_pro;  // Φ(pro) - Φ(con)
  SparseVector diff_con;  // the exact negation
  double score_pro = 0.0;
  double score_con = 0.0;
};

DiffScores diff_and_scores(const SparseVector& w, const DebateFeatures& feats,
                           const StrengthAssignment& h);

struct InferenceResult {
  StrengthAssignment h;
  double score = 0.0;
  std::vector<double> per_topic;  // contribution of each topic at the optimum
};

// Exact maximizer of w . diff(side_of_diff) over strength assignments. The
// objective decomposes per topic, so each topic picks the best of its four
// (three under C3) candidate pairs; ties keep the earlier pair in the order
// (S,S) > (S,W) > (W,S) > (W,W).
InferenceResult infer_best_assignment(const SparseVector& w, const DebateFeatures& feats,
                                      Side side_of_diff, const ConstraintConfig& cc = {});

// Same optimum through a generic 0/1 branch-and-bound over the explicit
// constraint system; serves as a cross-check of the decomposition.
InferenceResult infer_via_ilp(const SparseVector& w, const DebateFeatures& feats,
                              Side side_of_diff, const ConstraintConfig& cc = {});

}  // namespace meritum
