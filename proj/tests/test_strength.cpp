#include <doctest.h>

#include <cmath>
#include <vector>

#include "meritum/ilp.hpp"
#include "meritum/strength.hpp"
#include "support.hpp"

using namespace meritum;
using namespace testsupport;

namespace {

ArgumentFeatures make_arg(int topic, Side side, const SparseVector& vec, int ordinal = 0) {
  ArgumentFeatures af;
  af.arg.topic = topic;
  af.arg.side = side;
  af.arg.ordinal = ordinal;
  af.vec = vec;
  return af;
}

DebateFeatures single_arg_debate(int K, const SparseVector& vec, Side side = Side::Pro,
                                 int topic = 0) {
  DebateFeatures f;
  f.debate_id = "d";
  f.K = K;
  (side == Side::Pro ? f.pro : f.con).push_back(make_arg(topic, side, vec));
  return f;
}

// a random instance with dyadic values so cross-route comparisons are exact
DebateFeatures random_feats(Rng& rng, int K) {
  static const std::vector<std::string> pool = {
      "#we|full",       "#you|full",           "ix:addresses|full",
      "ix:common_words|inter", "ix:words_to_oppo|full", "arg:decayed|full"};
  DebateFeatures f;
  f.debate_id = "r";
  f.K = K;
  int ordinal = 0;
  for (Side side : {Side::Pro, Side::Con}) {
    size_t n = 1 + rng.below(3);
    for (size_t i = 0; i < n; ++i) {
      SparseVector v;
      for (const std::string& name : pool)
        if (rng.bernoulli(0.6)) v.set(name, 1.0 + rng.below(8));
      if (v.empty()) v.set("#we|full", 1.0);
      (side == Side::Pro ? f.pro : f.con)
          .push_back(make_arg(static_cast<int>(rng.below(K)), side, v, ordinal++));
    }
  }
  return f;
}

SparseVector random_weights(Rng& rng) {
  static const std::vector<std::string> pool = {
      "#we|full",       "#you|full",           "ix:addresses|full",
      "ix:common_words|inter", "ix:words_to_oppo|full", "arg:decayed|full"};
  static const std::vector<std::string> unary = {"", "|strong", "|weak"};
  static const std::vector<std::string> pairs = {"|strong,strong", "|strong,weak",
                                                 "|weak,strong", "|weak,weak"};
  SparseVector w;
  for (const std::string& name : pool) {
    for (const std::string& s : unary)
      if (rng.bernoulli(0.5))
        w.set(name + s, (static_cast<double>(rng.below(33)) - 16.0) / 16.0);
    if (is_addressing_feature(name))
      for (const std::string& s : pairs)
        if (rng.bernoulli(0.5))
          w.set(name + s, (static_cast<double>(rng.below(33)) - 16.0) / 16.0);
  }
  return w;
}

// exhaustive argmax over all 4^K assignments, candidate order matching the
// documented tie-break
InferenceResult exhaustive_best(const SparseVector& w, const DebateFeatures& feats,
                                Side side_of_diff, const ConstraintConfig& cc) {
  static const std::vector<std::pair<Strength, Strength>> order = {
      {Strength::Strong, Strength::Strong},
      {Strength::Strong, Strength::Weak},
      {Strength::Weak, Strength::Strong},
      {Strength::Weak, Strength::Weak}};
  const int K = feats.K;
  InferenceResult best;
  bool have = false;
  std::vector<int> pick(K, 0);
  while (true) {
    bool skip = false;
    StrengthAssignment h;
    h.pro.resize(K);
    h.con.resize(K);
    for (int k = 0; k < K; ++k) {
      auto [sp, sc] = order[pick[k]];
      if (cc.use_C3 && sp == Strength::Strong && sc == Strength::Strong) skip = true;
      h.pro[k] = sp;
      h.con[k] = sc;
    }
    if (!skip) {
      DiffScores ds = diff_and_scores(w, feats, h);
      double score = side_of_diff == Side::Pro ? ds.score_pro : ds.score_con;
      if (!have || score > best.score) {
        have = true;
        best.h = h;
        best.score = score;
      }
    }
    int k = K - 1;
    while (k >= 0 && pick[k] == 3) pick[k--] = 0;
    if (k < 0) break;
    ++pick[k];
  }
  return best;
}

}  // namespace

TEST_CASE("coupling emits the strength-free and strength-tagged coordinates") {
  SparseVector base;
  base.set("#you|full", 3.0);
  StrengthAssignment h = StrengthAssignment::all_strong(1);
  SparseVector c = couple(base, 0, h, Side::Pro);
  CHECK(c.get("#you|full") == 3.0);
  CHECK(c.get("#you|full|strong") == 3.0);
  CHECK(c.get("#you|full|weak") == 0.0);
  CHECK(c.size() == 2);
}

TEST_CASE("addressing coordinates carry the pairing of both strengths") {
  SparseVector base;
  base.set("ix:words_to_oppo|full", 100.0);
  StrengthAssignment h = StrengthAssignment::all_strong(1);
  h.con[0] = Strength::Weak;
  SparseVector c = couple(base, 0, h, Side::Pro);
  CHECK(c.get("ix:words_to_oppo|full|strong,weak") == 100.0);
  CHECK(c.get("ix:words_to_oppo|full|strong,strong") == 0.0);
  CHECK(c.get("ix:words_to_oppo|full|weak,strong") == 0.0);
  CHECK(c.get("ix:words_to_oppo|full|strong") == 100.0);

  // the same base seen from the con side pairs (self=weak, oppo=strong)
  SparseVector cc = couple(base, 0, h, Side::Con);
  CHECK(cc.get("ix:words_to_oppo|full|weak,strong") == 100.0);
  CHECK(cc.get("ix:words_to_oppo|full|weak") == 100.0);
}

TEST_CASE("topic shift is interaction but not addressing") {
  CHECK(is_interaction_feature("ix:topic_shift|full"));
  CHECK(!is_addressing_feature("ix:topic_shift|full"));
  CHECK(is_addressing_feature("ix:senti_pair:positive->negative|inter"));

  SparseVector base;
  base.set("ix:topic_shift|full", 1.0);
  SparseVector c = couple(base, 0, StrengthAssignment::all_strong(1), Side::Pro);
  CHECK(c.get("ix:topic_shift|full|strong") == 1.0);
  CHECK(c.size() == 2);  // no pairing coordinate
}

TEST_CASE("pairing can be suppressed") {
  SparseVector base;
  base.set("ix:addresses|full", 1.0);
  SparseVector c = couple(base, 0, StrengthAssignment::all_strong(1), Side::Pro, false);
  CHECK(c.get("ix:addresses|full|strong,strong") == 0.0);
  CHECK(c.get("ix:addresses|full|strong") == 1.0);
}

TEST_CASE("side vectors sum coupled arguments") {
  SparseVector a, b;
  a.set("#we|full", 1.0);
  b.set("#we|full", 2.0);
  StrengthAssignment h = StrengthAssignment::all_strong(1);
  std::vector<ArgumentFeatures> args = {make_arg(0, Side::Pro, a), make_arg(0, Side::Pro, b)};
  SparseVector sum = side_vector(args, h);
  CHECK(sum.get("#we|full|strong") == 3.0);
  CHECK(sum.get("#we|full") == 3.0);
  CHECK(side_vector({}, h).empty());
}

TEST_CASE("strength coordinates of a side vector sum to the strength-free total") {
  SparseVector a, b;
  a.set("#we|full", 1.0);
  b.set("#we|full", 2.0);
  StrengthAssignment h = StrengthAssignment::all_strong(2);
  h.pro[1] = Strength::Weak;
  std::vector<ArgumentFeatures> args = {make_arg(0, Side::Pro, a), make_arg(1, Side::Pro, b)};
  SparseVector sum = side_vector(args, h);
  CHECK(sum.get("#we|full|strong") + sum.get("#we|full|weak") == sum.get("#we|full"));
  CHECK(sum.get("#we|full|weak") == 2.0);
}

TEST_CASE("difference vectors are exactly antisymmetric") {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    DebateFeatures f = random_feats(rng, 3);
    SparseVector w = random_weights(rng);
    StrengthAssignment h = StrengthAssignment::all_strong(3);
    for (int k = 0; k < 3; ++k) {
      if (rng.bernoulli(0.5)) h.pro[k] = Strength::Weak;
      if (rng.bernoulli(0.5)) h.con[k] = Strength::Weak;
    }
    DiffScores ds = diff_and_scores(w, f, h);
    CHECK(ds.diff_con == ds.diff_pro.negated());
    CHECK(ds.score_con == -ds.score_pro);
  }
}

TEST_CASE("zero weights give zero scores") {
  Rng rng(3);
  DebateFeatures f = random_feats(rng, 2);
  DiffScores ds = diff_and_scores({}, f, StrengthAssignment::all_strong(2));
  CHECK(ds.score_pro == 0.0);
  CHECK(ds.score_con == 0.0);
}

TEST_CASE("a hand-built two-feature instance scores as computed by hand") {
  SparseVector pro_vec, con_vec;
  pro_vec.set("#we|full", 2.0);
  con_vec.set("#you|full", 3.0);
  DebateFeatures f;
  f.K = 1;
  f.pro.push_back(make_arg(0, Side::Pro, pro_vec));
  f.con.push_back(make_arg(0, Side::Con, con_vec));

  SparseVector w;
  w.set("#we|full|strong", 1.0);
  w.set("#you|full|weak", -1.0);
  StrengthAssignment h = StrengthAssignment::all_strong(1);
  h.con[0] = Strength::Weak;
  // diff = pro coupled - con coupled; w.diff = 1*2 - (-1*3) = 5
  DiffScores ds = diff_and_scores(w, f, h);
  CHECK(ds.score_pro == doctest::Approx(5.0));
}

TEST_CASE("single-topic inference picks the best candidate pair") {
  SparseVector vec;
  vec.set("ix:addresses|full", 1.0);
  DebateFeatures f = single_arg_debate(1, vec);
  SparseVector w;
  w.set("ix:addresses|full|strong,strong", 1.0);
  w.set("ix:addresses|full|strong,weak", 2.0);
  w.set("ix:addresses|full|weak,strong", -1.0);
  InferenceResult r = infer_best_assignment(w, f, Side::Pro);
  CHECK(r.h.pro[0] == Strength::Strong);
  CHECK(r.h.con[0] == Strength::Weak);
  CHECK(r.score == doctest::Approx(2.0));
}

TEST_CASE("zero weights tie-break to strong-strong, or strong-weak under C3") {
  Rng rng(5);
  DebateFeatures f = random_feats(rng, 3);
  InferenceResult plain = infer_best_assignment({}, f, Side::Pro);
  for (int k = 0; k < 3; ++k) {
    CHECK(plain.h.pro[k] == Strength::Strong);
    CHECK(plain.h.con[k] == Strength::Strong);
  }
  InferenceResult c3 = infer_best_assignment({}, f, Side::Pro, {true});
  for (int k = 0; k < 3; ++k) {
    CHECK(c3.h.pro[k] == Strength::Strong);
    CHECK(c3.h.con[k] == Strength::Weak);
  }
}

TEST_CASE("C3 returns the best non-exclusive pair when strong-strong would win") {
  SparseVector vec;
  vec.set("ix:addresses|full", 1.0);
  DebateFeatures f = single_arg_debate(1, vec);
  SparseVector w;
  w.set("ix:addresses|full|strong,strong", 5.0);
  w.set("ix:addresses|full|weak,strong", 3.0);
  InferenceResult plain = infer_best_assignment(w, f, Side::Pro);
  CHECK(plain.score == doctest::Approx(5.0));
  InferenceResult c3 = infer_best_assignment(w, f, Side::Pro, {true});
  CHECK(c3.h.pro[0] == Strength::Weak);
  CHECK(c3.h.con[0] == Strength::Strong);
  CHECK(c3.score == doctest::Approx(3.0));
}

TEST_CASE("inferred score dominates any manually supplied assignment") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    int K = 1 + static_cast<int>(rng.below(4));
    DebateFeatures f = random_feats(rng, K);
    SparseVector w = random_weights(rng);
    Side side = rng.bernoulli(0.5) ? Side::Pro : Side::Con;
    InferenceResult best = infer_best_assignment(w, f, side);
    StrengthAssignment h = StrengthAssignment::all_strong(K);
    for (int k = 0; k < K; ++k) {
      if (rng.bernoulli(0.5)) h.pro[k] = Strength::Weak;
      if (rng.bernoulli(0.5)) h.con[k] = Strength::Weak;
    }
    DiffScores ds = diff_and_scores(w, f, h);
    double manual = side == Side::Pro ? ds.score_pro : ds.score_con;
    CHECK(best.score >= manual - 1e-12);
  }
}

TEST_CASE("dropping C3 never lowers the optimum") {
  Rng rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    int K = 1 + static_cast<int>(rng.below(4));
    DebateFeatures f = random_feats(rng, K);
    SparseVector w = random_weights(rng);
    double with = infer_best_assignment(w, f, Side::Pro, {true}).score;
    double without = infer_best_assignment(w, f, Side::Pro, {false}).score;
    CHECK(without >= with - 1e-12);
  }
}

TEST_CASE("enumeration, ilp, and exhaustive search agree exactly") {
  Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    int K = 1 + static_cast<int>(rng.below(6));
    DebateFeatures f = random_feats(rng, K);
    SparseVector w = random_weights(rng);
    Side side = rng.bernoulli(0.5) ? Side::Pro : Side::Con;
    ConstraintConfig cc{rng.bernoulli(0.3)};

    InferenceResult enumerated = infer_best_assignment(w, f, side, cc);
    InferenceResult ilp = infer_via_ilp(w, f, side, cc);
    InferenceResult brute = exhaustive_best(w, f, side, cc);

    CHECK(enumerated.score == brute.score);
    CHECK(ilp.score == brute.score);
    CHECK(enumerated.h == brute.h);
    CHECK(ilp.h == brute.h);
  }
}

TEST_CASE("per-topic contributions sum to the inferred score") {
  Rng rng(23);
  DebateFeatures f = random_feats(rng, 4);
  SparseVector w = random_weights(rng);
  InferenceResult r = infer_best_assignment(w, f, Side::Pro);
  double total = 0.0;
  for (double c : r.per_topic) total += c;
  CHECK(total == doctest::Approx(r.score).epsilon(1e-12));
}

TEST_CASE("generic solver branches value one first on ties") {
  IlpProblem p;
  p.objective = {1.0, 1.0};
  p.constraints.push_back({{{0, 1.0}, {1, 1.0}}, 1.0, false});
  IlpSolution s = solve_binary_ilp(p);
  REQUIRE(s.feasible);
  CHECK(s.objective == 1.0);
  CHECK(s.values == std::vector<int>{1, 0});
}

TEST_CASE("generic solver honors equalities and detects infeasibility") {
  IlpProblem eq;
  eq.objective = {-1.0, -1.0};
  eq.constraints.push_back({{{0, 1.0}, {1, 1.0}}, 2.0, true});
  IlpSolution s = solve_binary_ilp(eq);
  REQUIRE(s.feasible);
  CHECK(s.values == std::vector<int>{1, 1});
  CHECK(s.objective == -2.0);

  IlpProblem bad;
  bad.objective = {1.0};
  bad.constraints.push_back({{{0, 1.0}}, -1.0, false});
  CHECK(!solve_binary_ilp(bad).feasible);
}

TEST_CASE("ilp inference with a zero objective is feasible with score zero") {
  Rng rng(9);
  DebateFeatures f = random_feats(rng, 1);
  InferenceResult r = infer_via_ilp({}, f, Side::Pro);
  CHECK(r.score == 0.0);
  CHECK(r.h.pro[0] == Strength::Strong);
  CHECK(r.h.con[0] == Strength::Strong);
}
