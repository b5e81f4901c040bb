#include "meritum/strength.hpp"

#include <algorithm>
#include <array>

#include "meritum/ilp.hpp"

namespace meritum {

namespace {

// candidate (pro, con) pairs in tie-break order
constexpr std::array<std::pair<Strength, Strength>, 4> kPairOrder = {{
    {Strength::Strong, Strength::Strong},
    {Strength::Strong, Strength::Weak},
    {Strength::Weak, Strength::Strong},
    {Strength::Weak, Strength::Weak},
}};

double side_sign(Side side, Side side_of_diff) {
  if (side == Side::Moderator) throw DataError("moderator side has no strength");
  return side == side_of_diff ? 1.0 : -1.0;
}

// signed contribution of topic k's arguments under a candidate pair
double topic_contribution(const SparseVector& w, const DebateFeatures& feats, int k,
                          Strength pro_strength, Strength con_strength, Side side_of_diff) {
  StrengthAssignment h = StrengthAssignment::all_strong(feats.K);
  h.pro[k] = pro_strength;
  h.con[k] = con_strength;
  double sum = 0.0;
  for (const std::vector<ArgumentFeatures>* args : {&feats.pro, &feats.con})
    for (const ArgumentFeatures& af : *args) {
      if (af.arg.topic != k) continue;
      sum += side_sign(af.arg.side, side_of_diff) * w.dot(couple(af.vec, k, h, af.arg.side));
    }
  return sum;
}

int strength_index(Strength s) { return s == Strength::Strong ? 0 : 1; }

}  // namespace

const char* to_string(Strength s) { return s == Strength::Strong ? "strong" : "weak"; }

bool is_interaction_feature(const std::string& name) { return name.rfind("ix:", 0) == 0; }

bool is_addressing_feature(const std::string& name) {
  return is_interaction_feature(name) && name.rfind("ix:topic_shift", 0) != 0;
}

SparseVector couple(const SparseVector& base, int topic, const StrengthAssignment& h, Side side,
                    bool oppo_pairing) {
  if (topic < 0 || topic >= h.K()) throw DataError("coupling topic out of range");
  if (side == Side::Moderator) throw DataError("moderator side has no strength");
  bool pro = side == Side::Pro;
  Strength self = (pro ? h.pro : h.con)[topic];
  Strength oppo = (pro ? h.con : h.pro)[topic];
  SparseVector out;
  for (const auto& [name, value] : base) {
    out.add(name, value);
    out.add(name + "|" + to_string(self), value);
    if (oppo_pairing && is_addressing_feature(name))
      out.add(name + "|" + to_string(self) + "," + to_string(oppo), value);
  }
  return out;
}

SparseVector side_vector(const std::vector<ArgumentFeatures>& args, const StrengthAssignment& h,
                         bool oppo_pairing) {
  SparseVector out;
  for (const ArgumentFeatures& af : args)
    out.add(couple(af.vec, af.arg.topic, h, af.arg.side, oppo_pairing));
  return out;
}

DiffScores diff_and_scores(const SparseVector& w, const DebateFeatures& feats,
                           const StrengthAssignment& h) {
  DiffScores out;
  out.diff_pro = side_vector(feats.pro, h);
  out.diff_pro.add(side_vector(feats.con, h), -1.0);
  out.diff_con = out.diff_pro.negated();
  out.score_pro = w.dot(out.diff_pro);
  out.score_con = -out.score_pro;
  return out;
}

InferenceResult infer_best_assignment(const SparseVector& w, const DebateFeatures& feats,
                                      Side side_of_diff, const ConstraintConfig& cc) {
  InferenceResult result;
  result.h.pro.resize(feats.K);
  result.h.con.resize(feats.K);
  result.per_topic.resize(feats.K);
  for (int k = 0; k < feats.K; ++k) {
    bool have = false;
    double best = 0.0;
    std::pair<Strength, Strength> pick = kPairOrder[0];
    for (const auto& pair : kPairOrder) {
      if (cc.use_C3 && pair.first == Strength::Strong && pair.second == Strength::Strong)
        continue;
      double v = topic_contribution(w, feats, k, pair.first, pair.second, side_of_diff);
      if (!have || v > best) {
        have = true;
        best = v;
        pick = pair;
      }
    }
    result.h.pro[k] = pick.first;
    result.h.con[k] = pick.second;
    result.per_topic[k] = best;
    result.score += best;
  }
  return result;
}

InferenceResult infer_via_ilp(const SparseVector& w, const DebateFeatures& feats,
                              Side side_of_diff, const ConstraintConfig& cc) {
  const int K = feats.K;
  // per topic: [pro_S, pro_W, con_S, con_W, pair_SS, pair_SW, pair_WS, pair_WW]
  auto unary_var = [](int k, bool pro, Strength s) {
    return 8 * k + (pro ? 0 : 2) + strength_index(s);
  };
  auto pair_var = [](int k, Strength sp, Strength sc) {
    return 8 * k + 4 + 2 * strength_index(sp) + strength_index(sc);
  };

  IlpProblem p;
  p.objective.assign(8 * static_cast<size_t>(K), 0.0);
  double constant = 0.0;

  static const std::array<Strength, 2> kStrengths = {Strength::Strong, Strength::Weak};
  for (const std::vector<ArgumentFeatures>* args : {&feats.pro, &feats.con})
    for (const ArgumentFeatures& af : *args) {
      double sign = side_sign(af.arg.side, side_of_diff);
      bool pro = af.arg.side == Side::Pro;
      int k = af.arg.topic;
      for (const auto& [name, value] : af.vec) {
        constant += sign * value * w.get(name);
        for (Strength s : kStrengths) {
          double ws = w.get(name + "|" + to_string(s));
          if (ws != 0.0) p.objective[unary_var(k, pro, s)] += sign * value * ws;
        }
        if (!is_addressing_feature(name)) continue;
        for (Strength self : kStrengths)
          for (Strength oppo : kStrengths) {
            double wp =
                w.get(name + "|" + std::string(to_string(self)) + "," + to_string(oppo));
            if (wp == 0.0) continue;
            // canonical pair variables are (pro strength, con strength)
            Strength sp = pro ? self : oppo;
            Strength sc = pro ? oppo : self;
            p.objective[pair_var(k, sp, sc)] += sign * value * wp;
          }
      }
    }

  for (int k = 0; k < K; ++k) {
    for (bool pro : {true, false}) {
      IlpConstraint one;  // exactly one strength per topic and side
      one.terms = {{unary_var(k, pro, Strength::Strong), 1.0},
                   {unary_var(k, pro, Strength::Weak), 1.0}};
      one.rhs = 1.0;
      one.equality = true;
      p.constraints.push_back(one);
    }
    for (Strength sp : kStrengths)
      for (Strength sc : kStrengths) {
        int pv = pair_var(k, sp, sc);
        int av = unary_var(k, true, sp);
        int bv = unary_var(k, false, sc);
        p.constraints.push_back({{{pv, 1.0}, {av, -1.0}}, 0.0, false});
        p.constraints.push_back({{{pv, 1.0}, {bv, -1.0}}, 0.0, false});
        p.constraints.push_back({{{av, 1.0}, {bv, 1.0}, {pv, -1.0}}, 1.0, false});
      }
    if (cc.use_C3)
      p.constraints.push_back({{{unary_var(k, true, Strength::Strong), 1.0},
                                {unary_var(k, false, Strength::Strong), 1.0}},
                               1.0,
                               false});
    std::vector<int> group(8);
    for (int i = 0; i < 8; ++i) group[i] = 8 * k + i;
    p.groups.push_back(group);
  }

  IlpSolution sol = solve_binary_ilp(p);
  if (!sol.feasible) throw NumericalError("strength ilp infeasible");

  InferenceResult result;
  result.h.pro.resize(K);
  result.h.con.resize(K);
  result.per_topic.resize(K);
  for (int k = 0; k < K; ++k) {
    result.h.pro[k] = sol.values[unary_var(k, true, Strength::Strong)] ? Strength::Strong
                                                                       : Strength::Weak;
    result.h.con[k] = sol.values[unary_var(k, false, Strength::Strong)] ? Strength::Strong
                                                                        : Strength::Weak;
    result.per_topic[k] =
        topic_contribution(w, feats, k, result.h.pro[k], result.h.con[k], side_of_diff);
  }
  result.score = sol.objective + constant;
  return result;
}

}  // namespace meritum
