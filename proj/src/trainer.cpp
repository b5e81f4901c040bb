#include "meritum/trainer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <map>

namespace meritum {

namespace {

constexpr std::array<std::pair<Strength, Strength>, 4> kPairOrder = {{
    {Strength::Strong, Strength::Strong},
    {Strength::Strong, Strength::Weak},
    {Strength::Weak, Strength::Strong},
    {Strength::Weak, Strength::Weak},
}};

int sidx(Strength s) { return s == Strength::Strong ? 0 : 1; }

class FeatureDict {
 public:
  int intern(const std::string& name) {
    auto [it, inserted] = index_.try_emplace(name, static_cast<int>(names_.size()));
    if (inserted) names_.push_back(name);
    return it->second;
  }
  size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::map<std::string, int> index_;
  std::vector<std::string> names_;
};

using Row = QpProblem::Row;

double row_dot(const std::vector<double>& w, const Row& row) {
  double s = 0.0;
  for (const auto& [id, v] : row) s += w[id] * v;
  return s;
}

// Pre-signed per-topic blocks of the difference vector: pro argument
// coordinates enter positively, con negatively. The score of an assignment
// decomposes as free + sum over topics of the chosen blocks.
struct TopicBlock {
  Row self[2][2];        // [0 pro, 1 con][strength of that side]
  Row pair[2][2][2];     // [side][self strength][oppo strength]
};

struct DebateDesign {
  int K = 0;
  Row free_diff;
  std::vector<TopicBlock> topics;

  double pair_score(const std::vector<double>& w, int k, Strength sp, Strength sc) const {
    const TopicBlock& b = topics[k];
    return row_dot(w, b.self[0][sidx(sp)]) + row_dot(w, b.self[1][sidx(sc)]) +
           row_dot(w, b.pair[0][sidx(sp)][sidx(sc)]) + row_dot(w, b.pair[1][sidx(sc)][sidx(sp)]);
  }

  double score(const std::vector<double>& w, const StrengthAssignment& h) const {
    double s = row_dot(w, free_diff);
    for (int k = 0; k < K; ++k) s += pair_score(w, k, h.pro[k], h.con[k]);
    return s;
  }

  // argmax over assignments of sign * (w . diff), per-topic
  StrengthAssignment infer(const std::vector<double>& w, double sign,
                           const ConstraintConfig& cc) const {
    StrengthAssignment h;
    h.pro.resize(K);
    h.con.resize(K);
    for (int k = 0; k < K; ++k) {
      bool have = false;
      double best = 0.0;
      std::pair<Strength, Strength> pick = kPairOrder[0];
      for (const auto& pair : kPairOrder) {
        if (cc.use_C3 && pair.first == Strength::Strong && pair.second == Strength::Strong)
          continue;
        double v = sign * pair_score(w, k, pair.first, pair.second);
        if (!have || v > best) {
          have = true;
          best = v;
          pick = pair;
        }
      }
      h.pro[k] = pick.first;
      h.con[k] = pick.second;
    }
    return h;
  }

  Row materialize(const StrengthAssignment& h) const {
    std::map<int, double> acc;
    auto pour = [&acc](const Row& row) {
      for (const auto& [id, v] : row) acc[id] += v;
    };
    pour(free_diff);
    for (int k = 0; k < K; ++k) {
      const TopicBlock& b = topics[k];
      pour(b.self[0][sidx(h.pro[k])]);
      pour(b.self[1][sidx(h.con[k])]);
      pour(b.pair[0][sidx(h.pro[k])][sidx(h.con[k])]);
      pour(b.pair[1][sidx(h.con[k])][sidx(h.pro[k])]);
    }
    Row out;
    out.reserve(acc.size());
    for (const auto& [id, v] : acc)
      if (v != 0.0) out.emplace_back(id, v);
    return out;
  }
};

DebateDesign build_design(const DebateFeatures& feats, FeatureDict& dict) {
  DebateDesign d;
  d.K = feats.K;
  d.topics.resize(feats.K);
  std::map<int, double> free_acc;
  for (const std::vector<ArgumentFeatures>* args : {&feats.pro, &feats.con})
    for (const ArgumentFeatures& af : *args) {
      bool pro = af.arg.side == Side::Pro;
      double sign = pro ? 1.0 : -1.0;
      int side = pro ? 0 : 1;
      TopicBlock& block = d.topics[af.arg.topic];
      for (const auto& [name, value] : af.vec) {
        free_acc[dict.intern(name)] += sign * value;
        for (Strength s : {Strength::Strong, Strength::Weak}) {
          int id = dict.intern(name + "|" + to_string(s));
          block.self[side][sidx(s)].emplace_back(id, sign * value);
        }
        if (!is_addressing_feature(name)) continue;
        for (Strength self : {Strength::Strong, Strength::Weak})
          for (Strength oppo : {Strength::Strong, Strength::Weak}) {
            int id = dict.intern(name + "|" + std::string(to_string(self)) + "," +
                                 to_string(oppo));
            block.pair[side][sidx(self)][sidx(oppo)].emplace_back(id, sign * value);
          }
      }
    }
  for (const auto& [id, v] : free_acc)
    if (v != 0.0) d.free_diff.emplace_back(id, v);
  return d;
}

double rel_change(const std::vector<double>& prev, const std::vector<double>& cur) {
  double dn = 0.0, pn = 0.0;
  for (size_t i = 0; i < cur.size(); ++i) {
    double d = cur[i] - prev[i];
    dn += d * d;
    pn += prev[i] * prev[i];
  }
  return std::sqrt(dn) / (1.0 + std::sqrt(pn));
}

// objective and gradient of the QP at w; gradient omitted when g == nullptr
double qp_eval(const QpProblem& p, const std::vector<double>& w, std::vector<double>* g) {
  if (g) {
    g->assign(w.size(), 0.0);
    for (size_t i = 0; i < w.size(); ++i) (*g)[i] = w[i];
  }
  double obj = 0.0;
  for (double x : w) obj += 0.5 * x * x;
  for (const QpProblem::Sample& sample : p.samples) {
    if (sample.options.empty()) throw DataError("qp sample with no candidate vectors");
    double best = row_dot(w, sample.options[0]);
    size_t best_j = 0;
    for (size_t j = 1; j < sample.options.size(); ++j) {
      double s = row_dot(w, sample.options[j]);
      if (s > best) {  // strict: ties keep the earliest cached assignment
        best = s;
        best_j = j;
      }
    }
    double z = -sample.y * best;
    double viol = std::max(0.0, 1.0 + z);
    obj += p.C * viol * viol;
    if (g && viol > 0.0) {
      double coef = p.C * 2.0 * viol * (-sample.y);
      for (const auto& [id, v] : sample.options[best_j]) (*g)[id] += coef * v;
    }
  }
  check_finite(obj, "qp objective");
  return obj;
}

}  // namespace

InitMode init_mode_from_string(const std::string& s) {
  if (s == "freq") return InitMode::Freq;
  if (s == "allstrong") return InitMode::AllStrong;
  if (s == "allstrongwin") return InitMode::AllStrongWin;
  if (s == "random") return InitMode::Random;
  throw DataError("unknown init mode \"" + s + "\"");
}

const char* to_string(InitMode m) {
  switch (m) {
    case InitMode::Freq: return "freq";
    case InitMode::AllStrong: return "allstrong";
    case InitMode::AllStrongWin: return "allstrongwin";
    case InitMode::Random: return "random";
  }
  return "?";
}

double qp_objective(const QpProblem& problem, const std::vector<double>& w) {
  return qp_eval(problem, w, nullptr);
}

std::vector<double> solve_inner_qp(const QpProblem& p, std::vector<double> w, double tol,
                                   int max_iter) {
  if (static_cast<int>(w.size()) != p.dim) w.assign(p.dim, 0.0);
  std::vector<double> g;
  double f = qp_eval(p, w, &g);

  // L-BFGS two-loop recursion with Armijo backtracking
  const size_t history = 8;
  std::deque<std::vector<double>> s_hist, y_hist;
  std::deque<double> rho_hist;
  std::vector<double> d(p.dim), w_new(p.dim), g_new(p.dim);

  for (int iter = 0; iter < max_iter; ++iter) {
    double gnorm = 0.0, wnorm = 0.0;
    for (int i = 0; i < p.dim; ++i) {
      gnorm += g[i] * g[i];
      wnorm += w[i] * w[i];
    }
    gnorm = std::sqrt(gnorm);
    if (gnorm <= tol * (1.0 + std::sqrt(wnorm))) break;

    // direction
    d = g;
    std::vector<double> alpha(s_hist.size());
    for (size_t j = s_hist.size(); j-- > 0;) {
      double a = 0.0;
      for (int i = 0; i < p.dim; ++i) a += s_hist[j][i] * d[i];
      a *= rho_hist[j];
      alpha[j] = a;
      for (int i = 0; i < p.dim; ++i) d[i] -= a * y_hist[j][i];
    }
    if (!s_hist.empty()) {
      double sy = 1.0 / rho_hist.back(), yy = 0.0;
      for (int i = 0; i < p.dim; ++i) yy += y_hist.back()[i] * y_hist.back()[i];
      double gamma = sy / yy;
      for (int i = 0; i < p.dim; ++i) d[i] *= gamma;
    }
    for (size_t j = 0; j < s_hist.size(); ++j) {
      double b = 0.0;
      for (int i = 0; i < p.dim; ++i) b += y_hist[j][i] * d[i];
      b *= rho_hist[j];
      for (int i = 0; i < p.dim; ++i) d[i] += s_hist[j][i] * (alpha[j] - b);
    }
    for (int i = 0; i < p.dim; ++i) d[i] = -d[i];

    double gd = 0.0;
    for (int i = 0; i < p.dim; ++i) gd += g[i] * d[i];
    if (gd >= 0.0) {  // not a descent direction; restart from steepest descent
      for (int i = 0; i < p.dim; ++i) d[i] = -g[i];
      gd = -gnorm * gnorm;
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
    }

    double step = s_hist.empty() ? 1.0 / (1.0 + gnorm) : 1.0;
    double f_new = f;
    bool moved = false;
    for (int back = 0; back < 40; ++back) {
      for (int i = 0; i < p.dim; ++i) w_new[i] = w[i] + step * d[i];
      f_new = qp_eval(p, w_new, &g_new);
      if (f_new <= f + 1e-4 * step * gd) {
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;  // step shrank to nothing; gradient is numerically flat

    std::vector<double> s_vec(p.dim), y_vec(p.dim);
    double sy = 0.0;
    for (int i = 0; i < p.dim; ++i) {
      s_vec[i] = w_new[i] - w[i];
      y_vec[i] = g_new[i] - g[i];
      sy += s_vec[i] * y_vec[i];
    }
    if (sy > 1e-12) {
      s_hist.push_back(std::move(s_vec));
      y_hist.push_back(std::move(y_vec));
      rho_hist.push_back(1.0 / sy);
      if (s_hist.size() > history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    w.swap(w_new);
    g.swap(g_new);
    f = f_new;
  }
  return w;
}

std::vector<StrengthAssignment> initialize_strengths(const std::vector<DebateFeatures>& feats,
                                                     const std::vector<int>& labels,
                                                     InitMode mode, const ConstraintConfig& cc,
                                                     Rng& rng) {
  if (feats.size() != labels.size()) throw DataError("labels do not match debates");
  std::vector<StrengthAssignment> out;
  out.reserve(feats.size());
  for (size_t i = 0; i < feats.size(); ++i) {
    const DebateFeatures& f = feats[i];
    StrengthAssignment h = StrengthAssignment::all_strong(f.K);
    std::vector<int> pro_n(f.K, 0), con_n(f.K, 0);
    for (const ArgumentFeatures& af : f.pro) ++pro_n[af.arg.topic];
    for (const ArgumentFeatures& af : f.con) ++con_n[af.arg.topic];

    switch (mode) {
      case InitMode::AllStrong:
        break;
      case InitMode::Freq:
        for (int k = 0; k < f.K; ++k) {
          if (pro_n[k] > con_n[k]) h.con[k] = Strength::Weak;
          else if (con_n[k] > pro_n[k]) h.pro[k] = Strength::Weak;
        }
        break;
      case InitMode::AllStrongWin:
        for (int k = 0; k < f.K; ++k)
          (labels[i] > 0 ? h.con : h.pro)[k] = Strength::Weak;
        break;
      case InitMode::Random:
        for (int k = 0; k < f.K; ++k) {
          h.pro[k] = rng.bernoulli(0.5) ? Strength::Strong : Strength::Weak;
          h.con[k] = rng.bernoulli(0.5) ? Strength::Strong : Strength::Weak;
          if (cc.use_C3 && h.pro[k] == Strength::Strong && h.con[k] == Strength::Strong) {
            // demote the side using the topic less
            if (pro_n[k] < con_n[k]) h.pro[k] = Strength::Weak;
            else h.con[k] = Strength::Weak;
          }
        }
        break;
    }
    out.push_back(std::move(h));
  }
  return out;
}

TrainedModel train(const std::vector<DebateFeatures>& feats, const std::vector<int>& labels,
                   const TrainerConfig& cfg) {
  if (feats.empty()) throw DataError("no training debates");
  if (feats.size() != labels.size()) throw DataError("labels do not match debates");
  if (cfg.C <= 0.0) throw DataError("C must be positive");
  if (cfg.tau < 1) throw DataError("tau must be at least 1");
  bool has_pos = false, has_neg = false;
  for (size_t i = 0; i < feats.size(); ++i) {
    if (feats[i].pro.empty() && feats[i].con.empty())
      throw DataError("debate \"" + feats[i].debate_id + "\" has no arguments");
    (labels[i] > 0 ? has_pos : has_neg) = true;
  }
  if (!has_pos || !has_neg) throw DataError("training needs both outcomes present");

  TrainedModel model;
  model.config = cfg;

  // scale, then intern
  std::vector<DebateFeatures> scaled = feats;
  if (cfg.scale_features) {
    std::vector<const SparseVector*> sample_ptrs;
    for (const DebateFeatures& f : feats)
      for (const std::vector<ArgumentFeatures>* args : {&f.pro, &f.con})
        for (const ArgumentFeatures& af : *args) sample_ptrs.push_back(&af.vec);
    model.scaler.fit(sample_ptrs);
    for (DebateFeatures& f : scaled)
      for (std::vector<ArgumentFeatures>* args : {&f.pro, &f.con})
        for (ArgumentFeatures& af : *args) af.vec = model.scaler.apply(af.vec);
  } else {
    model.scaler.mark_fitted();
  }

  FeatureDict dict;
  std::vector<DebateDesign> designs;
  designs.reserve(scaled.size());
  for (const DebateFeatures& f : scaled) designs.push_back(build_design(f, dict));
  const int dim = static_cast<int>(dict.size());

  Rng rng(cfg.seed);
  std::vector<StrengthAssignment> h0 =
      initialize_strengths(scaled, labels, cfg.init_mode, cfg.constraints, rng);

  // QP samples: positives carry exactly one candidate, negatives their cache
  QpProblem qp;
  qp.dim = dim;
  qp.C = cfg.C;
  qp.samples.resize(designs.size());
  std::vector<std::vector<StrengthAssignment>> caches(designs.size());
  for (size_t i = 0; i < designs.size(); ++i) {
    qp.samples[i].y = labels[i];
    caches[i] = {h0[i]};
    qp.samples[i].options = {designs[i].materialize(h0[i])};
  }

  std::vector<double> w(dim, 0.0);
  w = solve_inner_qp(qp, w, cfg.qp_tol, cfg.qp_max_iter);
  model.trace.push_back({0, 0, qp_objective(qp, w)});

  if (!cfg.latent) {
    model.features = dict.names();
    for (int i = 0; i < dim; ++i)
      if (w[i] != 0.0) model.w.set(model.features[i], w[i]);
    return model;
  }

  // the cutting-plane caches start empty after the initial solve
  for (size_t i = 0; i < designs.size(); ++i)
    if (labels[i] < 0) {
      caches[i].clear();
      qp.samples[i].options.clear();
    }

  for (int t = 1; t <= cfg.tau; ++t) {
    std::vector<double> w_outer = w;

    for (size_t i = 0; i < designs.size(); ++i) {
      if (labels[i] <= 0) continue;
      StrengthAssignment h = designs[i].infer(w, 1.0, cfg.constraints);
      caches[i] = {h};
      qp.samples[i].options = {designs[i].materialize(h)};
    }

    bool outer_ready = false;
    for (int tp = 1; tp <= cfg.tau; ++tp) {
      std::vector<double> w_inner = w;
      for (size_t i = 0; i < designs.size(); ++i) {
        if (labels[i] >= 0) continue;
        StrengthAssignment h = designs[i].infer(w, 1.0, cfg.constraints);
        if (std::find(caches[i].begin(), caches[i].end(), h) == caches[i].end()) {
          caches[i].push_back(h);
          qp.samples[i].options.push_back(designs[i].materialize(h));
        }
      }
      w = solve_inner_qp(qp, w, cfg.qp_tol, cfg.qp_max_iter);
      model.trace.push_back({t, tp, qp_objective(qp, w)});
      if (rel_change(w_inner, w) < cfg.w_tol) break;
    }

    if (rel_change(w_outer, w) < cfg.w_tol) outer_ready = true;
    if (outer_ready) break;
  }

  model.features = dict.names();
  for (int i = 0; i < dim; ++i)
    if (w[i] != 0.0) model.w.set(model.features[i], w[i]);
  return model;
}

DecisionScores decision_scores(const TrainedModel& model, const DebateFeatures& raw) {
  DebateFeatures scaled = raw;
  if (model.config.scale_features)
    for (std::vector<ArgumentFeatures>* args : {&scaled.pro, &scaled.con})
      for (ArgumentFeatures& af : *args) af.vec = model.scaler.apply(af.vec);

  DecisionScores out;
  if (!model.config.latent) {
    StrengthAssignment h = StrengthAssignment::all_strong(scaled.K);
    DiffScores ds = diff_and_scores(model.w, scaled, h);
    out.f_pro = ds.score_pro;
    out.f_con = ds.score_con;
    out.h_pro = h;
    out.h_con = h;
    out.prediction = out.f_pro > out.f_con ? 1 : -1;
    return out;
  }
  InferenceResult pro = infer_best_assignment(model.w, scaled, Side::Pro, model.config.constraints);
  InferenceResult con = infer_best_assignment(model.w, scaled, Side::Con, model.config.constraints);
  out.f_pro = pro.score;
  out.f_con = con.score;
  out.h_pro = pro.h;
  out.h_con = con.h;
  out.prediction = pro.score > con.score ? 1 : -1;
  return out;
}

}  // namespace meritum
