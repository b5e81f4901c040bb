#include <doctest.h>

#include <cmath>
#include <vector>

#include "meritum/trainer.hpp"
#include "support.hpp"

using namespace meritum;
using namespace testsupport;

namespace {

ArgumentFeatures simple_arg(int topic, Side side, const SparseVector& vec) {
  ArgumentFeatures af;
  af.arg.topic = topic;
  af.arg.side = side;
  af.vec = vec;
  return af;
}

// one pro and one con argument, separated along a single count feature
DebateFeatures line_debate(const std::string& id, double pro_words, double con_words) {
  DebateFeatures f;
  f.debate_id = id;
  f.K = 1;
  SparseVector p, c;
  p.set("#words|full", pro_words);
  c.set("#words|full", con_words);
  f.pro.push_back(simple_arg(0, Side::Pro, p));
  f.con.push_back(simple_arg(0, Side::Con, c));
  return f;
}

void line_fixture(std::vector<DebateFeatures>& feats, std::vector<int>& labels) {
  double pro_values[] = {10, 9, 8, 4, 3, 2};
  for (int i = 0; i < 6; ++i) {
    feats.push_back(line_debate("d" + std::to_string(i), pro_values[i], 6.0));
    labels.push_back(pro_values[i] > 6.0 ? 1 : -1);
  }
}

int training_accuracy_count(const TrainedModel& model, const std::vector<DebateFeatures>& feats,
                            const std::vector<int>& labels) {
  int hits = 0;
  for (size_t i = 0; i < feats.size(); ++i)
    if (decision_scores(model, feats[i]).prediction == labels[i]) ++hits;
  return hits;
}

}  // namespace

TEST_CASE("frequency initialization favors the side using the topic more") {
  DebateFeatures f;
  f.K = 2;
  SparseVector v;
  v.set("#words|full", 1.0);
  for (int i = 0; i < 5; ++i) f.pro.push_back(simple_arg(0, Side::Pro, v));
  for (int i = 0; i < 2; ++i) f.con.push_back(simple_arg(0, Side::Con, v));
  f.con.push_back(simple_arg(1, Side::Con, v));  // topic 1: 0 pro vs 1 con
  Rng rng(1);
  auto h = initialize_strengths({f}, {1}, InitMode::Freq, {}, rng);
  CHECK(h[0].pro[0] == Strength::Strong);
  CHECK(h[0].con[0] == Strength::Weak);
  CHECK(h[0].pro[1] == Strength::Weak);
  CHECK(h[0].con[1] == Strength::Strong);
}

TEST_CASE("tied topic frequency keeps both sides strong") {
  DebateFeatures f;
  f.K = 1;
  SparseVector v;
  v.set("#words|full", 1.0);
  f.pro.push_back(simple_arg(0, Side::Pro, v));
  f.con.push_back(simple_arg(0, Side::Con, v));
  Rng rng(1);
  auto h = initialize_strengths({f}, {1}, InitMode::Freq, {}, rng);
  CHECK(h[0].pro[0] == Strength::Strong);
  CHECK(h[0].con[0] == Strength::Strong);
}

TEST_CASE("all-strong and winner initializations") {
  DebateFeatures f;
  f.K = 2;
  SparseVector v;
  v.set("#words|full", 1.0);
  f.pro.push_back(simple_arg(0, Side::Pro, v));
  f.con.push_back(simple_arg(1, Side::Con, v));
  Rng rng(1);
  auto all = initialize_strengths({f}, {1}, InitMode::AllStrong, {}, rng);
  auto win = initialize_strengths({f}, {1}, InitMode::AllStrongWin, {}, rng);
  auto lose = initialize_strengths({f}, {-1}, InitMode::AllStrongWin, {}, rng);
  for (int k = 0; k < 2; ++k) {
    CHECK(all[0].pro[k] == Strength::Strong);
    CHECK(all[0].con[k] == Strength::Strong);
    CHECK(win[0].pro[k] == Strength::Strong);
    CHECK(win[0].con[k] == Strength::Weak);
    CHECK(lose[0].pro[k] == Strength::Weak);
    CHECK(lose[0].con[k] == Strength::Strong);
  }
}

TEST_CASE("random initialization under C3 never leaves a topic strong for both") {
  DebateFeatures f;
  f.K = 6;
  SparseVector v;
  v.set("#words|full", 1.0);
  f.pro.push_back(simple_arg(0, Side::Pro, v));
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    auto h = initialize_strengths({f}, {1}, InitMode::Random, {true}, rng);
    for (int k = 0; k < 6; ++k)
      CHECK(!(h[0].pro[k] == Strength::Strong && h[0].con[k] == Strength::Strong));
  }
}

TEST_CASE("inner qp matches the analytic single-sample stationary point") {
  QpProblem p;
  p.dim = 1;
  p.C = 1.0;
  p.samples.push_back({1, {{{0, 1.0}}}});
  auto w = solve_inner_qp(p, {}, 1e-9, 1000);
  // minimize 0.5 w^2 + (1 - w)^2, stationary at w = 2/3
  CHECK(w[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("the regularizer dominates as C goes to zero") {
  QpProblem p;
  p.dim = 1;
  p.C = 1e-8;
  p.samples.push_back({1, {{{0, 1.0}}}});
  auto w = solve_inner_qp(p, {}, 1e-12, 1000);
  CHECK(std::abs(w[0]) <= 1e-6);
}

TEST_CASE("duplicating a sample equals doubling its trade-off weight") {
  QpProblem once;
  once.dim = 2;
  once.C = 1.4;
  once.samples.push_back({1, {{{0, 1.0}, {1, -0.5}}}});
  QpProblem twice;
  twice.dim = 2;
  twice.C = 0.7;
  twice.samples.push_back({1, {{{0, 1.0}, {1, -0.5}}}});
  twice.samples.push_back({1, {{{0, 1.0}, {1, -0.5}}}});
  auto a = solve_inner_qp(once, {}, 1e-10, 1000);
  auto b = solve_inner_qp(twice, {}, 1e-10, 1000);
  CHECK(a[0] == doctest::Approx(b[0]).epsilon(1e-6));
  CHECK(a[1] == doctest::Approx(b[1]).epsilon(1e-6));
}

TEST_CASE("qp objective never increases from its warm start") {
  QpProblem p;
  p.dim = 3;
  p.C = 0.5;
  p.samples.push_back({1, {{{0, 1.0}, {2, 2.0}}}});
  p.samples.push_back({-1, {{{1, 1.5}}, {{0, -1.0}, {1, 0.5}}}});
  std::vector<double> warm = {0.3, -0.7, 0.9};
  double before = qp_objective(p, warm);
  auto w = solve_inner_qp(p, warm, 1e-8, 500);
  CHECK(qp_objective(p, w) <= before + 1e-12);
}

TEST_CASE("training separates a linearly separable fixture") {
  std::vector<DebateFeatures> feats;
  std::vector<int> labels;
  line_fixture(feats, labels);
  TrainerConfig cfg;
  cfg.C = 1.0;
  TrainedModel model = train(feats, labels, cfg);
  CHECK(training_accuracy_count(model, feats, labels) == 6);
  CHECK(!model.trace.empty());
  for (const TraceEntry& e : model.trace) CHECK(std::isfinite(e.objective));
}

TEST_CASE("initialization scheme does not break the separable fixture") {
  std::vector<DebateFeatures> feats;
  std::vector<int> labels;
  line_fixture(feats, labels);
  for (InitMode mode : {InitMode::AllStrong, InitMode::Freq, InitMode::AllStrongWin}) {
    TrainerConfig cfg;
    cfg.C = 1.0;
    cfg.init_mode = mode;
    TrainedModel model = train(feats, labels, cfg);
    CHECK(training_accuracy_count(model, feats, labels) == 6);
  }
}

TEST_CASE("tau one caps the trainer at a single outer iteration") {
  std::vector<DebateFeatures> feats;
  std::vector<int> labels;
  line_fixture(feats, labels);
  TrainerConfig cfg;
  cfg.tau = 1;
  TrainedModel model = train(feats, labels, cfg);
  int max_outer = 0;
  for (const TraceEntry& e : model.trace) max_outer = std::max(max_outer, e.outer);
  CHECK(max_outer == 1);
  CHECK(!model.w.empty());
}

TEST_CASE("training is deterministic under a fixed seed") {
  std::vector<DebateFeatures> feats;
  std::vector<int> labels;
  line_fixture(feats, labels);
  TrainerConfig cfg;
  cfg.init_mode = InitMode::Random;
  cfg.seed = 99;
  TrainedModel a = train(feats, labels, cfg);
  TrainedModel b = train(feats, labels, cfg);
  CHECK(a.w == b.w);
  REQUIRE(a.trace.size() == b.trace.size());
  for (size_t i = 0; i < a.trace.size(); ++i)
    CHECK(a.trace[i].objective == b.trace[i].objective);
}

TEST_CASE("feature scale and trade-off rescale to the same decision boundary") {
  std::vector<DebateFeatures> feats;
  std::vector<int> labels;
  line_fixture(feats, labels);
  std::vector<DebateFeatures> doubled = feats;
  for (DebateFeatures& f : doubled)
    for (std::vector<ArgumentFeatures>* args : {&f.pro, &f.con})
      for (ArgumentFeatures& af : *args) {
        SparseVector scaled;
        for (const auto& [name, value] : af.vec) scaled.set(name, 2.0 * value);
        af.vec = scaled;
      }
  TrainerConfig base;
  base.C = 1.0;
  base.scale_features = false;
  TrainerConfig quartered = base;
  quartered.C = 0.25;
  TrainedModel m1 = train(feats, labels, base);
  TrainedModel m2 = train(doubled, labels, quartered);
  for (size_t i = 0; i < feats.size(); ++i) {
    DecisionScores s1 = decision_scores(m1, feats[i]);
    DecisionScores s2 = decision_scores(m2, doubled[i]);
    CHECK(s1.prediction == s2.prediction);
    CHECK(s1.f_pro == doctest::Approx(s2.f_pro).epsilon(1e-3));
  }
}

TEST_CASE("training rejects degenerate inputs") {
  std::vector<DebateFeatures> feats;
  std::vector<int> labels;
  line_fixture(feats, labels);

  std::vector<int> one_class(labels.size(), 1);
  CHECK_THROWS_AS(train(feats, one_class, {}), DataError);

  std::vector<DebateFeatures> with_empty = feats;
  DebateFeatures hollow;
  hollow.debate_id = "hollow";
  hollow.K = 1;
  with_empty.push_back(hollow);
  std::vector<int> more_labels = labels;
  more_labels.push_back(-1);
  CHECK_THROWS_WITH_AS(train(with_empty, more_labels, {}), doctest::Contains("hollow"),
                       DataError);

  TrainerConfig bad;
  bad.C = 0.0;
  CHECK_THROWS_AS(train(feats, labels, bad), DataError);
}

TEST_CASE("zero weights score zero and predict the con side") {
  TrainedModel model;
  model.config.scale_features = false;
  DebateFeatures f = line_debate("z", 5.0, 3.0);
  DecisionScores s = decision_scores(model, f);
  CHECK(s.f_pro == 0.0);
  CHECK(s.f_con == 0.0);
  CHECK(s.prediction == -1);
}

TEST_CASE("decision scores never sum negative") {
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    DebateFeatures f;
    f.K = 2;
    for (int a = 0; a < 3; ++a) {
      SparseVector v;
      if (rng.bernoulli(0.7)) v.set("#we|full", 1.0 + rng.below(4));
      if (rng.bernoulli(0.5)) v.set("ix:addresses|full", 1.0);
      if (v.empty()) v.set("#you|full", 1.0);
      Side side = rng.bernoulli(0.5) ? Side::Pro : Side::Con;
      (side == Side::Pro ? f.pro : f.con)
          .push_back(simple_arg(static_cast<int>(rng.below(2)), side, v));
    }
    if (f.pro.empty() || f.con.empty()) continue;
    TrainedModel model;
    model.config.scale_features = false;
    static const std::vector<std::string> suffixes = {"",        "|strong",
                                                      "|weak",   "|strong,strong",
                                                      "|strong,weak", "|weak,strong"};
    for (const char* name : {"#we|full", "ix:addresses|full", "#you|full"})
      for (const std::string& s : suffixes)
        if (rng.bernoulli(0.5))
          model.w.set(std::string(name) + s, (static_cast<double>(rng.below(17)) - 8.0) / 4.0);
    DecisionScores sc = decision_scores(model, f);
    CHECK(sc.f_pro + sc.f_con >= -1e-12);
  }
}

TEST_CASE("a positively weighted feature favored by pro lifts the pro score") {
  TrainedModel model;
  model.config.scale_features = false;
  model.w.set("#we|full", 1.0);
  DebateFeatures f;
  f.K = 1;
  SparseVector p, c;
  p.set("#we|full", 5.0);
  c.set("#we|full", 1.0);
  f.pro.push_back(simple_arg(0, Side::Pro, p));
  f.con.push_back(simple_arg(0, Side::Con, c));
  DecisionScores s = decision_scores(model, f);
  CHECK(s.f_pro == doctest::Approx(4.0));
  CHECK(s.f_con == doctest::Approx(-4.0));
  CHECK(s.prediction == 1);
}
