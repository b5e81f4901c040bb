#include "meritum/eval.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace meritum {

namespace {

std::string base_name(const std::string& coord) {
  // coordinates are base|phase; base names themselves never contain a bar
  auto pos = coord.rfind('|');
  return pos == std::string::npos ? coord : coord.substr(0, pos);
}

bool starts_with(const std::string& s, const char* prefix) { return s.rfind(prefix, 0) == 0; }

std::string trainer_fingerprint(const TrainerConfig& c, size_t debates) {
  std::ostringstream os;
  os << "debates=" << debates << ";C=" << c.C << ";tau=" << c.tau << ";init="
     << to_string(c.init_mode) << ";seed=" << c.seed << ";wtol=" << c.w_tol << ";c3="
     << (c.constraints.use_C3 ? 1 : 0) << ";latent=" << (c.latent ? 1 : 0) << ";scale="
     << (c.scale_features ? 1 : 0);
  return os.str();
}

template <typename Keep>
std::vector<DebateFeatures> filter_features(const std::vector<DebateFeatures>& feats,
                                            Keep keep) {
  std::vector<DebateFeatures> out = feats;
  for (DebateFeatures& f : out)
    for (std::vector<ArgumentFeatures>* args : {&f.pro, &f.con})
      for (ArgumentFeatures& af : *args) {
        SparseVector kept;
        for (const auto& [name, value] : af.vec)
          if (keep(base_name(name))) kept.set(name, value);
        af.vec = kept;
      }
  return out;
}

std::string lex_key(const Token& t) { return lowercase(t.lemma.empty() ? t.surface : t.lemma); }

bool is_word(const Token& t) {
  for (unsigned char c : t.surface)
    if (std::isalnum(c)) return true;
  return false;
}

}  // namespace

std::vector<DebateFeatures> ngram_features(const Corpus& corpus) {
  std::vector<DebateFeatures> out;
  out.reserve(corpus.debates.size());
  for (const DebateTranscript& debate : corpus.debates) {
    DebateFeatures f;
    f.debate_id = debate.id;
    f.K = 1;
    SparseVector vecs[2];
    for (const Turn& turn : debate.turns) {
      if (turn.side == Side::Moderator) continue;
      SparseVector& v = vecs[turn.side == Side::Pro ? 0 : 1];
      for (const Sentence& sent : turn.sentences) {
        std::string prev;
        for (const Token& tok : sent.tokens) {
          if (!is_word(tok)) continue;
          const std::string key = lex_key(tok);
          v.add("ng:" + key, 1.0);
          if (!prev.empty()) v.add("ng:" + prev + "_" + key, 1.0);
          prev = key;
        }
      }
    }
    for (int s = 0; s < 2; ++s) {
      ArgumentFeatures af;
      af.arg.topic = 0;
      af.arg.side = s == 0 ? Side::Pro : Side::Con;
      af.arg.turn = s;
      af.arg.ordinal = s;
      af.vec = vecs[s];
      (s == 0 ? f.pro : f.con).push_back(std::move(af));
    }
    out.push_back(std::move(f));
  }
  return out;
}

namespace {

int stage_of(const Argument& arg, const std::set<int>& first_half_turns) {
  switch (arg.phase) {
    case Phase::Opening: return 0;
    case Phase::Closing: return 3;
    default: return first_half_turns.count(arg.turn) ? 1 : 2;
  }
}

// the first ceil(n/2) discussion turns form the early half
std::set<int> first_discussion_half(const DebateFeatures& f) {
  std::set<int> turns;
  for (const std::vector<ArgumentFeatures>* args : {&f.pro, &f.con})
    for (const ArgumentFeatures& af : *args)
      if (af.arg.phase == Phase::Discussion) turns.insert(af.arg.turn);
  std::set<int> half;
  size_t want = (turns.size() + 1) / 2;
  for (int t : turns) {
    if (half.size() >= want) break;
    half.insert(t);
  }
  return half;
}

}  // namespace

// +1 for a pro win, -1 for a con win, in corpus order
std::vector<int> outcome_labels(const Corpus& corpus) {
  std::vector<int> labels;
  labels.reserve(corpus.debates.size());
  for (const DebateTranscript& d : corpus.debates)
    labels.push_back(d.outcome == Outcome::ProWin ? 1 : -1);
  return labels;
}

DecisionScores predict(const TrainedModel& model, const DebateFeatures& feats) {
  if (feats.pro.empty() && feats.con.empty())
    throw DataError("debate \"" + feats.debate_id + "\" has no arguments to score");
  return decision_scores(model, feats);
}

EvalReport loo_evaluate(const std::vector<DebateFeatures>& feats, const std::vector<int>& labels,
                        const TrainerConfig& cfg) {
  if (feats.size() < 2) throw DataError("leave-one-out needs at least two debates");
  if (feats.size() != labels.size()) throw DataError("labels do not match debates");

  EvalReport report;
  report.fingerprint = trainer_fingerprint(cfg, feats.size());
  for (size_t i = 0; i < feats.size(); ++i) {
    FoldResult fold;
    fold.debate_id = feats[i].debate_id;
    fold.label = labels[i];
    std::vector<DebateFeatures> train_feats;
    std::vector<int> train_labels;
    train_feats.reserve(feats.size() - 1);
    for (size_t j = 0; j < feats.size(); ++j) {
      if (j == i) continue;
      train_feats.push_back(feats[j]);
      train_labels.push_back(labels[j]);
    }
    try {
      TrainedModel model = train(train_feats, train_labels, cfg);
      DecisionScores s = predict(model, feats[i]);
      fold.prediction = s.prediction;
      fold.f_pro = s.f_pro;
      fold.f_con = s.f_con;
    } catch (const std::exception& e) {
      fold.error = e.what();
      fold.prediction = 0;  // counted incorrect
    }
    if (fold.prediction == fold.label) ++report.correct;
    report.folds.push_back(std::move(fold));
  }
  report.accuracy = static_cast<double>(report.correct) / static_cast<double>(feats.size());
  return report;
}

AblationKind ablation_from_string(const std::string& s) {
  if (s == "ngrams") return AblationKind::Ngrams;
  if (s == "audience") return AblationKind::Audience;
  if (s == "feature-subsets") return AblationKind::FeatureSubsets;
  if (s == "no-latent") return AblationKind::NoLatent;
  throw DataError("unknown ablation \"" + s + "\"");
}

const char* to_string(AblationKind k) {
  switch (k) {
    case AblationKind::Ngrams: return "ngrams";
    case AblationKind::Audience: return "audience";
    case AblationKind::FeatureSubsets: return "feature-subsets";
    case AblationKind::NoLatent: return "no-latent";
  }
  return "?";
}

std::string feature_category(const std::string& b) {
  if (starts_with(b, "ix:")) return "interaction";
  if (starts_with(b, "arg:")) return "argument";
  if (b == "#question" || b == "#sentences" || starts_with(b, "#sent:") ||
      starts_with(b, "trans:") || starts_with(b, "read:"))
    return "sentence";
  if (starts_with(b, "frame:")) return "semantic";
  if (starts_with(b, "pdtb1:") || starts_with(b, "pdtb2:") || b == "#pleading")
    return "discourse";
  if (b == "#formal" || b == "#informal" || b == "#hedge_verb" || b == "#hedge_nonverb" ||
      starts_with(b, "attr:"))
    return "style";
  return "basic";
}

std::vector<AblationRow> run_ablation(const Corpus& corpus,
                                      const std::vector<DebateFeatures>& feats,
                                      const std::vector<int>& labels, AblationKind which,
                                      const TrainerConfig& cfg) {
  if (corpus.debates.size() != feats.size())
    throw DataError("ablation corpus does not match extracted features");
  for (size_t i = 0; i < feats.size(); ++i)
    if (corpus.debates[i].id != feats[i].debate_id)
      throw DataError("ablation corpus order does not match features at \"" +
                      feats[i].debate_id + "\"");

  TrainerConfig frozen = cfg;
  frozen.latent = false;
  frozen.init_mode = InitMode::AllStrong;

  std::vector<AblationRow> rows;
  switch (which) {
    case AblationKind::Ngrams:
      rows.push_back({"ngrams", loo_evaluate(ngram_features(corpus), labels, frozen)});
      break;
    case AblationKind::Audience: {
      auto only_audience = [](const std::string& b) { return b == "#applause" || b == "#laughter"; };
      rows.push_back(
          {"audience", loo_evaluate(filter_features(feats, only_audience), labels, frozen)});
      break;
    }
    case AblationKind::NoLatent:
      rows.push_back({"no-latent", loo_evaluate(feats, labels, frozen)});
      break;
    case AblationKind::FeatureSubsets: {
      const std::vector<std::pair<std::string, std::set<std::string>>> cumulative = {
          {"basic", {"basic"}},
          {"+style,semantics,discourse", {"basic", "style", "semantic", "discourse"}},
          {"+sentence,argument", {"basic", "style", "semantic", "discourse", "sentence",
                                  "argument"}},
          {"+interaction", {"basic", "style", "semantic", "discourse", "sentence", "argument",
                            "interaction"}},
      };
      for (const auto& [name, cats] : cumulative) {
        auto keep = [&cats](const std::string& b) { return cats.count(feature_category(b)) > 0; };
        rows.push_back({name, loo_evaluate(filter_features(feats, keep), labels, cfg)});
      }
      break;
    }
  }
  return rows;
}

RankTest mann_whitney(const std::vector<double>& a, const std::vector<double>& b) {
  RankTest t;
  if (a.size() < 2 || b.size() < 2) return t;
  t.valid = true;

  struct Obs {
    double v;
    int group;
  };
  std::vector<Obs> pool;
  pool.reserve(a.size() + b.size());
  for (double v : a) pool.push_back({v, 0});
  for (double v : b) pool.push_back({v, 1});
  std::stable_sort(pool.begin(), pool.end(), [](const Obs& x, const Obs& y) { return x.v < y.v; });

  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  const double n = n1 + n2;
  double rank_sum_a = 0.0;
  double tie_term = 0.0;
  size_t i = 0;
  while (i < pool.size()) {
    size_t j = i;
    while (j < pool.size() && pool[j].v == pool[i].v) ++j;
    const double tied = static_cast<double>(j - i);
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (size_t m = i; m < j; ++m)
      if (pool[m].group == 0) rank_sum_a += avg_rank;
    tie_term += tied * tied * tied - tied;
    i = j;
  }

  t.u = rank_sum_a - n1 * (n1 + 1.0) / 2.0;
  const double mean = n1 * n2 / 2.0;
  const double var = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (var <= 0.0) {
    // every observation tied: no evidence either way
    t.z = 0.0;
    t.p = 1.0;
    return t;
  }
  t.z = (t.u - mean) / std::sqrt(var);
  t.p = std::min(1.0, std::erfc(std::abs(t.z) / std::sqrt(2.0)));
  return t;
}

double paired_bootstrap_p(const EvalReport& stronger, const EvalReport& weaker, int iters,
                          uint64_t seed) {
  if (iters < 1) throw DataError("bootstrap needs at least one resample");
  const size_t n = stronger.folds.size();
  if (n == 0 || n != weaker.folds.size())
    throw DataError("bootstrap reports cover different corpora");
  std::vector<int> ca(n), cb(n);
  for (size_t i = 0; i < n; ++i) {
    if (stronger.folds[i].debate_id != weaker.folds[i].debate_id)
      throw DataError("bootstrap reports cover different corpora");
    ca[i] = stronger.folds[i].prediction == stronger.folds[i].label ? 1 : 0;
    cb[i] = weaker.folds[i].prediction == weaker.folds[i].label ? 1 : 0;
  }
  Rng rng(seed);
  long not_better = 0;
  for (int it = 0; it < iters; ++it) {
    long diff = 0;
    for (size_t i = 0; i < n; ++i) {
      const size_t pick = static_cast<size_t>(rng.below(n));
      diff += ca[pick] - cb[pick];
    }
    if (diff <= 0) ++not_better;
  }
  return static_cast<double>(not_better) / static_cast<double>(iters);
}

StrengthReport strength_report(const TrainedModel& model,
                               const std::vector<DebateFeatures>& feats,
                               const std::vector<int>& labels) {
  if (feats.size() != labels.size()) throw DataError("labels do not match debates");
  StrengthReport report;
  for (size_t i = 0; i < feats.size(); ++i) {
    const DebateFeatures& f = feats[i];
    if (f.pro.empty() && f.con.empty()) continue;
    DecisionScores s = decision_scores(model, f);
    const std::set<int> first_half = first_discussion_half(f);
    for (int side = 0; side < 2; ++side) {
      const bool is_pro = side == 0;
      const bool winner = (labels[i] > 0) == is_pro;
      OutcomeSideStats& stats = winner ? report.winners : report.losers;
      const StrengthAssignment& own = is_pro ? s.h_pro : s.h_con;
      const std::vector<Strength>& mine = is_pro ? own.pro : own.con;

      long strong_topics = 0;
      for (Strength st : mine)
        if (st == Strength::Strong) ++strong_topics;
      if (!mine.empty())
        stats.per_debate_share.push_back(static_cast<double>(strong_topics) / mine.size());

      for (const ArgumentFeatures& af : is_pro ? f.pro : f.con) {
        const bool strong = mine[af.arg.topic] == Strength::Strong;
        (strong ? stats.strong_args : stats.weak_args) += 1;
        StageShare& stage = stats.stages[stage_of(af.arg, first_half)];
        stage.total_args += 1;
        if (strong) stage.strong_args += 1;
      }
    }
  }
  for (OutcomeSideStats* stats : {&report.winners, &report.losers}) {
    double sum = 0.0;
    for (double v : stats->per_debate_share) sum += v;
    stats->strong_topic_share =
        stats->per_debate_share.empty() ? 0.0 : sum / stats->per_debate_share.size();
  }
  report.share_test = mann_whitney(report.winners.per_debate_share, report.losers.per_debate_share);
  return report;
}

ShiftReport shift_report(const TrainedModel& model, const std::vector<DebateFeatures>& feats,
                         const std::vector<int>& labels) {
  if (feats.size() != labels.size()) throw DataError("labels do not match debates");
  ShiftReport report;
  std::map<std::array<int, 4>, long> transitions[2];  // winners, losers

  for (size_t i = 0; i < feats.size(); ++i) {
    const DebateFeatures& f = feats[i];
    if (f.pro.empty() && f.con.empty()) continue;
    DecisionScores s = decision_scores(model, f);

    std::set<int> speaking_turns;
    for (const std::vector<ArgumentFeatures>* args : {&f.pro, &f.con})
      for (const ArgumentFeatures& af : *args) speaking_turns.insert(af.arg.turn);
    report.turns += static_cast<long>(speaking_turns.size());

    for (int side = 0; side < 2; ++side) {
      const bool is_pro = side == 0;
      const bool winner = (labels[i] > 0) == is_pro;
      const StrengthAssignment& own = is_pro ? s.h_pro : s.h_con;
      const std::vector<Strength>& mine = is_pro ? own.pro : own.con;
      const std::vector<Strength>& theirs = is_pro ? own.con : own.pro;
      ShiftSideStats& stats = winner ? report.winners : report.losers;
      const std::vector<ArgumentFeatures>& args = is_pro ? f.pro : f.con;

      for (size_t j = 1; j < args.size(); ++j) {
        const Argument& prev = args[j - 1].arg;
        const Argument& cur = args[j].arg;
        if (cur.turn != prev.turn || cur.ordinal != prev.ordinal + 1) continue;
        if (cur.topic == prev.topic) continue;
        ++report.shifts;
        ++stats.shifts;
        if (mine[cur.topic] == Strength::Strong) ++stats.to_strong;
        std::array<int, 4> key = {mine[prev.topic] == Strength::Strong ? 0 : 1,
                                  theirs[prev.topic] == Strength::Strong ? 0 : 1,
                                  mine[cur.topic] == Strength::Strong ? 0 : 1,
                                  theirs[cur.topic] == Strength::Strong ? 0 : 1};
        transitions[winner ? 0 : 1][key] += 1;
      }
    }
  }

  report.shifts_per_turn =
      report.turns == 0 ? 0.0 : static_cast<double>(report.shifts) / report.turns;
  for (int g = 0; g < 2; ++g) {
    ShiftSideStats& stats = g == 0 ? report.winners : report.losers;
    stats.to_strong_pct =
        stats.shifts == 0 ? 0.0 : 100.0 * static_cast<double>(stats.to_strong) / stats.shifts;
    for (const auto& [key, count] : transitions[g]) {
      ShiftTransition tr;
      tr.self_before = key[0] == 0 ? Strength::Strong : Strength::Weak;
      tr.oppo_before = key[1] == 0 ? Strength::Strong : Strength::Weak;
      tr.self_after = key[2] == 0 ? Strength::Strong : Strength::Weak;
      tr.oppo_after = key[3] == 0 ? Strength::Strong : Strength::Weak;
      tr.count = count;
      tr.pct = stats.shifts == 0 ? 0.0 : 100.0 * static_cast<double>(count) / stats.shifts;
      stats.transitions.push_back(tr);
    }
    std::stable_sort(stats.transitions.begin(), stats.transitions.end(),
                     [](const ShiftTransition& a, const ShiftTransition& b) {
                       return a.count > b.count;
                     });
  }
  return report;
}

FeatureReport feature_report(const TrainedModel& model, int top_n) {
  if (top_n < 0) throw DataError("feature report size cannot be negative");
  FeatureReport report;
  if (top_n == 0) return report;
  for (const auto& [name, weight] : model.w) {
    const std::vector<std::string> parts = split_char(name, '|');
    if (parts.size() != 3) continue;  // plain or phase-only coordinate
    FeatureReportEntry e;
    e.name = name;
    e.weight = weight;
    e.category = feature_category(parts[0]);
    e.phase = parts[1];
    e.strengths = parts[2];
    const std::string self = parts[2].substr(0, parts[2].find(','));
    (self == "strong" ? report.strong : report.weak).push_back(std::move(e));
  }
  for (std::vector<FeatureReportEntry>* list : {&report.strong, &report.weak}) {
    std::sort(list->begin(), list->end(),
              [](const FeatureReportEntry& a, const FeatureReportEntry& b) {
                if (a.weight != b.weight) return a.weight > b.weight;
                return a.name < b.name;
              });
    if (list->size() > static_cast<size_t>(top_n)) list->resize(top_n);
  }
  return report;
}

}  // namespace meritum
