#pragma once

#include <string>
#include <vector>

#include "meritum/corpus.hpp"
#include "meritum/features.hpp"
#include "meritum/trainer.hpp"

namespace meritum {

// +1 for a pro win, -1 for a con win, in corpus order.
std::vector<int> outcome_labels(const Corpus& corpus);

// decision_scores plus the argument-set precondition.
DecisionScores predict(const TrainedModel& model, const DebateFeatures& feats);

struct FoldResult {
  std::string debate_id;
  int label = 0;
  int prediction = 0;  // 0 when the fold failed to train
  double f_pro = 0.0;
  double f_con = 0.0;
  std::string error;
};

struct EvalReport {
  std::vector<FoldResult> folds;
  long correct = 0;
  double accuracy = 0.0;
  std::string fingerprint;
};

// Leave-one-out: for every debate, train on the rest (the scaler refits on
// each training fold inside the trainer) and predict the held-out one. A
// fold that fails to train is recorded with its error and counted incorrect.
EvalReport loo_evaluate(const std::vector<DebateFeatures>& feats, const std::vector<int>& labels,
                        const TrainerConfig& cfg);

enum class AblationKind { Ngrams, Audience, FeatureSubsets, NoLatent };

AblationKind ablation_from_string(const std::string& s);
const char* to_string(AblationKind k);

struct AblationRow {
  std::string name;
  EvalReport report;
};

// Per-side unigram and bigram counts packed as one argument per side, so a
// frozen-strength model trains on a single count-difference vector.
std::vector<DebateFeatures> ngram_features(const Corpus& corpus);

// Ngrams: unigram+bigram counts per side, frozen-strength linear model.
// Audience: only applause/laughter features, frozen-strength linear model.
// FeatureSubsets: the cumulative category rows basic -> +style,semantics,
// discourse -> +sentence,argument -> +interaction, each with the full latent
// trainer. NoLatent: all features with every strength frozen to strong.
std::vector<AblationRow> run_ablation(const Corpus& corpus,
                                      const std::vector<DebateFeatures>& feats,
                                      const std::vector<int>& labels, AblationKind which,
                                      const TrainerConfig& cfg);

// Category of a base (uncoupled, unphased) feature name: basic, style,
// semantic, discourse, sentence, argument, or interaction.
std::string feature_category(const std::string& base_name);

// Two-sided Mann-Whitney rank test, normal approximation with tie
// correction. valid is false when either group has fewer than two values.
struct RankTest {
  double u = 0.0;
  double z = 0.0;
  double p = 1.0;
  bool valid = false;
};

RankTest mann_whitney(const std::vector<double>& a, const std::vector<double>& b);

// Paired bootstrap over debates: the probability that `stronger` fails to
// beat `weaker` on a resampled corpus. Reports must cover the same debates
// in the same order.
double paired_bootstrap_p(const EvalReport& stronger, const EvalReport& weaker, int iters,
                          uint64_t seed);

// Debate stages: opening, first and second half of the discussion (split by
// turn count), closing.
struct StageShare {
  long strong_args = 0;
  long total_args = 0;
  double share() const { return total_args == 0 ? 0.0 : double(strong_args) / total_args; }
};

struct OutcomeSideStats {
  double strong_topic_share = 0.0;  // mean per-debate fraction of strong topics
  long strong_args = 0;
  long weak_args = 0;
  StageShare stages[4];
  std::vector<double> per_debate_share;
};

struct StrengthReport {
  OutcomeSideStats winners;
  OutcomeSideStats losers;
  RankTest share_test;  // winners' vs losers' per-debate strong shares
};

// Strength usage split by side of outcome. Each side is read under its own
// optimistic assignment (the maximizer behind its decision score).
StrengthReport strength_report(const TrainedModel& model,
                               const std::vector<DebateFeatures>& feats,
                               const std::vector<int>& labels);

struct ShiftTransition {
  Strength self_before = Strength::Strong;
  Strength oppo_before = Strength::Strong;
  Strength self_after = Strength::Strong;
  Strength oppo_after = Strength::Strong;
  long count = 0;
  double pct = 0.0;
};

struct ShiftSideStats {
  long shifts = 0;
  long to_strong = 0;
  double to_strong_pct = 0.0;
  std::vector<ShiftTransition> transitions;  // ranked by frequency
};

struct ShiftReport {
  long turns = 0;
  long shifts = 0;
  double shifts_per_turn = 0.0;
  ShiftSideStats winners;
  ShiftSideStats losers;
};

// Topic shifts (consecutive same-turn arguments with different topics) and
// where they land, under each side's own optimistic assignment.
ShiftReport shift_report(const TrainedModel& model, const std::vector<DebateFeatures>& feats,
                         const std::vector<int>& labels);

struct FeatureReportEntry {
  std::string name;
  double weight = 0.0;
  std::string category;
  std::string phase;      // full or inter
  std::string strengths;  // the coupling suffix
};

struct FeatureReport {
  std::vector<FeatureReportEntry> strong;  // self-strength strong, weight-ranked
  std::vector<FeatureReportEntry> weak;
};

FeatureReport feature_report(const TrainedModel& model, int top_n);

}  // namespace meritum
