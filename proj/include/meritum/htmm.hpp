#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "meritum/arguments.hpp"
#include "meritum/common.hpp"
#include "meritum/corpus.hpp"

namespace meritum {

// Sentence-level topic model for a single debate: each sentence carries one
// topic; a sentence either keeps the previous sentence's topic (probability
// transition_stay) or draws fresh from the speaker mixture. The first
// sentence of every turn always draws fresh.

struct HtmmHyper {
  double mixture_pseudo = 1.5;  // Dirichlet pseudo-count on topic mixtures
  double word_pseudo = 1.01;    // Dirichlet pseudo-count on topic-word rows
  int max_iter = 200;
  double rel_tol = 1e-6;  // relative log-posterior change
};

struct HtmmModel {
  int K = 0;
  std::vector<std::string> vocab;  // sorted
  std::map<std::string, int> word_index;
  std::vector<std::vector<double>> topic_word;  // K x V, rows sum to 1
  std::vector<double> mixture_full;             // sums to 1
  std::vector<double> mixture_pro;
  std::vector<double> mixture_con;
  double transition_stay = 0.5;
};

// Throws NumericalError when a distribution fails to normalize within 1e-9.
void validate_model(const HtmmModel& model);

struct EmIter {
  double loglik = 0.0;
  double logpost = 0.0;
};

struct FitResult {
  HtmmModel model;
  std::vector<EmIter> trace;  // one entry per EM iteration, non-decreasing logpost
};

using Stopwords = std::set<std::string>;

// MAP-EM fit over the whole debate (all speakers, moderator included).
// Requires K >= 1 and at least K sentences with usable tokens.
FitResult fit_htmm(const DebateTranscript& debate, int K, const HtmmHyper& hyper,
                   uint64_t seed, const Stopwords& stopwords = {});

// Freezes topic_word bit for bit; re-estimates mixture_pro, mixture_con and
// transition_stay by EM over each side's own sentence stream (turn boundaries
// still force fresh draws). Moderator sentences take no part.
FitResult side_conditioned_refit(const HtmmModel& model, const DebateTranscript& debate,
                                 const HtmmHyper& hyper, const Stopwords& stopwords = {});

// Max-posterior topic per sentence. Debater sentences are decoded against
// their side's mixture, moderator sentences against mixture_full. Sentences
// with no usable tokens inherit the previous label in the turn, or the
// stream mixture's argmax when turn-initial.
std::vector<std::vector<int>> assign_topics(const HtmmModel& model, const DebateTranscript& debate,
                                            const Stopwords& stopwords = {});

// NPMI coherence of each topic's top_n words over sliding 10-sentence windows
// of the debate. Scores lie in [-1, 1]. Requires top_n >= 2.
std::vector<double> topic_coherence(const HtmmModel& model, const DebateTranscript& debate,
                                    int top_n, const Stopwords& stopwords = {},
                                    int window = 10);

struct TopicCountChoice {
  int K = 0;
  FitResult fit;
  std::vector<std::pair<int, double>> scores;  // (K, mean coherence) for each K tried
};

// Fits every K in [kmin, kmax], scores each by mean per-topic coherence and
// keeps the best; ties go to the smaller K. Ks that cannot be fitted are
// skipped; if none fits, throws.
TopicCountChoice select_topic_count(const DebateTranscript& debate, int kmin, int kmax,
                                    const HtmmHyper& hyper, uint64_t seed,
                                    const Stopwords& stopwords = {}, int top_n = 10);

struct SegmenterConfig {
  int kmin = 10;
  int kmax = 20;
  HtmmHyper hyper;
  uint64_t seed = 0;
  int stopword_top_n = 100;
  int coherence_top_n = 10;
};

struct SegmentedDebate {
  std::string debate_id;
  int K = 0;
  HtmmModel model;
  std::vector<std::vector<int>> labels;  // per turn, per sentence
  std::vector<Argument> arguments;
  double mean_coherence = 0.0;
};

struct SegmentedCorpus {
  std::vector<SegmentedDebate> debates;  // corpus order
  std::vector<std::string> stopwords;
};

// Corpus-level stop list: the top_n most frequent lowercased tokens plus any
// token tagged with a punctuation POS (a tag with no letters).
Stopwords build_stopwords(const Corpus& corpus, int top_n);

// Full per-debate pipeline: K selection, fit, side refit, labeling, chunking.
SegmentedCorpus segment_corpus(const Corpus& corpus, const SegmenterConfig& config);

}  // namespace meritum
