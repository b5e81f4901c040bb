#pragma once

#include <string>
#include <vector>

#include "meritum/arguments.hpp"
#include "meritum/corpus.hpp"
#include "meritum/htmm.hpp"
#include "meritum/lexicons.hpp"
#include "meritum/sparse.hpp"

namespace meritum {

// Vowel-group heuristic with a silent final e, never below one syllable for a
// word with letters.
int count_syllables(const std::string& word);

struct Readability {
  double flesch = 0.0;
  double fk = 0.0;
  double cl = 0.0;
  bool valid = false;  // false when the sentence has no words
};

Readability sentence_readability(const Sentence& s);

struct FeatureConfig {
  double decay_alpha = 1.0;
  int interruption_min_words = 50;
  int interruption_max_sentences = 2;
  int bigram_rep_runs = 3;  // consecutive clauses carrying the same bigram
};

// Base (strength-free) feature extraction. Every function is a pure function
// of the argument and its debate context; names follow a flat string scheme
// (`#words`, `pos:NN`, `ix:addresses`, ...) and zero counts are never stored.
SparseVector extract_token_features(const Argument& arg, const DebateTranscript& debate,
                                    const LexiconSet& lex);
SparseVector extract_semantic_discourse_features(const Argument& arg,
                                                 const DebateTranscript& debate,
                                                 const LexiconSet& lex);
SparseVector extract_sentence_features(const Argument& arg, const DebateTranscript& debate);
SparseVector extract_argument_level_features(const Argument& arg, const DebateTranscript& debate,
                                             int prior_topic_count,
                                             const FeatureConfig& cfg = {});
// `args` is the debate's full argument sequence (for locating the opponent's
// same-topic argument in the previous turn and same-turn topic shifts).
SparseVector extract_interaction_features(const Argument& arg, const DebateTranscript& debate,
                                          const std::vector<Argument>& args,
                                          const LexiconSet& lex);

// Every coordinate doubled into `name|full`, plus `name|inter` for
// discussion-phase arguments.
SparseVector phase_split(const SparseVector& base, Phase phase);

struct ArgumentFeatures {
  Argument arg;
  SparseVector vec;  // phase-split base features, unscaled
};

struct DebateFeatures {
  std::string debate_id;
  int K = 0;
  std::vector<ArgumentFeatures> pro;  // in ordinal order
  std::vector<ArgumentFeatures> con;
};

DebateFeatures extract_debate_features(const SegmentedDebate& seg, const DebateTranscript& debate,
                                       const LexiconSet& lex, const FeatureConfig& cfg = {});

std::vector<DebateFeatures> extract_corpus_features(const SegmentedCorpus& seg,
                                                    const Corpus& corpus, const LexiconSet& lex,
                                                    const FeatureConfig& cfg = {});

}  // namespace meritum
