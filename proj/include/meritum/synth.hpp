#pragma once

#include <vector>

#include "meritum/corpus.hpp"
#include "meritum/htmm.hpp"
#include "meritum/strength.hpp"

namespace meritum {

// Generator for a corpus with planted topics, strengths, and coupled weights.
//
// Per debate, one side is planted strong on ceil(K/2) topics and the other on
// the rest. Word volume tilts toward each side's strong topics. Every turn
// hammers one focus topic with markers: first-person plural markers when the
// side is strong there, second-person markers when weak. Marker counts jitter
// per sentence so the scaler sees a spread. Exactly half of a side's turns
// focus strong topics; only the per-topic placement of the piles differs
// between debates. Sides may starve weak topics: minimal volume, and the
// topic is skipped in that side's discussion turns unless focused. One side
// draws a larger word budget than the other (`budget_skew`), which feeds the
// planted uncoupled volume weight; that visible margin is what lets the
// planted con wins exist at all, while the marker piles decide the close
// debates through the coupled weights.
//
// The outcome is the sign of the optimistic pro decision score under the
// planted weights, which makes labels realizable for the one-sided training
// objective. Pre-noise winners alternate; each debate is redrawn until the
// optimistic pro score and the midrange prediction rule agree on the
// scheduled winner with at least `score_margin` to spare, so training
// accuracy on the clean corpus is exact. `noise` then flips the stated
// outcome. Winning sides order their turns weak-topics-first with
// probability `shift_bias`, so their topic shifts land on strong topics.
struct SynthConfig {
  int debates = 60;
  int topics = 5;
  int words_per_topic = 10;      // dedicated vocabulary per topic
  int discussion_turns = 8;      // total discussion turns, alternating sides
  int sentences_per_argument = 2;
  int turn_word_budget = 60;     // mean topic words per side per turn
  double budget_skew = 0.12;     // max per-debate budget advantage of one side
  double strong_tilt = 1.25;     // volume multiplier on planted-strong topics
  double concede_prob = 0.45;    // chance a side starves each of its weak topics
  int markers_per_sentence = 2;  // markers per sentence on the turn's focus topic
  double pile_prob = 0.5;        // chance a side piles all same-strength focuses on one topic
  double payload_words = 0.08;   // planted uncoupled weight on word counts
  double payload_claim = 0.0;    // planted weight on words claimed strong
  double payload_marker = 0.45;  // planted weight on "you" claimed weak
  double payload_we = 0.45;      // planted weight on "we" claimed strong
  double shift_bias = 0.8;
  double score_margin = 1.0;     // rejection floor on both planted decision scores
  double noise = 0.05;           // outcome flip probability, in [0, 0.5)
  uint64_t seed = 42;
  // Planted coupled weights driving outcomes. Supported coordinate names are
  // `base|full` and `base|full|{strong,weak}` with base one of #words, #we,
  // #you. Empty means the default vector built from the payload knobs above.
  SparseVector planted_weights;
};

struct SynthResult {
  Corpus corpus;
  SegmentedCorpus truth;                     // generator's own segmentation
  std::vector<StrengthAssignment> strengths; // planted, corpus order
  std::vector<double> scores;                // planted pre-noise decision score, pro minus con
  std::vector<bool> flipped;                 // which outcomes the noise inverted
  SparseVector weights;                      // planted weights actually used
};

SynthResult synth_generate(const SynthConfig& cfg);

}  // namespace meritum
