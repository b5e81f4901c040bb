#pragma once

#include <string>
#include <vector>

#include "meritum/common.hpp"
#include "meritum/corpus.hpp"

namespace testsupport {

using namespace meritum;

// Builders for compact fixture debates. Tokens come from whitespace-split
// words; lemma defaults to the lowercased surface.
Token tok(const std::string& surface, const std::string& pos = "NN", const std::string& ner = "");
Sentence sent(const std::string& words);
Sentence question(const std::string& words);
Turn turn(const std::string& speaker, Side side, Phase phase, std::vector<Sentence> sentences);
DebateTranscript debate(const std::string& id, Outcome outcome, std::vector<Turn> turns);

// A single-debate fixture with planted sentence topics: words are drawn from
// disjoint per-topic vocabularies, topic runs follow a stay/switch chain, and
// sides alternate. Used as the independent oracle for segmenter tests.
struct PlantedDebate {
  DebateTranscript transcript;
  std::vector<std::vector<int>> labels;          // per turn, per sentence
  std::vector<std::vector<double>> topic_word;   // planted rows over planted vocab
  std::vector<std::string> vocab;                // planted vocab, sorted
};

struct PlantedConfig {
  int topics = 3;
  int turns = 24;
  int sentences_per_turn = 8;
  int words_per_sentence = 9;
  int words_per_topic = 12;
  double stay = 0.8;
  uint64_t seed = 7;
};

PlantedDebate make_planted(const PlantedConfig& config);

// Scratch directory under the build tree, wiped per call.
std::string fresh_dir(const std::string& name);
void write_file(const std::string& path, const std::string& content);

}  // namespace testsupport
