#pragma once

#include <vector>

#include "meritum/corpus.hpp"

namespace meritum {

// A maximal run of same-topic sentences inside one debater turn.
struct Argument {
  int turn = 0;
  int first_sentence = 0;  // span is [first_sentence, last_sentence)
  int last_sentence = 0;
  int topic = 0;
  Side side = Side::Pro;
  Phase phase = Phase::Discussion;
  int ordinal = 0;  // position among the debate's debater arguments

  int span_length() const { return last_sentence - first_sentence; }
};

// labels[t][s] is the topic of sentence s in turn t; shape must match the
// debate. Moderator turns produce no arguments.
std::vector<Argument> chunk_arguments(const std::vector<std::vector<int>>& labels,
                                      const DebateTranscript& debate);

}  // namespace meritum
