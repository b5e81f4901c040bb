#pragma once

#include <map>
#include <string>
#include <vector>

#include "meritum/common.hpp"
#include "meritum/corpus.hpp"

namespace meritum {

// Eight lexicon families loaded from TSV files in a directory. All lookups
// are on lowercased keys. Missing files are legal and produce one warning
// each; malformed rows are errors naming file and line.
struct LexiconSet {
  struct Attributes {
    double concreteness = 0.0;
    double valence = 0.0;
    double arousal = 0.0;
    double dominance = 0.0;
  };
  struct Connective {
    std::vector<std::string> words;
    std::string level1;
    std::string level2;
  };

  std::map<std::string, Sentiment> sentiment;              // positive / negative words
  std::map<std::string, std::vector<std::string>> emotion; // word -> emotion types
  std::map<std::string, bool> formality;                   // true = formal
  std::map<std::string, bool> hedges;                      // true = verb hedge
  std::map<std::string, Attributes> attributes;
  std::vector<Connective> connectives;                     // sorted longest phrase first
  std::vector<std::vector<std::string>> agreement;         // tokenized phrases
  std::vector<std::vector<std::string>> pleading;

  bool empty() const {
    return sentiment.empty() && emotion.empty() && formality.empty() && hedges.empty() &&
           attributes.empty() && connectives.empty() && agreement.empty() && pleading.empty();
  }
};

LexiconSet load_lexicons(const std::string& dir, Warnings* warnings = nullptr);

// Greedy longest-phrase-first matching over a lowercased token sequence.
// Candidate phrases must be sorted longest first; matches do not overlap.
size_t count_phrase_matches(const std::vector<std::string>& tokens,
                            const std::vector<std::vector<std::string>>& phrases);

// Connective matches, reported as (level1, level2) pairs in match order.
std::vector<std::pair<std::string, std::string>> match_connectives(
    const std::vector<std::string>& tokens, const std::vector<LexiconSet::Connective>& connectives);

}  // namespace meritum
