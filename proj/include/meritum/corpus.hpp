#pragma once

#include <optional>
#include <string>
#include <vector>

#include "meritum/common.hpp"

namespace meritum {

enum class Side { Pro, Con, Moderator };
enum class Phase { Opening, Discussion, Closing };
enum class Outcome { ProWin, ConWin };
enum class Sentiment { Positive, Negative, Neutral };
enum class AudienceKind { Applause, Laughter };

const char* to_string(Side s);
const char* to_string(Phase p);
const char* to_string(Outcome o);
const char* to_string(Sentiment s);
const char* to_string(AudienceKind k);

Side side_from_string(const std::string& s, const std::string& context);
Phase phase_from_string(const std::string& s, const std::string& context);
Outcome outcome_from_string(const std::string& s, const std::string& context);
Sentiment sentiment_from_string(const std::string& s, const std::string& context);
AudienceKind audience_kind_from_string(const std::string& s, const std::string& context);

struct Token {
  std::string surface;
  std::string lemma;  // empty when the layer is missing
  std::string pos;
  std::string ner;
};

struct Sentence {
  std::string text;
  bool is_question = false;
  std::optional<Sentiment> sentiment;
  std::vector<std::string> frames;
  std::vector<Token> tokens;
};

struct Turn {
  std::string speaker;
  Side side = Side::Moderator;
  Phase phase = Phase::Discussion;
  std::vector<Sentence> sentences;
};

struct AudienceEvent {
  int turn = 0;
  int sentence = 0;
  AudienceKind kind = AudienceKind::Applause;
};

struct DebateTranscript {
  std::string id;
  std::string motion;
  Outcome outcome = Outcome::ProWin;
  std::vector<Turn> turns;
  std::vector<AudienceEvent> audience_events;

  Side winner() const { return outcome == Outcome::ProWin ? Side::Pro : Side::Con; }
};

struct Corpus {
  std::vector<DebateTranscript> debates;  // sorted by id, ids unique

  const DebateTranscript& by_id(const std::string& id) const;
};

// Throws DataError naming the debate and offending field.
void validate_transcript(const DebateTranscript& debate);

// Reads every *.json transcript in the directory. The result does not depend
// on file naming: debates are sorted by id after parsing.
Corpus load_corpus(const std::string& dir, Warnings* warnings = nullptr);

DebateTranscript parse_transcript_json(const std::string& text, const std::string& origin);

struct StatsReport {
  size_t debates = 0;
  size_t pro_wins = 0;
  size_t con_wins = 0;
  double mean_turns = 0.0;
  double mean_words = 0.0;
  double mean_speakers_per_side = 0.0;
  size_t audience_events = 0;
};

StatsReport corpus_stats(const Corpus& corpus);

}  // namespace meritum
