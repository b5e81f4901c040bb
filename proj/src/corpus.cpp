#include "meritum/corpus.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace meritum {

using nlohmann::json;
namespace fs = std::filesystem;

const char* to_string(Side s) {
  switch (s) {
    case Side::Pro: return "pro";
    case Side::Con: return "con";
    case Side::Moderator: return "moderator";
  }
  return "?";
}

const char* to_string(Phase p) {
  switch (p) {
    case Phase::Opening: return "opening";
    case Phase::Discussion: return "discussion";
    case Phase::Closing: return "closing";
  }
  return "?";
}

const char* to_string(Outcome o) { return o == Outcome::ProWin ? "pro" : "con"; }

const char* to_string(Sentiment s) {
  switch (s) {
    case Sentiment::Positive: return "positive";
    case Sentiment::Negative: return "negative";
    case Sentiment::Neutral: return "neutral";
  }
  return "?";
}

const char* to_string(AudienceKind k) {
  return k == AudienceKind::Applause ? "applause" : "laughter";
}

Side side_from_string(const std::string& s, const std::string& context) {
  if (s == "pro") return Side::Pro;
  if (s == "con") return Side::Con;
  if (s == "moderator") return Side::Moderator;
  throw DataError(context + ": unknown side \"" + s + "\"");
}

Phase phase_from_string(const std::string& s, const std::string& context) {
  if (s == "opening") return Phase::Opening;
  if (s == "discussion") return Phase::Discussion;
  if (s == "closing") return Phase::Closing;
  throw DataError(context + ": unknown phase \"" + s + "\"");
}

Outcome outcome_from_string(const std::string& s, const std::string& context) {
  if (s == "pro") return Outcome::ProWin;
  if (s == "con") return Outcome::ConWin;
  if (s == "tie") throw DataError(context + ": tied outcome rejected");
  throw DataError(context + ": unknown outcome \"" + s + "\"");
}

Sentiment sentiment_from_string(const std::string& s, const std::string& context) {
  if (s == "positive") return Sentiment::Positive;
  if (s == "negative") return Sentiment::Negative;
  if (s == "neutral") return Sentiment::Neutral;
  throw DataError(context + ": unknown sentiment \"" + s + "\"");
}

AudienceKind audience_kind_from_string(const std::string& s, const std::string& context) {
  if (s == "applause") return AudienceKind::Applause;
  if (s == "laughter") return AudienceKind::Laughter;
  throw DataError(context + ": unknown audience event kind \"" + s + "\"");
}

const DebateTranscript& Corpus::by_id(const std::string& id) const {
  for (const auto& d : debates)
    if (d.id == id) return d;
  throw DataError("debate id not found: " + id);
}

void validate_transcript(const DebateTranscript& debate) {
  const std::string ctx = "debate \"" + debate.id + "\"";
  if (debate.id.empty()) throw DataError("transcript with empty id");
  int last_phase = -1;
  for (size_t t = 0; t < debate.turns.size(); ++t) {
    const Turn& turn = debate.turns[t];
    if (turn.speaker.empty())
      throw DataError(ctx + ": turn " + std::to_string(t) + " has empty speaker");
    // moderator turns float freely, debater turns must not step back a phase
    if (turn.side != Side::Moderator) {
      int p = static_cast<int>(turn.phase);
      if (p < last_phase)
        throw DataError(ctx + ": phase order violated at turn " + std::to_string(t) +
                        " (" + to_string(turn.phase) + " after " +
                        to_string(static_cast<Phase>(last_phase)) + ")");
      last_phase = p;
    }
  }
  for (size_t e = 0; e < debate.audience_events.size(); ++e) {
    const AudienceEvent& ev = debate.audience_events[e];
    if (ev.turn < 0 || ev.turn >= static_cast<int>(debate.turns.size()))
      throw DataError(ctx + ": audience event " + std::to_string(e) + " turn out of range");
    const auto& sents = debate.turns[ev.turn].sentences;
    if (ev.sentence < 0 || ev.sentence >= static_cast<int>(sents.size()))
      throw DataError(ctx + ": audience event " + std::to_string(e) + " sentence out of range");
  }
}

namespace {

std::string type_name(const json& j) { return j.type_name(); }

const json& require(const json& obj, const char* key, const std::string& ctx) {
  auto it = obj.find(key);
  if (it == obj.end()) throw DataError(ctx + ": missing field \"" + key + "\"");
  return *it;
}

std::string require_string(const json& obj, const char* key, const std::string& ctx) {
  const json& v = require(obj, key, ctx);
  if (!v.is_string())
    throw DataError(ctx + ": field \"" + key + "\" should be a string, got " + type_name(v));
  return v.get<std::string>();
}

}  // namespace

DebateTranscript parse_transcript_json(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(origin + ": invalid JSON: " + e.what());
  }
  if (!root.is_object()) throw DataError(origin + ": transcript root must be an object");

  DebateTranscript d;
  d.id = require_string(root, "id", origin);
  const std::string ctx = "debate \"" + d.id + "\"";
  d.motion = require_string(root, "motion", ctx);
  d.outcome = outcome_from_string(require_string(root, "outcome", ctx), ctx);

  const json& turns = require(root, "turns", ctx);
  if (!turns.is_array()) throw DataError(ctx + ": \"turns\" must be an array");
  for (size_t t = 0; t < turns.size(); ++t) {
    const json& jt = turns[t];
    const std::string tctx = ctx + ", turn " + std::to_string(t);
    Turn turn;
    turn.speaker = require_string(jt, "speaker", tctx);
    turn.side = side_from_string(require_string(jt, "side", tctx), tctx);
    turn.phase = phase_from_string(require_string(jt, "phase", tctx), tctx);
    const json& sents = require(jt, "sentences", tctx);
    if (!sents.is_array()) throw DataError(tctx + ": \"sentences\" must be an array");
    for (size_t s = 0; s < sents.size(); ++s) {
      const json& js = sents[s];
      const std::string sctx = tctx + ", sentence " + std::to_string(s);
      Sentence sent;
      sent.text = require_string(js, "text", sctx);
      if (js.contains("is_question")) {
        if (!js["is_question"].is_boolean())
          throw DataError(sctx + ": \"is_question\" must be a boolean");
        sent.is_question = js["is_question"].get<bool>();
      }
      if (js.contains("sentiment") && !js["sentiment"].is_null())
        sent.sentiment = sentiment_from_string(js["sentiment"].get<std::string>(), sctx);
      if (js.contains("frames")) {
        if (!js["frames"].is_array()) throw DataError(sctx + ": \"frames\" must be an array");
        for (const auto& f : js["frames"]) sent.frames.push_back(f.get<std::string>());
      }
      const json& toks = require(js, "tokens", sctx);
      if (!toks.is_array()) throw DataError(sctx + ": \"tokens\" must be an array");
      for (const auto& jtok : toks) {
        Token tok;
        tok.surface = require_string(jtok, "surface", sctx);
        if (jtok.contains("lemma") && !jtok["lemma"].is_null())
          tok.lemma = jtok["lemma"].get<std::string>();
        if (jtok.contains("pos") && !jtok["pos"].is_null()) tok.pos = jtok["pos"].get<std::string>();
        if (jtok.contains("ner") && !jtok["ner"].is_null()) tok.ner = jtok["ner"].get<std::string>();
        sent.tokens.push_back(std::move(tok));
      }
      turn.sentences.push_back(std::move(sent));
    }
    d.turns.push_back(std::move(turn));
  }

  if (root.contains("audience_events")) {
    const json& evs = root["audience_events"];
    if (!evs.is_array()) throw DataError(ctx + ": \"audience_events\" must be an array");
    for (const auto& je : evs) {
      AudienceEvent ev;
      ev.turn = require(je, "turn", ctx).get<int>();
      ev.sentence = require(je, "sentence", ctx).get<int>();
      ev.kind = audience_kind_from_string(require_string(je, "kind", ctx), ctx);
      d.audience_events.push_back(ev);
    }
  }

  validate_transcript(d);
  return d;
}

Corpus load_corpus(const std::string& dir, Warnings* warnings) {
  if (!fs::is_directory(dir)) throw DataError("corpus directory not found: " + dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty() && warnings)
    warnings->push_back("no transcript files in " + dir);

  Corpus corpus;
  for (const auto& f : files) {
    std::ifstream in(f);
    if (!in) throw DataError("cannot read " + f.string());
    std::stringstream buf;
    buf << in.rdbuf();
    corpus.debates.push_back(parse_transcript_json(buf.str(), f.filename().string()));
  }
  std::sort(corpus.debates.begin(), corpus.debates.end(),
            [](const DebateTranscript& a, const DebateTranscript& b) { return a.id < b.id; });
  for (size_t i = 1; i < corpus.debates.size(); ++i)
    if (corpus.debates[i].id == corpus.debates[i - 1].id)
      throw DataError("duplicate debate id: " + corpus.debates[i].id);
  return corpus;
}

StatsReport corpus_stats(const Corpus& corpus) {
  StatsReport r;
  r.debates = corpus.debates.size();
  if (r.debates == 0) return r;
  size_t total_turns = 0, total_words = 0, total_speaker_slots = 0;
  for (const auto& d : corpus.debates) {
    if (d.outcome == Outcome::ProWin) ++r.pro_wins;
    else ++r.con_wins;
    total_turns += d.turns.size();
    std::vector<std::string> pro_speakers, con_speakers;
    for (const auto& t : d.turns) {
      for (const auto& s : t.sentences) total_words += s.tokens.size();
      if (t.side == Side::Pro) pro_speakers.push_back(t.speaker);
      if (t.side == Side::Con) con_speakers.push_back(t.speaker);
    }
    auto distinct = [](std::vector<std::string>& v) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
      return v.size();
    };
    total_speaker_slots += distinct(pro_speakers) + distinct(con_speakers);
    r.audience_events += d.audience_events.size();
  }
  r.mean_turns = static_cast<double>(total_turns) / r.debates;
  r.mean_words = static_cast<double>(total_words) / r.debates;
  r.mean_speakers_per_side = static_cast<double>(total_speaker_slots) / (2.0 * r.debates);
  return r;
}

}  // namespace meritum
