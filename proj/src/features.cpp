#include "meritum/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>

namespace meritum {

namespace {

const std::set<std::string>& pronoun_inventory() {
  static const std::set<std::string> inv = {
      "i",  "me", "my",  "we",  "us",  "our",  "you",  "your", "he",
      "him", "his", "she", "her", "they", "them", "their", "it",   "its"};
  return inv;
}

bool has_alnum(const std::string& s) {
  return std::any_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isalnum(c) != 0; });
}

bool is_word_token(const Token& tok) { return has_alnum(tok.surface); }

bool looks_numeric(const Token& tok) {
  if (tok.pos == "CD") return true;
  bool digit = false;
  for (unsigned char c : tok.surface) {
    if (std::isdigit(c)) {
      digit = true;
    } else if (c != '.' && c != ',' && c != '-' && c != '%' && c != '/') {
      return false;
    }
  }
  return digit;
}

// lexicon keys are lowercase lemmas; fall back to the surface when the lemma
// layer is missing
std::string lex_key(const Token& tok) {
  return lowercase(tok.lemma.empty() ? tok.surface : tok.lemma);
}

int argument_word_count(const Argument& arg, const DebateTranscript& debate) {
  int n = 0;
  const Turn& turn = debate.turns[arg.turn];
  for (int s = arg.first_sentence; s < arg.last_sentence; ++s)
    for (const Token& tok : turn.sentences[s].tokens)
      if (is_word_token(tok)) ++n;
  return n;
}

std::vector<std::string> sentence_surfaces(const Sentence& sent) {
  std::vector<std::string> out;
  out.reserve(sent.tokens.size());
  for (const Token& tok : sent.tokens) out.push_back(lowercase(tok.surface));
  return out;
}

Sentiment majority_sentiment(const Argument& arg, const DebateTranscript& debate) {
  int votes[3] = {0, 0, 0};
  const Turn& turn = debate.turns[arg.turn];
  for (int s = arg.first_sentence; s < arg.last_sentence; ++s)
    if (turn.sentences[s].sentiment)
      ++votes[static_cast<int>(*turn.sentences[s].sentiment)];
  int pos = votes[static_cast<int>(Sentiment::Positive)];
  int neg = votes[static_cast<int>(Sentiment::Negative)];
  int neu = votes[static_cast<int>(Sentiment::Neutral)];
  int best = std::max({pos, neg, neu});
  int holders = (pos == best) + (neg == best) + (neu == best);
  if (best == 0 || holders > 1) return Sentiment::Neutral;
  if (pos == best) return Sentiment::Positive;
  if (neg == best) return Sentiment::Negative;
  return Sentiment::Neutral;
}

std::string majority_emotion(const Argument& arg, const DebateTranscript& debate,
                             const LexiconSet& lex) {
  std::map<std::string, int> votes;
  const Turn& turn = debate.turns[arg.turn];
  for (int s = arg.first_sentence; s < arg.last_sentence; ++s)
    for (const Token& tok : turn.sentences[s].tokens) {
      auto it = lex.emotion.find(lex_key(tok));
      if (it == lex.emotion.end()) continue;
      for (const std::string& type : it->second) ++votes[type];
    }
  int best = 0;
  for (const auto& [type, n] : votes) best = std::max(best, n);
  if (best == 0) return "none";
  std::string winner;
  int holders = 0;
  for (const auto& [type, n] : votes)
    if (n == best) {
      winner = type;
      ++holders;
    }
  return holders == 1 ? winner : "none";
}

}  // namespace

int count_syllables(const std::string& word) {
  std::string letters;
  for (unsigned char c : word)
    if (std::isalpha(c)) letters.push_back(static_cast<char>(std::tolower(c)));
  if (letters.empty()) return 0;
  if (letters.size() > 2 && letters.back() == 'e' &&
      letters.substr(letters.size() - 2) != "le")
    letters.pop_back();
  auto is_vowel = [](char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
  };
  int groups = 0;
  bool in_group = false;
  for (char c : letters) {
    if (is_vowel(c)) {
      if (!in_group) ++groups;
      in_group = true;
    } else {
      in_group = false;
    }
  }
  return std::max(groups, 1);
}

Readability sentence_readability(const Sentence& s) {
  Readability r;
  int words = 0, syllables = 0, letters = 0;
  for (const Token& tok : s.tokens) {
    if (!is_word_token(tok)) continue;
    ++words;
    syllables += count_syllables(tok.surface);
    for (unsigned char c : tok.surface)
      if (std::isalpha(c)) ++letters;
  }
  if (words == 0) return r;
  double w = words;
  double spw = syllables / w;                  // syllables per word
  double lpw = 100.0 * letters / w;            // letters per 100 words
  double sent_per_100 = 100.0 / w;             // one sentence
  r.flesch = 206.835 - 1.015 * w - 84.6 * spw;
  r.fk = 0.39 * w + 11.8 * spw - 15.59;
  r.cl = 0.0588 * lpw - 0.296 * sent_per_100 - 15.8;
  r.valid = true;
  return r;
}

SparseVector extract_token_features(const Argument& arg, const DebateTranscript& debate,
                                    const LexiconSet& lex) {
  SparseVector v;
  const Turn& turn = debate.turns[arg.turn];
  int words = 0, numbers = 0, formal = 0, informal = 0;
  int hedge_verb = 0, hedge_nonverb = 0;
  int attr_n = 0;
  double conc = 0.0, val = 0.0, aro = 0.0, dom = 0.0;
  std::map<std::string, int> ner_counts, pronoun_counts, pos_counts, emo_counts;
  int senti_pos = 0, senti_neg = 0;
  size_t agreement = 0;

  for (int s = arg.first_sentence; s < arg.last_sentence; ++s) {
    const Sentence& sent = turn.sentences[s];
    for (const Token& tok : sent.tokens) {
      if (is_word_token(tok)) ++words;
      if (looks_numeric(tok)) ++numbers;
      if (!tok.ner.empty() && tok.ner != "O") ++ner_counts[tok.ner];
      std::string key = lex_key(tok);
      if (pronoun_inventory().count(key)) ++pronoun_counts[key];
      if (!tok.pos.empty()) ++pos_counts[tok.pos];
      if (auto it = lex.sentiment.find(key); it != lex.sentiment.end())
        (it->second == Sentiment::Positive ? senti_pos : senti_neg) += 1;
      if (auto it = lex.emotion.find(key); it != lex.emotion.end())
        for (const std::string& type : it->second) ++emo_counts[type];
      if (auto it = lex.formality.find(key); it != lex.formality.end())
        (it->second ? formal : informal) += 1;
      if (auto it = lex.hedges.find(key); it != lex.hedges.end())
        (it->second ? hedge_verb : hedge_nonverb) += 1;
      if (auto it = lex.attributes.find(key); it != lex.attributes.end()) {
        ++attr_n;
        conc += it->second.concreteness;
        val += it->second.valence;
        aro += it->second.arousal;
        dom += it->second.dominance;
      }
    }
    agreement += count_phrase_matches(sentence_surfaces(sent), lex.agreement);
  }

  int applause = 0, laughter = 0;
  for (const AudienceEvent& ev : debate.audience_events)
    if (ev.turn == arg.turn && ev.sentence >= arg.first_sentence &&
        ev.sentence < arg.last_sentence)
      (ev.kind == AudienceKind::Applause ? applause : laughter) += 1;

  v.set("#words", words);
  v.set("#numbers", numbers);
  for (const auto& [t, n] : ner_counts) v.set("ner:" + t, n);
  for (const auto& [p, n] : pronoun_counts) v.set("#" + p, n);
  for (const auto& [t, n] : pos_counts) v.set("pos:" + t, n);
  v.set("senti:positive", senti_pos);
  v.set("senti:negative", senti_neg);
  for (const auto& [t, n] : emo_counts) v.set("emo:" + t, n);
  v.set("#agreement", static_cast<double>(agreement));
  v.set("#applause", applause);
  v.set("#laughter", laughter);
  v.set("#formal", formal);
  v.set("#informal", informal);
  v.set("#hedge_verb", hedge_verb);
  v.set("#hedge_nonverb", hedge_nonverb);
  if (attr_n > 0) {
    v.set("attr:concreteness", conc / attr_n);
    v.set("attr:valence", val / attr_n);
    v.set("attr:arousal", aro / attr_n);
    v.set("attr:dominance", dom / attr_n);
  }
  return v;
}

SparseVector extract_semantic_discourse_features(const Argument& arg,
                                                 const DebateTranscript& debate,
                                                 const LexiconSet& lex) {
  SparseVector v;
  const Turn& turn = debate.turns[arg.turn];
  std::map<std::string, int> frames, level1, level2;
  size_t pleading = 0;
  for (int s = arg.first_sentence; s < arg.last_sentence; ++s) {
    const Sentence& sent = turn.sentences[s];
    for (const std::string& f : sent.frames) ++frames[f];
    auto surfaces = sentence_surfaces(sent);
    for (const auto& [l1, l2] : match_connectives(surfaces, lex.connectives)) {
      ++level1[l1];
      ++level2[l2];
    }
    pleading += count_phrase_matches(surfaces, lex.pleading);
  }
  for (const auto& [f, n] : frames) v.set("frame:" + f, n);
  for (const auto& [c, n] : level1) v.set("pdtb1:" + c, n);
  for (const auto& [c, n] : level2) v.set("pdtb2:" + c, n);
  v.set("#pleading", static_cast<double>(pleading));
  return v;
}

SparseVector extract_sentence_features(const Argument& arg, const DebateTranscript& debate) {
  SparseVector v;
  const Turn& turn = debate.turns[arg.turn];
  int questions = 0;
  std::map<std::string, int> sent_counts, transitions;
  const Sentence* prev_labeled = nullptr;
  double fl_max = 0, fl_min = 0, fl_sum = 0;
  double fk_max = 0, fk_min = 0, fk_sum = 0;
  double cl_max = 0, cl_min = 0, cl_sum = 0;
  int scored = 0;

  for (int s = arg.first_sentence; s < arg.last_sentence; ++s) {
    const Sentence& sent = turn.sentences[s];
    if (sent.is_question || (!sent.text.empty() && sent.text.back() == '?')) ++questions;
    if (sent.sentiment) {
      std::string label = to_string(*sent.sentiment);
      ++sent_counts[label];
      if (prev_labeled)
        ++transitions[std::string(to_string(*prev_labeled->sentiment)) + "->" + label];
      prev_labeled = &sent;
    }
    Readability r = sentence_readability(sent);
    if (r.valid) {
      if (scored == 0) {
        fl_max = fl_min = r.flesch;
        fk_max = fk_min = r.fk;
        cl_max = cl_min = r.cl;
      }
      fl_max = std::max(fl_max, r.flesch);
      fl_min = std::min(fl_min, r.flesch);
      fk_max = std::max(fk_max, r.fk);
      fk_min = std::min(fk_min, r.fk);
      cl_max = std::max(cl_max, r.cl);
      cl_min = std::min(cl_min, r.cl);
      fl_sum += r.flesch;
      fk_sum += r.fk;
      cl_sum += r.cl;
      ++scored;
    }
  }

  v.set("#question", questions);
  for (const auto& [label, n] : sent_counts) v.set("#sent:" + label, n);
  for (const auto& [pair, n] : transitions) v.set("trans:" + pair, n);
  if (scored > 0) {
    v.set("read:flesch:max", fl_max);
    v.set("read:flesch:min", fl_min);
    v.set("read:flesch:mean", fl_sum / scored);
    v.set("read:fk:max", fk_max);
    v.set("read:fk:min", fk_min);
    v.set("read:fk:mean", fk_sum / scored);
    v.set("read:cl:max", cl_max);
    v.set("read:cl:min", cl_min);
    v.set("read:cl:mean", cl_sum / scored);
  }
  v.set("#sentences", arg.span_length());
  return v;
}

SparseVector extract_argument_level_features(const Argument& arg, const DebateTranscript& debate,
                                             int prior_topic_count, const FeatureConfig& cfg) {
  SparseVector v;
  v.set("arg:indicator", 1.0);
  v.set("arg:decayed", std::exp(-cfg.decay_alpha * prior_topic_count));

  const Turn& turn = debate.turns[arg.turn];
  bool last_in_turn = arg.last_sentence == static_cast<int>(turn.sentences.size());
  if (last_in_turn && argument_word_count(arg, debate) > cfg.interruption_min_words &&
      arg.turn + 1 < static_cast<int>(debate.turns.size())) {
    const Turn& next = debate.turns[arg.turn + 1];
    if (next.side != arg.side && next.phase == arg.phase &&
        static_cast<int>(next.sentences.size()) <= cfg.interruption_max_sentences)
      v.set("arg:interrupted", 1.0);
  }

  // clauses are comma/semicolon-delimited spans; a bigram carried through
  // enough consecutive clauses marks deliberate repetition
  std::vector<std::vector<std::string>> clauses;
  for (int s = arg.first_sentence; s < arg.last_sentence; ++s) {
    std::vector<std::string> clause;
    for (const Token& tok : turn.sentences[s].tokens) {
      if (tok.surface == "," || tok.surface == ";") {
        if (!clause.empty()) clauses.push_back(std::move(clause));
        clause = {};
      } else if (is_word_token(tok)) {
        clause.push_back(lowercase(tok.surface));
      }
    }
    if (!clause.empty()) clauses.push_back(std::move(clause));
  }
  std::map<std::string, std::pair<size_t, int>> runs;  // bigram -> (last clause, run)
  bool repeated = false;
  for (size_t c = 0; c < clauses.size() && !repeated; ++c) {
    std::set<std::string> seen;
    for (size_t i = 0; i + 1 < clauses[c].size(); ++i)
      seen.insert(clauses[c][i] + " " + clauses[c][i + 1]);
    for (const std::string& bg : seen) {
      auto it = runs.find(bg);
      int run = (it != runs.end() && it->second.first + 1 == c) ? it->second.second + 1 : 1;
      runs[bg] = {c, run};
      if (run >= cfg.bigram_rep_runs) {
        repeated = true;
        break;
      }
    }
  }
  if (repeated) v.set("arg:bigram_rep", 1.0);
  return v;
}

SparseVector extract_interaction_features(const Argument& arg, const DebateTranscript& debate,
                                          const std::vector<Argument>& args,
                                          const LexiconSet& lex) {
  SparseVector v;
  const Argument* opponent = nullptr;
  const Argument* prev_same_turn = nullptr;
  for (const Argument& a : args) {
    if (a.turn == arg.turn - 1 && a.side != arg.side && a.topic == arg.topic)
      opponent = &a;  // keep the last (closest) one
    if (a.turn == arg.turn && a.ordinal == arg.ordinal - 1) prev_same_turn = &a;
  }

  if (opponent) {
    v.set("ix:addresses", 1.0);
    v.set("ix:words_to_oppo", argument_word_count(arg, debate));

    auto lemmas = [&](const Argument& a) {
      std::set<std::string> out;
      const Turn& turn = debate.turns[a.turn];
      for (int s = a.first_sentence; s < a.last_sentence; ++s)
        for (const Token& tok : turn.sentences[s].tokens)
          if (is_word_token(tok)) out.insert(lex_key(tok));
      return out;
    };
    std::set<std::string> mine = lemmas(arg), theirs = lemmas(*opponent);
    int common = 0;
    for (const std::string& l : mine)
      if (theirs.count(l)) ++common;
    v.set("ix:common_words", common);

    v.set(std::string("ix:senti_pair:") + to_string(majority_sentiment(*opponent, debate)) +
              "->" + to_string(majority_sentiment(arg, debate)),
          1.0);
    v.set("ix:emo_pair:" + majority_emotion(*opponent, debate, lex) + "->" +
              majority_emotion(arg, debate, lex),
          1.0);
  }

  if (prev_same_turn && prev_same_turn->topic != arg.topic) v.set("ix:topic_shift", 1.0);
  return v;
}

SparseVector phase_split(const SparseVector& base, Phase phase) {
  SparseVector out;
  for (const auto& [name, value] : base) {
    out.set(name + "|full", value);
    if (phase == Phase::Discussion) out.set(name + "|inter", value);
  }
  return out;
}

DebateFeatures extract_debate_features(const SegmentedDebate& seg,
                                       const DebateTranscript& debate, const LexiconSet& lex,
                                       const FeatureConfig& cfg) {
  DebateFeatures out;
  out.debate_id = debate.id;
  out.K = seg.K;
  std::map<std::pair<int, int>, int> topic_uses;  // (side, topic) -> count so far
  for (const Argument& arg : seg.arguments) {
    auto key = std::make_pair(static_cast<int>(arg.side), arg.topic);
    int prior = topic_uses[key];
    ++topic_uses[key];

    SparseVector base = extract_token_features(arg, debate, lex);
    base.add(extract_semantic_discourse_features(arg, debate, lex));
    base.add(extract_sentence_features(arg, debate));
    base.add(extract_argument_level_features(arg, debate, prior, cfg));
    base.add(extract_interaction_features(arg, debate, seg.arguments, lex));

    ArgumentFeatures af;
    af.arg = arg;
    af.vec = phase_split(base, arg.phase);
    (arg.side == Side::Pro ? out.pro : out.con).push_back(std::move(af));
  }
  return out;
}

std::vector<DebateFeatures> extract_corpus_features(const SegmentedCorpus& seg,
                                                    const Corpus& corpus,
                                                    const LexiconSet& lex,
                                                    const FeatureConfig& cfg) {
  std::vector<DebateFeatures> out;
  out.reserve(seg.debates.size());
  for (const SegmentedDebate& sd : seg.debates)
    out.push_back(extract_debate_features(sd, corpus.by_id(sd.debate_id), lex, cfg));
  return out;
}

}  // namespace meritum
