#include "support.hpp"

#include <filesystem>
#include <fstream>
#include <set>

namespace testsupport {

namespace fs = std::filesystem;

Token tok(const std::string& surface, const std::string& pos, const std::string& ner) {
  Token t;
  t.surface = surface;
  t.lemma = lowercase(surface);
  t.pos = pos;
  t.ner = ner;
  return t;
}

Sentence sent(const std::string& words) {
  Sentence s;
  s.text = words;
  for (const auto& w : split_ws(words)) s.tokens.push_back(tok(w));
  return s;
}

Sentence question(const std::string& words) {
  Sentence s = sent(words);
  s.is_question = true;
  return s;
}

Turn turn(const std::string& speaker, Side side, Phase phase, std::vector<Sentence> sentences) {
  Turn t;
  t.speaker = speaker;
  t.side = side;
  t.phase = phase;
  t.sentences = std::move(sentences);
  return t;
}

DebateTranscript debate(const std::string& id, Outcome outcome, std::vector<Turn> turns) {
  DebateTranscript d;
  d.id = id;
  d.motion = "test motion";
  d.outcome = outcome;
  d.turns = std::move(turns);
  validate_transcript(d);
  return d;
}

PlantedDebate make_planted(const PlantedConfig& cfg) {
  PlantedDebate out;
  Rng rng(cfg.seed);

  std::vector<std::vector<std::string>> blocks(cfg.topics);
  for (int k = 0; k < cfg.topics; ++k)
    for (int w = 0; w < cfg.words_per_topic; ++w)
      blocks[k].push_back("t" + std::to_string(k) + "w" + std::to_string(w));

  DebateTranscript d;
  d.id = "planted";
  d.motion = "planted motion";
  d.outcome = Outcome::ProWin;
  for (int t = 0; t < cfg.turns; ++t) {
    Turn tn;
    tn.speaker = t % 2 == 0 ? "alice" : "bob";
    tn.side = t % 2 == 0 ? Side::Pro : Side::Con;
    tn.phase = Phase::Discussion;
    std::vector<int> row;
    int topic = 0;
    for (int s = 0; s < cfg.sentences_per_turn; ++s) {
      if (s == 0 || !rng.bernoulli(cfg.stay))
        topic = static_cast<int>(rng.below(cfg.topics));
      row.push_back(topic);
      Sentence sentence;
      for (int w = 0; w < cfg.words_per_sentence; ++w) {
        const auto& block = blocks[topic];
        std::string word = block[rng.below(block.size())];
        sentence.text += (w ? " " : "") + word;
        sentence.tokens.push_back(tok(word));
      }
      tn.sentences.push_back(std::move(sentence));
    }
    d.turns.push_back(std::move(tn));
    out.labels.push_back(std::move(row));
  }
  out.transcript = std::move(d);

  std::set<std::string> vocab_set;
  for (const auto& b : blocks) vocab_set.insert(b.begin(), b.end());
  out.vocab.assign(vocab_set.begin(), vocab_set.end());
  out.topic_word.assign(cfg.topics, std::vector<double>(out.vocab.size(), 0.0));
  for (int k = 0; k < cfg.topics; ++k) {
    for (const auto& w : blocks[k]) {
      size_t idx = std::lower_bound(out.vocab.begin(), out.vocab.end(), w) - out.vocab.begin();
      out.topic_word[k][idx] = 1.0 / cfg.words_per_topic;
    }
  }
  return out;
}

std::string fresh_dir(const std::string& name) {
  fs::path dir = fs::path("test_scratch") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

}  // namespace testsupport
