#include "meritum/lexicons.hpp"

#include <filesystem>
#include <fstream>

namespace meritum {

namespace fs = std::filesystem;

namespace {

// Reads a TSV file line by line; skips blank lines and lines starting with '#'.
// Calls row(fields, line_number) for each data line.
template <typename Fn>
bool read_tsv(const std::string& path, Warnings* warnings, const char* family, Fn row) {
  std::ifstream in(path);
  if (!in) {
    if (warnings) warnings->push_back(std::string("lexicon family \"") + family +
                                      "\" missing (" + path + "), using empty lexicon");
    return false;
  }
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    row(split_char(line, '\t'), lineno);
  }
  return true;
}

[[noreturn]] void bad_row(const std::string& path, size_t lineno, const std::string& why) {
  throw DataError(path + ":" + std::to_string(lineno) + ": " + why);
}

double parse_number(const std::string& s, const std::string& path, size_t lineno) {
  try {
    size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) bad_row(path, lineno, "not a number: \"" + s + "\"");
    return v;
  } catch (const std::exception&) {
    bad_row(path, lineno, "not a number: \"" + s + "\"");
  }
}

}  // namespace

LexiconSet load_lexicons(const std::string& dir, Warnings* warnings) {
  if (!fs::is_directory(dir)) throw DataError("lexicon directory not found: " + dir);
  LexiconSet lex;

  std::string p = (fs::path(dir) / "sentiment.tsv").string();
  read_tsv(p, warnings, "sentiment", [&](const std::vector<std::string>& f, size_t n) {
    if (f.size() != 2) bad_row(p, n, "expected word<TAB>label");
    if (f[1] != "positive" && f[1] != "negative")
      bad_row(p, n, "sentiment label must be positive or negative, got \"" + f[1] + "\"");
    lex.sentiment[lowercase(f[0])] =
        f[1] == "positive" ? Sentiment::Positive : Sentiment::Negative;
  });

  p = (fs::path(dir) / "emotion.tsv").string();
  read_tsv(p, warnings, "emotion", [&](const std::vector<std::string>& f, size_t n) {
    if (f.size() != 2) bad_row(p, n, "expected word<TAB>emotion");
    auto& types = lex.emotion[lowercase(f[0])];
    if (std::find(types.begin(), types.end(), f[1]) == types.end()) types.push_back(f[1]);
  });

  p = (fs::path(dir) / "formality.tsv").string();
  read_tsv(p, warnings, "formality", [&](const std::vector<std::string>& f, size_t n) {
    if (f.size() != 2) bad_row(p, n, "expected word<TAB>label");
    if (f[1] != "formal" && f[1] != "informal")
      bad_row(p, n, "formality label must be formal or informal, got \"" + f[1] + "\"");
    lex.formality[lowercase(f[0])] = f[1] == "formal";
  });

  p = (fs::path(dir) / "hedges.tsv").string();
  read_tsv(p, warnings, "hedges", [&](const std::vector<std::string>& f, size_t n) {
    if (f.size() != 2) bad_row(p, n, "expected word<TAB>label");
    if (f[1] != "verb-hedge" && f[1] != "non-verb-hedge")
      bad_row(p, n, "hedge label must be verb-hedge or non-verb-hedge, got \"" + f[1] + "\"");
    lex.hedges[lowercase(f[0])] = f[1] == "verb-hedge";
  });

  p = (fs::path(dir) / "word_attributes.tsv").string();
  read_tsv(p, warnings, "word_attributes", [&](const std::vector<std::string>& f, size_t n) {
    if (f.size() != 5) bad_row(p, n, "expected word<TAB>concreteness<TAB>valence<TAB>arousal<TAB>dominance");
    LexiconSet::Attributes a;
    a.concreteness = parse_number(f[1], p, n);
    a.valence = parse_number(f[2], p, n);
    a.arousal = parse_number(f[3], p, n);
    a.dominance = parse_number(f[4], p, n);
    lex.attributes[lowercase(f[0])] = a;
  });

  p = (fs::path(dir) / "discourse_connectives.tsv").string();
  read_tsv(p, warnings, "discourse_connectives", [&](const std::vector<std::string>& f, size_t n) {
    if (f.size() != 3) bad_row(p, n, "expected phrase<TAB>level1<TAB>level2");
    LexiconSet::Connective c;
    c.words = split_ws(lowercase(f[0]));
    if (c.words.empty()) bad_row(p, n, "empty connective phrase");
    c.level1 = f[1];
    c.level2 = f[2];
    lex.connectives.push_back(std::move(c));
  });
  std::sort(lex.connectives.begin(), lex.connectives.end(),
            [](const LexiconSet::Connective& a, const LexiconSet::Connective& b) {
              if (a.words.size() != b.words.size()) return a.words.size() > b.words.size();
              return a.words < b.words;
            });

  auto load_phrases = [&](const char* file, const char* family,
                          std::vector<std::vector<std::string>>& out) {
    std::string path = (fs::path(dir) / file).string();
    read_tsv(path, warnings, family, [&](const std::vector<std::string>& f, size_t n) {
      auto words = split_ws(lowercase(f[0]));
      if (words.empty()) bad_row(path, n, "empty phrase");
      out.push_back(std::move(words));
    });
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      if (a.size() != b.size()) return a.size() > b.size();
      return a < b;
    });
  };
  load_phrases("agreement_phrases.tsv", "agreement_phrases", lex.agreement);
  load_phrases("pleading_phrases.tsv", "pleading_phrases", lex.pleading);

  return lex;
}

namespace {

bool phrase_at(const std::vector<std::string>& tokens, size_t i,
               const std::vector<std::string>& phrase) {
  if (i + phrase.size() > tokens.size()) return false;
  for (size_t k = 0; k < phrase.size(); ++k)
    if (tokens[i + k] != phrase[k]) return false;
  return true;
}

}  // namespace

size_t count_phrase_matches(const std::vector<std::string>& tokens,
                            const std::vector<std::vector<std::string>>& phrases) {
  size_t count = 0;
  size_t i = 0;
  while (i < tokens.size()) {
    size_t matched = 0;
    for (const auto& phrase : phrases) {
      if (phrase_at(tokens, i, phrase)) { matched = phrase.size(); break; }
    }
    if (matched) { ++count; i += matched; }
    else ++i;
  }
  return count;
}

std::vector<std::pair<std::string, std::string>> match_connectives(
    const std::vector<std::string>& tokens,
    const std::vector<LexiconSet::Connective>& connectives) {
  std::vector<std::pair<std::string, std::string>> out;
  size_t i = 0;
  while (i < tokens.size()) {
    size_t matched = 0;
    for (const auto& c : connectives) {
      if (phrase_at(tokens, i, c.words)) {
        out.emplace_back(c.level1, c.level2);
        matched = c.words.size();
        break;
      }
    }
    if (matched) i += matched;
    else ++i;
  }
  return out;
}

}  // namespace meritum
