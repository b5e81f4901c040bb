#include "meritum/io.hpp"

#include <filesystem>
#include <fstream>

namespace meritum {

using nlohmann::json;
namespace fs = std::filesystem;

json transcript_to_json(const DebateTranscript& d) {
  json turns = json::array();
  for (const auto& t : d.turns) {
    json sents = json::array();
    for (const auto& s : t.sentences) {
      json toks = json::array();
      for (const auto& tok : s.tokens) {
        json jt{{"surface", tok.surface}};
        if (!tok.lemma.empty()) jt["lemma"] = tok.lemma;
        if (!tok.pos.empty()) jt["pos"] = tok.pos;
        if (!tok.ner.empty()) jt["ner"] = tok.ner;
        toks.push_back(std::move(jt));
      }
      json js{{"text", s.text}, {"tokens", std::move(toks)}};
      if (s.is_question) js["is_question"] = true;
      if (s.sentiment) js["sentiment"] = to_string(*s.sentiment);
      if (!s.frames.empty()) js["frames"] = s.frames;
      sents.push_back(std::move(js));
    }
    turns.push_back(json{{"speaker", t.speaker},
                         {"side", to_string(t.side)},
                         {"phase", to_string(t.phase)},
                         {"sentences", std::move(sents)}});
  }
  json out{{"id", d.id},
           {"motion", d.motion},
           {"outcome", to_string(d.outcome)},
           {"turns", std::move(turns)}};
  if (!d.audience_events.empty()) {
    json evs = json::array();
    for (const auto& e : d.audience_events)
      evs.push_back(json{{"turn", e.turn}, {"sentence", e.sentence}, {"kind", to_string(e.kind)}});
    out["audience_events"] = std::move(evs);
  }
  return out;
}

DebateTranscript transcript_from_json(const json& j, const std::string& origin) {
  return parse_transcript_json(j.dump(), origin);
}

void write_cache(const json& doc, const std::string& format, int version,
                 const std::string& path) {
  json envelope{{"format", format}, {"version", version}, {"data", doc}};
  std::vector<uint8_t> bytes = json::to_msgpack(envelope);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("write failed for " + path);
}

json read_cache(const std::string& format, int version, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  json envelope;
  try {
    envelope = json::from_msgpack(bytes);
  } catch (const json::exception& e) {
    throw DataError(path + ": not a valid cache file: " + e.what());
  }
  if (!envelope.is_object() || !envelope.contains("format") || !envelope.contains("version"))
    throw DataError(path + ": cache file missing format envelope");
  if (envelope["format"] != format)
    throw DataError(path + ": expected " + format + " cache, found " +
                    envelope["format"].dump());
  if (envelope["version"] != version)
    throw DataError(path + ": unsupported " + format + " cache version " +
                    envelope["version"].dump());
  return envelope["data"];
}

void save_corpus_cache(const Corpus& corpus, const std::string& path) {
  json debates = json::array();
  for (const auto& d : corpus.debates) debates.push_back(transcript_to_json(d));
  write_cache(json{{"debates", std::move(debates)}}, "meritum/corpus", 1, path);
}

Corpus load_corpus_cache(const std::string& path) {
  json doc = read_cache("meritum/corpus", 1, path);
  Corpus corpus;
  for (const auto& jd : doc.at("debates"))
    corpus.debates.push_back(transcript_from_json(jd, path));
  return corpus;
}

Corpus load_corpus_any(const std::string& path, Warnings* warnings) {
  if (fs::is_directory(path)) return load_corpus(path, warnings);
  return load_corpus_cache(path);
}

}  // namespace meritum
