#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "meritum/common.hpp"
#include "meritum/corpus.hpp"
#include "meritum/features.hpp"
#include "meritum/htmm.hpp"
#include "meritum/trainer.hpp"

namespace meritum {

// Binary caches are MessagePack-encoded JSON documents with a format tag and
// a version number, so every cache is self-describing and rejects foreign or
// stale files with a clear error.

nlohmann::json transcript_to_json(const DebateTranscript& debate);
DebateTranscript transcript_from_json(const nlohmann::json& j, const std::string& origin);

void save_corpus_cache(const Corpus& corpus, const std::string& path);
Corpus load_corpus_cache(const std::string& path);

// Directory of transcripts or a cache file, decided by what the path is.
Corpus load_corpus_any(const std::string& path, Warnings* warnings = nullptr);

// Envelope helpers shared by all cache writers.
void write_cache(const nlohmann::json& doc, const std::string& format, int version,
                 const std::string& path);
nlohmann::json read_cache(const std::string& format, int version, const std::string& path);

// Segmentation results. The topic-word rows and mixtures round-trip exactly;
// the word index is rebuilt from the stored vocabulary.
void save_segments_cache(const SegmentedCorpus& seg, const std::string& path);
SegmentedCorpus load_segments_cache(const std::string& path);

// Per-debate feature sets, unscaled, with their argument spans.
void save_features_cache(const std::vector<DebateFeatures>& feats, const std::string& path);
std::vector<DebateFeatures> load_features_cache(const std::string& path);

// Trained model: weights, scaler ranges, config, dictionary, trace.
void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

}  // namespace meritum
