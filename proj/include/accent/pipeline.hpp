#pragma once

#include <optional>
#include <string>
#include <vector>

#include "accent/compatibility.hpp"
#include "accent/extraction.hpp"

// End-to-end orchestration: extract tuples, score each against the dynamic
// CSKB, average, and fall back to a neutral score when nothing was
// extracted.

namespace accent {

enum class LocalityPolicy { ScoreAll, SingleOnly, PairOnly };

std::string to_string(LocalityPolicy policy);
std::optional<LocalityPolicy> parse_locality_policy(const std::string& name);

struct PipelineConfig {
  ExtractionConfig extraction;
  CompatibilityConfig compatibility;
  double fallback_score = 0.5;  // assigned when no tuple is extracted
  // ScoreAll matches the standard procedure; SingleOnly / PairOnly exist to
  // reproduce the locality ablations at inference time.
  LocalityPolicy locality_policy = LocalityPolicy::ScoreAll;
};

/// Extracts, filters by locality policy, scores every surviving tuple and
/// averages. With no surviving tuple the response gets fallback_score and
/// used_fallback = true. Backend failures propagate as BackendError with the
/// dialogue id attached.
ScoredResponse score_response(const Dialogue& dialogue,
                              GenerationBackend& extractor,
                              GenerationBackend& cskb,
                              EmbeddingBackend& embedder,
                              const PipelineConfig& config = {});

struct CorpusEntry {
  std::string dialogue_id;
  std::optional<ScoredResponse> response;  // nullopt when the sample failed
  std::string error;                       // failure message, empty on success
  bool ok() const { return response.has_value(); }
};

struct CorpusResult {
  std::vector<CorpusEntry> entries;  // same order as the input dialogues
  int failure_count = 0;
};

/// Scores a corpus with per-sample error isolation: a failing sample becomes
/// an error entry, never an abort. Output order always matches input order.
/// Fans out across samples when parallelism > 1 and every backend declares
/// itself concurrency-safe; otherwise runs serially.
CorpusResult score_corpus(const std::vector<Dialogue>& dialogues,
                          GenerationBackend& extractor, GenerationBackend& cskb,
                          EmbeddingBackend& embedder,
                          const PipelineConfig& config = {},
                          int parallelism = 1);

}  // namespace accent
