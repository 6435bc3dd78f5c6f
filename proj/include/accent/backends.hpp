#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "accent/core.hpp"

// Pluggable contracts for the two neural capabilities the pipeline consumes:
// conditional text generation (the tuple extractor and the dynamic CSKB are
// both generation backends) and sentence embedding. Deterministic mock
// implementations ship in-tree so every pipeline test runs without model
// weights; real models attach through the same interfaces, typically via the
// endpoint clients in accent/endpoint.hpp.

namespace accent {

enum class DecodeMode { Beam };

struct GenerationRequest {
  std::string input_text;
  int num_return_sequences = 1;  // k >= 1
  DecodeMode decode_mode = DecodeMode::Beam;
  int max_output_tokens = 64;
};

struct GenerationResult {
  std::vector<std::string> sequences;  // best-first, 1 <= size <= k
  // Per-sequence model loss, aligned with sequences. Only the loss-based
  // scoring alternative consumes it; backends may omit it.
  std::optional<std::vector<double>> per_sequence_loss;
};

class GenerationBackend {
 public:
  virtual ~GenerationBackend() = default;

  /// Up to k sequences, best-first. Throws ContractViolation on empty input
  /// or k < 1, BackendError when the backend itself fails.
  virtual GenerationResult generate(const GenerationRequest& request) = 0;

  /// Whether concurrent generate() calls are allowed. When false the
  /// pipeline serializes access.
  virtual bool concurrency_safe() const = 0;
};

struct EmbeddingVector {
  std::vector<double> values;
};

class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;

  /// Deterministic per backend: same text, same vector. Throws
  /// ContractViolation on empty text.
  virtual EmbeddingVector embed(const std::string& text) = 0;

  /// Vector dimension, constant per instance. 0 when not yet known
  /// (endpoint backends learn it from the first response).
  virtual std::size_t dimension() const = 0;

  virtual bool concurrency_safe() const = 0;
};

/// dot(a,b) / (|a||b|). Throws ContractViolation on dimension mismatch,
/// DegenerateVector when either vector has zero norm.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

/// Throws on the common request precondition violations. Backend
/// implementations call this first.
void validate_request(const GenerationRequest& request);

// ---------------------------------------------------------------------------
// Mocks
// ---------------------------------------------------------------------------

/// Table-lookup generator. Strict mode throws BackendError on unscripted
/// input; permissive mode answers with a configurable fallback (default
/// {"None"}, the extractor's no-tuple marker). Records every request so
/// tests can assert the exact call sequence. Concurrency-safe (mutex).
class ScriptedGenerator : public GenerationBackend {
 public:
  enum class Mode { Strict, Permissive };

  explicit ScriptedGenerator(Mode mode = Mode::Strict,
                             std::vector<std::string> fallback = {"None"});

  /// Scripts the sequences (and optional losses) returned for an input.
  void script(const std::string& input, std::vector<std::string> sequences,
              std::optional<std::vector<double>> losses = std::nullopt);

  GenerationResult generate(const GenerationRequest& request) override;
  bool concurrency_safe() const override { return true; }

  std::vector<GenerationRequest> call_log() const;
  std::size_t call_count() const;
  void clear_log();

 private:
  struct Entry {
    std::vector<std::string> sequences;
    std::optional<std::vector<double>> losses;
  };

  Mode mode_;
  std::vector<std::string> fallback_;
  std::map<std::string, Entry> table_;
  mutable std::mutex mutex_;
  std::vector<GenerationRequest> log_;
};

/// Deterministic embedder hashing token unigrams and bigrams into a fixed
/// signed vector. No linguistics, but distinct texts land on distinct
/// directions (cosines spread over [-1, 1]) and identical texts always
/// embed identically, which is all the pipeline contract needs.
class HashEmbedder : public EmbeddingBackend {
 public:
  explicit HashEmbedder(std::size_t dim = 64);

  EmbeddingVector embed(const std::string& text) override;
  std::size_t dimension() const override { return dim_; }
  bool concurrency_safe() const override { return true; }

 private:
  std::size_t dim_;
};

/// FNV-1a, used for feature hashing and config hashes.
std::uint64_t fnv1a64(const std::string& data);

}  // namespace accent
