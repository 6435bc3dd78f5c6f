#pragma once

#include <string>

#include "accent/backends.hpp"

// HTTP clients for the local inference endpoint protocol. A generation
// endpoint receives {"input": string, "k": int, "max_tokens": int} and
// answers {"sequences": [string], "losses": [number] | null}; an embedding
// endpoint receives {"input": string} and answers {"vector": [number]}.
// Real models (fine-tuned extractor, dynamic CSKB checkpoint, sentence
// embedders) attach to the pipeline by serving this protocol.

namespace accent {

/// POSTs each request to base_url + path. A fresh connection per call, so
/// concurrent use is safe.
class EndpointGenerator : public GenerationBackend {
 public:
  explicit EndpointGenerator(std::string base_url,
                             std::string path = "/generate",
                             int timeout_seconds = 60);

  GenerationResult generate(const GenerationRequest& request) override;
  bool concurrency_safe() const override { return true; }

 private:
  std::string base_url_;
  std::string path_;
  int timeout_seconds_;
};

class EndpointEmbedder : public EmbeddingBackend {
 public:
  explicit EndpointEmbedder(std::string base_url, std::string path = "/embed",
                            int timeout_seconds = 60);

  EmbeddingVector embed(const std::string& text) override;
  /// Learned from the first response; 0 until then.
  std::size_t dimension() const override;
  bool concurrency_safe() const override { return true; }

 private:
  std::string base_url_;
  std::string path_;
  int timeout_seconds_;
  mutable std::mutex mutex_;
  std::size_t dimension_ = 0;
};

}  // namespace accent
