#include "accent/backends.hpp"

#include <cmath>

namespace accent {

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.values.size() != b.values.size()) {
    throw ContractViolation("cosine: dimension mismatch (" +
                            std::to_string(a.values.size()) + " vs " +
                            std::to_string(b.values.size()) + ")");
  }
  if (a.values.empty()) throw ContractViolation("cosine: empty vectors");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    dot += a.values[i] * b.values[i];
    na += a.values[i] * a.values[i];
    nb += b.values[i] * b.values[i];
  }
  if (na == 0.0 || nb == 0.0) {
    throw DegenerateVector("cosine: zero vector");
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

void validate_request(const GenerationRequest& request) {
  if (collapse_whitespace(request.input_text).empty()) {
    throw ContractViolation("generate: empty input_text");
  }
  if (request.num_return_sequences < 1) {
    throw ContractViolation("generate: num_return_sequences must be >= 1");
  }
  if (request.max_output_tokens < 1) {
    throw ContractViolation("generate: max_output_tokens must be >= 1");
  }
}

ScriptedGenerator::ScriptedGenerator(Mode mode,
                                     std::vector<std::string> fallback)
    : mode_(mode), fallback_(std::move(fallback)) {}

void ScriptedGenerator::script(const std::string& input,
                               std::vector<std::string> sequences,
                               std::optional<std::vector<double>> losses) {
  if (sequences.empty()) {
    throw ContractViolation("script: at least one sequence per entry");
  }
  if (losses && losses->size() != sequences.size()) {
    throw ContractViolation("script: losses must align with sequences");
  }
  std::lock_guard<std::mutex> lock(mutex_);
  table_[input] = Entry{std::move(sequences), std::move(losses)};
}

GenerationResult ScriptedGenerator::generate(const GenerationRequest& request) {
  validate_request(request);
  std::lock_guard<std::mutex> lock(mutex_);
  log_.push_back(request);
  auto it = table_.find(request.input_text);
  if (it == table_.end()) {
    if (mode_ == Mode::Strict) {
      throw BackendError("scripted generator: no script for input \"" +
                         request.input_text + "\"");
    }
    return GenerationResult{fallback_, std::nullopt};
  }
  const std::size_t k = static_cast<std::size_t>(request.num_return_sequences);
  GenerationResult result;
  const std::size_t n = std::min(it->second.sequences.size(), k);
  result.sequences.assign(it->second.sequences.begin(),
                          it->second.sequences.begin() + n);
  if (it->second.losses) {
    result.per_sequence_loss.emplace(it->second.losses->begin(),
                                     it->second.losses->begin() + n);
  }
  return result;
}

std::vector<GenerationRequest> ScriptedGenerator::call_log() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return log_;
}

std::size_t ScriptedGenerator::call_count() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return log_.size();
}

void ScriptedGenerator::clear_log() {
  std::lock_guard<std::mutex> lock(mutex_);
  log_.clear();
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

HashEmbedder::HashEmbedder(std::size_t dim) : dim_(dim) {
  if (dim_ == 0) throw ContractViolation("HashEmbedder: dim must be > 0");
}

EmbeddingVector HashEmbedder::embed(const std::string& text) {
  const std::string collapsed = collapse_whitespace(text);
  if (collapsed.empty()) throw ContractViolation("embed: empty text");
  const std::vector<std::string> tokens = split_whitespace(to_lower(collapsed));

  EmbeddingVector vec;
  vec.values.assign(dim_, 0.0);
  auto add = [&](const std::string& feature) {
    const std::uint64_t h = fnv1a64(feature);
    const std::size_t idx = static_cast<std::size_t>(h % dim_);
    const double sign = ((h >> 32) & 1u) ? 1.0 : -1.0;
    vec.values[idx] += sign;
  };
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    add(tokens[i]);
    if (i + 1 < tokens.size()) add(tokens[i] + " " + tokens[i + 1]);
  }

  // Collisions could in principle cancel everything out; keep the vector
  // usable for cosine either way.
  bool all_zero = true;
  for (double v : vec.values) {
    if (v != 0.0) {
      all_zero = false;
      break;
    }
  }
  if (all_zero) vec.values[fnv1a64(collapsed) % dim_] = 1.0;
  return vec;
}

}  // namespace accent
