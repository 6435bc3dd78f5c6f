#include "accent/compatibility.hpp"

#include <algorithm>
#include <cmath>

namespace accent {

void validate(const CompatibilityConfig& config) {
  if (config.beam_size < 1) {
    throw ContractViolation("CompatibilityConfig: beam_size must be >= 1");
  }
  if (config.clamp_floor < -1.0 || config.clamp_floor > 1.0) {
    throw ContractViolation("CompatibilityConfig: clamp_floor must be in [-1,1]");
  }
  if (config.max_output_tokens < 1) {
    throw ContractViolation("CompatibilityConfig: max_output_tokens must be >= 1");
  }
}

std::string build_cskb_query(const Event& head, const std::string& relation_tag,
                             const CompatibilityConfig& config) {
  validate(config);
  std::string query = config.query_template;
  auto substitute = [&query](const std::string& placeholder,
                             const std::string& value) {
    for (std::size_t pos = query.find(placeholder); pos != std::string::npos;
         pos = query.find(placeholder, pos + value.size())) {
      query.replace(pos, placeholder.size(), value);
    }
  };
  substitute("{h}", head.text);
  substitute("{r}", relation_tag);
  return collapse_whitespace(query);
}

std::string build_cskb_query(const Event& head, Relation relation,
                             const CompatibilityConfig& config) {
  return build_cskb_query(head, to_string(relation), config);
}

std::vector<std::string> query_tails(const Event& head,
                                     const std::string& relation_tag,
                                     GenerationBackend& cskb,
                                     const CompatibilityConfig& config) {
  validate(config);
  GenerationRequest request;
  request.input_text = build_cskb_query(head, relation_tag, config);
  request.num_return_sequences = config.beam_size;
  request.max_output_tokens = config.max_output_tokens;

  const GenerationResult result = cskb.generate(request);
  std::vector<std::string> tails;
  for (const std::string& sequence : result.sequences) {
    if (!collapse_whitespace(sequence).empty()) tails.push_back(sequence);
  }
  if (tails.empty()) {
    throw EmptyGeneration("CSKB query \"" + request.input_text +
                          "\" produced no non-empty tails");
  }
  return tails;
}

std::vector<std::string> query_tails(const Event& head, Relation relation,
                                     GenerationBackend& cskb,
                                     const CompatibilityConfig& config) {
  return query_tails(head, to_string(relation), cskb, config);
}

TupleScore compatibility_score(const Event& tail,
                               const std::vector<std::string>& candidate_tails,
                               EmbeddingBackend& embedder,
                               const CompatibilityConfig& config) {
  validate(config);
  if (candidate_tails.empty()) {
    throw ContractViolation("compatibility_score: empty candidate list");
  }
  const EmbeddingVector tail_embedding = embedder.embed(tail.text);
  double best = -2.0;  // below any cosine
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < candidate_tails.size(); ++i) {
    const double similarity =
        cosine(tail_embedding, embedder.embed(candidate_tails[i]));
    if (similarity > best) {
      best = similarity;
      best_index = i;
    }
  }
  TupleScore score;
  score.value = std::clamp(std::max(config.clamp_floor, best), 0.0, 1.0);
  score.best_index = best_index;
  return score;
}

double neural_loss_score(double loss) {
  if (loss < 0.0 || !std::isfinite(loss)) {
    throw ContractViolation("neural_loss_score: loss must be finite and >= 0");
  }
  return std::exp(-loss);
}

}  // namespace accent
