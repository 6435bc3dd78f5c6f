#pragma once

#include <string>
#include <vector>

#include "accent/backends.hpp"
#include "accent/core.hpp"

// Scores one event-relation tuple against the dynamic CSKB: build the
// "{h} {r} [GEN]" query, beam-decode candidate tails, and take the maximum
// embedding similarity between the tuple's tail and the candidates. The
// loss-based alternative scoring lives here too.

namespace accent {

struct CompatibilityConfig {
  int beam_size = 10;  // k
  // Scores are clamped below at this floor (and always into [0,1]); 0 keeps
  // negative cosines from leaking into the documented score range.
  double clamp_floor = 0.0;
  // {h} and {r} are substituted; the [GEN] literal is what released dynamic
  // CSKB checkpoints expect, override for other backends.
  std::string query_template = "{h} {r} [GEN]";
  int max_output_tokens = 64;
};

void validate(const CompatibilityConfig& config);

/// Template substitution, single-spaced: "PersonX likes to paint xNeed [GEN]".
std::string build_cskb_query(const Event& head, Relation relation,
                             const CompatibilityConfig& config = {});

/// Same, for a verbatim relation tag; benchmark relations outside the
/// 12-relation set query the dynamic CSKB by their own token.
std::string build_cskb_query(const Event& head, const std::string& relation_tag,
                             const CompatibilityConfig& config = {});

/// Beam-decodes up to k candidate tails, best-first, empty strings filtered
/// out. Throws EmptyGeneration when nothing non-empty comes back.
std::vector<std::string> query_tails(const Event& head, Relation relation,
                                     GenerationBackend& cskb,
                                     const CompatibilityConfig& config = {});

std::vector<std::string> query_tails(const Event& head,
                                     const std::string& relation_tag,
                                     GenerationBackend& cskb,
                                     const CompatibilityConfig& config = {});

struct TupleScore {
  double value = 0.0;        // in [0, 1]
  std::size_t best_index = 0;  // argmax candidate, for explainability
};

/// max(clamp_floor, max_i cos(embed(tail), embed(candidate_i))), clamped
/// into [0, 1]. Throws ContractViolation on an empty candidate list.
TupleScore compatibility_score(const Event& tail,
                               const std::vector<std::string>& candidate_tails,
                               EmbeddingBackend& embedder,
                               const CompatibilityConfig& config = {});

/// Loss-based alternative: exp(-loss), strictly decreasing, range (0, 1].
/// Throws ContractViolation on negative loss.
double neural_loss_score(double loss);

}  // namespace accent
