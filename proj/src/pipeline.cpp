#include "accent/pipeline.hpp"

#include <atomic>
#include <thread>

namespace accent {

std::string to_string(LocalityPolicy policy) {
  switch (policy) {
    case LocalityPolicy::ScoreAll: return "ScoreAll";
    case LocalityPolicy::SingleOnly: return "SingleOnly";
    case LocalityPolicy::PairOnly: return "PairOnly";
  }
  throw ContractViolation("unknown LocalityPolicy value");
}

std::optional<LocalityPolicy> parse_locality_policy(const std::string& name) {
  if (name == "ScoreAll") return LocalityPolicy::ScoreAll;
  if (name == "SingleOnly") return LocalityPolicy::SingleOnly;
  if (name == "PairOnly") return LocalityPolicy::PairOnly;
  return std::nullopt;
}

namespace {

bool passes_policy(const EventRelationTuple& tuple, LocalityPolicy policy) {
  if (policy == LocalityPolicy::ScoreAll) return true;
  if (!tuple.locality) return false;
  return policy == LocalityPolicy::SingleOnly
             ? *tuple.locality == Locality::Single
             : *tuple.locality == Locality::Pair;
}

}  // namespace

ScoredResponse score_response(const Dialogue& dialogue,
                              GenerationBackend& extractor,
                              GenerationBackend& cskb,
                              EmbeddingBackend& embedder,
                              const PipelineConfig& config) {
  if (config.fallback_score < 0.0 || config.fallback_score > 1.0) {
    throw ContractViolation("PipelineConfig: fallback_score must be in [0,1]");
  }

  try {
    std::vector<EventRelationTuple> tuples =
        extract_tuples(dialogue, extractor, config.extraction);
    std::erase_if(tuples, [&](const EventRelationTuple& tuple) {
      return !passes_policy(tuple, config.locality_policy);
    });

    ScoredResponse response;
    response.dialogue_id = dialogue.id;
    if (tuples.empty()) {
      response.score = config.fallback_score;
      response.used_fallback = true;
      return response;
    }

    double sum = 0.0;
    for (EventRelationTuple& tuple : tuples) {
      std::vector<std::string> candidates = query_tails(
          tuple.head, tuple.relation, cskb, config.compatibility);
      const TupleScore tuple_score = compatibility_score(
          tuple.tail, candidates, embedder, config.compatibility);

      ScoredTuple scored;
      scored.score = tuple_score.value;
      scored.best_generated_tail = candidates[tuple_score.best_index];
      scored.candidate_tails = std::move(candidates);
      scored.tuple = std::move(tuple);
      sum += scored.score;
      response.tuples.push_back(std::move(scored));
    }
    response.score = sum / static_cast<double>(response.tuples.size());
    response.used_fallback = false;
    return response;
  } catch (const BackendError& e) {
    throw BackendError("dialogue " + dialogue.id + ": " + e.what());
  }
}

CorpusResult score_corpus(const std::vector<Dialogue>& dialogues,
                          GenerationBackend& extractor, GenerationBackend& cskb,
                          EmbeddingBackend& embedder,
                          const PipelineConfig& config, int parallelism) {
  if (parallelism < 1) {
    throw ContractViolation("score_corpus: parallelism must be >= 1");
  }

  CorpusResult result;
  result.entries.resize(dialogues.size());

  auto score_one = [&](std::size_t i) {
    CorpusEntry& entry = result.entries[i];
    entry.dialogue_id = dialogues[i].id;
    try {
      entry.response =
          score_response(dialogues[i], extractor, cskb, embedder, config);
    } catch (const Error& e) {
      entry.error = e.what();
    }
  };

  const bool can_fan_out = parallelism > 1 && dialogues.size() > 1 &&
                           extractor.concurrency_safe() &&
                           cskb.concurrency_safe() &&
                           embedder.concurrency_safe();
  if (!can_fan_out) {
    for (std::size_t i = 0; i < dialogues.size(); ++i) score_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next.fetch_add(1); i < dialogues.size();
           i = next.fetch_add(1)) {
        score_one(i);
      }
    };
    const std::size_t thread_count = std::min(
        static_cast<std::size_t>(parallelism), dialogues.size());
    std::vector<std::thread> threads;
    threads.reserve(thread_count);
    for (std::size_t t = 0; t < thread_count; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }

  for (const CorpusEntry& entry : result.entries) {
    if (!entry.ok()) ++result.failure_count;
  }
  return result;
}

}  // namespace accent
