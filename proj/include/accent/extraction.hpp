#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "accent/backends.hpp"
#include "accent/core.hpp"

// Joint event-relation extraction: input construction (prompt + serialized
// dialogue), parsing of generated output against the fixed grammar
// "event1: {head}; event2: {tail}" / "None", locality classification, and
// training-data preparation for fine-tuning the extractor backend.

namespace accent {

/// How a dialogue is rendered into the extractor input. The exact template
/// is a convention of this toolkit, kept configurable so extractors trained
/// on other templates can be plugged in.
struct DialogueTemplate {
  std::string speaker_delimiter = ": ";
  std::string utterance_separator = "\n";
  // When false only the target response is serialized (no history).
  bool include_history = true;
};

struct ExtractionConfig {
  std::vector<RelationSpec> relation_specs = default_relation_specs();
  int max_history = 4;
  // Labels cycled for utterances that carry no speaker tag of their own.
  std::vector<std::string> speaker_labels = {"A", "B"};
  int max_output_tokens = 128;
  DialogueTemplate dialogue_template;
  double locality_threshold = 0.5;
};

/// Throws ContractViolation unless the config carries exactly one spec per
/// relation (all 12) and max_history >= 1.
void validate(const ExtractionConfig& config);

/// Speaker-tagged lines for the truncated history followed by the target
/// response, per config.dialogue_template.
std::string serialize_dialogue(const Dialogue& dialogue,
                               const ExtractionConfig& config);

/// spec.prompt + " " + serialized dialogue. Deterministic.
std::string build_extraction_input(const Dialogue& dialogue,
                                   const RelationSpec& spec,
                                   const ExtractionConfig& config);

/// Outcome of parsing one generated sequence. Malformed is a normal,
/// distinguishable outcome (the discarded-generation gate), not an error.
struct ParsedExtraction {
  enum class Kind { Tuple, None, Malformed };
  Kind kind = Kind::Malformed;
  std::string head;  // set when kind == Tuple
  std::string tail;
};

/// Matches `event1: <head>; event2: <tail>` with case-insensitive markers
/// and tolerant whitespace; "None" (trimmed, any case) maps to Kind::None;
/// everything else is Malformed. Head and tail must be non-empty.
ParsedExtraction parse_extraction_output(const std::string& raw);

/// The inverse template: "event1: {head}; event2: {tail}".
std::string render_extraction_output(const std::string& head,
                                     const std::string& tail);

/// An event matches an utterance when >= threshold of its content words
/// (Person variables removed, lowercased) occur in that utterance. Both
/// events matching the response -> Single; split across the response and
/// the previous utterance -> Pair; anything else -> External.
Locality classify_locality(const EventRelationTuple& tuple,
                           const Dialogue& dialogue, double threshold = 0.5);

/// One generation request per relation spec, in the fixed relation order;
/// collects at most one tuple per relation and tags its locality. "None"
/// and malformed outputs contribute nothing. BackendError propagates with
/// the failing relation named.
std::vector<EventRelationTuple> extract_tuples(const Dialogue& dialogue,
                                               GenerationBackend& generator,
                                               const ExtractionConfig& config);

// ---------------------------------------------------------------------------
// Training-data preparation
// ---------------------------------------------------------------------------

struct TrainingExample {
  std::string source_text;  // prompt + serialized dialogue
  std::string target_text;  // "event1: {head}; event2: {tail}" or "None"
  Relation relation = Relation::xIntent;
  bool is_negative = false;  // true iff target_text == "None"
};

enum class LocalityFilter { Both, SingleOnly, PairOnly };

struct TrainingData {
  std::vector<TrainingExample> examples;
  // requested-minus-emitted negatives per relation, only for short relations
  std::map<Relation, int> negative_shortfall;
  int shortfall_total() const;
};

struct GoldSample {
  Dialogue dialogue;
  std::vector<EventRelationTuple> tuples;
};

/// One positive example per gold tuple surviving the locality filter, plus
/// per relation `negatives_per_relation` dialogues lacking that relation
/// (target "None"), sampled deterministically from the seed. Emits fewer
/// negatives (recorded in negative_shortfall) when candidates run out.
/// Output is grouped by relation in enum order and is byte-stable for a
/// given (samples, config, seed).
TrainingData prepare_training_examples(
    const std::vector<GoldSample>& samples, const ExtractionConfig& config,
    int negatives_per_relation = 5,
    std::optional<LocalityFilter> locality_filter = std::nullopt,
    std::uint64_t seed = 0);

/// Fine-tuning defaults consumed by external training scripts; recorded
/// here so exports and documentation stay in sync.
struct FinetuneDefaults {
  int epochs = 50;
  int batch_size = 4;
  double learning_rate = 5e-5;
};

}  // namespace accent
