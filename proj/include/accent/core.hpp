#pragma once

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Core domain types shared by every other module: dialogues, relations,
// event-relation tuples, prompt specs and event normalization. Everything
// here is an immutable value after construction and all free functions are
// pure, so the whole header is safe for unrestricted concurrent use.

namespace accent {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition (empty input, bad dimensions...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// normalize_event received an empty (or all-whitespace) phrase.
class EmptyEventError : public Error {
 public:
  using Error::Error;
};

/// A generation or embedding backend failed; carries the underlying cause.
class BackendError : public Error {
 public:
  using Error::Error;
};

/// A numeric routine received input it is undefined on (zero variance,
/// single-class labels, empty sample...).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// Cosine similarity against a zero-length vector.
class DegenerateVector : public DegenerateInput {
 public:
  using DegenerateInput::DegenerateInput;
};

/// A beam query produced no usable (non-empty) sequences.
class EmptyGeneration : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Relations
// ---------------------------------------------------------------------------

// The closed 12-relation set, in the fixed listing order used everywhere:
// extraction iterates relations in this order and output files follow it.
enum class Relation {
  xIntent,
  xWant,
  oWant,
  xReact,
  oReact,
  xNeed,
  xAttr,
  xEffect,
  oEffect,
  HinderedBy,
  IsAfter,
  HasSubEvent,
};

inline constexpr int kRelationCount = 12;

const std::array<Relation, kRelationCount>& all_relations();

/// Case-sensitive canonical name ("xIntent", ..., "HasSubEvent").
std::string to_string(Relation relation);

/// Inverse of to_string; nullopt for anything outside the closed set.
std::optional<Relation> parse_relation(const std::string& name);

/// One extraction prompt per relation. `prompt` is the full instruction fed
/// to the extractor; `query_phrase` is the natural-language meaning of the
/// relation, kept for documentation and report output.
struct RelationSpec {
  Relation relation;
  std::string prompt;
  std::string query_phrase;
};

/// All 12 specs in enum order. Prompts share the stem
/// "Extract event1 and event2 from the text where".
const std::vector<RelationSpec>& default_relation_specs();

/// Lookup into default_relation_specs().
const RelationSpec& default_relation_spec(Relation relation);

inline constexpr const char* kPromptStem =
    "Extract event1 and event2 from the text where";

// ---------------------------------------------------------------------------
// Dialogues
// ---------------------------------------------------------------------------

struct Utterance {
  std::string speaker;  // free role label, e.g. "A" / "B" / "system"
  std::string text;     // non-empty after trimming
};

struct Dialogue {
  std::string id;
  std::vector<Utterance> history;  // u_0 .. u_{n-1}, oldest first
  Utterance response;              // the target u_n
  std::optional<std::string> system;  // generating system tag
  std::optional<std::string> source;  // corpus tag
};

/// Last min(len, max_history) utterances, original order. max_history >= 1.
std::vector<Utterance> truncate_history(const std::vector<Utterance>& history,
                                        int max_history);

// ---------------------------------------------------------------------------
// Events and tuples
// ---------------------------------------------------------------------------

/// A short normalized event phrase (trigger word + arguments, participants
/// as Person variables). Never empty, never contains newlines.
struct Event {
  std::string text;
};

/// Where a tuple's events were drawn from: both from the target response
/// (Single), split across the response and the previous utterance (Pair),
/// or matching neither (External, e.g. model hallucination).
enum class Locality { Single, Pair, External };

std::string to_string(Locality locality);
std::optional<Locality> parse_locality(const std::string& name);

struct EventRelationTuple {
  Event head;
  Relation relation;
  Event tail;
  std::optional<Locality> locality;  // advisory metadata, never affects scores
};

/// One tuple with its compatibility score and the beam candidates that
/// produced it. score is the clamped max similarity over candidate_tails.
struct ScoredTuple {
  EventRelationTuple tuple;
  double score = 0.0;  // in [0, 1]
  std::string best_generated_tail;
  std::vector<std::string> candidate_tails;
};

struct ScoredResponse {
  std::string dialogue_id;
  double score = 0.0;  // in [0, 1]; mean of tuple scores, or the fallback
  std::vector<ScoredTuple> tuples;
  bool used_fallback = false;  // true iff no tuple survived extraction
};

/// Checks the ScoredResponse invariant: empty tuples implies
/// score == fallback and used_fallback; otherwise score is the mean of the
/// tuple scores within 1e-9.
bool scored_response_consistent(const ScoredResponse& response,
                                double fallback = 0.5);

// ---------------------------------------------------------------------------
// Event normalization
// ---------------------------------------------------------------------------

/// Token substitution table: lowercased token -> Person variable.
using PersonRules = std::map<std::string, std::string>;

/// I/me/my/mine/we/our -> PersonX; you/your -> PersonY. Extend with
/// third-person entries as needed; unknown tokens stay verbatim.
const PersonRules& default_person_rules();

/// Replaces person tokens per the rule table, trims and single-spaces.
/// Pure token substitution, no verb re-inflection. Idempotent.
/// Throws EmptyEventError on empty input.
Event normalize_event(const std::string& raw,
                      const PersonRules& rules = default_person_rules());

// ---------------------------------------------------------------------------
// Small text helpers shared across modules
// ---------------------------------------------------------------------------

/// Trims and collapses every whitespace run (incl. newlines) to one space.
std::string collapse_whitespace(const std::string& text);

std::vector<std::string> split_whitespace(const std::string& text);

std::string to_lower(const std::string& text);

/// Strips leading/trailing non-alphanumeric characters ("house." -> "house").
std::string strip_edge_punct(const std::string& token);

}  // namespace accent
