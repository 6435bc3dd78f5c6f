#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "accent/core.hpp"
#include "accent/eval.hpp"
#include "accent/search.hpp"

// Dataset ingestion and validation: dialogues, annotations, gold tuples,
// static KBs and benchmark triples, all as UTF-8 JSONL (one object per
// line), plus the corpus filtering rules. Loading is single-threaded per
// file; everything loaded is an immutable value.

namespace accent::io {

/// A malformed or inconsistent input file; line() is 1-based, -1 when the
/// failure is not tied to a line.
class LoadError : public Error {
 public:
  explicit LoadError(const std::string& message, int line = -1)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message
                       : message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// ---------------------------------------------------------------------------
// Corpus filtering
// ---------------------------------------------------------------------------

struct CorpusFilterConfig {
  int min_response_words = 5;
  bool require_non_interrogative = true;
  int max_history = 4;
  // External hook replacing the manual courtesy-response pass: ids listed
  // here are rejected outright.
  std::set<std::string> id_blocklist;
};

enum class RejectReason { Blocklisted, MinWords, AllInterrogative };

std::string to_string(RejectReason reason);

struct RejectedDialogue {
  Dialogue dialogue;
  RejectReason reason;
};

struct FilterResult {
  std::vector<Dialogue> kept;  // histories truncated to max_history
  std::vector<RejectedDialogue> rejected;
};

/// Keeps a dialogue iff the response has >= min_response_words whitespace
/// tokens and (when required) at least one sentence not ending in '?'.
/// Each rejection carries exactly one primary reason, checked in the order
/// blocklist, all_interrogative, min_words. Idempotent on its kept output.
FilterResult filter_corpus(const std::vector<Dialogue>& dialogues,
                           const CorpusFilterConfig& config = {});

/// Sentence split on .!? runs followed by whitespace or end of text; a
/// trailing fragment without terminal punctuation is its own sentence.
std::vector<std::string> split_sentences(const std::string& text);

// ---------------------------------------------------------------------------
// Loaders
// ---------------------------------------------------------------------------

/// One Dialogue per line; duplicate ids and schema violations raise
/// LoadError naming the line.
std::vector<Dialogue> load_dialogues(const std::filesystem::path& path);

struct AnnotationFragment {
  std::string id;
  std::vector<double> scores;  // each in [1, 5]
  double mean() const;
};

std::vector<AnnotationFragment> load_annotations(
    const std::filesystem::path& path);

struct GoldTupleRecord {
  std::string id;  // dialogue id
  EventRelationTuple tuple;
};

/// Strict mode: every relation must be one of the 12. A leading header
/// object and per-sample error entries (as written by the extract command)
/// are skipped, so extraction output feeds straight back in.
std::vector<GoldTupleRecord> load_gold_tuples(
    const std::filesystem::path& path);

enum class RelationMode {
  Strict,      // unknown relation -> LoadError
  PassThrough  // unknown relation kept as a verbatim tag (benchmark files)
};

std::vector<eval::LabeledTriple> load_labeled_triples(
    const std::filesystem::path& path,
    RelationMode mode = RelationMode::PassThrough);

struct KbLoadOptions {
  RelationMode relation_mode = RelationMode::Strict;
};

StaticCSKB load_kb(const std::filesystem::path& path,
                   const KbLoadOptions& options = {});

// ---------------------------------------------------------------------------
// Canonical serialization (sorted keys, round-trip-stable floats)
// ---------------------------------------------------------------------------

std::string dialogue_to_json_line(const Dialogue& dialogue);
std::string scored_response_to_json_line(const ScoredResponse& response);
std::string tuple_to_json_line(const std::string& dialogue_id,
                               const EventRelationTuple& tuple);

ScoredResponse scored_response_from_json_line(const std::string& line);

void save_dialogues(const std::filesystem::path& path,
                    const std::vector<Dialogue>& dialogues);

}  // namespace accent::io
