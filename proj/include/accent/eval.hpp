#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "accent/backends.hpp"
#include "accent/core.hpp"

// The three evaluation setups: correlation with human judgments (setup 1),
// extraction quality (setup 2: relation-presence F1, BLEU-2 and embedding
// similarity over tuple texts), and tuple-compatibility AUC (setup 3), plus
// inter-annotator agreement and system-level ranking. All functions are
// pure and concurrency-safe.

namespace accent::eval {

/// A dialogue with its per-rater human scores (1-5 scale) and, when
/// available, the human-extracted gold tuples.
struct AnnotatedSample {
  Dialogue dialogue;
  std::vector<double> rater_scores;  // each in [1, 5]
  std::optional<std::vector<EventRelationTuple>> gold_tuples;
};

/// A benchmark triple with a binary compatibility label. The benchmark
/// carries more relations than the in-scope 12, so the verbatim tag is kept
/// alongside the parsed enum; unparsed relations never enter "Subset"
/// metrics.
struct LabeledTriple {
  std::string head;
  std::string relation_tag;           // verbatim from the data file
  std::optional<Relation> relation;   // set when the tag is one of the 12
  std::string tail;
  int label = 0;  // 0 or 1
};

/// Sample Pearson correlation. Throws ContractViolation on length mismatch
/// or n < 2, DegenerateInput on zero variance.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

/// Spearman rank correlation; ties receive average ranks.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

/// Average (fractional) ranks, 1-based; ties share the mean of their ranks.
std::vector<double> average_ranks(const std::vector<double>& values);

/// Inter-annotator agreement: every individual annotation is paired with
/// the mean of the other annotations for the same sample (pooled into one
/// vector pair), and the Spearman correlation of the two vectors is
/// returned. Throws DegenerateInput when any sample has < 2 ratings.
double iaa(const std::vector<std::vector<double>>& rater_matrix);

struct PrecisionRecallF1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Relation presence as binary classification: the unit is one
/// (sample, relation) cell over all 12 relations; a side is positive when
/// it has >= 1 tuple with that relation. Micro-averaged P/R/F1.
PrecisionRecallF1 extraction_f1(
    const std::vector<std::vector<EventRelationTuple>>& predicted,
    const std::vector<std::vector<EventRelationTuple>>& gold);

/// head.text + " " + tail.text.
std::string tuple_to_text(const EventRelationTuple& tuple);

/// BLEU-2: geometric mean of modified unigram and bigram precision times
/// the brevity penalty. Add-1 smoothing on the bigram counts, applied only
/// when the unsmoothed bigram precision is zero; an exact match against any
/// reference short-circuits to 1. Throws DegenerateInput on an empty
/// candidate, ContractViolation when references are empty.
double bleu2(const std::string& candidate,
             const std::vector<std::string>& references);

/// Mean over aligned pairs of cos(embed(pred), embed(gold)), clamped at 0.
double embedding_similarity_eval(const std::vector<std::string>& predicted,
                                 const std::vector<std::string>& gold,
                                 EmbeddingBackend& embedder);

/// ROC AUC, Mann-Whitney formulation: the fraction of (positive, negative)
/// pairs ranked correctly, ties counting one half. Labels must be 0/1 and
/// both classes present (else DegenerateInput).
double roc_auc(const std::vector<double>& scores,
               const std::vector<int>& labels);

/// roc_auc restricted to triples whose relation is in the subset; no subset
/// means no filter. Pass-through relations (unparsed tags) never match a
/// subset. Throws DegenerateInput when nothing (or one class) remains.
double grouped_auc(const std::vector<std::pair<LabeledTriple, double>>& scored,
                   const std::optional<std::set<Relation>>& relation_subset);

/// Per-system mean score, descending; ties break by system name. Every
/// response must carry a non-empty system tag.
std::vector<std::pair<std::string, double>> system_ranking(
    const std::vector<std::pair<std::string, ScoredResponse>>& tagged);

}  // namespace accent::eval
