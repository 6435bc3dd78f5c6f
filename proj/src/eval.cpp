#include "accent/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace accent::eval {

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) {
    throw ContractViolation("pearson: length mismatch");
  }
  if (x.size() < 2) {
    throw ContractViolation("pearson: need at least 2 points");
  }
  const double n = static_cast<double>(x.size());
  const double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double cov = 0.0, var_x = 0.0, var_y = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    cov += dx * dy;
    var_x += dx * dx;
    var_y += dy * dy;
  }
  if (var_x == 0.0 || var_y == 0.0) {
    throw DegenerateInput("pearson: zero variance");
  }
  return cov / std::sqrt(var_x * var_y);
}

std::vector<double> average_ranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(values.size(), 0.0);
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    // positions i..j (0-based) share the mean of ranks i+1..j+1
    const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) {
    throw ContractViolation("spearman: length mismatch");
  }
  return pearson(average_ranks(x), average_ranks(y));
}

double iaa(const std::vector<std::vector<double>>& rater_matrix) {
  std::vector<double> annotations;
  std::vector<double> leave_one_out_means;
  for (const std::vector<double>& ratings : rater_matrix) {
    if (ratings.size() < 2) {
      throw DegenerateInput("iaa: every sample needs at least 2 ratings");
    }
    const double sum = std::accumulate(ratings.begin(), ratings.end(), 0.0);
    for (double rating : ratings) {
      annotations.push_back(rating);
      leave_one_out_means.push_back((sum - rating) /
                                    static_cast<double>(ratings.size() - 1));
    }
  }
  return spearman(annotations, leave_one_out_means);
}

PrecisionRecallF1 extraction_f1(
    const std::vector<std::vector<EventRelationTuple>>& predicted,
    const std::vector<std::vector<EventRelationTuple>>& gold) {
  if (predicted.size() != gold.size()) {
    throw ContractViolation("extraction_f1: sample count mismatch");
  }
  long tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    std::set<Relation> predicted_relations, gold_relations;
    for (const EventRelationTuple& t : predicted[i]) {
      predicted_relations.insert(t.relation);
    }
    for (const EventRelationTuple& t : gold[i]) {
      gold_relations.insert(t.relation);
    }
    for (Relation r : all_relations()) {
      const bool p = predicted_relations.count(r) > 0;
      const bool g = gold_relations.count(r) > 0;
      if (p && g) ++tp;
      else if (p) ++fp;
      else if (g) ++fn;
    }
  }

  PrecisionRecallF1 out;
  if (tp + fp == 0 && tp + fn == 0) {
    // no positives on either side: vacuously perfect agreement
    out.precision = out.recall = out.f1 = 1.0;
    return out;
  }
  out.precision = (tp + fp) ? static_cast<double>(tp) / (tp + fp) : 0.0;
  out.recall = (tp + fn) ? static_cast<double>(tp) / (tp + fn) : 0.0;
  out.f1 = (out.precision + out.recall > 0.0)
               ? 2.0 * out.precision * out.recall / (out.precision + out.recall)
               : 0.0;
  return out;
}

std::string tuple_to_text(const EventRelationTuple& tuple) {
  return tuple.head.text + " " + tuple.tail.text;
}

namespace {

std::map<std::string, long> ngram_counts(const std::vector<std::string>& tokens,
                                         std::size_t n) {
  std::map<std::string, long> counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (std::size_t j = 1; j < n; ++j) key += " " + tokens[i + j];
    ++counts[key];
  }
  return counts;
}

// clipped (modified) n-gram matches against the per-reference maximum
long clipped_matches(const std::map<std::string, long>& candidate,
                     const std::vector<std::map<std::string, long>>& references) {
  long matches = 0;
  for (const auto& [ngram, count] : candidate) {
    long best = 0;
    for (const auto& reference : references) {
      auto it = reference.find(ngram);
      if (it != reference.end()) best = std::max(best, it->second);
    }
    matches += std::min(count, best);
  }
  return matches;
}

}  // namespace

double bleu2(const std::string& candidate,
             const std::vector<std::string>& references) {
  if (references.empty()) {
    throw ContractViolation("bleu2: need at least one reference");
  }
  const std::string collapsed = collapse_whitespace(candidate);
  if (collapsed.empty()) {
    throw DegenerateInput("bleu2: empty candidate");
  }
  for (const std::string& reference : references) {
    if (collapse_whitespace(reference) == collapsed) return 1.0;
  }

  const std::vector<std::string> cand_tokens = split_whitespace(collapsed);
  std::vector<std::vector<std::string>> ref_tokens;
  for (const std::string& reference : references) {
    ref_tokens.push_back(split_whitespace(reference));
  }

  // closest reference length; ties prefer the shorter one
  const long c = static_cast<long>(cand_tokens.size());
  long r = static_cast<long>(ref_tokens.front().size());
  for (const auto& tokens : ref_tokens) {
    const long len = static_cast<long>(tokens.size());
    if (std::llabs(len - c) < std::llabs(r - c) ||
        (std::llabs(len - c) == std::llabs(r - c) && len < r)) {
      r = len;
    }
  }

  std::vector<std::map<std::string, long>> ref_unigrams, ref_bigrams;
  for (const auto& tokens : ref_tokens) {
    ref_unigrams.push_back(ngram_counts(tokens, 1));
    ref_bigrams.push_back(ngram_counts(tokens, 2));
  }
  const auto cand_unigrams = ngram_counts(cand_tokens, 1);
  const auto cand_bigrams = ngram_counts(cand_tokens, 2);

  const long m1 = clipped_matches(cand_unigrams, ref_unigrams);
  const double p1 = static_cast<double>(m1) / static_cast<double>(c);

  const long bigram_total = std::max<long>(c - 1, 0);
  const long m2 = clipped_matches(cand_bigrams, ref_bigrams);
  double p2;
  if (bigram_total > 0 && m2 > 0) {
    p2 = static_cast<double>(m2) / static_cast<double>(bigram_total);
  } else {
    // add-1 smoothing, needed because extracted events are short
    p2 = static_cast<double>(m2 + 1) / static_cast<double>(bigram_total + 1);
  }

  const double brevity_penalty =
      c >= r ? 1.0
             : std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c));
  return brevity_penalty * std::sqrt(p1 * p2);
}

double embedding_similarity_eval(const std::vector<std::string>& predicted,
                                 const std::vector<std::string>& gold,
                                 EmbeddingBackend& embedder) {
  if (predicted.size() != gold.size()) {
    throw ContractViolation("embedding_similarity_eval: length mismatch");
  }
  if (predicted.empty()) {
    throw DegenerateInput("embedding_similarity_eval: empty input");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double sim =
        cosine(embedder.embed(predicted[i]), embedder.embed(gold[i]));
    // the upper clamp only strips float noise; cosine is <= 1 in exact math
    sum += std::clamp(sim, 0.0, 1.0);
  }
  return sum / static_cast<double>(predicted.size());
}

double roc_auc(const std::vector<double>& scores,
               const std::vector<int>& labels) {
  if (scores.size() != labels.size()) {
    throw ContractViolation("roc_auc: length mismatch");
  }
  long n_pos = 0, n_neg = 0;
  for (int label : labels) {
    if (label == 1) ++n_pos;
    else if (label == 0) ++n_neg;
    else throw ContractViolation("roc_auc: labels must be 0 or 1");
  }
  if (n_pos == 0 || n_neg == 0) {
    throw DegenerateInput("roc_auc: need both classes");
  }

  // rank-sum formulation: AUC = (R_pos - n_pos(n_pos+1)/2) / (n_pos * n_neg),
  // with average ranks so ties contribute one half per pair
  const std::vector<double> ranks = average_ranks(scores);
  double positive_rank_sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1) positive_rank_sum += ranks[i];
  }
  const double n_pos_d = static_cast<double>(n_pos);
  return (positive_rank_sum - n_pos_d * (n_pos_d + 1.0) / 2.0) /
         (n_pos_d * static_cast<double>(n_neg));
}

double grouped_auc(const std::vector<std::pair<LabeledTriple, double>>& scored,
                   const std::optional<std::set<Relation>>& relation_subset) {
  std::vector<double> scores;
  std::vector<int> labels;
  for (const auto& [triple, score] : scored) {
    if (relation_subset &&
        (!triple.relation || !relation_subset->count(*triple.relation))) {
      continue;
    }
    scores.push_back(score);
    labels.push_back(triple.label);
  }
  if (scores.empty()) {
    throw DegenerateInput("grouped_auc: no triples left after filtering");
  }
  return roc_auc(scores, labels);
}

std::vector<std::pair<std::string, double>> system_ranking(
    const std::vector<std::pair<std::string, ScoredResponse>>& tagged) {
  std::map<std::string, std::pair<double, long>> totals;  // sum, count
  for (const auto& [system, response] : tagged) {
    if (system.empty()) {
      throw ContractViolation("system_ranking: response without a system tag");
    }
    auto& [sum, count] = totals[system];
    sum += response.score;
    ++count;
  }
  std::vector<std::pair<std::string, double>> ranking;
  ranking.reserve(totals.size());
  for (const auto& [system, total] : totals) {
    ranking.emplace_back(system, total.first / static_cast<double>(total.second));
  }
  std::sort(ranking.begin(), ranking.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return ranking;
}

}  // namespace accent::eval
