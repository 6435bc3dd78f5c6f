// accent: score open-domain dialogue responses for event commonsense and
// run the surrounding evaluation harness.
//
// Subcommands: score | extract | eval-metric | eval-extraction |
// eval-compat | prepare-train | search-baseline.
//
// Exit codes: 0 success, 1 partial (some samples failed), 2 usage/IO error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "accent/data_io.hpp"
#include "accent/endpoint.hpp"
#include "accent/eval.hpp"
#include "accent/pipeline.hpp"
#include "accent/version.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitUsage = 2;

struct RunConfig {
  std::string backend = "mock";  // mock | endpoint | real
  std::string extractor_endpoint;
  std::string cskb_endpoint;
  std::string embedder_endpoint;
  std::string mock_script;  // JSON table for the scripted mock generator

  std::uint64_t seed = 0;
  int parallelism = 1;

  double fallback_score = 0.5;
  std::string locality_policy = "ScoreAll";
  int beam_size = 10;
  double clamp_floor = 0.0;
  std::string query_template = "{h} {r} [GEN]";
  int max_history = 4;
  int max_output_tokens = 128;

  int min_response_words = 5;
  bool require_non_interrogative = true;
  bool apply_filter = false;

  int negatives_per_relation = 5;
  std::string locality_filter = "Both";
};

// The semantic part of the config: everything that can change an output
// body. Parallelism and file paths are execution details and stay out, so
// equal hashes really do promise equal bodies.
json semantic_config(const RunConfig& config) {
  return json{
      {"backend", config.backend},
      {"extractor_endpoint", config.extractor_endpoint},
      {"cskb_endpoint", config.cskb_endpoint},
      {"embedder_endpoint", config.embedder_endpoint},
      {"mock_script", config.mock_script},
      {"seed", config.seed},
      {"fallback_score", config.fallback_score},
      {"locality_policy", config.locality_policy},
      {"beam_size", config.beam_size},
      {"clamp_floor", config.clamp_floor},
      {"query_template", config.query_template},
      {"max_history", config.max_history},
      {"max_output_tokens", config.max_output_tokens},
      {"min_response_words", config.min_response_words},
      {"require_non_interrogative", config.require_non_interrogative},
      {"apply_filter", config.apply_filter},
      {"negatives_per_relation", config.negatives_per_relation},
      {"locality_filter", config.locality_filter},
  };
}

std::string config_hash(const RunConfig& config) {
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(
                    accent::fnv1a64(semantic_config(config).dump())));
  return buffer;
}

std::string header_line(const RunConfig& config) {
  return json{{"config_hash", config_hash(config)},
              {"seed", config.seed},
              {"version", ACCENT_VERSION}}
      .dump();
}

void load_config_file(const std::string& path, RunConfig& config) {
  std::ifstream in(path);
  if (!in) throw accent::io::LoadError("cannot open config " + path);
  json object;
  try {
    in >> object;
  } catch (const json::exception& e) {
    throw accent::io::LoadError("config " + path + ": " + e.what());
  }
  auto get = [&object](const char* key, auto& target) {
    if (object.contains(key)) target = object[key].get<std::decay_t<decltype(target)>>();
  };
  get("backend", config.backend);
  get("extractor_endpoint", config.extractor_endpoint);
  get("cskb_endpoint", config.cskb_endpoint);
  get("embedder_endpoint", config.embedder_endpoint);
  get("mock_script", config.mock_script);
  get("seed", config.seed);
  get("parallelism", config.parallelism);
  get("fallback_score", config.fallback_score);
  get("locality_policy", config.locality_policy);
  get("beam_size", config.beam_size);
  get("clamp_floor", config.clamp_floor);
  get("query_template", config.query_template);
  get("max_history", config.max_history);
  get("max_output_tokens", config.max_output_tokens);
  get("min_response_words", config.min_response_words);
  get("require_non_interrogative", config.require_non_interrogative);
  get("apply_filter", config.apply_filter);
  get("negatives_per_relation", config.negatives_per_relation);
  get("locality_filter", config.locality_filter);
}

accent::PipelineConfig pipeline_config(const RunConfig& config) {
  accent::PipelineConfig pipeline;
  pipeline.extraction.max_history = config.max_history;
  pipeline.extraction.max_output_tokens = config.max_output_tokens;
  pipeline.compatibility.beam_size = config.beam_size;
  pipeline.compatibility.clamp_floor = config.clamp_floor;
  pipeline.compatibility.query_template = config.query_template;
  pipeline.fallback_score = config.fallback_score;
  const auto policy = accent::parse_locality_policy(config.locality_policy);
  if (!policy) {
    throw accent::ContractViolation("unknown locality_policy \"" +
                                    config.locality_policy + "\"");
  }
  pipeline.locality_policy = *policy;
  return pipeline;
}

accent::io::CorpusFilterConfig filter_config(const RunConfig& config) {
  accent::io::CorpusFilterConfig filter;
  filter.min_response_words = config.min_response_words;
  filter.require_non_interrogative = config.require_non_interrogative;
  filter.max_history = config.max_history;
  return filter;
}

// ---------------------------------------------------------------------------
// Backend assembly
// ---------------------------------------------------------------------------

struct BackendSuite {
  std::unique_ptr<accent::GenerationBackend> extractor;
  std::unique_ptr<accent::GenerationBackend> cskb;
  std::unique_ptr<accent::EmbeddingBackend> embedder;
  accent::ScriptedGenerator* extractor_mock = nullptr;  // set in mock mode
};

void apply_mock_script(accent::ScriptedGenerator& generator,
                       const std::string& path) {
  std::ifstream in(path);
  if (!in) throw accent::io::LoadError("cannot open mock script " + path);
  json table;
  try {
    in >> table;
  } catch (const json::exception& e) {
    throw accent::io::LoadError("mock script " + path + ": " + e.what());
  }
  if (!table.is_object()) {
    throw accent::io::LoadError("mock script must be a JSON object");
  }
  for (const auto& [input, entry] : table.items()) {
    if (entry.is_array()) {
      generator.script(input, entry.get<std::vector<std::string>>());
    } else if (entry.is_object() && entry.contains("sequences")) {
      std::optional<std::vector<double>> losses;
      if (entry.contains("losses") && entry["losses"].is_array()) {
        losses = entry["losses"].get<std::vector<double>>();
      }
      generator.script(input, entry["sequences"].get<std::vector<std::string>>(),
                       losses);
    } else {
      throw accent::io::LoadError(
          "mock script entries must be arrays or {sequences, losses} objects");
    }
  }
}

// "real" resolves endpoint URLs from ACCENT_MODEL_DIR/endpoints.json; model
// weights themselves are always consumed through a serving endpoint.
void resolve_real_endpoints(RunConfig& config) {
  const char* model_dir = std::getenv("ACCENT_MODEL_DIR");
  if (!config.extractor_endpoint.empty() && !config.cskb_endpoint.empty() &&
      !config.embedder_endpoint.empty()) {
    return;
  }
  if (!model_dir) {
    throw accent::ContractViolation(
        "--backend real needs endpoint URLs, either in the config or via "
        "ACCENT_MODEL_DIR/endpoints.json");
  }
  const std::string path = std::string(model_dir) + "/endpoints.json";
  std::ifstream in(path);
  if (!in) throw accent::io::LoadError("cannot open " + path);
  json object;
  in >> object;
  if (config.extractor_endpoint.empty() && object.contains("extractor")) {
    config.extractor_endpoint = object["extractor"].get<std::string>();
  }
  if (config.cskb_endpoint.empty() && object.contains("cskb")) {
    config.cskb_endpoint = object["cskb"].get<std::string>();
  }
  if (config.embedder_endpoint.empty() && object.contains("embedder")) {
    config.embedder_endpoint = object["embedder"].get<std::string>();
  }
}

BackendSuite make_backends(RunConfig& config) {
  BackendSuite suite;
  if (config.backend == "mock") {
    auto extractor = std::make_unique<accent::ScriptedGenerator>(
        accent::ScriptedGenerator::Mode::Permissive);
    auto cskb = std::make_unique<accent::ScriptedGenerator>(
        accent::ScriptedGenerator::Mode::Permissive);
    if (!config.mock_script.empty()) {
      apply_mock_script(*extractor, config.mock_script);
      apply_mock_script(*cskb, config.mock_script);
    }
    suite.extractor_mock = extractor.get();
    suite.extractor = std::move(extractor);
    suite.cskb = std::move(cskb);
    suite.embedder = std::make_unique<accent::HashEmbedder>(64);
    return suite;
  }
  if (config.backend == "real") resolve_real_endpoints(config);
  if (config.backend == "endpoint" || config.backend == "real") {
    if (config.extractor_endpoint.empty() || config.cskb_endpoint.empty() ||
        config.embedder_endpoint.empty()) {
      throw accent::ContractViolation(
          "endpoint backend needs --extractor-endpoint, --cskb-endpoint and "
          "--embedder-endpoint (or config/ACCENT_MODEL_DIR equivalents)");
    }
    suite.extractor =
        std::make_unique<accent::EndpointGenerator>(config.extractor_endpoint);
    suite.cskb =
        std::make_unique<accent::EndpointGenerator>(config.cskb_endpoint);
    suite.embedder =
        std::make_unique<accent::EndpointEmbedder>(config.embedder_endpoint);
    return suite;
  }
  throw accent::ContractViolation("unknown backend \"" + config.backend +
                                  "\" (expected mock, endpoint or real)");
}

std::unique_ptr<accent::EmbeddingBackend> make_embedder(RunConfig& config) {
  if (config.backend == "mock") return std::make_unique<accent::HashEmbedder>(64);
  if (config.backend == "real") resolve_real_endpoints(config);
  if (config.embedder_endpoint.empty()) {
    throw accent::ContractViolation("no embedder endpoint configured");
  }
  return std::make_unique<accent::EndpointEmbedder>(config.embedder_endpoint);
}

// ---------------------------------------------------------------------------
// Shared I/O helpers
// ---------------------------------------------------------------------------

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw accent::io::LoadError("cannot write " + path);
  return out;
}

std::vector<accent::Dialogue> load_input_dialogues(const std::string& path,
                                                   const RunConfig& config,
                                                   std::size_t* filtered_out) {
  std::vector<accent::Dialogue> dialogues = accent::io::load_dialogues(path);
  if (filtered_out) *filtered_out = 0;
  if (config.apply_filter) {
    accent::io::FilterResult filtered =
        accent::io::filter_corpus(dialogues, filter_config(config));
    if (filtered_out) *filtered_out = filtered.rejected.size();
    dialogues = std::move(filtered.kept);
  }
  return dialogues;
}

void write_call_log(const std::string& path,
                    const accent::ScriptedGenerator* mock) {
  if (path.empty() || !mock) return;
  std::ofstream out = open_output(path);
  for (const accent::GenerationRequest& request : mock->call_log()) {
    out << json{{"input", request.input_text},
                {"k", request.num_return_sequences},
                {"max_tokens", request.max_output_tokens}}
               .dump()
        << "\n";
  }
}

std::map<std::string, std::vector<accent::EventRelationTuple>> group_tuples(
    const std::vector<accent::io::GoldTupleRecord>& records) {
  std::map<std::string, std::vector<accent::EventRelationTuple>> grouped;
  for (const accent::io::GoldTupleRecord& record : records) {
    grouped[record.id].push_back(record.tuple);
  }
  return grouped;
}

void write_report(const std::string& out_path, const std::string& csv_path,
                  int setup, const json& metrics, std::size_t n,
                  const RunConfig& config) {
  const json report = {{"setup", setup},
                       {"metrics", metrics},
                       {"n", n},
                       {"config_hash", config_hash(config)}};
  if (!out_path.empty()) {
    std::ofstream out = open_output(out_path);
    out << report.dump(2) << "\n";
  }
  std::cout << report.dump() << "\n";
  if (!csv_path.empty()) {
    std::ofstream csv = open_output(csv_path);
    csv << "# config_hash=" << config_hash(config) << " seed=" << config.seed
        << " version=" << ACCENT_VERSION << "\n";
    std::string names, values;
    for (const auto& [key, value] : metrics.items()) {
      if (!names.empty()) {
        names += ",";
        values += ",";
      }
      names += key;
      values += value.is_null() ? "NA" : value.dump();
    }
    csv << names << "\n" << values << "\n";
  }
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_score(const std::string& in_path, const std::string& out_path,
              const std::string& call_log_path, RunConfig& config) {
  std::size_t filtered_out = 0;
  const std::vector<accent::Dialogue> dialogues =
      load_input_dialogues(in_path, config, &filtered_out);
  BackendSuite backends = make_backends(config);
  const accent::PipelineConfig pipeline = pipeline_config(config);

  const accent::CorpusResult result =
      accent::score_corpus(dialogues, *backends.extractor, *backends.cskb,
                           *backends.embedder, pipeline, config.parallelism);

  std::ofstream out = open_output(out_path);
  out << header_line(config) << "\n";
  double sum = 0.0;
  std::size_t fallbacks = 0, scored = 0;
  for (const accent::CorpusEntry& entry : result.entries) {
    if (entry.ok()) {
      out << accent::io::scored_response_to_json_line(*entry.response) << "\n";
      sum += entry.response->score;
      if (entry.response->used_fallback) ++fallbacks;
      ++scored;
    } else {
      out << json{{"error", entry.error}, {"id", entry.dialogue_id}}.dump()
          << "\n";
    }
  }
  write_call_log(call_log_path, backends.extractor_mock);

  json summary = {{"n", dialogues.size()},
                  {"scored", scored},
                  {"failures", result.failure_count},
                  {"filtered_out", filtered_out},
                  {"mean_score", scored ? sum / scored : 0.0},
                  {"fallback_rate",
                   scored ? static_cast<double>(fallbacks) / scored : 0.0}};
  std::cout << summary.dump() << "\n";

  if (!dialogues.empty() && result.failure_count ==
                                static_cast<int>(dialogues.size())) {
    std::cerr << "all samples failed: " << result.entries.front().error << "\n";
    return kExitUsage;
  }
  return result.failure_count > 0 ? kExitPartial : kExitOk;
}

int cmd_extract(const std::string& in_path, const std::string& out_path,
                const std::string& call_log_path, RunConfig& config) {
  std::size_t filtered_out = 0;
  const std::vector<accent::Dialogue> dialogues =
      load_input_dialogues(in_path, config, &filtered_out);
  BackendSuite backends = make_backends(config);
  accent::ExtractionConfig extraction = pipeline_config(config).extraction;

  std::ofstream out = open_output(out_path);
  out << header_line(config) << "\n";
  std::size_t tuple_count = 0, failures = 0;
  std::string first_error;
  for (const accent::Dialogue& dialogue : dialogues) {
    try {
      for (const accent::EventRelationTuple& tuple :
           accent::extract_tuples(dialogue, *backends.extractor, extraction)) {
        out << accent::io::tuple_to_json_line(dialogue.id, tuple) << "\n";
        ++tuple_count;
      }
    } catch (const accent::Error& e) {
      if (first_error.empty()) first_error = e.what();
      out << json{{"error", e.what()}, {"id", dialogue.id}}.dump() << "\n";
      ++failures;
    }
  }
  write_call_log(call_log_path, backends.extractor_mock);

  std::cout << json{{"n", dialogues.size()},
                    {"tuples", tuple_count},
                    {"failures", failures},
                    {"filtered_out", filtered_out}}
                   .dump()
            << "\n";
  if (!dialogues.empty() && failures == dialogues.size()) {
    std::cerr << "all samples failed: " << first_error << "\n";
    return kExitUsage;
  }
  return failures > 0 ? kExitPartial : kExitOk;
}

// Reads a scores JSONL (as written by cmd_score), skipping the header line.
std::map<std::string, double> read_score_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw accent::io::LoadError("cannot open " + path);
  std::map<std::string, double> scores;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    json object;
    try {
      object = json::parse(line);
    } catch (const json::exception& e) {
      throw accent::io::LoadError(std::string("invalid scores line: ") +
                                  e.what());
    }
    if (!object.contains("id") || !object.contains("score")) continue;
    scores[object["id"].get<std::string>()] = object["score"].get<double>();
  }
  return scores;
}

int cmd_eval_metric(const std::string& scores_path,
                    const std::string& annotations_path,
                    const std::string& out_path, const std::string& csv_path,
                    RunConfig& config) {
  const std::map<std::string, double> scores = read_score_map(scores_path);
  const std::vector<accent::io::AnnotationFragment> annotations =
      accent::io::load_annotations(annotations_path);

  std::vector<double> metric_scores, human_means;
  std::vector<std::vector<double>> rater_matrix;
  for (const accent::io::AnnotationFragment& fragment : annotations) {
    auto it = scores.find(fragment.id);
    if (it == scores.end()) continue;
    metric_scores.push_back(it->second);
    human_means.push_back(fragment.mean());
    rater_matrix.push_back(fragment.scores);
  }
  if (metric_scores.size() < 2) {
    throw accent::DegenerateInput(
        "eval-metric: need at least 2 samples present in both files");
  }

  json metrics = {{"pearson", accent::eval::pearson(metric_scores, human_means)},
                  {"spearman", accent::eval::spearman(metric_scores, human_means)}};
  bool iaa_possible = true;
  for (const auto& ratings : rater_matrix) {
    if (ratings.size() < 2) iaa_possible = false;
  }
  if (iaa_possible) {
    metrics["iaa"] = accent::eval::iaa(rater_matrix);
  } else {
    metrics["iaa"] = nullptr;
  }
  write_report(out_path, csv_path, 1, metrics, metric_scores.size(), config);
  return kExitOk;
}

int cmd_eval_extraction(const std::string& pred_path,
                        const std::string& gold_path,
                        const std::string& out_path,
                        const std::string& csv_path, RunConfig& config) {
  const auto predicted = group_tuples(accent::io::load_gold_tuples(pred_path));
  const auto gold = group_tuples(accent::io::load_gold_tuples(gold_path));

  std::set<std::string> ids;
  for (const auto& [id, tuples] : predicted) ids.insert(id);
  for (const auto& [id, tuples] : gold) ids.insert(id);

  std::vector<std::vector<accent::EventRelationTuple>> pred_rows, gold_rows;
  for (const std::string& id : ids) {
    auto p = predicted.find(id);
    auto g = gold.find(id);
    pred_rows.push_back(p == predicted.end()
                            ? std::vector<accent::EventRelationTuple>{}
                            : p->second);
    gold_rows.push_back(g == gold.end()
                            ? std::vector<accent::EventRelationTuple>{}
                            : g->second);
  }
  const accent::eval::PrecisionRecallF1 prf =
      accent::eval::extraction_f1(pred_rows, gold_rows);

  // Tuple closeness: each predicted tuple is scored against the gold tuples
  // of the same sample and relation (multi-reference BLEU); the embedding
  // similarity uses the best-BLEU reference as the aligned pair.
  std::unique_ptr<accent::EmbeddingBackend> embedder = make_embedder(config);
  std::vector<std::string> aligned_pred, aligned_gold;
  double bleu_sum = 0.0;
  std::size_t bleu_n = 0;
  for (std::size_t row = 0; row < pred_rows.size(); ++row) {
    for (const accent::EventRelationTuple& tuple : pred_rows[row]) {
      std::vector<std::string> references;
      for (const accent::EventRelationTuple& g : gold_rows[row]) {
        if (g.relation == tuple.relation) {
          references.push_back(accent::eval::tuple_to_text(g));
        }
      }
      if (references.empty()) continue;  // precision error, F1's business
      const std::string text = accent::eval::tuple_to_text(tuple);
      bleu_sum += accent::eval::bleu2(text, references);
      ++bleu_n;
      std::size_t best = 0;
      double best_bleu = -1.0;
      for (std::size_t r = 0; r < references.size(); ++r) {
        const double b = accent::eval::bleu2(text, {references[r]});
        if (b > best_bleu) {
          best_bleu = b;
          best = r;
        }
      }
      aligned_pred.push_back(text);
      aligned_gold.push_back(references[best]);
    }
  }

  json metrics = {{"precision", prf.precision},
                  {"recall", prf.recall},
                  {"f1", prf.f1}};
  metrics["bleu2"] = bleu_n ? json(bleu_sum / bleu_n) : json();
  metrics["similarity"] =
      aligned_pred.empty()
          ? json()
          : json(accent::eval::embedding_similarity_eval(aligned_pred,
                                                         aligned_gold,
                                                         *embedder));
  write_report(out_path, csv_path, 2, metrics, ids.size(), config);
  return kExitOk;
}

std::vector<double> read_plain_scores(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw accent::io::LoadError("cannot open " + path);
  std::vector<double> scores;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    json object;
    try {
      object = json::parse(line);
    } catch (const json::exception& e) {
      throw accent::io::LoadError(std::string("invalid score line: ") + e.what());
    }
    if (!object.contains("score")) continue;  // header or metadata line
    scores.push_back(object["score"].get<double>());
  }
  return scores;
}

int cmd_eval_compat(const std::string& triples_path,
                    const std::string& scores_path, bool strict_relations,
                    const std::string& out_path, const std::string& csv_path,
                    RunConfig& config) {
  const std::vector<accent::eval::LabeledTriple> triples =
      accent::io::load_labeled_triples(triples_path,
                                       strict_relations
                                           ? accent::io::RelationMode::Strict
                                           : accent::io::RelationMode::PassThrough);
  if (triples.empty()) {
    throw accent::DegenerateInput("eval-compat: no triples loaded");
  }

  std::vector<double> scores;
  if (!scores_path.empty()) {
    scores = read_plain_scores(scores_path);
    if (scores.size() != triples.size()) {
      throw accent::io::LoadError(
          "scores file has " + std::to_string(scores.size()) +
          " entries for " + std::to_string(triples.size()) + " triples");
    }
  } else {
    BackendSuite backends = make_backends(config);
    accent::CompatibilityConfig compat = pipeline_config(config).compatibility;
    for (const accent::eval::LabeledTriple& triple : triples) {
      const std::vector<std::string> tails =
          accent::query_tails(accent::Event{triple.head}, triple.relation_tag,
                              *backends.cskb, compat);
      scores.push_back(accent::compatibility_score(accent::Event{triple.tail},
                                                   tails, *backends.embedder,
                                                   compat)
                           .value);
    }
  }

  std::vector<std::pair<accent::eval::LabeledTriple, double>> scored;
  for (std::size_t i = 0; i < triples.size(); ++i) {
    scored.emplace_back(triples[i], scores[i]);
  }
  std::set<accent::Relation> subset(accent::all_relations().begin(),
                                    accent::all_relations().end());

  json metrics;
  metrics["auc_all"] = accent::eval::grouped_auc(scored, std::nullopt);
  try {
    metrics["auc_subset"] = accent::eval::grouped_auc(scored, subset);
  } catch (const accent::DegenerateInput&) {
    metrics["auc_subset"] = nullptr;  // no in-subset triples (or one class)
  }
  write_report(out_path, csv_path, 3, metrics, triples.size(), config);
  return kExitOk;
}

int cmd_prepare_train(const std::string& dialogues_path,
                      const std::string& gold_path,
                      const std::string& out_path, RunConfig& config) {
  const std::vector<accent::Dialogue> dialogues =
      accent::io::load_dialogues(dialogues_path);
  auto gold = group_tuples(accent::io::load_gold_tuples(gold_path));

  std::vector<accent::GoldSample> samples;
  for (const accent::Dialogue& dialogue : dialogues) {
    accent::GoldSample sample;
    sample.dialogue = dialogue;
    if (auto it = gold.find(dialogue.id); it != gold.end()) {
      sample.tuples = it->second;
    }
    samples.push_back(std::move(sample));
  }

  accent::LocalityFilter filter = accent::LocalityFilter::Both;
  if (config.locality_filter == "SingleOnly") {
    filter = accent::LocalityFilter::SingleOnly;
  } else if (config.locality_filter == "PairOnly") {
    filter = accent::LocalityFilter::PairOnly;
  } else if (config.locality_filter != "Both") {
    throw accent::ContractViolation("unknown locality_filter \"" +
                                    config.locality_filter + "\"");
  }

  accent::ExtractionConfig extraction = pipeline_config(config).extraction;
  const accent::TrainingData data = accent::prepare_training_examples(
      samples, extraction, config.negatives_per_relation, filter, config.seed);

  std::ofstream out = open_output(out_path);
  out << header_line(config) << "\n";
  std::map<std::string, std::size_t> per_relation;
  for (const accent::TrainingExample& example : data.examples) {
    out << json{{"source", example.source_text},
                {"target", example.target_text},
                {"relation", to_string(example.relation)},
                {"negative", example.is_negative}}
               .dump()
        << "\n";
    ++per_relation[to_string(example.relation)];
  }

  json summary = {{"examples", data.examples.size()},
                  {"per_relation", per_relation},
                  {"negative_shortfall", data.shortfall_total()}};
  std::cout << summary.dump() << "\n";
  return kExitOk;
}

int cmd_search_baseline(const std::string& kb_path,
                        const std::string& dialogues_path,
                        const std::string& out_path, bool skip_unknown,
                        RunConfig& config) {
  accent::io::KbLoadOptions options;
  options.relation_mode = skip_unknown ? accent::io::RelationMode::PassThrough
                                       : accent::io::RelationMode::Strict;
  const accent::StaticCSKB kb = accent::io::load_kb(kb_path, options);
  const std::vector<accent::Dialogue> dialogues =
      accent::io::load_dialogues(dialogues_path);

  std::ofstream out = open_output(out_path);
  out << header_line(config) << "\n";
  std::size_t total_matches = 0;
  for (const accent::Dialogue& dialogue : dialogues) {
    // concept words come from the target response and its previous
    // utterance only
    std::vector<std::string> utterances;
    if (!dialogue.history.empty()) {
      utterances.push_back(dialogue.history.back().text);
    }
    utterances.push_back(dialogue.response.text);
    const accent::ConceptSet concepts = accent::build_concept_set(utterances);
    const std::vector<accent::EventRelationTuple> matches =
        accent::search_tuples(kb, concepts);
    total_matches += matches.size();

    json tuples = json::array();
    for (const accent::EventRelationTuple& tuple : matches) {
      tuples.push_back(json{{"head", tuple.head.text},
                            {"relation", to_string(tuple.relation)},
                            {"tail", tuple.tail.text}});
    }
    out << json{{"id", dialogue.id},
                {"count", matches.size()},
                {"tuples", std::move(tuples)}}
               .dump()
        << "\n";
  }
  std::cout << json{{"n", dialogues.size()}, {"matches", total_matches}}.dump()
            << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event commonsense scoring for open-domain dialogue responses"};
  app.require_subcommand(1);

  RunConfig config;
  // The config file is applied before flag parsing so flags override it.
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    std::string path;
    if (arg == "--config" && i + 1 < argc) {
      path = argv[i + 1];
    } else if (arg.rfind("--config=", 0) == 0) {
      path = arg.substr(9);
    } else {
      continue;
    }
    try {
      load_config_file(path, config);
    } catch (const accent::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitUsage;
    }
  }

  std::string in_path, out_path, call_log_path;
  std::string scores_path, annotations_path, pred_path, gold_path;
  std::string triples_path, kb_path, csv_path, config_path;
  bool strict_relations = false, skip_unknown = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file");
    cmd->add_option("--seed", config.seed, "run seed, recorded in headers");
    cmd->add_option("--parallelism", config.parallelism, "worker threads");
    cmd->add_option("--backend", config.backend, "mock | endpoint | real");
    cmd->add_option("--extractor-endpoint", config.extractor_endpoint, "");
    cmd->add_option("--cskb-endpoint", config.cskb_endpoint, "");
    cmd->add_option("--embedder-endpoint", config.embedder_endpoint, "");
    cmd->add_option("--mock-script", config.mock_script,
                    "JSON table of scripted generator outputs");
  };

  CLI::App* score = app.add_subcommand("score", "score dialogues end to end");
  score->add_option("--in", in_path, "dialogues JSONL")->required();
  score->add_option("--out", out_path, "scores JSONL")->required();
  score->add_option("--call-log", call_log_path,
                    "write the mock generation call log (mock backend only)");
  score->add_flag("--apply-filter", config.apply_filter,
                  "apply the corpus filter before scoring");
  add_common(score);

  CLI::App* extract =
      app.add_subcommand("extract", "extract event-relation tuples only");
  extract->add_option("--in", in_path, "dialogues JSONL")->required();
  extract->add_option("--out", out_path, "tuples JSONL")->required();
  extract->add_option("--call-log", call_log_path,
                      "write the mock generation call log");
  extract->add_flag("--apply-filter", config.apply_filter,
                    "apply the corpus filter before extraction");
  add_common(extract);

  CLI::App* eval_metric = app.add_subcommand(
      "eval-metric", "correlate metric scores with human judgments (setup 1)");
  eval_metric->add_option("--scores", scores_path, "scores JSONL")->required();
  eval_metric->add_option("--annotations", annotations_path, "annotations JSONL")
      ->required();
  eval_metric->add_option("--out", out_path, "report JSON");
  eval_metric->add_option("--csv", csv_path, "CSV table");
  add_common(eval_metric);

  CLI::App* eval_extraction = app.add_subcommand(
      "eval-extraction", "score extracted tuples against gold (setup 2)");
  eval_extraction->add_option("--pred", pred_path, "predicted tuples JSONL")
      ->required();
  eval_extraction->add_option("--gold", gold_path, "gold tuples JSONL")
      ->required();
  eval_extraction->add_option("--out", out_path, "report JSON");
  eval_extraction->add_option("--csv", csv_path, "CSV table");
  add_common(eval_extraction);

  CLI::App* eval_compat = app.add_subcommand(
      "eval-compat", "tuple compatibility AUC on a labeled benchmark (setup 3)");
  eval_compat->add_option("--triples", triples_path, "labeled triples JSONL")
      ->required();
  eval_compat->add_option("--scores", scores_path,
                          "precomputed per-triple scores JSONL (otherwise "
                          "scored via the backend)");
  eval_compat->add_flag("--strict-relations", strict_relations,
                        "reject relations outside the 12-relation set");
  eval_compat->add_option("--out", out_path, "report JSON");
  eval_compat->add_option("--csv", csv_path, "CSV table");
  add_common(eval_compat);

  CLI::App* prepare_train = app.add_subcommand(
      "prepare-train", "build extractor fine-tuning data from gold tuples");
  prepare_train->add_option("--dialogues", in_path, "dialogues JSONL")
      ->required();
  prepare_train->add_option("--gold", gold_path, "gold tuples JSONL")
      ->required();
  prepare_train->add_option("--out", out_path, "training JSONL")->required();
  prepare_train->add_option("--negatives", config.negatives_per_relation,
                            "negative samples per relation");
  prepare_train->add_option("--locality-filter", config.locality_filter,
                            "Both | SingleOnly | PairOnly");
  add_common(prepare_train);

  CLI::App* search_baseline = app.add_subcommand(
      "search-baseline", "keyword-search baseline over a static KB");
  search_baseline->add_option("--kb", kb_path, "KB JSONL")->required();
  search_baseline->add_option("--dialogues", in_path, "dialogues JSONL")
      ->required();
  search_baseline->add_option("--out", out_path, "matches JSONL")->required();
  search_baseline->add_flag("--skip-unknown-relations", skip_unknown,
                            "skip KB lines with relations outside the 12");
  add_common(search_baseline);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (score->parsed()) {
      return cmd_score(in_path, out_path, call_log_path, config);
    }
    if (extract->parsed()) {
      return cmd_extract(in_path, out_path, call_log_path, config);
    }
    if (eval_metric->parsed()) {
      return cmd_eval_metric(scores_path, annotations_path, out_path, csv_path,
                             config);
    }
    if (eval_extraction->parsed()) {
      return cmd_eval_extraction(pred_path, gold_path, out_path, csv_path,
                                 config);
    }
    if (eval_compat->parsed()) {
      return cmd_eval_compat(triples_path, scores_path, strict_relations,
                             out_path, csv_path, config);
    }
    if (prepare_train->parsed()) {
      return cmd_prepare_train(in_path, gold_path, out_path, config);
    }
    if (search_baseline->parsed()) {
      return cmd_search_baseline(kb_path, in_path, out_path, skip_unknown,
                                 config);
    }
  } catch (const accent::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
