// Acceptance suite: runs every release criterion at its stated tolerance
// and prints one [PASS]/[FAIL]/[SKIP] line per criterion. Exits non-zero if
// any gating criterion fails. Criteria 8-10 drive the CLI binary named by
// the ACCENT_CLI environment variable (ctest sets it; --cli overrides).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "accent/data_io.hpp"
#include "accent/eval.hpp"
#include "accent/pipeline.hpp"
#include "helpers.hpp"

using namespace accent;
using nlohmann::json;

namespace {

std::string g_cli_path;

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  if (g_cli_path.empty()) {
    throw Error("ACCENT_CLI is not set and --cli was not given");
  }
  const std::string command = g_cli_path + " " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) throw Error("popen failed for: " + command);
  CliResult result;
  char buffer[4096];
  while (std::fgets(buffer, sizeof(buffer), pipe)) result.output += buffer;
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

void require(bool condition, const std::string& message) {
  if (!condition) throw Error(message);
}

// ---------------------------------------------------------------------------
// 1. Max-similarity scoring equals an independent brute-force max
//    within 1e-12 on 1000 randomized cases, in under 5 seconds.
// ---------------------------------------------------------------------------
std::string criterion_similarity_oracle() {
  const auto start = std::chrono::steady_clock::now();
  HashEmbedder embedder;
  std::mt19937 rng(1001);
  std::uniform_int_distribution<int> candidate_count(1, 10);

  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::string tail = test::random_phrase(rng, 1, 6);
    std::vector<std::string> candidates;
    const int n = candidate_count(rng);
    for (int i = 0; i < n; ++i) candidates.push_back(test::random_phrase(rng, 1, 6));

    const double value =
        compatibility_score(Event{tail}, candidates, embedder).value;

    // independent exhaustive max over hand-rolled cosines
    const EmbeddingVector t = embedder.embed(tail);
    double best = -2.0;
    for (const std::string& candidate : candidates) {
      const EmbeddingVector c = embedder.embed(candidate);
      double dot = 0.0, nt = 0.0, nc = 0.0;
      for (std::size_t i = 0; i < t.values.size(); ++i) {
        dot += t.values[i] * c.values[i];
        nt += t.values[i] * t.values[i];
        nc += c.values[i] * c.values[i];
      }
      const double cos = dot / (std::sqrt(nt) * std::sqrt(nc));
      if (cos > best) best = cos;
    }
    const double expected = std::min(1.0, std::max(0.0, best));
    worst = std::max(worst, std::fabs(value - expected));
    require(std::fabs(value - expected) <= 1e-12,
            "case " + std::to_string(trial) + ": |" + std::to_string(value) +
                " - " + std::to_string(expected) + "| > 1e-12");
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  require(seconds < 5.0, "took " + std::to_string(seconds) + "s (budget 5s)");
  std::ostringstream detail;
  detail << "1000 cases, max|diff|=" << worst << ", " << seconds << "s";
  return detail.str();
}

// ---------------------------------------------------------------------------
// 2. A dialogue whose extractor answers None for all 12 relations scores
//    exactly 0.5 with used_fallback set.
// ---------------------------------------------------------------------------
std::string criterion_fallback() {
  ScriptedGenerator extractor(ScriptedGenerator::Mode::Permissive);  // "None"
  ScriptedGenerator cskb(ScriptedGenerator::Mode::Strict);
  HashEmbedder embedder;
  std::mt19937 rng(1002);

  for (int i = 0; i < 20; ++i) {
    Dialogue dialogue;
    dialogue.id = "fb" + std::to_string(i);
    dialogue.history = {{"A", test::random_phrase(rng, 2, 8)}};
    dialogue.response = {"B", test::random_phrase(rng, 3, 10)};
    const ScoredResponse response =
        score_response(dialogue, extractor, cskb, embedder);
    require(response.score == 0.5, dialogue.id + ": score != 0.5 exactly");
    require(response.used_fallback, dialogue.id + ": used_fallback not set");
    require(response.tuples.empty(), dialogue.id + ": tuples not empty");
  }
  return "20 all-None dialogues scored exactly 0.5 with used_fallback";
}

// ---------------------------------------------------------------------------
// 3. Grammar round-trip: 1000 marker-free pairs survive render->parse;
//    "None" parses to absent; 20 malformed variants are rejected.
// ---------------------------------------------------------------------------
std::string criterion_grammar() {
  std::mt19937 rng(1003);
  for (int i = 0; i < 1000; ++i) {
    const std::string head = test::random_phrase(rng, 1, 6);
    const std::string tail = test::random_phrase(rng, 1, 6);
    const ParsedExtraction parsed =
        parse_extraction_output(render_extraction_output(head, tail));
    require(parsed.kind == ParsedExtraction::Kind::Tuple,
            "round-trip lost the tuple: " + head + " / " + tail);
    require(parsed.head == head && parsed.tail == tail,
            "round-trip altered the pair: " + head + " / " + tail);
  }
  require(parse_extraction_output("None").kind == ParsedExtraction::Kind::None,
          "\"None\" did not parse to absent");

  const std::vector<std::string> malformed = {
      "event1: PersonX runs",
      "event1: a; event2:",
      "event1: ; event2: b",
      "event2: b; event1: a",
      "",
      "   ",
      "Nones",
      "event1 a; event2 b",
      "event1: a event2: b",
      "evnt1: a; event2: b",
      "event1: a; event3: b",
      "a; event2: b",
      "event1: a;",
      "random free text with no structure",
      "event1: a; event2",
      "; event2: b",
      "event1:; event2:",
      "event1: a ; event2 b",
      "None event1: a; event2: b",
      "eventone: a; eventtwo: b",
  };
  require(malformed.size() == 20, "expected 20 malformed variants");
  for (const std::string& variant : malformed) {
    require(parse_extraction_output(variant).kind ==
                ParsedExtraction::Kind::Malformed,
            "variant not rejected: \"" + variant + "\"");
  }
  return "1000 round-trips, None, and 20 malformed variants behaved";
}

// ---------------------------------------------------------------------------
// 4. Extraction issues exactly 12 generation requests per dialogue, in the
//    fixed relation order, over a 50-dialogue corpus.
// ---------------------------------------------------------------------------
std::string criterion_call_contract() {
  ScriptedGenerator extractor(ScriptedGenerator::Mode::Permissive);
  const ExtractionConfig config;
  std::mt19937 rng(1004);

  std::vector<Dialogue> corpus;
  for (int i = 0; i < 50; ++i) {
    Dialogue dialogue;
    dialogue.id = "c" + std::to_string(i);
    dialogue.history = {{"A", test::random_phrase(rng, 2, 6)}};
    dialogue.response = {"B", test::random_phrase(rng, 3, 8)};
    corpus.push_back(std::move(dialogue));
  }
  for (const Dialogue& dialogue : corpus) {
    extract_tuples(dialogue, extractor, config);
  }

  const auto log = extractor.call_log();
  require(log.size() == 50 * 12,
          "expected 600 requests, saw " + std::to_string(log.size()));
  for (std::size_t i = 0; i < log.size(); ++i) {
    const RelationSpec& spec = config.relation_specs[i % 12];
    require(log[i].input_text.rfind(spec.prompt, 0) == 0,
            "request " + std::to_string(i) + " out of relation order");
    require(log[i].num_return_sequences == 1,
            "request " + std::to_string(i) + " asked for k != 1");
  }
  return "600 requests, 12 per dialogue, fixed relation order";
}

// ---------------------------------------------------------------------------
// 5. pearson/spearman match closed forms within 1e-9; spearman tie handling
//    matches the average-rank oracle on 200 random integer vectors.
// ---------------------------------------------------------------------------
std::string criterion_correlation() {
  require(std::fabs(eval::pearson({1, 2, 3}, {2, 4, 6}) - 1.0) <= 1e-9,
          "pearson monotone fixture");
  require(std::fabs(eval::pearson({1, 2, 3}, {3, 2, 1}) + 1.0) <= 1e-9,
          "pearson reversed fixture");
  require(std::fabs(eval::pearson({1, 2, 3, 4}, {1, 3, 2, 4}) - 0.8) <= 1e-9,
          "pearson hand-computed fixture");
  require(std::fabs(eval::spearman({1, 2, 3, 4}, {10, 20, 40, 80}) - 1.0) <=
              1e-9,
          "spearman monotone fixture");
  require(std::fabs(eval::spearman({1, 2, 3, 4}, {8, 6, 4, 2}) + 1.0) <= 1e-9,
          "spearman reversed fixture");
  require(std::fabs(eval::spearman({1, 2, 2, 3}, {1, 2, 3, 4}) -
                    std::sqrt(0.9)) <= 1e-9,
          "spearman tied fixture");

  // brute-force average ranks: 1 + #smaller + (#equal - 1)/2
  auto ranks_oracle = [](const std::vector<double>& values) {
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      int smaller = 0, equal = 0;
      for (double v : values) {
        if (v < values[i]) ++smaller;
        if (v == values[i]) ++equal;
      }
      ranks[i] = 1.0 + smaller + (equal - 1) / 2.0;
    }
    return ranks;
  };
  auto pearson_oracle = [](const std::vector<double>& x,
                           const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sx += x[i];
      sy += y[i];
    }
    double cxy = 0, cxx = 0, cyy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      cxy += (x[i] - sx / n) * (y[i] - sy / n);
      cxx += (x[i] - sx / n) * (x[i] - sx / n);
      cyy += (y[i] - sy / n) * (y[i] - sy / n);
    }
    return cxy / std::sqrt(cxx * cyy);
  };

  std::mt19937 rng(1005);
  std::uniform_int_distribution<int> length(3, 12);
  std::uniform_int_distribution<int> value(0, 4);
  int checked = 0;
  while (checked < 200) {
    std::vector<double> x, y;
    const int n = length(rng);
    for (int i = 0; i < n; ++i) {
      x.push_back(value(rng));
      y.push_back(value(rng));
    }
    const bool degenerate =
        std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; }) ||
        std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; });
    if (degenerate) continue;
    const double expected = pearson_oracle(ranks_oracle(x), ranks_oracle(y));
    require(std::fabs(eval::spearman(x, y) - expected) <= 1e-9,
            "spearman tie case " + std::to_string(checked));
    ++checked;
  }
  return "closed-form fixtures within 1e-9; 200 tie cases match the oracle";
}

// ---------------------------------------------------------------------------
// 6. roc_auc equals exhaustive Mann-Whitney pair counting, exactly, on 200
//    random instances with ties.
// ---------------------------------------------------------------------------
std::string criterion_auc() {
  std::mt19937 rng(1006);
  std::uniform_int_distribution<int> size(2, 30);
  std::uniform_int_distribution<int> label(0, 1);
  std::uniform_int_distribution<int> bucket(0, 7);

  int checked = 0;
  while (checked < 200) {
    const int n = size(rng);
    std::vector<double> scores;
    std::vector<int> labels;
    int positives = 0;
    for (int i = 0; i < n; ++i) {
      scores.push_back(bucket(rng) / 8.0);
      labels.push_back(label(rng));
      positives += labels.back();
    }
    if (positives == 0 || positives == n) continue;

    double pairs = 0.0;
    long total = 0;
    for (int i = 0; i < n; ++i) {
      if (labels[i] != 1) continue;
      for (int j = 0; j < n; ++j) {
        if (labels[j] != 0) continue;
        ++total;
        if (scores[i] > scores[j]) pairs += 1.0;
        else if (scores[i] == scores[j]) pairs += 0.5;
      }
    }
    const double expected = pairs / static_cast<double>(total);
    const double actual = eval::roc_auc(scores, labels);
    require(actual == expected,
            "auc case " + std::to_string(checked) + ": " +
                std::to_string(actual) + " != " + std::to_string(expected));
    ++checked;
  }
  return "200 random instances equal exhaustive pair counting exactly";
}

// ---------------------------------------------------------------------------
// 7. search_tuples equals brute-force filtering on a 10k-tuple synthetic KB
//    for 100 random concept sets, and grows monotonically with the set.
// ---------------------------------------------------------------------------
std::string criterion_search() {
  std::mt19937 rng(1007);
  std::vector<std::string> vocabulary;
  for (int i = 0; i < 120; ++i) {
    vocabulary.push_back(test::random_word(rng, 3, 8));
  }
  std::uniform_int_distribution<std::size_t> pick(0, vocabulary.size() - 1);
  std::uniform_int_distribution<int> words(1, 4);

  auto random_event = [&] {
    std::string text = "PersonX";
    const int n = words(rng);
    for (int i = 0; i < n; ++i) text += " " + vocabulary[pick(rng)];
    return Event{text};
  };

  std::vector<EventRelationTuple> tuples;
  tuples.reserve(10000);
  for (int i = 0; i < 10000; ++i) {
    tuples.push_back({random_event(), all_relations()[i % kRelationCount],
                      random_event(), std::nullopt});
  }
  const StaticCSKB kb = StaticCSKB::build(tuples);
  const SuffixLemmatizer lemmatizer;

  auto brute_force = [&](const ConceptSet& concepts) {
    std::vector<std::size_t> ids;
    for (std::size_t id = 0; id < kb.tuples().size(); ++id) {
      auto contains = [&](const std::string& text) {
        for (const std::string& term :
             index_terms(text, lemmatizer, default_stopwords())) {
          if (concepts.words.count(term)) return true;
        }
        return false;
      };
      if (contains(kb.tuples()[id].head.text) &&
          contains(kb.tuples()[id].tail.text)) {
        ids.push_back(id);
      }
    }
    return ids;
  };
  auto keys_of = [](const std::vector<EventRelationTuple>& result) {
    std::vector<std::string> keys;
    for (const EventRelationTuple& tuple : result) {
      keys.push_back(tuple.head.text + "|" + to_string(tuple.relation) + "|" +
                     tuple.tail.text);
    }
    return keys;
  };

  std::uniform_int_distribution<int> concept_count(0, 8);
  for (int trial = 0; trial < 100; ++trial) {
    ConceptSet concepts;
    const int n = concept_count(rng);
    for (int i = 0; i < n; ++i) concepts.words.insert(vocabulary[pick(rng)]);

    const auto indexed = search_tuples(kb, concepts);
    const auto expected_ids = brute_force(concepts);
    require(indexed.size() == expected_ids.size(),
            "trial " + std::to_string(trial) + ": sizes differ");
    for (std::size_t i = 0; i < indexed.size(); ++i) {
      const EventRelationTuple& expected = kb.tuples()[expected_ids[i]];
      require(indexed[i].head.text == expected.head.text &&
                  indexed[i].tail.text == expected.tail.text,
              "trial " + std::to_string(trial) + ": mismatch at " +
                  std::to_string(i));
    }

    ConceptSet grown = concepts;
    grown.words.insert(vocabulary[pick(rng)]);
    const auto before = keys_of(indexed);
    const auto after = keys_of(search_tuples(kb, grown));
    const std::set<std::string> after_set(after.begin(), after.end());
    for (const std::string& key : before) {
      require(after_set.count(key) > 0,
              "trial " + std::to_string(trial) + ": monotonicity violated");
    }
  }
  return "10k-tuple KB, 100 concept sets: oracle-equal and monotone";
}

// ---------------------------------------------------------------------------
// 8. Feeding gold tuples as predictions through the CLI yields F1 = 1.0,
//    BLEU-2 = 1.0 and similarity = 1.0.
// ---------------------------------------------------------------------------
std::string criterion_setup2_cli() {
  test::TempDir dir("acc_setup2");
  std::ostringstream tuples;
  std::mt19937 rng(1008);
  for (int i = 0; i < 10; ++i) {
    const Relation r = all_relations()[i % kRelationCount];
    tuples << json{{"id", "d" + std::to_string(i % 4)},
                   {"head", "PersonX " + test::random_phrase(rng, 1, 3)},
                   {"relation", to_string(r)},
                   {"tail", "PersonX " + test::random_phrase(rng, 1, 3)}}
                  .dump()
           << "\n";
  }
  const auto gold = dir.write("gold.jsonl", tuples.str());
  const auto report_path = dir.path() / "report.json";

  const CliResult result =
      run_cli("eval-extraction --pred " + gold.string() + " --gold " +
              gold.string() + " --out " + report_path.string());
  require(result.exit_code == 0, "CLI exited " + std::to_string(result.exit_code) +
                                     "\n" + result.output);
  const json report = json::parse(test::read_file(report_path));
  require(report["setup"] == 2, "wrong setup tag");
  require(report["metrics"]["f1"] == 1.0, "F1 != 1.0");
  require(report["metrics"]["precision"] == 1.0, "precision != 1.0");
  require(report["metrics"]["recall"] == 1.0, "recall != 1.0");
  require(report["metrics"]["bleu2"] == 1.0, "BLEU-2 != 1.0");
  require(report["metrics"]["similarity"] == 1.0, "similarity != 1.0");
  return "gold-as-predictions scored (1.0, 1.0, 1.0) end to end";
}

// ---------------------------------------------------------------------------
// 9. prepare-train: per-relation counts equal positives + 5 and equal seeds
//    reproduce byte-identical files.
// ---------------------------------------------------------------------------
std::string criterion_training_counts() {
  test::TempDir dir("acc_train");
  std::ostringstream dialogues;
  for (int i = 0; i < 24; ++i) {
    dialogues << json{{"id", "d" + std::to_string(i)},
                      {"response",
                       {{"speaker", "B"},
                        {"text", "response number " + std::to_string(i) +
                                     " with enough words"}}}}
                     .dump()
              << "\n";
  }
  const auto dialogues_path = dir.write("dialogues.jsonl", dialogues.str());

  // gold annotations over all 12 relations: relation i gets i%3+1 positives
  std::ostringstream gold;
  std::map<std::string, int> positives;
  int dialogue_cursor = 0;
  for (int i = 0; i < kRelationCount; ++i) {
    const Relation r = all_relations()[i];
    const int count = i % 3 + 1;
    positives[to_string(r)] = count;
    for (int j = 0; j < count; ++j) {
      gold << json{{"id", "d" + std::to_string(dialogue_cursor % 24)},
                   {"head", "PersonX does thing " + std::to_string(i)},
                   {"relation", to_string(r)},
                   {"tail", "PersonX feels way " + std::to_string(j)},
                   {"locality", "Single"}}
                  .dump()
           << "\n";
      ++dialogue_cursor;
    }
  }
  const auto gold_path = dir.write("gold.jsonl", gold.str());

  const auto out1 = dir.path() / "train1.jsonl";
  const auto out2 = dir.path() / "train2.jsonl";
  const std::string common = "prepare-train --dialogues " +
                             dialogues_path.string() + " --gold " +
                             gold_path.string() + " --negatives 5 --seed 123";
  require(run_cli(common + " --out " + out1.string()).exit_code == 0,
          "first prepare-train run failed");
  require(run_cli(common + " --out " + out2.string()).exit_code == 0,
          "second prepare-train run failed");
  require(test::read_file(out1) == test::read_file(out2),
          "same seed produced different files");

  std::istringstream body(test::read_file(out1));
  std::string line;
  bool header = true;
  std::map<std::string, int> counts;
  while (std::getline(body, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    counts[json::parse(line)["relation"].get<std::string>()]++;
  }
  for (Relation r : all_relations()) {
    const std::string name = to_string(r);
    require(counts[name] == positives[name] + 5,
            name + ": expected " + std::to_string(positives[name] + 5) +
                " examples, saw " + std::to_string(counts[name]));
  }
  return "all 12 relations at positives+5; reruns byte-identical";
}

// ---------------------------------------------------------------------------
// 10. cmd_score under mocks, parallelism 1 vs 8, produces byte-identical
//     output bodies.
// ---------------------------------------------------------------------------
std::string criterion_determinism() {
  test::TempDir dir("acc_det");
  std::mt19937 rng(1010);

  std::ostringstream dialogues;
  json script;
  const ExtractionConfig extraction;
  for (int i = 0; i < 12; ++i) {
    Dialogue dialogue;
    dialogue.id = "d" + std::to_string(i);
    dialogue.history = {{"A", test::random_phrase(rng, 2, 6)}};
    dialogue.response = {"B", test::random_phrase(rng, 4, 9)};
    dialogues << json{{"id", dialogue.id},
                      {"history", json::array({json{
                                      {"speaker", "A"},
                                      {"text", dialogue.history[0].text}}})},
                      {"response", {{"speaker", "B"},
                                    {"text", dialogue.response.text}}}}
                     .dump()
              << "\n";
    // script a couple of relations per dialogue so scores are non-trivial
    for (int k = 0; k < 2; ++k) {
      const Relation r = all_relations()[(i + k * 5) % kRelationCount];
      const std::string head = "PersonX " + test::random_phrase(rng, 1, 3);
      const std::string tail = "PersonX " + test::random_phrase(rng, 1, 3);
      script[build_extraction_input(dialogue, default_relation_spec(r),
                                    extraction)] =
          json::array({render_extraction_output(head, tail)});
      json beams = json::array();
      for (int b = 0; b < 4; ++b) {
        beams.push_back("PersonX " + test::random_phrase(rng, 1, 3));
      }
      script[build_cskb_query(Event{head}, r)] = beams;
    }
  }
  const auto input = dir.write("dialogues.jsonl", dialogues.str());
  const auto script_path = dir.write("script.json", script.dump());

  const std::string common = " --in " + input.string() +
                             " --backend mock --mock-script " +
                             script_path.string() + " --seed 5";
  const auto out1 = dir.path() / "p1.jsonl";
  const auto out8 = dir.path() / "p8.jsonl";
  require(run_cli("score" + common + " --parallelism 1 --out " + out1.string())
                  .exit_code == 0,
          "parallelism-1 run failed");
  require(run_cli("score" + common + " --parallelism 8 --out " + out8.string())
                  .exit_code == 0,
          "parallelism-8 run failed");
  require(test::read_file(out1) == test::read_file(out8),
          "parallelism changed the output bytes");

  // sanity: the corpus really scored through the compatibility path
  std::istringstream body(test::read_file(out1));
  std::string line;
  bool header = true;
  int scored = 0;
  while (std::getline(body, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const json entry = json::parse(line);
    if (entry.contains("fallback") && entry["fallback"] == false) ++scored;
  }
  require(scored == 12, "expected 12 non-fallback samples, saw " +
                            std::to_string(scored));
  return "parallelism 1 vs 8: byte-identical files, 12 scored samples";
}

// ---------------------------------------------------------------------------
// 11. Optional integration against released model outputs (non-gating).
//     Needs ACCENT_INTEGRATION_DIR with deco_scores.jsonl,
//     deco_annotations.jsonl and optionally deco_dialogues.jsonl +
//     expected_ranking.json. Skipped when the data is absent.
// ---------------------------------------------------------------------------
std::string criterion_integration() {
  const char* dir_env = std::getenv("ACCENT_INTEGRATION_DIR");
  if (!dir_env) {
    throw std::runtime_error("SKIP");  // caught and reported as a skip
  }
  const std::filesystem::path dir(dir_env);

  std::map<std::string, double> scores;
  {
    std::ifstream in(dir / "deco_scores.jsonl");
    if (!in) throw Error("missing deco_scores.jsonl");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json object = json::parse(line);
      if (object.contains("id") && object.contains("score")) {
        scores[object["id"].get<std::string>()] =
            object["score"].get<double>();
      }
    }
  }
  const auto annotations = io::load_annotations(dir / "deco_annotations.jsonl");
  std::vector<double> metric, human;
  for (const auto& fragment : annotations) {
    auto it = scores.find(fragment.id);
    if (it == scores.end()) continue;
    metric.push_back(it->second);
    human.push_back(fragment.mean());
  }
  require(metric.size() >= 50, "too few joined samples for the check");
  const double rho = eval::spearman(metric, human);
  require(std::fabs(rho - 0.30) <= 0.05,
          "spearman " + std::to_string(rho) + " outside 0.30 +/- 0.05");

  std::string detail = "spearman=" + std::to_string(rho);
  const auto ranking_path = dir / "expected_ranking.json";
  const auto dialogues_path = dir / "deco_dialogues.jsonl";
  if (std::filesystem::exists(ranking_path) &&
      std::filesystem::exists(dialogues_path)) {
    std::ifstream in(ranking_path);
    json expected;
    in >> expected;
    std::vector<std::pair<std::string, ScoredResponse>> tagged;
    for (const Dialogue& dialogue : io::load_dialogues(dialogues_path)) {
      auto it = scores.find(dialogue.id);
      if (it == scores.end() || !dialogue.system) continue;
      ScoredResponse response;
      response.dialogue_id = dialogue.id;
      response.score = it->second;
      tagged.emplace_back(*dialogue.system, response);
    }
    const auto ranking = eval::system_ranking(tagged);
    require(ranking.size() == expected.size(), "system count mismatch");
    for (std::size_t i = 0; i < ranking.size(); ++i) {
      require(ranking[i].first == expected[i].get<std::string>(),
              "system ranking order differs at position " + std::to_string(i));
    }
    detail += ", system ranking reproduced";
  }
  return detail;
}

struct Criterion {
  int id;
  std::string name;
  std::function<std::string()> run;
  bool gating;
};

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("ACCENT_CLI")) g_cli_path = env;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--cli") g_cli_path = argv[i + 1];
  }

  const std::vector<Criterion> criteria = {
      {1, "max-similarity-oracle", criterion_similarity_oracle, true},
      {2, "fallback-exactness", criterion_fallback, true},
      {3, "grammar-round-trip", criterion_grammar, true},
      {4, "extraction-call-contract", criterion_call_contract, true},
      {5, "correlation-correctness", criterion_correlation, true},
      {6, "auc-correctness", criterion_auc, true},
      {7, "cskb-search-oracle", criterion_search, true},
      {8, "setup2-gold-identity", criterion_setup2_cli, true},
      {9, "training-data-counts", criterion_training_counts, true},
      {10, "determinism-envelope", criterion_determinism, true},
      {11, "released-model-integration", criterion_integration, false},
  };

  int failed = 0, passed = 0, skipped = 0;
  for (const Criterion& criterion : criteria) {
    try {
      const std::string detail = criterion.run();
      std::cout << "[PASS] " << criterion.id << ". " << criterion.name << ": "
                << detail << "\n";
      ++passed;
    } catch (const std::exception& e) {
      if (std::string(e.what()) == "SKIP") {
        std::cout << "[SKIP] " << criterion.id << ". " << criterion.name
                  << ": requires released model outputs; set "
                     "ACCENT_INTEGRATION_DIR (non-gating)\n";
        ++skipped;
        continue;
      }
      std::cout << (criterion.gating ? "[FAIL] " : "[FAIL, non-gating] ")
                << criterion.id << ". " << criterion.name << ": " << e.what()
                << "\n";
      if (criterion.gating) ++failed;
    }
  }
  std::cout << "RESULT: " << passed << " passed, " << failed << " failed, "
            << skipped << " skipped\n";
  return failed == 0 ? 0 : 1;
}
