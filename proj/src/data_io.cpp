#include "accent/data_io.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace accent::io {

using nlohmann::json;

namespace {

json parse_line(const std::string& line, int line_number) {
  try {
    return json::parse(line);
  } catch (const json::exception& e) {
    throw LoadError(std::string("invalid JSON: ") + e.what(), line_number);
  }
}

std::string require_string(const json& object, const char* key,
                           int line_number) {
  if (!object.contains(key) || !object[key].is_string()) {
    throw LoadError(std::string("missing or non-string field \"") + key + "\"",
                    line_number);
  }
  return object[key].get<std::string>();
}

Utterance parse_utterance(const json& object, int line_number) {
  if (!object.is_object()) {
    throw LoadError("utterance must be an object", line_number);
  }
  Utterance utterance;
  if (object.contains("speaker")) {
    if (!object["speaker"].is_string()) {
      throw LoadError("utterance \"speaker\" must be a string", line_number);
    }
    utterance.speaker = object["speaker"].get<std::string>();
  }
  utterance.text = require_string(object, "text", line_number);
  if (collapse_whitespace(utterance.text).empty()) {
    throw LoadError("utterance \"text\" is empty", line_number);
  }
  return utterance;
}

// Iterates non-empty lines of a JSONL file, 1-based line numbers.
template <typename Fn>
void for_each_line(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) {
    throw LoadError("cannot open " + path.string());
  }
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    fn(line, line_number);
  }
}

}  // namespace

std::string to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::Blocklisted: return "blocklisted";
    case RejectReason::MinWords: return "min_words";
    case RejectReason::AllInterrogative: return "all_interrogative";
  }
  throw ContractViolation("unknown RejectReason value");
}

std::vector<std::string> split_sentences(const std::string& text) {
  std::vector<std::string> sentences;
  std::string current;
  for (std::size_t i = 0; i < text.size(); ++i) {
    current += text[i];
    if (text[i] == '.' || text[i] == '!' || text[i] == '?') {
      // swallow a terminal punctuation run ("?!", "...")
      while (i + 1 < text.size() &&
             (text[i + 1] == '.' || text[i + 1] == '!' || text[i + 1] == '?')) {
        current += text[++i];
      }
      const bool boundary =
          i + 1 >= text.size() ||
          std::isspace(static_cast<unsigned char>(text[i + 1]));
      if (boundary) {
        const std::string sentence = collapse_whitespace(current);
        if (!sentence.empty()) sentences.push_back(sentence);
        current.clear();
      }
    }
  }
  const std::string rest = collapse_whitespace(current);
  if (!rest.empty()) sentences.push_back(rest);
  return sentences;
}

FilterResult filter_corpus(const std::vector<Dialogue>& dialogues,
                           const CorpusFilterConfig& config) {
  if (config.min_response_words < 1) {
    throw ContractViolation("CorpusFilterConfig: min_response_words must be >= 1");
  }
  FilterResult result;
  for (const Dialogue& dialogue : dialogues) {
    if (config.id_blocklist.count(dialogue.id)) {
      result.rejected.push_back({dialogue, RejectReason::Blocklisted});
      continue;
    }
    if (config.require_non_interrogative) {
      bool has_non_interrogative = false;
      for (const std::string& sentence :
           split_sentences(dialogue.response.text)) {
        if (sentence.back() != '?') {
          has_non_interrogative = true;
          break;
        }
      }
      if (!has_non_interrogative) {
        result.rejected.push_back({dialogue, RejectReason::AllInterrogative});
        continue;
      }
    }
    const std::size_t words = split_whitespace(dialogue.response.text).size();
    if (words < static_cast<std::size_t>(config.min_response_words)) {
      result.rejected.push_back({dialogue, RejectReason::MinWords});
      continue;
    }
    Dialogue kept = dialogue;
    kept.history = truncate_history(kept.history, config.max_history);
    result.kept.push_back(std::move(kept));
  }
  return result;
}

std::vector<Dialogue> load_dialogues(const std::filesystem::path& path) {
  std::vector<Dialogue> dialogues;
  std::set<std::string> seen_ids;
  for_each_line(path, [&](const std::string& line, int line_number) {
    const json object = parse_line(line, line_number);
    Dialogue dialogue;
    dialogue.id = require_string(object, "id", line_number);
    if (!seen_ids.insert(dialogue.id).second) {
      throw LoadError("duplicate dialogue id \"" + dialogue.id + "\"",
                      line_number);
    }
    if (object.contains("history")) {
      if (!object["history"].is_array()) {
        throw LoadError("\"history\" must be an array", line_number);
      }
      for (const json& utterance : object["history"]) {
        dialogue.history.push_back(parse_utterance(utterance, line_number));
      }
    }
    if (!object.contains("response")) {
      throw LoadError("missing field \"response\"", line_number);
    }
    dialogue.response = parse_utterance(object["response"], line_number);
    if (object.contains("system") && object["system"].is_string()) {
      dialogue.system = object["system"].get<std::string>();
    }
    if (object.contains("source") && object["source"].is_string()) {
      dialogue.source = object["source"].get<std::string>();
    }
    dialogues.push_back(std::move(dialogue));
  });
  return dialogues;
}

double AnnotationFragment::mean() const {
  if (scores.empty()) return 0.0;
  double sum = 0.0;
  for (double s : scores) sum += s;
  return sum / static_cast<double>(scores.size());
}

std::vector<AnnotationFragment> load_annotations(
    const std::filesystem::path& path) {
  std::vector<AnnotationFragment> fragments;
  std::set<std::string> seen_ids;
  for_each_line(path, [&](const std::string& line, int line_number) {
    const json object = parse_line(line, line_number);
    AnnotationFragment fragment;
    fragment.id = require_string(object, "id", line_number);
    if (!seen_ids.insert(fragment.id).second) {
      throw LoadError("duplicate annotation id \"" + fragment.id + "\"",
                      line_number);
    }
    if (!object.contains("scores") || !object["scores"].is_array() ||
        object["scores"].empty()) {
      throw LoadError("missing or empty \"scores\" array", line_number);
    }
    for (const json& score : object["scores"]) {
      if (!score.is_number()) {
        throw LoadError("scores must be numbers", line_number);
      }
      const double value = score.get<double>();
      if (value < 1.0 || value > 5.0) {
        throw LoadError("score " + std::to_string(value) +
                            " outside the 1-5 scale",
                        line_number);
      }
      fragment.scores.push_back(value);
    }
    fragments.push_back(std::move(fragment));
  });
  return fragments;
}

std::vector<GoldTupleRecord> load_gold_tuples(
    const std::filesystem::path& path) {
  std::vector<GoldTupleRecord> records;
  for_each_line(path, [&](const std::string& line, int line_number) {
    const json object = parse_line(line, line_number);
    // tuple files written by this tool start with a header object and may
    // carry per-sample error entries; both are metadata, not tuples
    if (line_number == 1 && object.is_object() &&
        object.contains("config_hash") && !object.contains("id")) {
      return;
    }
    if (object.is_object() && object.contains("error") &&
        !object.contains("head")) {
      return;
    }
    GoldTupleRecord record;
    record.id = require_string(object, "id", line_number);
    record.tuple.head.text = require_string(object, "head", line_number);
    record.tuple.tail.text = require_string(object, "tail", line_number);
    const std::string relation = require_string(object, "relation", line_number);
    const auto parsed = parse_relation(relation);
    if (!parsed) {
      throw LoadError("unknown relation \"" + relation + "\"", line_number);
    }
    record.tuple.relation = *parsed;
    if (object.contains("locality")) {
      const std::string locality =
          require_string(object, "locality", line_number);
      const auto parsed_locality = parse_locality(locality);
      if (!parsed_locality) {
        throw LoadError("unknown locality \"" + locality + "\"", line_number);
      }
      record.tuple.locality = parsed_locality;
    }
    if (record.tuple.head.text.empty() || record.tuple.tail.text.empty()) {
      throw LoadError("head and tail must be non-empty", line_number);
    }
    records.push_back(std::move(record));
  });
  return records;
}

std::vector<eval::LabeledTriple> load_labeled_triples(
    const std::filesystem::path& path, RelationMode mode) {
  std::vector<eval::LabeledTriple> triples;
  for_each_line(path, [&](const std::string& line, int line_number) {
    const json object = parse_line(line, line_number);
    eval::LabeledTriple triple;
    triple.head = require_string(object, "head", line_number);
    triple.tail = require_string(object, "tail", line_number);
    triple.relation_tag = require_string(object, "relation", line_number);
    triple.relation = parse_relation(triple.relation_tag);
    if (!triple.relation && mode == RelationMode::Strict) {
      throw LoadError("unknown relation \"" + triple.relation_tag + "\"",
                      line_number);
    }
    if (!object.contains("label") || !object["label"].is_number_integer()) {
      throw LoadError("missing or non-integer \"label\"", line_number);
    }
    triple.label = object["label"].get<int>();
    if (triple.label != 0 && triple.label != 1) {
      throw LoadError("label must be 0 or 1", line_number);
    }
    triples.push_back(std::move(triple));
  });
  return triples;
}

StaticCSKB load_kb(const std::filesystem::path& path,
                   const KbLoadOptions& options) {
  std::vector<EventRelationTuple> tuples;
  for_each_line(path, [&](const std::string& line, int line_number) {
    const json object = parse_line(line, line_number);
    EventRelationTuple tuple;
    tuple.head.text = require_string(object, "head", line_number);
    tuple.tail.text = require_string(object, "tail", line_number);
    const std::string relation = require_string(object, "relation", line_number);
    const auto parsed = parse_relation(relation);
    if (!parsed) {
      if (options.relation_mode == RelationMode::Strict) {
        throw LoadError("unknown relation \"" + relation + "\"", line_number);
      }
      return;  // pass-through mode: skip tuples outside the closed set
    }
    tuple.relation = *parsed;
    tuples.push_back(std::move(tuple));
  });
  return StaticCSKB::build(std::move(tuples));
}

namespace {

json utterance_to_json(const Utterance& utterance) {
  return json{{"speaker", utterance.speaker}, {"text", utterance.text}};
}

}  // namespace

std::string dialogue_to_json_line(const Dialogue& dialogue) {
  json object;
  object["id"] = dialogue.id;
  json history = json::array();
  for (const Utterance& utterance : dialogue.history) {
    history.push_back(utterance_to_json(utterance));
  }
  object["history"] = std::move(history);
  object["response"] = utterance_to_json(dialogue.response);
  if (dialogue.system) object["system"] = *dialogue.system;
  if (dialogue.source) object["source"] = *dialogue.source;
  return object.dump();
}

std::string scored_response_to_json_line(const ScoredResponse& response) {
  json object;
  object["id"] = response.dialogue_id;
  object["score"] = response.score;
  object["fallback"] = response.used_fallback;
  json tuples = json::array();
  for (const ScoredTuple& scored : response.tuples) {
    json tuple;
    tuple["head"] = scored.tuple.head.text;
    tuple["relation"] = to_string(scored.tuple.relation);
    tuple["tail"] = scored.tuple.tail.text;
    tuple["locality"] = scored.tuple.locality
                            ? to_string(*scored.tuple.locality)
                            : "";
    tuple["score"] = scored.score;
    tuple["best_tail"] = scored.best_generated_tail;
    tuples.push_back(std::move(tuple));
  }
  object["tuples"] = std::move(tuples);
  return object.dump();
}

ScoredResponse scored_response_from_json_line(const std::string& line) {
  const json object = parse_line(line, -1);
  ScoredResponse response;
  response.dialogue_id = require_string(object, "id", -1);
  if (!object.contains("score") || !object["score"].is_number()) {
    throw LoadError("missing numeric \"score\"");
  }
  response.score = object["score"].get<double>();
  response.used_fallback =
      object.contains("fallback") && object["fallback"].is_boolean() &&
      object["fallback"].get<bool>();
  if (object.contains("tuples") && object["tuples"].is_array()) {
    for (const json& tuple : object["tuples"]) {
      ScoredTuple scored;
      scored.tuple.head.text = require_string(tuple, "head", -1);
      scored.tuple.tail.text = require_string(tuple, "tail", -1);
      const auto relation =
          parse_relation(require_string(tuple, "relation", -1));
      if (!relation) throw LoadError("unknown relation in scored tuple");
      scored.tuple.relation = *relation;
      if (tuple.contains("locality") && tuple["locality"].is_string()) {
        scored.tuple.locality =
            parse_locality(tuple["locality"].get<std::string>());
      }
      if (tuple.contains("score") && tuple["score"].is_number()) {
        scored.score = tuple["score"].get<double>();
      }
      if (tuple.contains("best_tail") && tuple["best_tail"].is_string()) {
        scored.best_generated_tail = tuple["best_tail"].get<std::string>();
      }
      response.tuples.push_back(std::move(scored));
    }
  }
  return response;
}

std::string tuple_to_json_line(const std::string& dialogue_id,
                               const EventRelationTuple& tuple) {
  json object;
  object["id"] = dialogue_id;
  object["head"] = tuple.head.text;
  object["relation"] = to_string(tuple.relation);
  object["tail"] = tuple.tail.text;
  if (tuple.locality) object["locality"] = to_string(*tuple.locality);
  return object.dump();
}

void save_dialogues(const std::filesystem::path& path,
                    const std::vector<Dialogue>& dialogues) {
  std::ofstream out(path);
  if (!out) throw LoadError("cannot write " + path.string());
  for (const Dialogue& dialogue : dialogues) {
    out << dialogue_to_json_line(dialogue) << "\n";
  }
}

}  // namespace accent::io
