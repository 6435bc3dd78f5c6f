#include "accent/extraction.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_set>

namespace accent {

namespace {

bool ci_equal(const std::string& a, const std::string& b) {
  return to_lower(a) == to_lower(b);
}

std::string trim(const std::string& text) {
  std::size_t begin = 0, end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin])))
    ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1])))
    --end;
  return text.substr(begin, end - begin);
}

// Matches `marker` case-insensitively at `pos` (skipping leading whitespace),
// then an optional whitespace run and a ':'. Returns the index just past the
// colon, or npos.
std::size_t match_marker(const std::string& lower, std::size_t pos,
                         const std::string& marker) {
  while (pos < lower.size() &&
         std::isspace(static_cast<unsigned char>(lower[pos])))
    ++pos;
  if (lower.compare(pos, marker.size(), marker) != 0) return std::string::npos;
  pos += marker.size();
  while (pos < lower.size() &&
         std::isspace(static_cast<unsigned char>(lower[pos])))
    ++pos;
  if (pos >= lower.size() || lower[pos] != ':') return std::string::npos;
  return pos + 1;
}

bool is_person_variable(const std::string& lower_token) {
  return lower_token == "personx" || lower_token == "persony" ||
         lower_token == "personz";
}

// Lowercased, punctuation-stripped tokens with Person variables and
// possessive 's removed. Used only for locality matching.
std::vector<std::string> content_words(const std::string& text) {
  std::vector<std::string> words;
  for (const std::string& raw : split_whitespace(to_lower(text))) {
    std::string token = strip_edge_punct(raw);
    if (token.size() > 2 && token.compare(token.size() - 2, 2, "'s") == 0) {
      token = token.substr(0, token.size() - 2);
    }
    if (token.empty() || is_person_variable(token)) continue;
    words.push_back(token);
  }
  return words;
}

bool event_matches_utterance(const std::string& event_text,
                             const Utterance& utterance, double threshold) {
  const std::vector<std::string> words = content_words(event_text);
  if (words.empty()) return false;
  std::unordered_set<std::string> utterance_words;
  for (const std::string& w : content_words(utterance.text)) {
    utterance_words.insert(w);
  }
  std::size_t hits = 0;
  for (const std::string& w : words) {
    if (utterance_words.count(w)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(words.size()) >=
         threshold;
}

// Deterministic, platform-independent RNG for negative sampling.
std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

void deterministic_shuffle(std::vector<std::size_t>& indices,
                           std::uint64_t seed) {
  std::uint64_t state = seed;
  for (std::size_t i = indices.size(); i > 1; --i) {
    const std::size_t j =
        static_cast<std::size_t>(splitmix64(state) % static_cast<std::uint64_t>(i));
    std::swap(indices[i - 1], indices[j]);
  }
}

}  // namespace

void validate(const ExtractionConfig& config) {
  if (config.max_history < 1) {
    throw ContractViolation("ExtractionConfig: max_history must be >= 1");
  }
  if (config.relation_specs.size() != static_cast<std::size_t>(kRelationCount)) {
    throw ContractViolation("ExtractionConfig: expected 12 relation specs, got " +
                            std::to_string(config.relation_specs.size()));
  }
  std::set<Relation> seen;
  for (const RelationSpec& spec : config.relation_specs) {
    if (!seen.insert(spec.relation).second) {
      throw ContractViolation("ExtractionConfig: duplicate spec for relation " +
                              to_string(spec.relation));
    }
  }
}

std::string serialize_dialogue(const Dialogue& dialogue,
                               const ExtractionConfig& config) {
  const DialogueTemplate& tpl = config.dialogue_template;
  std::vector<Utterance> lines;
  if (tpl.include_history) {
    lines = truncate_history(dialogue.history, config.max_history);
  }
  lines.push_back(dialogue.response);

  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string speaker = lines[i].speaker;
    if (speaker.empty() && !config.speaker_labels.empty()) {
      speaker = config.speaker_labels[i % config.speaker_labels.size()];
    }
    if (i > 0) out += tpl.utterance_separator;
    if (!speaker.empty()) out += speaker + tpl.speaker_delimiter;
    out += collapse_whitespace(lines[i].text);
  }
  return out;
}

std::string build_extraction_input(const Dialogue& dialogue,
                                   const RelationSpec& spec,
                                   const ExtractionConfig& config) {
  return spec.prompt + " " + serialize_dialogue(dialogue, config);
}

ParsedExtraction parse_extraction_output(const std::string& raw) {
  const std::string trimmed = trim(raw);
  if (ci_equal(trimmed, "none")) {
    return {ParsedExtraction::Kind::None, "", ""};
  }
  const std::string lower = to_lower(trimmed);

  const std::size_t head_start = match_marker(lower, 0, "event1");
  if (head_start == std::string::npos) return {};

  // First ';' followed by the event2 marker splits head from tail.
  std::size_t sep = std::string::npos;
  std::size_t tail_start = std::string::npos;
  for (std::size_t i = head_start; i < lower.size(); ++i) {
    if (lower[i] != ';') continue;
    const std::size_t after = match_marker(lower, i + 1, "event2");
    if (after != std::string::npos) {
      sep = i;
      tail_start = after;
      break;
    }
  }
  if (sep == std::string::npos) return {};

  const std::string head = trim(trimmed.substr(head_start, sep - head_start));
  const std::string tail = trim(trimmed.substr(tail_start));
  if (head.empty() || tail.empty()) return {};
  return {ParsedExtraction::Kind::Tuple, head, tail};
}

std::string render_extraction_output(const std::string& head,
                                     const std::string& tail) {
  return "event1: " + head + "; event2: " + tail;
}

Locality classify_locality(const EventRelationTuple& tuple,
                           const Dialogue& dialogue, double threshold) {
  if (threshold <= 0.0 || threshold > 1.0) {
    throw ContractViolation("classify_locality: threshold must be in (0,1]");
  }
  const Utterance& response = dialogue.response;
  const bool head_in_response =
      event_matches_utterance(tuple.head.text, response, threshold);
  const bool tail_in_response =
      event_matches_utterance(tuple.tail.text, response, threshold);
  if (head_in_response && tail_in_response) return Locality::Single;

  if (!dialogue.history.empty()) {
    const Utterance& previous = dialogue.history.back();
    const bool head_in_previous =
        event_matches_utterance(tuple.head.text, previous, threshold);
    const bool tail_in_previous =
        event_matches_utterance(tuple.tail.text, previous, threshold);
    if ((head_in_response && tail_in_previous) ||
        (tail_in_response && head_in_previous)) {
      return Locality::Pair;
    }
  }
  return Locality::External;
}

std::vector<EventRelationTuple> extract_tuples(const Dialogue& dialogue,
                                               GenerationBackend& generator,
                                               const ExtractionConfig& config) {
  validate(config);
  std::vector<EventRelationTuple> tuples;
  for (const RelationSpec& spec : config.relation_specs) {
    GenerationRequest request;
    request.input_text = build_extraction_input(dialogue, spec, config);
    request.num_return_sequences = 1;
    request.max_output_tokens = config.max_output_tokens;

    GenerationResult result;
    try {
      result = generator.generate(request);
    } catch (const BackendError& e) {
      throw BackendError("extraction for relation " + to_string(spec.relation) +
                         " failed: " + e.what());
    }
    if (result.sequences.empty()) continue;

    const ParsedExtraction parsed =
        parse_extraction_output(result.sequences.front());
    if (parsed.kind != ParsedExtraction::Kind::Tuple) continue;

    EventRelationTuple tuple{Event{parsed.head}, spec.relation,
                             Event{parsed.tail}, std::nullopt};
    tuple.locality =
        classify_locality(tuple, dialogue, config.locality_threshold);
    tuples.push_back(std::move(tuple));
  }
  return tuples;
}

int TrainingData::shortfall_total() const {
  int total = 0;
  for (const auto& [relation, count] : negative_shortfall) total += count;
  return total;
}

TrainingData prepare_training_examples(
    const std::vector<GoldSample>& samples, const ExtractionConfig& config,
    int negatives_per_relation, std::optional<LocalityFilter> locality_filter,
    std::uint64_t seed) {
  validate(config);
  if (negatives_per_relation < 0) {
    throw ContractViolation("negatives_per_relation must be >= 0");
  }

  auto survives = [&](const EventRelationTuple& tuple) {
    if (!locality_filter || *locality_filter == LocalityFilter::Both)
      return true;
    if (!tuple.locality) return false;  // unlabeled tuples cannot pass a filter
    return *locality_filter == LocalityFilter::SingleOnly
               ? *tuple.locality == Locality::Single
               : *tuple.locality == Locality::Pair;
  };

  // Relation presence per sample, computed over the surviving tuples: a
  // dialogue whose only tuple for r was filtered out counts as lacking r
  // for this training run.
  std::vector<std::set<Relation>> has_relation(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (const EventRelationTuple& tuple : samples[i].tuples) {
      if (survives(tuple)) has_relation[i].insert(tuple.relation);
    }
  }

  TrainingData data;
  for (const RelationSpec& spec : config.relation_specs) {
    const Relation relation = spec.relation;

    for (std::size_t i = 0; i < samples.size(); ++i) {
      for (const EventRelationTuple& tuple : samples[i].tuples) {
        if (tuple.relation != relation || !survives(tuple)) continue;
        TrainingExample example;
        example.source_text =
            build_extraction_input(samples[i].dialogue, spec, config);
        example.target_text =
            render_extraction_output(tuple.head.text, tuple.tail.text);
        example.relation = relation;
        example.is_negative = false;
        data.examples.push_back(std::move(example));
      }
    }

    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (!has_relation[i].count(relation)) candidates.push_back(i);
    }
    deterministic_shuffle(candidates,
                          seed ^ fnv1a64(to_string(relation)));
    const std::size_t want = static_cast<std::size_t>(negatives_per_relation);
    const std::size_t take = std::min(candidates.size(), want);
    for (std::size_t c = 0; c < take; ++c) {
      TrainingExample example;
      example.source_text =
          build_extraction_input(samples[candidates[c]].dialogue, spec, config);
      example.target_text = "None";
      example.relation = relation;
      example.is_negative = true;
      data.examples.push_back(std::move(example));
    }
    if (take < want) {
      data.negative_shortfall[relation] = static_cast<int>(want - take);
    }
  }
  return data;
}

}  // namespace accent
