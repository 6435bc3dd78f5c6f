#include "accent/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <unordered_map>

namespace accent {

const std::array<Relation, kRelationCount>& all_relations() {
  static const std::array<Relation, kRelationCount> relations = {
      Relation::xIntent,    Relation::xWant,   Relation::oWant,
      Relation::xReact,     Relation::oReact,  Relation::xNeed,
      Relation::xAttr,      Relation::xEffect, Relation::oEffect,
      Relation::HinderedBy, Relation::IsAfter, Relation::HasSubEvent,
  };
  return relations;
}

std::string to_string(Relation relation) {
  switch (relation) {
    case Relation::xIntent: return "xIntent";
    case Relation::xWant: return "xWant";
    case Relation::oWant: return "oWant";
    case Relation::xReact: return "xReact";
    case Relation::oReact: return "oReact";
    case Relation::xNeed: return "xNeed";
    case Relation::xAttr: return "xAttr";
    case Relation::xEffect: return "xEffect";
    case Relation::oEffect: return "oEffect";
    case Relation::HinderedBy: return "HinderedBy";
    case Relation::IsAfter: return "IsAfter";
    case Relation::HasSubEvent: return "HasSubEvent";
  }
  throw ContractViolation("unknown Relation value");
}

std::optional<Relation> parse_relation(const std::string& name) {
  static const std::unordered_map<std::string, Relation> table = [] {
    std::unordered_map<std::string, Relation> t;
    for (Relation r : all_relations()) t.emplace(to_string(r), r);
    return t;
  }();
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

const std::vector<RelationSpec>& default_relation_specs() {
  static const std::vector<RelationSpec> specs = [] {
    const std::string stem = std::string(kPromptStem) + " ";
    std::vector<RelationSpec> s;
    s.push_back({Relation::xIntent,
                 stem + "event2 shows PersonX's intent for event1.",
                 "because PersonX wanted"});
    s.push_back({Relation::xWant,
                 stem + "event2 shows what PersonX wants after event1 happens.",
                 "as a result, PersonX wants"});
    s.push_back({Relation::oWant,
                 stem + "event2 shows what PersonY wants after event1 happens.",
                 "as a result, Y or others wants"});
    s.push_back({Relation::xReact,
                 stem + "event2 shows how PersonX reacts to event1.",
                 "as a result, PersonX feels"});
    s.push_back({Relation::oReact,
                 stem + "event2 shows how PersonY reacts to event1.",
                 "as a result, Y or others feels"});
    s.push_back({Relation::xNeed,
                 stem + "event2 needs to be true for event1 to take place.",
                 "but before, PersonX needed"});
    s.push_back({Relation::xAttr,
                 stem + "event2 shows how PersonX is viewed as after event1.",
                 "X is seen as"});
    s.push_back({Relation::xEffect,
                 stem + "event2 shows the effect of event1 on PersonX.",
                 "as a result, PersonX will"});
    s.push_back({Relation::oEffect,
                 stem + "event2 shows the effect of event1 on PersonY.",
                 "as a result, Y or others will"});
    s.push_back({Relation::HinderedBy,
                 stem + "event1 fails to happen because event2.",
                 "can be hindered by"});
    s.push_back({Relation::IsAfter,
                 stem + "event1 happens after event2.",
                 "happens after"});
    s.push_back({Relation::HasSubEvent,
                 stem + "event1 includes event2.",
                 "includes the event/action"});
    return s;
  }();
  return specs;
}

const RelationSpec& default_relation_spec(Relation relation) {
  return default_relation_specs()[static_cast<std::size_t>(relation)];
}

std::vector<Utterance> truncate_history(const std::vector<Utterance>& history,
                                        int max_history) {
  if (max_history < 1) throw ContractViolation("max_history must be >= 1");
  const std::size_t keep =
      std::min(history.size(), static_cast<std::size_t>(max_history));
  return {history.end() - static_cast<std::ptrdiff_t>(keep), history.end()};
}

std::string to_string(Locality locality) {
  switch (locality) {
    case Locality::Single: return "Single";
    case Locality::Pair: return "Pair";
    case Locality::External: return "External";
  }
  throw ContractViolation("unknown Locality value");
}

std::optional<Locality> parse_locality(const std::string& name) {
  if (name == "Single") return Locality::Single;
  if (name == "Pair") return Locality::Pair;
  if (name == "External") return Locality::External;
  return std::nullopt;
}

bool scored_response_consistent(const ScoredResponse& response,
                                double fallback) {
  if (response.score < 0.0 || response.score > 1.0) return false;
  if (response.tuples.empty()) {
    return response.used_fallback && response.score == fallback;
  }
  if (response.used_fallback) return false;
  double sum = 0.0;
  for (const ScoredTuple& t : response.tuples) sum += t.score;
  return std::fabs(response.score - sum / response.tuples.size()) <= 1e-9;
}

const PersonRules& default_person_rules() {
  static const PersonRules rules = {
      {"i", "PersonX"},    {"me", "PersonX"},  {"my", "PersonX"},
      {"mine", "PersonX"}, {"we", "PersonX"},  {"our", "PersonX"},
      {"you", "PersonY"},  {"your", "PersonY"},
  };
  return rules;
}

Event normalize_event(const std::string& raw, const PersonRules& rules) {
  std::vector<std::string> tokens = split_whitespace(raw);
  if (tokens.empty()) throw EmptyEventError("cannot normalize an empty event");
  std::string out;
  for (std::string& token : tokens) {
    // Match on the token core so "me?" still normalizes, keeping the
    // surrounding punctuation in place.
    const std::string core = strip_edge_punct(token);
    auto it = rules.find(to_lower(core));
    if (it != rules.end() && !core.empty()) {
      const std::size_t start = token.find(core);
      token = token.substr(0, start) + it->second +
              token.substr(start + core.size());
    }
    if (!out.empty()) out += ' ';
    out += token;
  }
  return Event{out};
}

std::string collapse_whitespace(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  bool in_space = true;  // swallow leading whitespace
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      in_space = true;
    } else {
      if (in_space && !out.empty()) out += ' ';
      out += c;
      in_space = false;
    }
  }
  return out;
}

std::vector<std::string> split_whitespace(const std::string& text) {
  std::vector<std::string> tokens;
  std::istringstream in(text);
  std::string token;
  while (in >> token) tokens.push_back(token);
  return tokens;
}

std::string to_lower(const std::string& text) {
  std::string out = text;
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

std::string strip_edge_punct(const std::string& token) {
  std::size_t begin = 0;
  std::size_t end = token.size();
  while (begin < end &&
         !std::isalnum(static_cast<unsigned char>(token[begin]))) {
    ++begin;
  }
  while (end > begin &&
         !std::isalnum(static_cast<unsigned char>(token[end - 1]))) {
    --end;
  }
  return token.substr(begin, end - begin);
}

}  // namespace accent
