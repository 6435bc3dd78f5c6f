#include <doctest.h>

#include <random>

#include "accent/core.hpp"
#include "helpers.hpp"

using namespace accent;

TEST_CASE("relation set is closed, ordered and round-trips") {
  const std::vector<std::string> expected = {
      "xIntent", "xWant",   "oWant",      "xReact",  "oReact",  "xNeed",
      "xAttr",   "xEffect", "oEffect",    "HinderedBy", "IsAfter",
      "HasSubEvent"};
  REQUIRE(all_relations().size() == 12);
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(to_string(all_relations()[i]) == expected[i]);
    CHECK(parse_relation(expected[i]) == all_relations()[i]);
  }
  CHECK_FALSE(parse_relation("xintent").has_value());  // case-sensitive
  CHECK_FALSE(parse_relation("IsBefore").has_value());
  CHECK_FALSE(parse_relation("").has_value());
}

TEST_CASE("default relation specs carry the designed prompts") {
  const auto& specs = default_relation_specs();
  REQUIRE(specs.size() == 12);
  const std::string stem = kPromptStem;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    CHECK(specs[i].relation == all_relations()[i]);  // stable enum order
    CHECK(specs[i].prompt.rfind(stem, 0) == 0);
    CHECK_FALSE(specs[i].query_phrase.empty());
  }

  auto ends_with = [](const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  CHECK(ends_with(default_relation_spec(Relation::xIntent).prompt,
                  "event2 shows PersonX's intent for event1."));
  CHECK(ends_with(default_relation_spec(Relation::xNeed).prompt,
                  "event2 needs to be true for event1 to take place."));
  CHECK(ends_with(default_relation_spec(Relation::HinderedBy).prompt,
                  "event1 fails to happen because event2."));
  CHECK(ends_with(default_relation_spec(Relation::IsAfter).prompt,
                  "event1 happens after event2."));
  CHECK(ends_with(default_relation_spec(Relation::HasSubEvent).prompt,
                  "event1 includes event2."));
  CHECK(default_relation_spec(Relation::oReact).prompt ==
        stem + " event2 shows how PersonY reacts to event1.");
}

TEST_CASE("normalize_event substitutes person tokens") {
  CHECK(normalize_event("I like to paint").text == "PersonX like to paint");
  CHECK(normalize_event("PersonX runs a marathon").text ==
        "PersonX runs a marathon");

  // oracle: token-by-token substitution over the documented pronoun table
  const std::string input = "you called my house";
  std::string expected;
  for (const std::string& token : split_whitespace(input)) {
    std::string mapped = token;
    for (const char* first : {"i", "me", "my", "mine", "we", "our"}) {
      if (to_lower(token) == first) mapped = "PersonX";
    }
    for (const char* second : {"you", "your"}) {
      if (to_lower(token) == second) mapped = "PersonY";
    }
    if (!expected.empty()) expected += ' ';
    expected += mapped;
  }
  CHECK(expected == "PersonY called PersonX house");
  CHECK(normalize_event(input).text == expected);
}

TEST_CASE("normalize_event trims, single-spaces and keeps punctuation") {
  CHECK(normalize_event("  I   like\n to    paint  ").text ==
        "PersonX like to paint");
  CHECK(normalize_event("do you know me?").text == "do PersonY know PersonX?");
  CHECK(normalize_event("one\ntwo").text.find('\n') == std::string::npos);
}

TEST_CASE("normalize_event honors extended rule tables") {
  PersonRules rules = default_person_rules();
  rules["he"] = "PersonY";
  CHECK(normalize_event("he saw me", rules).text == "PersonY saw PersonX");
  // default rules leave third-person tokens verbatim
  CHECK(normalize_event("he saw me").text == "he saw PersonX");
}

TEST_CASE("normalize_event rejects empty input") {
  CHECK_THROWS_AS(normalize_event(""), EmptyEventError);
  CHECK_THROWS_AS(normalize_event("   \t\n"), EmptyEventError);
}

TEST_CASE("normalize_event is idempotent") {
  std::mt19937 rng(7);
  const std::vector<std::string> vocab = {
      "I",    "me",   "you",  "my",   "our", "mine",  "we",     "your",
      "runs", "a",    "the",  "house", "paint", "likes", "to",  "PersonX",
      "me?",  "You!", "it,",  "dog's", "--",  "Mine."};
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  std::uniform_int_distribution<int> length(1, 8);
  for (int i = 0; i < 200; ++i) {
    std::string phrase;
    const int n = length(rng);
    for (int j = 0; j < n; ++j) {
      if (j) phrase += ' ';
      phrase += vocab[pick(rng)];
    }
    const Event once = normalize_event(phrase);
    const Event twice = normalize_event(once.text);
    CHECK(once.text == twice.text);
  }
}

TEST_CASE("truncate_history keeps the most recent suffix") {
  std::vector<Utterance> history;
  for (int i = 0; i < 6; ++i) {
    history.push_back({"A", "utterance " + std::to_string(i)});
  }

  const auto last4 = truncate_history(history, 4);
  REQUIRE(last4.size() == 4);
  CHECK(last4.front().text == "utterance 2");
  CHECK(last4.back().text == "utterance 5");

  const auto short_history = truncate_history(
      std::vector<Utterance>(history.begin(), history.begin() + 2), 4);
  REQUIRE(short_history.size() == 2);
  CHECK(short_history[0].text == "utterance 0");

  const auto last1 = truncate_history(
      std::vector<Utterance>(history.begin(), history.begin() + 4), 1);
  REQUIRE(last1.size() == 1);
  CHECK(last1[0].text == "utterance 3");

  CHECK_THROWS_AS(truncate_history(history, 0), ContractViolation);
}

TEST_CASE("truncate_history output is a contiguous suffix") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> size(0, 10);
  std::uniform_int_distribution<int> max(1, 6);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Utterance> history;
    const int n = size(rng);
    for (int i = 0; i < n; ++i) history.push_back({"A", std::to_string(i)});
    const int m = max(rng);
    const auto out = truncate_history(history, m);
    const std::size_t keep = std::min<std::size_t>(history.size(), m);
    REQUIRE(out.size() == keep);
    for (std::size_t i = 0; i < keep; ++i) {
      CHECK(out[i].text == history[history.size() - keep + i].text);
    }
  }
}

TEST_CASE("scored response invariant is checkable") {
  ScoredResponse fallback{"d1", 0.5, {}, true};
  CHECK(scored_response_consistent(fallback));

  ScoredResponse mismatch{"d1", 0.4, {}, true};
  CHECK_FALSE(scored_response_consistent(mismatch));

  ScoredResponse no_flag{"d1", 0.5, {}, false};
  CHECK_FALSE(scored_response_consistent(no_flag));

  ScoredTuple a, b;
  a.score = 0.2;
  b.score = 0.8;
  ScoredResponse scored{"d2", 0.5, {a, b}, false};
  CHECK(scored_response_consistent(scored));

  scored.score = 0.6;
  CHECK_FALSE(scored_response_consistent(scored));

  scored.score = 0.5;
  scored.used_fallback = true;
  CHECK_FALSE(scored_response_consistent(scored));
}

TEST_CASE("locality names round-trip") {
  for (Locality l : {Locality::Single, Locality::Pair, Locality::External}) {
    CHECK(parse_locality(to_string(l)) == l);
  }
  CHECK_FALSE(parse_locality("single").has_value());
}
