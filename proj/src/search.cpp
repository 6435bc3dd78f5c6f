#include "accent/search.hpp"

#include <algorithm>
#include <cctype>

namespace accent {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

// running -> runn -> run; stopped -> stopp -> stop
void undouble(std::string& stem) {
  if (stem.size() >= 2 && stem[stem.size() - 1] == stem[stem.size() - 2] &&
      !is_vowel(stem.back())) {
    stem.pop_back();
  }
}

bool all_digits(const std::string& token) {
  for (char c : token) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return !token.empty();
}

}  // namespace

std::string SuffixLemmatizer::lemma(const std::string& token) const {
  const std::string w = to_lower(token);
  if (w.size() <= 3) return w;

  if (ends_with(w, "ies") && w.size() > 4) {
    return w.substr(0, w.size() - 3) + "y";
  }
  if (ends_with(w, "sses")) {
    return w.substr(0, w.size() - 2);
  }
  if (ends_with(w, "ches") || ends_with(w, "shes") || ends_with(w, "xes") ||
      ends_with(w, "zes")) {
    return w.substr(0, w.size() - 2);
  }
  if (ends_with(w, "ing") && w.size() >= 6) {
    std::string stem = w.substr(0, w.size() - 3);
    undouble(stem);
    return stem.size() >= 3 ? stem : w;
  }
  if (ends_with(w, "ed") && w.size() >= 5) {
    std::string stem = w.substr(0, w.size() - 2);
    undouble(stem);
    return stem.size() >= 3 ? stem : w;
  }
  if (ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us") &&
      !ends_with(w, "is")) {
    return w.substr(0, w.size() - 1);
  }
  return w;
}

WordClass LexiconTagger::tag(const std::string& token) const {
  static const std::set<std::string> closed_class = {
      // conjunctions, prepositions, determiners, pronouns, auxiliaries
      "and",  "or",    "but",  "if",   "so",   "the",  "a",     "an",
      "of",   "to",    "in",   "on",   "at",   "by",   "for",   "with",
      "from", "as",    "into", "onto", "over", "under", "about", "than",
      "i",    "me",    "my",   "you",  "your", "he",   "she",   "it",
      "we",   "they",  "them", "his",  "her",  "its",  "their", "this",
      "that", "these", "those", "who",  "what", "when", "where", "why",
      "how",  "be",    "am",   "is",   "are",  "was",  "were",  "been",
      "being", "do",   "does", "did",  "have", "has",  "had",   "will",
      "would", "can",  "could", "shall", "should", "may", "might", "must",
      "not",  "no",    "yes",  "oh",   "ah",   "hey",  "hi",    "lol",
      "yeah", "ok",    "okay", "please", "thanks",
  };
  static const std::set<std::string> verbs = {
      "like",  "love",  "hate",  "want",  "need",  "go",    "get",  "make",
      "take",  "give",  "come",  "see",   "know",  "think", "feel", "say",
      "tell",  "ask",   "call",  "eat",   "drink", "run",   "walk", "paint",
      "play",  "work",  "live",  "help",  "try",   "use",   "find", "keep",
      "let",   "put",   "talk",  "look",  "watch", "buy",   "sell", "read",
      "write", "sing",  "dance", "cook",  "bake",  "clean", "drive", "ride",
      "swim",  "sleep", "wake",  "meet",  "leave", "stay",  "wear", "win",
      "lose",  "start", "stop",  "begin", "end",   "open",  "close",
  };
  static const std::set<std::string> adjectives = {
      "good",   "bad",    "happy", "sad",    "big",    "small", "old",
      "new",    "young",  "full",  "empty",  "healthy", "sick",  "hot",
      "cold",   "warm",   "cool",  "nice",   "great",  "fine",  "funny",
      "tired",  "hungry", "angry", "scared", "proud",  "sure",  "ready",
      "busy",   "free",   "long",  "short",  "high",   "low",   "fast",
      "slow",   "easy",   "hard",  "early",  "late",   "rich",  "poor",
      "strong", "weak",   "clean", "dirty",  "beautiful", "ugly",
  };

  const std::string w = to_lower(token);
  if (w.empty() || all_digits(w)) return WordClass::Other;
  if (closed_class.count(w)) return WordClass::Other;
  if (w.size() > 3 && ends_with(w, "ly")) return WordClass::Other;  // adverb
  if (verbs.count(w)) return WordClass::Verb;
  if (adjectives.count(w)) return WordClass::Adjective;
  return WordClass::Noun;  // unknown open-class words default to noun
}

const std::set<std::string>& default_stopwords() {
  static const std::set<std::string> words = {
      "a",       "about",   "above",  "after",   "again",    "all",
      "am",      "an",      "and",    "any",     "are",      "as",
      "at",      "be",      "because", "been",   "before",   "being",
      "below",   "between", "both",   "but",     "by",       "could",
      "did",     "do",      "does",   "doing",   "down",     "during",
      "each",    "few",     "for",    "from",    "further",  "had",
      "has",     "have",    "having", "he",      "her",      "here",
      "hers",    "herself", "him",    "himself", "his",      "how",
      "i",       "if",      "in",     "into",    "is",       "it",
      "its",     "itself",  "just",   "me",      "more",     "most",
      "my",      "myself",  "no",     "nor",     "not",      "now",
      "of",      "off",     "on",     "once",    "only",     "or",
      "other",   "our",     "ours",   "ourselves", "out",    "over",
      "own",     "same",    "she",    "should",  "so",       "some",
      "such",    "than",    "that",   "the",     "their",    "theirs",
      "them",    "themselves", "then", "there",  "these",    "they",
      "this",    "those",   "through", "to",     "too",      "under",
      "until",   "up",      "very",   "was",     "we",       "were",
      "what",    "when",    "where",  "which",   "while",    "who",
      "whom",    "why",     "will",   "with",    "you",      "your",
      "yours",   "yourself", "yourselves",
  };
  return words;
}

std::vector<std::string> index_terms(const std::string& text,
                                     const Lemmatizer& lemmatizer,
                                     const std::set<std::string>& stopwords) {
  std::vector<std::string> terms;
  for (const std::string& raw : split_whitespace(to_lower(text))) {
    const std::string token = strip_edge_punct(raw);
    if (token.empty() || stopwords.count(token)) continue;
    const std::string lemma = lemmatizer.lemma(token);
    if (lemma.empty() || stopwords.count(lemma)) continue;
    terms.push_back(lemma);
  }
  return terms;
}

ConceptSet build_concept_set(const std::vector<std::string>& utterances,
                             const Tagger& tagger,
                             const std::set<std::string>& stopwords,
                             const Lemmatizer& lemmatizer) {
  ConceptSet concepts;
  for (const std::string& utterance : utterances) {
    for (const std::string& raw : split_whitespace(to_lower(utterance))) {
      const std::string token = strip_edge_punct(raw);
      if (token.empty() || stopwords.count(token)) continue;
      const WordClass word_class = tagger.tag(token);
      if (word_class != WordClass::Noun && word_class != WordClass::Verb &&
          word_class != WordClass::Adjective) {
        continue;
      }
      const std::string lemma = lemmatizer.lemma(token);
      if (lemma.empty() || stopwords.count(lemma)) continue;
      concepts.words.insert(lemma);
    }
  }
  return concepts;
}

ConceptSet build_concept_set(const std::vector<std::string>& utterances) {
  return build_concept_set(utterances, LexiconTagger{}, default_stopwords(),
                           SuffixLemmatizer{});
}

StaticCSKB StaticCSKB::build(std::vector<EventRelationTuple> tuples,
                             const Lemmatizer& lemmatizer,
                             const std::set<std::string>& stopwords) {
  StaticCSKB kb;
  kb.tuples_ = std::move(tuples);
  for (std::uint32_t id = 0; id < kb.tuples_.size(); ++id) {
    for (const std::string& term :
         index_terms(kb.tuples_[id].head.text, lemmatizer, stopwords)) {
      auto& postings = kb.head_index_[term];
      if (postings.empty() || postings.back() != id) postings.push_back(id);
    }
    for (const std::string& term :
         index_terms(kb.tuples_[id].tail.text, lemmatizer, stopwords)) {
      auto& postings = kb.tail_index_[term];
      if (postings.empty() || postings.back() != id) postings.push_back(id);
    }
  }
  return kb;
}

StaticCSKB StaticCSKB::build(std::vector<EventRelationTuple> tuples) {
  return build(std::move(tuples), SuffixLemmatizer{}, default_stopwords());
}

std::vector<EventRelationTuple> search_tuples(const StaticCSKB& kb,
                                              const ConceptSet& concepts) {
  if (concepts.words.empty()) return {};

  std::vector<std::uint8_t> head_hit(kb.size(), 0);
  std::vector<std::uint8_t> tail_hit(kb.size(), 0);
  for (const std::string& word : concepts.words) {
    if (auto it = kb.head_index().find(word); it != kb.head_index().end()) {
      for (std::uint32_t id : it->second) head_hit[id] = 1;
    }
    if (auto it = kb.tail_index().find(word); it != kb.tail_index().end()) {
      for (std::uint32_t id : it->second) tail_hit[id] = 1;
    }
  }

  std::vector<EventRelationTuple> result;
  for (std::size_t id = 0; id < kb.size(); ++id) {
    if (head_hit[id] && tail_hit[id]) result.push_back(kb.tuples()[id]);
  }
  return result;
}

}  // namespace accent
