#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "accent/core.hpp"

// The deterministic CSKB keyword-search baseline: build a concept set from
// utterances (content words only), then return the stored tuples whose head
// AND tail each contain at least one concept word, at the lemma level.

namespace accent {

enum class WordClass { Noun, Verb, Adjective, Other };

/// Token-class contract; pluggable so a real POS tagger can replace the
/// naive in-tree default.
class Tagger {
 public:
  virtual ~Tagger() = default;
  virtual WordClass tag(const std::string& token) const = 0;
};

/// Word -> lemma contract.
class Lemmatizer {
 public:
  virtual ~Lemmatizer() = default;
  virtual std::string lemma(const std::string& token) const = 0;
};

/// Naive suffix-rule lemmatizer: plural -s/-es/-ies, -ing, -ed. Imperfect
/// by construction (it has no lexicon), but deterministic and applied
/// identically to KB and query sides, which is what matching needs.
class SuffixLemmatizer : public Lemmatizer {
 public:
  std::string lemma(const std::string& token) const override;
};

/// Naive lexicon tagger: a small closed-class lexicon and suffix heuristics
/// mark function words/adverbs as Other; known verbs and adjectives get
/// their class; everything else defaults to Noun.
class LexiconTagger : public Tagger {
 public:
  WordClass tag(const std::string& token) const override;
};

const std::set<std::string>& default_stopwords();

/// Lemmatized, lowercased content words. Invariant: no stopwords.
struct ConceptSet {
  std::set<std::string> words;
};

/// Nouns, verbs and adjectives that are not stopwords, lemmatized and
/// deduplicated.
ConceptSet build_concept_set(const std::vector<std::string>& utterances,
                             const Tagger& tagger,
                             const std::set<std::string>& stopwords,
                             const Lemmatizer& lemmatizer);

/// Convenience overload using the in-tree defaults.
ConceptSet build_concept_set(const std::vector<std::string>& utterances);

/// Immutable tuple store with an inverted index from lemmatized non-stopword
/// token -> tuple ids, kept separately for heads and tails. Read-only after
/// build; safe for concurrent searches.
class StaticCSKB {
 public:
  StaticCSKB() = default;

  static StaticCSKB build(std::vector<EventRelationTuple> tuples,
                          const Lemmatizer& lemmatizer,
                          const std::set<std::string>& stopwords);
  static StaticCSKB build(std::vector<EventRelationTuple> tuples);

  const std::vector<EventRelationTuple>& tuples() const { return tuples_; }
  std::size_t size() const { return tuples_.size(); }

  const std::unordered_map<std::string, std::vector<std::uint32_t>>&
  head_index() const {
    return head_index_;
  }
  const std::unordered_map<std::string, std::vector<std::uint32_t>>&
  tail_index() const {
    return tail_index_;
  }

 private:
  std::vector<EventRelationTuple> tuples_;
  std::unordered_map<std::string, std::vector<std::uint32_t>> head_index_;
  std::unordered_map<std::string, std::vector<std::uint32_t>> tail_index_;
};

/// Tuples whose head contains >= 1 concept word AND whose tail contains
/// >= 1 concept word (lemma-level token membership, not substrings).
/// Deterministic order: ascending tuple id.
std::vector<EventRelationTuple> search_tuples(const StaticCSKB& kb,
                                              const ConceptSet& concepts);

/// The indexable lemmas of one event text (lowercased, punctuation
/// stripped, stopwords removed, lemmatized). Exposed for index rebuild
/// checks and the brute-force search oracle.
std::vector<std::string> index_terms(const std::string& text,
                                     const Lemmatizer& lemmatizer,
                                     const std::set<std::string>& stopwords);

}  // namespace accent
