#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "accent/backends.hpp"

// Test-only utilities: a table-driven embedder for exact cosine control,
// temp-dir management for file-based tests, and small deterministic
// generators for property tests.

namespace accent::test {

/// Maps exact texts to fixed vectors; unknown text throws. Lets a test pin
/// pairwise cosines precisely.
class VectorTableEmbedder : public EmbeddingBackend {
 public:
  explicit VectorTableEmbedder(std::size_t dim) : dim_(dim) {}

  void set(const std::string& text, std::vector<double> values) {
    if (values.size() != dim_) throw ContractViolation("wrong test vector dim");
    table_[text] = std::move(values);
  }

  /// Registers `text` so that cosine(embed(anchor), embed(text)) == c,
  /// assuming the anchor is the unit vector (1, 0, ...). Needs dim >= 2.
  void set_with_cosine_to_anchor(const std::string& text, double c) {
    std::vector<double> v(dim_, 0.0);
    v[0] = c;
    v[1] = std::sqrt(1.0 - c * c);
    table_[text] = std::move(v);
  }

  void set_anchor(const std::string& text) {
    std::vector<double> v(dim_, 0.0);
    v[0] = 1.0;
    table_[text] = std::move(v);
  }

  EmbeddingVector embed(const std::string& text) override {
    auto it = table_.find(text);
    if (it == table_.end()) {
      throw ContractViolation("VectorTableEmbedder: unknown text \"" + text +
                              "\"");
    }
    return EmbeddingVector{it->second};
  }
  std::size_t dimension() const override { return dim_; }
  bool concurrency_safe() const override { return true; }

 private:
  std::size_t dim_;
  std::map<std::string, std::vector<double>> table_;
};

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("accent_test_" + tag + "_" + std::to_string(counter()++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path path() const { return path_; }

  std::filesystem::path write(const std::string& name,
                              const std::string& content) const {
    const std::filesystem::path file = path_ / name;
    std::ofstream out(file);
    out << content;
    return file;
  }

 private:
  static int& counter() {
    static int n = 0;
    return n;
  }
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline std::string random_word(std::mt19937& rng, int min_len = 2,
                               int max_len = 8) {
  std::uniform_int_distribution<int> len(min_len, max_len);
  std::uniform_int_distribution<int> ch(0, 25);
  std::string word;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) word += static_cast<char>('a' + ch(rng));
  return word;
}

inline std::string random_phrase(std::mt19937& rng, int min_words = 1,
                                 int max_words = 6) {
  std::uniform_int_distribution<int> count(min_words, max_words);
  std::string phrase;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    if (i) phrase += ' ';
    phrase += random_word(rng);
  }
  return phrase;
}

}  // namespace accent::test
