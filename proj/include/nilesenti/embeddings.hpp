#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nilesenti/preprocess.hpp"

namespace nilesenti {

// Pretrained word vectors plus a memo of random vectors for unknown words.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dim = 100);

  EmbeddingTable(EmbeddingTable&&) noexcept = default;
  EmbeddingTable& operator=(EmbeddingTable&&) noexcept = default;

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }

  // Replaces an existing vector; returns false in that case.
  bool insert(std::string word, std::vector<double> vector);
  const std::vector<double>* find(const std::string& word) const;

  // Known vector, or a uniform [-0.25, 0.25]^dim vector determined by
  // (seed, word). Safe to call concurrently.
  std::vector<double> lookup(const std::string& word, std::uint64_t seed) const;

  std::size_t oov_cache_size() const;

  // Messages about recoverable oddities seen while loading (duplicates).
  const std::vector<std::string>& warnings() const { return warnings_; }
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

  // word2vec text format with a `count dim` header, words in sorted order.
  void write(std::ostream& out) const;
  std::uint64_t fingerprint() const;

 private:
  struct OovCache {
    std::mutex mutex;
    std::map<std::pair<std::uint64_t, std::string>, std::vector<double>> vectors;
  };

  std::size_t dim_;
  std::unordered_map<std::string, std::vector<double>> vectors_;
  std::unique_ptr<OovCache> oov_;
  std::vector<std::string> warnings_;
};

inline constexpr double kOovRange = 0.25;

std::vector<double> random_oov_vector(const std::string& word, std::uint64_t seed, std::size_t dim);

// Optional `count dim` header, then `word v1 ... v_dim` lines.
EmbeddingTable parse_embeddings(std::istream& in, std::size_t dim, const std::string& source = "embeddings");
EmbeddingTable load_embeddings(const std::string& path, std::size_t dim);

// Row-major rows x cols matrix; rows outside fill_span are zero.
struct TweetMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;
  std::pair<std::size_t, std::size_t> fill_span{0, 0};  // half-open

  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  bool operator==(const TweetMatrix&) const = default;
};

// The first min(|tokens|, max_len) token vectors centered vertically:
// start = floor((max_len - L) / 2).
TweetMatrix embed_tweet(const TokenStream& tokens, const EmbeddingTable& table, std::size_t max_len,
                        std::uint64_t seed);

}  // namespace nilesenti
