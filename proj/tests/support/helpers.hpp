#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nilesenti/corpus.hpp"
#include "nilesenti/embeddings.hpp"
#include "nilesenti/lexicon.hpp"
#include "nilesenti/neural.hpp"

namespace testing {

inline std::string data_path(const std::string& name) { return std::string(NILESENTI_TEST_DATA_DIR) + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void spit(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  out << body;
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            ("nilesenti-test-" + std::to_string(stamp) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline nilesenti::Lexicon lexicon_from(const std::string& body) {
  std::istringstream in(body);
  return nilesenti::parse_lexicon(in);
}

inline nilesenti::Dataset dataset_from(const std::string& body, nilesenti::Task task) {
  std::istringstream in(body);
  return nilesenti::parse_dataset(in, task);
}

inline const std::vector<std::string>& positive_words() {
  static const std::vector<std::string> w = {"رائع", "ممتاز", "حلو", "فرح", "نجاح", "مبهر"};
  return w;
}
inline const std::vector<std::string>& negative_words() {
  static const std::vector<std::string> w = {"فاشل", "حزن", "كارثه", "مقرف", "خساره", "ضعف"};
  return w;
}
inline const std::vector<std::string>& filler_words() {
  static const std::vector<std::string> w = {"في", "من", "على", "كان", "هذا", "مع"};
  return w;
}

// Topic tweets whose label is carried by the polarity words they contain.
inline nilesenti::Dataset synthetic_topic_tweets(std::size_t n, std::uint64_t seed) {
  static const std::vector<std::string> topics = {"الاهلي", "الزمالك", "مصر"};
  std::mt19937_64 rng(seed);
  auto pick = [&](const std::vector<std::string>& v) { return v[rng() % v.size()]; };
  nilesenti::Dataset ds;
  ds.task = nilesenti::Task::B;
  for (std::size_t i = 0; i < n; ++i) {
    const bool pos = i % 2 == 0;
    nilesenti::Tweet t;
    t.id = "s" + std::to_string(i);
    t.topic = topics[i % topics.size()];
    t.label = pos ? nilesenti::Polarity::Positive : nilesenti::Polarity::Negative;
    std::string text = *t.topic;
    const std::size_t words = 2 + rng() % 3;
    for (std::size_t k = 0; k < words; ++k) text += " " + pick(pos ? positive_words() : negative_words());
    text += " " + pick(filler_words()) + " w" + std::to_string(i);
    t.text = text;
    ds.tweets.push_back(std::move(t));
  }
  return ds;
}

// Centered XOR: label Positive iff x*y > 0, points kept away from the axes.
inline std::vector<nilesenti::SparseExample> xor_examples(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.2, 1.0);
  std::vector<nilesenti::SparseExample> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double sx = (i & 1) ? 1.0 : -1.0;
    const double sy = (i & 2) ? 1.0 : -1.0;
    const double x = sx * coord(rng), y = sy * coord(rng);
    out.emplace_back(nilesenti::SparseVector::from_pairs(2, {{0, x}, {1, y}}),
                     sx * sy > 0 ? nilesenti::Polarity::Positive : nilesenti::Polarity::Negative);
  }
  return out;
}

inline nilesenti::TweetMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  nilesenti::TweetMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.fill_span = {0, rows};
  m.data.resize(rows * cols);
  for (auto& x : m.data) x = u(rng);
  return m;
}

// Entries in +-[0.05, 0.25]: the scale of word vectors, away from zero so
// finite differences stay above rounding noise.
inline nilesenti::TweetMatrix embedding_like_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  nilesenti::TweetMatrix m = random_matrix(rows, cols, rng);
  for (auto& x : m.data) x = (x < 0 ? -1.0 : 1.0) * (0.05 + 0.2 * std::abs(x));
  return m;
}

}  // namespace testing
