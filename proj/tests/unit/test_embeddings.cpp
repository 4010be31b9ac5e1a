#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "nilesenti/embeddings.hpp"

using namespace nilesenti;

namespace {

EmbeddingTable parse(const std::string& body, std::size_t dim) {
  std::istringstream in(body);
  return parse_embeddings(in, dim);
}

TokenStream toks(std::size_t n, const std::string& stem = "w") {
  TokenStream t;
  for (std::size_t i = 0; i < n; ++i) t.tokens.push_back(stem + std::to_string(i));
  return t;
}

std::string values(std::size_t n, double v) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += " " + std::to_string(v);
  return s;
}

}  // namespace

TEST_CASE("parse_embeddings reads a header and vectors") {
  const EmbeddingTable t = parse("2 3\nرائع 0.1 0.2 0.3\nسيء -1 0 1\n", 3);
  CHECK(t.size() == 2);
  REQUIRE(t.find("رائع") != nullptr);
  CHECK((*t.find("رائع"))[2] == 0.3);
  CHECK((*t.find("سيء"))[0] == -1.0);
  CHECK(t.warnings().empty());

  const EmbeddingTable no_header = parse("a 1 2\n", 2);
  CHECK(no_header.size() == 1);
}

TEST_CASE("parse_embeddings rejects wrong widths") {
  CHECK_THROWS_AS(parse("word" + values(99, 0.5) + "\n", 100), Error);
  CHECK_NOTHROW(parse("word" + values(100, 0.5) + "\n", 100));
  CHECK_THROWS_AS(parse("1 4\na 1 2 3 4\n", 3), Error);
  try {
    parse("a 1 2 3\nb 1 2\n", 3);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("duplicate words keep the last vector and warn") {
  const EmbeddingTable t = parse("a 1 1\na 2 2\n", 2);
  CHECK(t.size() == 1);
  CHECK((*t.find("a"))[0] == 2.0);
  CHECK(t.warnings().size() == 1);
}

TEST_CASE("embed_tweet centers the tokens") {
  const EmbeddingTable t(4);
  const TweetMatrix three = embed_tweet(toks(3), t, 35, 42);
  CHECK(three.rows == 35);
  CHECK(three.cols == 4);
  CHECK(three.fill_span == std::make_pair<std::size_t, std::size_t>(16, 19));

  const TweetMatrix none = embed_tweet(toks(0), t, 35, 42);
  for (double v : none.data) CHECK(v == 0.0);
  CHECK(none.fill_span.first == none.fill_span.second);

  const TweetMatrix long_tweet = embed_tweet(toks(40), t, 35, 42);
  CHECK(long_tweet.fill_span == std::make_pair<std::size_t, std::size_t>(0, 35));
  const TweetMatrix first = embed_tweet(toks(35), t, 35, 42);
  CHECK(first == long_tweet);

  CHECK_THROWS_AS(embed_tweet(toks(1), t, 0, 42), Error);
}

TEST_CASE("known words use their vectors in order") {
  EmbeddingTable t(2);
  t.insert("w0", {1.0, 2.0});
  t.insert("w1", {3.0, 4.0});
  const TweetMatrix m = embed_tweet(toks(2), t, 5, 1);
  CHECK(m.fill_span == std::make_pair<std::size_t, std::size_t>(1, 3));
  CHECK(m.at(1, 0) == 1.0);
  CHECK(m.at(2, 1) == 4.0);
  CHECK(m.at(0, 0) == 0.0);
  CHECK(m.at(4, 1) == 0.0);
}

TEST_CASE("unknown words get seeded vectors in range") {
  const EmbeddingTable t(100);
  const auto a = t.lookup("غريب", 42);
  const auto b = t.lookup("غريب", 42);
  CHECK(a == b);
  CHECK(a == random_oov_vector("غريب", 42, 100));
  CHECK(a != t.lookup("غريب", 43));
  CHECK(a != t.lookup("اخر", 42));
  for (double v : a) {
    CHECK(v >= -kOovRange);
    CHECK(v <= kOovRange);
  }
  CHECK(t.oov_cache_size() >= 1);
}

TEST_CASE("embedding properties on random token streams") {
  std::mt19937_64 rng(31);
  EmbeddingTable t(6);
  t.insert("k0", {1, 1, 1, 1, 1, 1});
  t.insert("k1", {0.5, 0, 0, 0, 0, 0});
  for (int trial = 0; trial < 300; ++trial) {
    TokenStream s;
    const std::size_t n = rng() % 45;
    for (std::size_t i = 0; i < n; ++i) {
      s.tokens.push_back(rng() % 2 ? "k" + std::to_string(rng() % 2) : "u" + std::to_string(rng() % 50));
    }
    const std::size_t max_len = 1 + rng() % 40;
    const TweetMatrix m = embed_tweet(s, t, max_len, 7);
    CHECK(m == embed_tweet(s, t, max_len, 7));
    const std::size_t len = std::min(n, max_len);
    CHECK(m.fill_span.first == (max_len - len) / 2);
    CHECK(m.fill_span.second - m.fill_span.first == len);
    for (std::size_t r = 0; r < m.rows; ++r) {
      if (r >= m.fill_span.first && r < m.fill_span.second) continue;
      double norm = 0.0;
      for (double v : m.row(r)) norm += v * v;
      CHECK(norm == 0.0);
    }
  }
}

TEST_CASE("write then parse round-trips") {
  EmbeddingTable t(2);
  t.insert("b", {0.1, -0.2});
  t.insert("a", {1e-9, 3.0});
  std::ostringstream out;
  t.write(out);
  CHECK(out.str().rfind("2 2\na ", 0) == 0);
  const EmbeddingTable back = parse(out.str(), 2);
  CHECK(back.fingerprint() == t.fingerprint());
  CHECK(*back.find("b") == *t.find("b"));
}
