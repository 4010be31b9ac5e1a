#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>

#include "helpers.hpp"
#include "nilesenti/lexicon.hpp"
#include "nilesenti/preprocess.hpp"

using namespace nilesenti;

namespace {

// Tokens as they reach the matcher: normalized.
TokenStream toks(const std::vector<std::string>& t) {
  TokenStream s;
  for (const auto& w : t) s.tokens.push_back(normalize_text(w));
  return s;
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("parse_lexicon reads scored entries") {
  const Lexicon lex = testing::lexicon_from("ممتاز\tpos\t0.93\nيا سلام\tpositive\t0.8\nسيء\tnegative\t0.4\n");
  REQUIRE(lex.size() == 3);
  CHECK(lex.entries()[0].polarity == Polarity::Positive);
  CHECK(lex.entries()[0].score == doctest::Approx(0.93).epsilon(1e-15));
  CHECK(lex.entries()[1].tokens.size() == 2);
  CHECK(lex.max_phrase_length() == 2);
  CHECK(lex.entries()[2].polarity == Polarity::Negative);
}

TEST_CASE("parse_lexicon rejects bad rows with a line number") {
  CHECK(error_of([] { testing::lexicon_from("ممتاز\tpos\t0.9\nرائع\tpos\t1.2\n"); }).find("line 2") !=
        std::string::npos);
  CHECK_THROWS_AS(testing::lexicon_from("رائع\tneutral\t0.5\n"), Error);
  CHECK_THROWS_AS(testing::lexicon_from("رائع\tpos\n"), Error);
  CHECK_THROWS_AS(testing::lexicon_from("رائع\tpos\t-0.1\n"), Error);
}

TEST_CASE("match_sentiment takes the longest match first") {
  const Lexicon one = testing::lexicon_from("ممتاز\tpos\t0.9\n");
  const auto m = match_sentiment(toks({"فيلم", "ممتاز"}), one);
  REQUIRE(m.pos_terms.size() == 1);
  CHECK(m.pos_terms[0].index == 1);
  CHECK(m.pos_terms[0].length == 1);
  CHECK(m.pos_terms[0].score == 0.9);
  CHECK(m.last_polarity == Polarity::Positive);

  const Lexicon phrase = testing::lexicon_from("يا سلام\tpos\t0.8\nسلام\tpos\t0.5\n");
  const auto p = match_sentiment(toks({"يا", "سلام"}), phrase);
  REQUIRE(p.pos_terms.size() == 1);
  CHECK(p.pos_terms[0].length == 2);
  CHECK(p.pos_terms[0].score == 0.8);

  const auto none = match_sentiment(toks({"لا", "شيء"}), phrase);
  CHECK(none.pos_terms.empty());
  CHECK(none.neg_terms.empty());
  CHECK_FALSE(none.last_polarity.has_value());
}

TEST_CASE("reserved tokens never match") {
  const Lexicon lex = testing::lexicon_from("TOPICMARK\tpos\t0.9\nحلو\tpos\t0.5\n");
  const auto m = match_sentiment(toks({"TOPICMARK", "حلو"}), lex);
  REQUIRE(m.pos_terms.size() == 1);
  CHECK(m.pos_terms[0].index == 1);
}

TEST_CASE("last_polarity follows the match ending last") {
  const Lexicon lex = testing::lexicon_from("حلو\tpos\t0.5\nسيء\tneg\t0.6\n");
  const auto m = match_sentiment(toks({"سىء", "و", "حلو"}), lex);
  CHECK(m.last_polarity == Polarity::Positive);
  const auto n = match_sentiment(toks({"حلو", "سىء"}), lex);
  CHECK(n.last_polarity == Polarity::Negative);
}

TEST_CASE("sentiment_scores sums and amplifies") {
  const Lexicon lex = testing::lexicon_from("ممتاز\tpos\t0.9\nحلو\tpos\t0.5\nجيد\tpos\t0.25\n");
  const auto a = sentiment_scores(match_sentiment(toks({"ممتاز"}), lex), 2.0);
  CHECK(a.pos == doctest::Approx(1.8).epsilon(1e-15));
  CHECK(a.neg == 0.0);
  const auto none = sentiment_scores(match_sentiment(toks({"x"}), lex), 2.0);
  CHECK(none.pos == 0.0);
  CHECK(none.neg == 0.0);
  const auto b = sentiment_scores(match_sentiment(toks({"حلو", "جيد"}), lex), 1.0);
  CHECK(b.pos == 0.75);
}

TEST_CASE("scores are linear in amplify, counts are not affected") {
  std::mt19937_64 rng(21);
  const Lexicon lex = testing::lexicon_from("ممتاز\tpos\t0.9\nحلو\tpos\t0.5\nسيء\tneg\t0.7\nمش حلو\tneg\t0.85\n");
  const std::vector<std::string> vocab = {"ممتاز", "حلو", "سىء", "مش", "x"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> t;
    for (std::size_t i = 0, n = rng() % 8; i < n; ++i) t.push_back(vocab[rng() % vocab.size()]);
    const auto m = match_sentiment(toks(t), lex);
    const double a = 0.25 + static_cast<double>(rng() % 8);
    const auto s1 = sentiment_scores(m, a), s2 = sentiment_scores(m, 2 * a);
    CHECK(s2.pos == 2 * s1.pos);
    CHECK(s2.neg == 2 * s1.neg);
    CHECK(s1.pos >= 0.0);
    CHECK(s1.neg >= 0.0);
    // Spans are disjoint and in order.
    std::vector<LexiconMatch> all = m.pos_terms;
    all.insert(all.end(), m.neg_terms.begin(), m.neg_terms.end());
    std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.index < y.index; });
    for (std::size_t k = 1; k < all.size(); ++k) CHECK(all[k - 1].end() <= all[k].index);
  }
}

TEST_CASE("lexicon file order does not change matching") {
  std::vector<std::string> lines = {"ممتاز\tpos\t0.9", "حلو\tpos\t0.5", "حلو\tneg\t0.4", "مش حلو\tneg\t0.85",
                                    "الحلو\tpos\t0.3", "سيء\tneg\t0.7"};
  std::mt19937_64 rng(5);
  auto render = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& l : v) s += l + "\n";
    return s;
  };
  const Lexicon base = testing::lexicon_from(render(lines));
  const TokenStream t = toks({"مش", "حلو", "حلو", "ممتاز", "سىء"});
  const auto ref = match_sentiment(t, base);
  for (int trial = 0; trial < 50; ++trial) {
    std::shuffle(lines.begin(), lines.end(), rng);
    const Lexicon lex = testing::lexicon_from(render(lines));
    CHECK(lex.fingerprint() == base.fingerprint());
    const auto m = match_sentiment(t, lex);
    REQUIRE(m.pos_terms.size() == ref.pos_terms.size());
    REQUIRE(m.neg_terms.size() == ref.neg_terms.size());
    for (std::size_t k = 0; k < m.pos_terms.size(); ++k) CHECK(m.pos_terms[k].score == ref.pos_terms[k].score);
    for (std::size_t k = 0; k < m.neg_terms.size(); ++k) CHECK(m.neg_terms[k].score == ref.neg_terms[k].score);
  }
}

TEST_CASE("write_lexicon round-trips") {
  const Lexicon lex = testing::lexicon_from("ممتاز\tpos\t0.9\nيا سلام\tpos\t0.8\nوالكتاب\tneg\t0.1\n");
  std::ostringstream out;
  write_lexicon(lex, out);
  const Lexicon back = testing::lexicon_from(out.str());
  CHECK(back.fingerprint() == lex.fingerprint());
  std::ostringstream again;
  write_lexicon(back, again);
  CHECK(again.str() == out.str());
}
