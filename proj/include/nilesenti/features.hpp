#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nilesenti/corpus.hpp"
#include "nilesenti/lexicon.hpp"
#include "nilesenti/preprocess.hpp"

namespace nilesenti {

// Indexed n-gram space with idf weights. Indices follow lexicographic term
// order, so two builds over the same corpus are identical.
class Vocabulary {
 public:
  std::optional<std::size_t> index(std::string_view term) const;
  double idf(std::size_t index) const { return idf_.at(index); }
  const std::string& term(std::size_t index) const { return terms_.at(index); }

  std::size_t size() const { return terms_.size(); }
  std::size_t doc_count() const { return doc_count_; }
  int max_order() const { return max_order_; }

  // `#docs=N` and `#order=K` headers, then `term<TAB>index<TAB>idf` lines.
  void write(std::ostream& out) const;
  static Vocabulary read(std::istream& in, const std::string& source = "vocabulary");

  std::uint64_t fingerprint() const;

 private:
  friend Vocabulary build_vocabulary(std::span<const TokenStream>, int);

  std::vector<std::string> terms_;
  std::vector<double> idf_;
  std::unordered_map<std::string, std::size_t> lookup_;
  std::size_t doc_count_ = 0;
  int max_order_ = 2;
};

// Unigrams and, for max_order 2, adjacent-pair bigrams joined by a space.
std::vector<std::string> ngrams(const std::vector<std::string>& tokens, int max_order);

// idf(t) = ln(N / df(t)).
Vocabulary build_vocabulary(std::span<const TokenStream> docs, int max_order = 2);

// Sorted (index, weight) pairs with no stored zeros, over a fixed dimension.
struct SparseVector {
  std::size_t dimension = 0;
  std::vector<std::pair<std::size_t, double>> entries;

  double at(std::size_t index) const;
  bool operator==(const SparseVector&) const = default;

  // Sorts, merges repeated indices by summation and drops zeros.
  static SparseVector from_pairs(std::size_t dimension, std::vector<std::pair<std::size_t, double>> pairs);
};

enum class NgramWeighting { IdfPresence, TfIdf };

struct LexicalFeaturesA {
  double starts_with_link = 0;
  double ends_with_link = 0;
  double num_of_pos = 0;
  double num_of_neg = 0;
  double length = 0;
  double segments = 0;
  double ends_with_positive = 0;
  double ends_with_negative = 0;
  double starts_with_hashtag = 0;
  double num_of_neg_emo = 0;
  double num_of_pos_emo = 0;
  double ends_with_question_mark = 0;
  double neg_score = 0;
  double pos_score = 0;

  static constexpr std::size_t kCount = 14;
  std::array<double, kCount> values() const;
};

inline constexpr std::array<std::string_view, LexicalFeaturesA::kCount> kTaskAFeatureNames = {
    "startsWithLink",    "endsWithLink", "numOfPos",    "numOfNeg",    "length",
    "segments",          "endsWithPositive", "endsWithNegative", "startsWithHashTag", "numOfNegEmo",
    "numOfPosEmo",       "endsWithQuestionMark", "negScore", "posScore"};

struct TopicFeaturesB {
  double overall_sentiment = 0;
  double num_pos_words = 0;
  double num_neg_words = 0;
  double has_pos_emo = 0;
  double has_neg_emo = 0;
  double target_position = 0;
  double pos_terms_near_target = 0;
  double neg_terms_near_target = 0;
  double pos_words_near_target = 0;
  double neg_words_near_target = 0;
  double pos_first_half = 0;
  double neg_first_half = 0;
  double pos_second_half = 0;
  double neg_second_half = 0;

  static constexpr std::size_t kCount = 14;
  std::array<double, kCount> values() const;
};

inline constexpr std::array<std::string_view, TopicFeaturesB::kCount> kTaskBFeatureNames = {
    "overallSentiment",   "numPosWords",        "numNegWords",       "hasPosEmo",         "hasNegEmo",
    "targetPosition",     "posTermsNearTarget", "negTermsNearTarget", "posWordsNearTarget", "negWordsNearTarget",
    "posFirstHalf",       "negFirstHalf",       "posSecondHalf",     "negSecondHalf"};

// Window (in tokens) either side of the topic for the near-target flags.
inline constexpr std::size_t kNearTargetWindow = 4;

// Token length buckets: <=3 very short, 4..7 short, >=8 normal.
int length_bucket(std::size_t word_tokens);

struct EmoticonCounts {
  std::size_t positive = 0;
  std::size_t negative = 0;
};

// Over whitespace tokens of the elongation-reduced raw text.
EmoticonCounts count_emoticons(std::string_view raw_text, const EmoticonTable& table = default_emoticons());

// Task-A token stream: prepare_text then tokenize_and_stem.
TokenStream task_a_tokens(std::string_view text);

// Task-B token stream (topic located, not masked).
TokenStream task_b_tokens(const Tweet& tweet, const Lexicon& lexicon);

// Per-token light stems of a neural stream; keeps indices and topic_span.
TokenStream stem_stream(const TokenStream& stream);

LexicalFeaturesA lexical_features_a(std::string_view raw_text, const TokenStream& tokens, const Lexicon& lexicon,
                                    double amplify);

TopicFeaturesB topic_features_b(std::string_view raw_text, const TokenStream& tokens, const Lexicon& lexicon,
                                Polarity overall, double amplify);

// N-gram slots [0, |vocab|) followed by the 14 lexical features.
SparseVector vectorize_task_a(const Tweet& tweet, const Vocabulary& vocab, const Lexicon& lexicon, double amplify,
                              NgramWeighting weighting = NgramWeighting::IdfPresence);

// Bag-of-words counts over [0, |vocab|) followed by the 14 topic features.
SparseVector vectorize_task_b(const Tweet& tweet, const Vocabulary& vocab, const Lexicon& lexicon, Polarity overall,
                              double amplify);

}  // namespace nilesenti
