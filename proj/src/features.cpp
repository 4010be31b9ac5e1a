#include "nilesenti/features.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include "nilesenti/utf8.hpp"
#include "numfmt.hpp"

namespace nilesenti {
namespace {

std::vector<std::string> raw_words(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char32_t cp : utf8::decode(text)) {
    if (utf8::is_space(cp)) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      utf8::append(cur, cp);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

bool is_link(std::string_view word) {
  auto starts_ci = [&](std::string_view prefix) {
    if (word.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
      char c = word[i];
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      if (c != prefix[i]) return false;
    }
    return true;
  };
  return starts_ci("http://") || starts_ci("https://") || starts_ci("www.");
}

double polarity_sign(Polarity p) {
  switch (p) {
    case Polarity::Positive:
      return 1.0;
    case Polarity::Negative:
      return -1.0;
    case Polarity::Neutral:
      return 0.0;
  }
  return 0.0;
}

}  // namespace

std::optional<std::size_t> Vocabulary::index(std::string_view term) const {
  const auto it = lookup_.find(std::string(term));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

void Vocabulary::write(std::ostream& out) const {
  out << "#docs=" << doc_count_ << '\n' << "#order=" << max_order_ << '\n';
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    out << terms_[i] << '\t' << i << '\t' << format_double(idf_[i]) << '\n';
  }
}

Vocabulary Vocabulary::read(std::istream& in, const std::string& source) {
  Vocabulary v;
  std::string line;
  int lineno = 0;
  bool have_docs = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = source + ": line " + std::to_string(lineno);
    if (line.starts_with("#docs=")) {
      v.doc_count_ = static_cast<std::size_t>(parse_int(std::string_view(line).substr(6), where));
      have_docs = true;
      continue;
    }
    if (line.starts_with("#order=")) {
      v.max_order_ = static_cast<int>(parse_int(std::string_view(line).substr(7), where));
      if (v.max_order_ != 1 && v.max_order_ != 2) throw Error(where + ": order must be 1 or 2");
      continue;
    }
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
      throw Error(where + ": expected term<TAB>index<TAB>idf");
    }
    const auto idx = static_cast<std::size_t>(parse_int(std::string_view(line).substr(t1 + 1, t2 - t1 - 1), where));
    if (idx != v.terms_.size()) throw Error(where + ": indices must be dense and ascending");
    const double idf = parse_double(std::string_view(line).substr(t2 + 1), where);
    if (!(idf >= 0.0)) throw Error(where + ": negative idf");
    v.terms_.push_back(line.substr(0, t1));
    v.idf_.push_back(idf);
    if (!v.lookup_.emplace(v.terms_.back(), idx).second) throw Error(where + ": duplicate term");
  }
  if (!have_docs) throw Error(source + ": missing #docs header");
  return v;
}

std::uint64_t Vocabulary::fingerprint() const {
  std::uint64_t h = utf8::fnv1a("vocab");
  h = utf8::fnv1a(std::to_string(doc_count_) + "/" + std::to_string(max_order_), h);
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    h = utf8::fnv1a(terms_[i], h);
    h = utf8::fnv1a(format_double(idf_[i]), h);
  }
  return h;
}

std::vector<std::string> ngrams(const std::vector<std::string>& tokens, int max_order) {
  std::vector<std::string> out(tokens.begin(), tokens.end());
  if (max_order >= 2) {
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) out.push_back(tokens[i] + " " + tokens[i + 1]);
  }
  return out;
}

Vocabulary build_vocabulary(std::span<const TokenStream> docs, int max_order) {
  if (docs.empty()) throw Error("cannot build a vocabulary from an empty corpus");
  if (max_order != 1 && max_order != 2) throw Error("n-gram order must be 1 or 2");
  std::map<std::string, std::size_t> df;
  for (const auto& doc : docs) {
    const auto grams = ngrams(doc.tokens, max_order);
    for (const auto& g : std::set<std::string>(grams.begin(), grams.end())) ++df[g];
  }
  Vocabulary v;
  v.doc_count_ = docs.size();
  v.max_order_ = max_order;
  v.terms_.reserve(df.size());
  for (const auto& [term, count] : df) {
    v.lookup_.emplace(term, v.terms_.size());
    v.terms_.push_back(term);
    v.idf_.push_back(std::log(static_cast<double>(docs.size()) / static_cast<double>(count)));
  }
  return v;
}

double SparseVector::at(std::size_t index) const {
  const auto it = std::lower_bound(entries.begin(), entries.end(), index,
                                   [](const auto& e, std::size_t i) { return e.first < i; });
  return it != entries.end() && it->first == index ? it->second : 0.0;
}

SparseVector SparseVector::from_pairs(std::size_t dimension, std::vector<std::pair<std::size_t, double>> pairs) {
  std::stable_sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVector v;
  v.dimension = dimension;
  for (const auto& [i, w] : pairs) {
    if (i >= dimension) throw Error("sparse index " + std::to_string(i) + " outside dimension " + std::to_string(dimension));
    if (!v.entries.empty() && v.entries.back().first == i) {
      v.entries.back().second += w;
    } else {
      v.entries.emplace_back(i, w);
    }
  }
  std::erase_if(v.entries, [](const auto& e) { return e.second == 0.0; });
  return v;
}

std::array<double, LexicalFeaturesA::kCount> LexicalFeaturesA::values() const {
  return {starts_with_link, ends_with_link, num_of_pos,        num_of_neg,     length,
          segments,         ends_with_positive, ends_with_negative, starts_with_hashtag, num_of_neg_emo,
          num_of_pos_emo,   ends_with_question_mark, neg_score, pos_score};
}

std::array<double, TopicFeaturesB::kCount> TopicFeaturesB::values() const {
  return {overall_sentiment,     num_pos_words,         num_neg_words,         has_pos_emo,
          has_neg_emo,           target_position,       pos_terms_near_target, neg_terms_near_target,
          pos_words_near_target, neg_words_near_target, pos_first_half,        neg_first_half,
          pos_second_half,       neg_second_half};
}

int length_bucket(std::size_t word_tokens) {
  if (word_tokens <= 3) return 0;
  if (word_tokens <= 7) return 1;
  return 2;
}

EmoticonCounts count_emoticons(std::string_view raw_text, const EmoticonTable& table) {
  EmoticonCounts c;
  for (const auto& w : raw_words(reduce_elongation(raw_text))) {
    if (const auto p = table.lookup(w)) (*p == Polarity::Positive ? c.positive : c.negative)++;
  }
  return c;
}

TokenStream task_a_tokens(std::string_view text) { return tokenize_and_stem(prepare_text(text)); }

TokenStream task_b_tokens(const Tweet& tweet, const Lexicon& lexicon) {
  return prepare_neural_tokens(tweet.text, tweet.topic, false, lexicon);
}

TokenStream stem_stream(const TokenStream& stream) {
  TokenStream out;
  out.topic_span = stream.topic_span;
  out.tokens.reserve(stream.size());
  for (const auto& t : stream.tokens) out.tokens.push_back(is_reserved_token(t) ? t : light_stem(t));
  return out;
}

LexicalFeaturesA lexical_features_a(std::string_view raw_text, const TokenStream& tokens, const Lexicon& lexicon,
                                    double amplify) {
  LexicalFeaturesA f;
  const auto words = raw_words(raw_text);
  if (!words.empty()) {
    f.starts_with_link = is_link(words.front()) ? 1 : 0;
    f.ends_with_link = is_link(words.back()) ? 1 : 0;
    f.starts_with_hashtag = words.front().starts_with('#') ? 1 : 0;
    f.ends_with_question_mark = (words.back().ends_with("؟") || words.back().ends_with('?')) ? 1 : 0;
  }

  const SentimentMatches m = match_sentiment(tokens, lexicon);
  f.num_of_pos = static_cast<double>(m.pos_terms.size());
  f.num_of_neg = static_cast<double>(m.neg_terms.size());
  f.ends_with_positive = m.last_polarity == Polarity::Positive ? 1 : 0;
  f.ends_with_negative = m.last_polarity == Polarity::Negative ? 1 : 0;
  const SentimentScores s = sentiment_scores(m, amplify);
  f.pos_score = s.pos;
  f.neg_score = s.neg;

  std::size_t word_tokens = 0;
  std::size_t segments = 0;
  bool in_segment = false;
  for (const auto& t : tokens.tokens) {
    if (!is_punctuation_token(t)) ++word_tokens;
    if (is_sentence_break(t)) {
      in_segment = false;
    } else if (!in_segment) {
      in_segment = true;
      ++segments;
    }
  }
  f.length = length_bucket(word_tokens);
  f.segments = static_cast<double>(segments);

  const EmoticonCounts emo = count_emoticons(raw_text);
  f.num_of_pos_emo = static_cast<double>(emo.positive);
  f.num_of_neg_emo = static_cast<double>(emo.negative);
  return f;
}

TopicFeaturesB topic_features_b(std::string_view raw_text, const TokenStream& tokens, const Lexicon& lexicon,
                                Polarity overall, double amplify) {
  TopicFeaturesB f;
  const SentimentMatches m = match_sentiment(stem_stream(tokens), lexicon);
  const std::size_t n = tokens.size();

  f.overall_sentiment = polarity_sign(overall) * amplify;
  f.num_pos_words = static_cast<double>(m.pos_terms.size()) * amplify;
  f.num_neg_words = static_cast<double>(m.neg_terms.size()) * amplify;

  const EmoticonCounts emo = count_emoticons(raw_text);
  f.has_pos_emo = emo.positive > 0 ? 1 : 0;
  f.has_neg_emo = emo.negative > 0 ? 1 : 0;

  const std::size_t half = (n + 1) / 2;
  for (const auto& t : m.pos_terms) (t.index < half ? f.pos_first_half : f.pos_second_half) += 1;
  for (const auto& t : m.neg_terms) (t.index < half ? f.neg_first_half : f.neg_second_half) += 1;

  if (tokens.topic_span && n > 0) {
    const auto [begin, end] = *tokens.topic_span;
    f.target_position = static_cast<double>(begin) / static_cast<double>(n);
    const std::size_t lo = begin >= kNearTargetWindow ? begin - kNearTargetWindow : 0;
    const std::size_t hi = end + kNearTargetWindow;
    auto near = [&](const LexiconMatch& t) {
      const bool intersects = t.index < hi && t.end() > lo;
      const bool inside_topic = t.index >= begin && t.end() <= end;
      return intersects && !inside_topic;
    };
    for (const auto& t : m.pos_terms) {
      if (!near(t)) continue;
      (t.length > 1 ? f.pos_terms_near_target : f.pos_words_near_target) = 1;
    }
    for (const auto& t : m.neg_terms) {
      if (!near(t)) continue;
      (t.length > 1 ? f.neg_terms_near_target : f.neg_words_near_target) = 1;
    }
    f.pos_terms_near_target *= amplify;
    f.neg_terms_near_target *= amplify;
  }
  return f;
}

SparseVector vectorize_task_a(const Tweet& tweet, const Vocabulary& vocab, const Lexicon& lexicon, double amplify,
                              NgramWeighting weighting) {
  const TokenStream tokens = task_a_tokens(tweet.text);
  std::map<std::size_t, double> tf;
  for (const auto& g : ngrams(tokens.tokens, vocab.max_order())) {
    if (const auto idx = vocab.index(g)) tf[*idx] += 1.0;
  }
  std::vector<std::pair<std::size_t, double>> pairs;
  pairs.reserve(tf.size() + LexicalFeaturesA::kCount);
  for (const auto& [idx, count] : tf) {
    const double w = weighting == NgramWeighting::IdfPresence ? vocab.idf(idx) : count * vocab.idf(idx);
    pairs.emplace_back(idx, w);
  }
  const auto lexical = lexical_features_a(tweet.text, tokens, lexicon, amplify).values();
  for (std::size_t k = 0; k < lexical.size(); ++k) pairs.emplace_back(vocab.size() + k, lexical[k]);
  return SparseVector::from_pairs(vocab.size() + LexicalFeaturesA::kCount, std::move(pairs));
}

SparseVector vectorize_task_b(const Tweet& tweet, const Vocabulary& vocab, const Lexicon& lexicon, Polarity overall,
                              double amplify) {
  if (!tweet.topic) throw Error("tweet `" + tweet.id + "` has no topic");
  const TokenStream tokens = task_b_tokens(tweet, lexicon);
  std::vector<std::pair<std::size_t, double>> pairs;
  for (const auto& g : ngrams(tokens.tokens, vocab.max_order())) {
    if (const auto idx = vocab.index(g)) pairs.emplace_back(*idx, 1.0);
  }
  const auto topic = topic_features_b(tweet.text, tokens, lexicon, overall, amplify).values();
  for (std::size_t k = 0; k < topic.size(); ++k) pairs.emplace_back(vocab.size() + k, topic[k]);
  return SparseVector::from_pairs(vocab.size() + TopicFeaturesB::kCount, std::move(pairs));
}

}  // namespace nilesenti
