#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nilesenti/preprocess.hpp"
#include "nilesenti/types.hpp"

namespace nilesenti {

struct LexiconEntry {
  std::string raw_term;             // as written in the source file
  std::vector<std::string> tokens;  // normalized + light-stemmed
  Polarity polarity = Polarity::Positive;
  double score = 0.0;

  std::string term() const;  // tokens joined by a single space
};

// Scored phrase/word lexicon in the normalized, stemmed token space.
//
// Entries whose token sequences collide after normalization are merged: the
// one with the smallest (raw_term, polarity, score) wins, so the result does
// not depend on file order. entries() keeps first-appearance order.
class Lexicon {
 public:
  void add(LexiconEntry entry);

  const LexiconEntry* find(std::span<const std::string> tokens) const;
  const LexiconEntry* single_word(const std::string& stem) const;

  const std::vector<LexiconEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t max_phrase_length() const { return max_len_; }

  std::uint64_t fingerprint() const;

 private:
  std::vector<LexiconEntry> entries_;
  std::map<std::vector<std::string>, std::size_t> index_;
  std::size_t max_len_ = 0;
};

Lexicon parse_lexicon(std::istream& in, const std::string& source = "lexicon");
Lexicon load_lexicon(const std::string& path);

// One `term<TAB>pos|neg<TAB>score` line per entry, using the normalized term;
// parse_lexicon reads it back to an identical lexicon.
void write_lexicon(const Lexicon& lexicon, std::ostream& out);

struct LexiconMatch {
  std::size_t index = 0;   // first token
  std::size_t length = 0;  // tokens covered
  double score = 0.0;

  std::size_t end() const { return index + length; }
};

struct SentimentMatches {
  std::vector<LexiconMatch> pos_terms;
  std::vector<LexiconMatch> neg_terms;
  std::optional<Polarity> last_polarity;
};

// Greedy longest-match scan, left to right, non-overlapping. Spans touching a
// reserved token (TOPICMARK, USERMENTION) never match.
SentimentMatches match_sentiment(const TokenStream& tokens, const Lexicon& lexicon);

struct SentimentScores {
  double pos = 0.0;
  double neg = 0.0;
};

SentimentScores sentiment_scores(const SentimentMatches& matches, double amplify);

}  // namespace nilesenti
