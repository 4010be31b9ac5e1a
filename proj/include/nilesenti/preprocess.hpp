#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nilesenti/types.hpp"

namespace nilesenti {

class Lexicon;

inline constexpr std::string_view kTopicMark = "TOPICMARK";
inline constexpr std::string_view kUserMention = "USERMENTION";
inline constexpr std::string_view kPositiveCue = "حب";
inline constexpr std::string_view kNegativeCue = "غضب";

bool is_reserved_token(std::string_view token);

struct TokenStream {
  std::vector<std::string> tokens;
  // Half-open [first, second) token range of the matched topic.
  std::optional<std::pair<std::size_t, std::size_t>> topic_span;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
};

// Positive/negative emoticon lists. Lookup is exact on a whitespace token.
class EmoticonTable {
 public:
  void add(std::string emoticon, Polarity polarity);
  std::optional<Polarity> lookup(std::string_view token) const;
  std::size_t size() const { return entries_.size(); }
  const std::vector<std::pair<std::string, Polarity>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, Polarity>> entries_;
};

// Lines `emoticon<TAB>pos|neg`.
EmoticonTable parse_emoticon_table(std::istream& in);
EmoticonTable load_emoticon_table(const std::string& path);
const EmoticonTable& default_emoticons();

// Light-stemmer affixes, stored folded and sorted longest first.
struct AffixTable {
  std::vector<std::u32string> prefixes;
  std::vector<std::u32string> suffixes;
};

// Lines `prefix|suffix<TAB>affix`.
AffixTable parse_affix_table(std::istream& in);
AffixTable load_affix_table(const std::string& path);
const AffixTable& default_affixes();

// Diacritics and tatweel dropped, hyperlinks removed, @mentions replaced by
// USERMENTION, alef/yaa/taa-marbuta folded, whitespace collapsed and trimmed.
std::string normalize_text(std::string_view text);

// Every run of three or more identical code points collapses to one.
std::string reduce_elongation(std::string_view text);

std::string replace_emoticons(std::string_view text, const EmoticonTable& table = default_emoticons());

// normalize_text -> reduce_elongation -> replace_emoticons.
std::string prepare_text(std::string_view text, const EmoticonTable& table = default_emoticons());

// Whitespace/punctuation split without stemming. The sentence punctuation
// ؟ ? ! . ، , ؛ ; and # come out as tokens of their own; any other punctuation
// is a separator and dropped.
std::vector<std::string> tokenize(std::string_view text);

bool is_punctuation_token(std::string_view token);
bool is_sentence_break(std::string_view token);

std::string light_stem(std::string_view token, const AffixTable& affixes = default_affixes());

TokenStream tokenize_and_stem(std::string_view text, const AffixTable& affixes = default_affixes());

// Token stream used by the Task-B classifiers. Sentiment cue words are
// inserted after strong single-word lexicon entries; the first occurrence of
// the topic is replaced by TOPICMARK when mask_topic is set, and located
// either way.
TokenStream prepare_neural_tokens(std::string_view text, const std::optional<std::string>& topic,
                                  bool mask_topic, const Lexicon& lexicon, double cue_threshold = 0.8);

}  // namespace nilesenti
