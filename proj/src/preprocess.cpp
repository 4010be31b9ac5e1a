#include "nilesenti/preprocess.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

#include "nilesenti/lexicon.hpp"
#include "nilesenti/utf8.hpp"
#include "embedded_data.hpp"

namespace nilesenti {
namespace {

bool is_diacritic(char32_t cp) { return (cp >= 0x064B && cp <= 0x0652) || cp == 0x0670; }

constexpr char32_t kTatweel = 0x0640;

char32_t fold(char32_t cp) {
  switch (cp) {
    case 0x0623:  // أ
    case 0x0625:  // إ
    case 0x0622:  // آ
      return 0x0627;
    case 0x064A:  // ي
      return 0x0649;
    case 0x0629:  // ة
      return 0x0647;
    default:
      return cp;
  }
}

// Character-level part of normalization: strip marks, fold letters.
std::u32string fold_characters(std::u32string_view in) {
  std::u32string out;
  out.reserve(in.size());
  for (char32_t cp : in) {
    if (is_diacritic(cp) || cp == kTatweel) continue;
    out.push_back(fold(cp));
  }
  return out;
}

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

std::size_t find_ci(std::string_view hay, std::string_view needle) {
  if (needle.size() > hay.size()) return std::string_view::npos;
  for (std::size_t i = 0; i + needle.size() <= hay.size(); ++i) {
    bool match = true;
    for (std::size_t k = 0; k < needle.size(); ++k) {
      if (ascii_lower(hay[i + k]) != needle[k]) {
        match = false;
        break;
      }
    }
    if (match) return i;
  }
  return std::string_view::npos;
}

std::size_t link_start(std::string_view token) {
  std::size_t best = std::string_view::npos;
  for (std::string_view marker : {"http://", "https://", "www."}) {
    best = std::min(best, find_ci(token, marker));
  }
  return best;
}

bool is_handle_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

// Splits on any Unicode whitespace code point.
std::vector<std::string> split_whitespace(std::string_view text) {
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

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (p.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out += p;
  }
  return out;
}

bool is_retained_punct(char32_t cp) {
  return cp == U'؟' || cp == U'?' || cp == U'!' || cp == U'.' || cp == U'،' || cp == U',' ||
         cp == U'؛' || cp == U';' || cp == U'#';
}

bool is_separator_punct(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) || (cp >= 0x5B && cp <= 0x60) ||
           (cp >= 0x7B && cp <= 0x7E);
  }
  switch (cp) {
    case U'«':
    case U'»':
    case U'“':
    case U'”':
    case U'‘':
    case U'’':
    case U'…':
    case U'–':
    case U'\u2014':
    case U'٪':
    case U'٫':
    case U'٬':
    case U'¿':
    case U'¡':
      return true;
    default:
      return false;
  }
}

void parse_lines(std::istream& in, const std::string& source,
                 const std::function<void(std::string_view, std::string_view, int)>& sink) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw Error(source + ": line " + std::to_string(lineno) + ": expected 2 fields");
    }
    sink(std::string_view(line).substr(0, tab), std::string_view(line).substr(tab + 1), lineno);
  }
}

std::u32string_view view(const std::u32string& s) { return s; }

}  // namespace

bool is_reserved_token(std::string_view token) { return token == kTopicMark || token == kUserMention; }

void EmoticonTable::add(std::string emoticon, Polarity polarity) {
  for (auto& [e, p] : entries_) {
    if (e == emoticon) {
      p = polarity;
      return;
    }
  }
  entries_.emplace_back(std::move(emoticon), polarity);
}

std::optional<Polarity> EmoticonTable::lookup(std::string_view token) const {
  for (const auto& [e, p] : entries_) {
    if (e == token) return p;
  }
  return std::nullopt;
}

EmoticonTable parse_emoticon_table(std::istream& in) {
  EmoticonTable table;
  parse_lines(in, "emoticon table", [&](std::string_view emo, std::string_view pol, int lineno) {
    if (emo.empty() || (pol != "pos" && pol != "neg")) {
      throw Error("emoticon table: line " + std::to_string(lineno) + ": expected `emoticon<TAB>pos|neg`");
    }
    table.add(std::string(emo), pol == "pos" ? Polarity::Positive : Polarity::Negative);
  });
  return table;
}

EmoticonTable load_emoticon_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open emoticon table: " + path);
  return parse_emoticon_table(in);
}

const EmoticonTable& default_emoticons() {
  static const EmoticonTable table = [] {
    std::istringstream in{std::string(embedded::kEmoticons)};
    return parse_emoticon_table(in);
  }();
  return table;
}

AffixTable parse_affix_table(std::istream& in) {
  AffixTable table;
  parse_lines(in, "affix table", [&](std::string_view kind, std::string_view affix, int lineno) {
    const std::u32string folded = fold_characters(utf8::decode(affix));
    if (folded.empty() || (kind != "prefix" && kind != "suffix")) {
      throw Error("affix table: line " + std::to_string(lineno) + ": expected `prefix|suffix<TAB>affix`");
    }
    auto& list = kind == "prefix" ? table.prefixes : table.suffixes;
    if (std::find(list.begin(), list.end(), folded) == list.end()) list.push_back(folded);
  });
  auto longest_first = [](const std::u32string& a, const std::u32string& b) {
    return a.size() != b.size() ? a.size() > b.size() : a < b;
  };
  std::sort(table.prefixes.begin(), table.prefixes.end(), longest_first);
  std::sort(table.suffixes.begin(), table.suffixes.end(), longest_first);
  return table;
}

AffixTable load_affix_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open affix table: " + path);
  return parse_affix_table(in);
}

const AffixTable& default_affixes() {
  static const AffixTable table = [] {
    std::istringstream in{std::string(embedded::kAffixes)};
    return parse_affix_table(in);
  }();
  return table;
}

std::string normalize_text(std::string_view text) {
  const std::string folded = utf8::encode(fold_characters(utf8::decode(text)));
  std::vector<std::string> parts;
  for (std::string token : split_whitespace(folded)) {
    if (const auto cut = link_start(token); cut != std::string::npos) token.resize(cut);
    std::string rebuilt;
    for (std::size_t i = 0; i < token.size();) {
      if (token[i] == '@' && i + 1 < token.size() && is_handle_char(token[i + 1])) {
        std::size_t j = i + 1;
        while (j < token.size() && is_handle_char(token[j])) ++j;
        rebuilt += ' ';
        rebuilt += kUserMention;
        rebuilt += ' ';
        i = j;
      } else {
        rebuilt += token[i++];
      }
    }
    parts.push_back(std::move(rebuilt));
  }
  return join(split_whitespace(join(parts)));
}

std::string reduce_elongation(std::string_view text) {
  const std::u32string cps = utf8::decode(text);
  std::u32string out;
  out.reserve(cps.size());
  for (std::size_t i = 0; i < cps.size();) {
    std::size_t j = i;
    while (j < cps.size() && cps[j] == cps[i]) ++j;
    const std::size_t run = j - i;
    out.append(run >= 3 ? 1 : run, cps[i]);
    i = j;
  }
  return utf8::encode(out);
}

std::string replace_emoticons(std::string_view text, const EmoticonTable& table) {
  const std::u32string cps = utf8::decode(text);
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < cps.size()) {
    if (utf8::is_space(cps[i])) {
      utf8::append(out, cps[i++]);
      continue;
    }
    std::size_t j = i;
    while (j < cps.size() && !utf8::is_space(cps[j])) ++j;
    const std::string token = utf8::encode(view(cps).substr(i, j - i));
    if (const auto pol = table.lookup(token)) {
      out += *pol == Polarity::Positive ? kPositiveCue : kNegativeCue;
    } else {
      out += token;
    }
    i = j;
  }
  return out;
}

std::string prepare_text(std::string_view text, const EmoticonTable& table) {
  return replace_emoticons(reduce_elongation(normalize_text(text)), table);
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) tokens.push_back(std::move(cur));
    cur.clear();
  };
  for (char32_t cp : utf8::decode(text)) {
    if (is_retained_punct(cp)) {
      flush();
      std::string p;
      utf8::append(p, cp);
      tokens.push_back(std::move(p));
    } else if (utf8::is_space(cp) || is_separator_punct(cp)) {
      flush();
    } else {
      utf8::append(cur, cp);
    }
  }
  flush();
  return tokens;
}

bool is_punctuation_token(std::string_view token) {
  const std::u32string cps = utf8::decode(token);
  return cps.size() == 1 && is_retained_punct(cps[0]);
}

bool is_sentence_break(std::string_view token) {
  return is_punctuation_token(token) && token != "#";
}

std::string light_stem(std::string_view token, const AffixTable& affixes) {
  std::u32string word = utf8::decode(token);
  if (std::none_of(word.begin(), word.end(), utf8::is_arabic_letter)) return std::string(token);
  constexpr std::size_t kMinStem = 3;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : affixes.prefixes) {
      if (word.size() >= p.size() + kMinStem && word.starts_with(p)) {
        word.erase(0, p.size());
        changed = true;
        break;
      }
    }
    for (const auto& s : affixes.suffixes) {
      if (word.size() >= s.size() + kMinStem && word.ends_with(s)) {
        word.erase(word.size() - s.size());
        changed = true;
        break;
      }
    }
  }
  return utf8::encode(word);
}

TokenStream tokenize_and_stem(std::string_view text, const AffixTable& affixes) {
  TokenStream stream;
  for (auto& tok : tokenize(text)) {
    stream.tokens.push_back(is_reserved_token(tok) ? std::move(tok) : light_stem(tok, affixes));
  }
  return stream;
}

TokenStream prepare_neural_tokens(std::string_view text, const std::optional<std::string>& topic, bool mask_topic,
                                  const Lexicon& lexicon, double cue_threshold) {
  std::vector<std::string> tokens = tokenize(prepare_text(text));
  // Emoticons glued to other symbols only become tokens after splitting.
  for (auto& t : tokens) t = replace_emoticons(t);

  std::vector<std::string> topic_tokens;
  if (topic) {
    for (auto& t : tokenize(prepare_text(*topic))) {
      if (!is_punctuation_token(t)) topic_tokens.push_back(replace_emoticons(t));
    }
  }

  // Locate the topic in the unaugmented stream: half-open [begin, end).
  std::optional<std::pair<std::size_t, std::size_t>> found;
  if (!topic_tokens.empty() && topic_tokens.size() <= tokens.size()) {
    for (std::size_t i = 0; i + topic_tokens.size() <= tokens.size(); ++i) {
      if (std::equal(topic_tokens.begin(), topic_tokens.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) {
        found = {i, i + topic_tokens.size()};
        break;
      }
    }
  }
  if (!found) {
    // Already-masked input: the marker itself is the topic occurrence.
    const auto it = std::find(tokens.begin(), tokens.end(), kTopicMark);
    if (it != tokens.end()) {
      const auto i = static_cast<std::size_t>(it - tokens.begin());
      found = {i, i + 1};
    }
  }

  auto cue_for = [&](const std::string& tok) -> std::optional<std::string_view> {
    if (is_reserved_token(tok) || tok == kPositiveCue || tok == kNegativeCue) return std::nullopt;
    const LexiconEntry* e = lexicon.single_word(light_stem(tok));
    if (e == nullptr || !(e->score > cue_threshold)) return std::nullopt;
    return e->polarity == Polarity::Positive ? kPositiveCue : kNegativeCue;
  };

  TokenStream out;
  out.tokens.reserve(tokens.size() + 4);
  for (std::size_t i = 0; i < tokens.size();) {
    if (found && i == found->first) {
      const std::size_t start = out.tokens.size();
      if (mask_topic) {
        out.tokens.emplace_back(kTopicMark);
      } else {
        out.tokens.insert(out.tokens.end(), tokens.begin() + static_cast<std::ptrdiff_t>(found->first),
                          tokens.begin() + static_cast<std::ptrdiff_t>(found->second));
      }
      out.topic_span = std::make_pair(start, out.tokens.size());
      i = found->second;
      continue;
    }
    out.tokens.push_back(tokens[i]);
    if (const auto cue = cue_for(tokens[i])) {
      const bool next_is_cue = i + 1 < tokens.size() && tokens[i + 1] == *cue;
      if (!next_is_cue) out.tokens.emplace_back(*cue);
    }
    ++i;
  }
  return out;
}

}  // namespace nilesenti
