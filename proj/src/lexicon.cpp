#include "nilesenti/lexicon.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <tuple>

#include "nilesenti/utf8.hpp"
#include "numfmt.hpp"

namespace nilesenti {

std::string LexiconEntry::term() const {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

void Lexicon::add(LexiconEntry entry) {
  if (entry.tokens.empty()) throw Error("lexicon entry with empty term");
  auto it = index_.find(entry.tokens);
  if (it == index_.end()) {
    max_len_ = std::max(max_len_, entry.tokens.size());
    index_.emplace(entry.tokens, entries_.size());
    entries_.push_back(std::move(entry));
    return;
  }
  LexiconEntry& kept = entries_[it->second];
  if (std::tie(entry.raw_term, entry.polarity, entry.score) < std::tie(kept.raw_term, kept.polarity, kept.score)) {
    kept = std::move(entry);
  }
}

const LexiconEntry* Lexicon::find(std::span<const std::string> tokens) const {
  const auto it = index_.find(std::vector<std::string>(tokens.begin(), tokens.end()));
  return it == index_.end() ? nullptr : &entries_[it->second];
}

const LexiconEntry* Lexicon::single_word(const std::string& stem) const {
  const std::string one[] = {stem};
  return find(one);
}

std::uint64_t Lexicon::fingerprint() const {
  std::uint64_t h = utf8::fnv1a("lexicon");
  for (const auto& [tokens, idx] : index_) {
    const auto& e = entries_[idx];
    h = utf8::fnv1a(e.term(), h);
    h = utf8::fnv1a(to_string(e.polarity), h);
    h = utf8::fnv1a(format_double(e.score), h);
  }
  return h;
}

Lexicon parse_lexicon(std::istream& in, const std::string& source) {
  Lexicon lex;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fail = [&](const std::string& what) {
      return Error(source + ": line " + std::to_string(lineno) + ": " + what);
    };
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (;;) {
      const auto tab = rest.find('\t');
      fields.push_back(rest.substr(0, tab));
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    if (fields.size() != 3) throw fail("expected 3 fields");
    const auto pol = parse_polarity(fields[1]);
    if (!pol || *pol == Polarity::Neutral) throw fail("bad polarity `" + std::string(fields[1]) + "`");
    double score = 0.0;
    const auto [ptr, ec] = std::from_chars(fields[2].data(), fields[2].data() + fields[2].size(), score);
    if (ec != std::errc() || ptr != fields[2].data() + fields[2].size()) {
      throw fail("bad score `" + std::string(fields[2]) + "`");
    }
    if (!(score >= 0.0 && score <= 1.0)) throw fail("score outside [0,1]");
    LexiconEntry e;
    e.raw_term = std::string(fields[0]);
    e.tokens = tokenize_and_stem(normalize_text(e.raw_term)).tokens;
    if (e.tokens.empty()) throw fail("empty term");
    e.polarity = *pol;
    e.score = score;
    lex.add(std::move(e));
  }
  return lex;
}

Lexicon load_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lexicon: " + path);
  return parse_lexicon(in, path);
}

void write_lexicon(const Lexicon& lexicon, std::ostream& out) {
  for (const auto& e : lexicon.entries()) {
    out << e.term() << '\t' << (e.polarity == Polarity::Positive ? "pos" : "neg") << '\t'
        << format_double(e.score) << '\n';
  }
}

SentimentMatches match_sentiment(const TokenStream& stream, const Lexicon& lexicon) {
  SentimentMatches m;
  const auto& toks = stream.tokens;
  const std::span<const std::string> all(toks);
  std::size_t i = 0;
  while (i < toks.size()) {
    const std::size_t longest = std::min(lexicon.max_phrase_length(), toks.size() - i);
    const LexiconEntry* hit = nullptr;
    std::size_t len = longest;
    for (; len >= 1; --len) {
      const auto span = all.subspan(i, len);
      if (std::any_of(span.begin(), span.end(), [](const std::string& t) { return is_reserved_token(t); })) {
        continue;
      }
      if ((hit = lexicon.find(span)) != nullptr) break;
    }
    if (hit == nullptr) {
      ++i;
      continue;
    }
    const LexiconMatch match{i, len, hit->score};
    (hit->polarity == Polarity::Positive ? m.pos_terms : m.neg_terms).push_back(match);
    m.last_polarity = hit->polarity;
    i += len;
  }
  return m;
}

SentimentScores sentiment_scores(const SentimentMatches& matches, double amplify) {
  SentimentScores s;
  for (const auto& t : matches.pos_terms) s.pos += t.score;
  for (const auto& t : matches.neg_terms) s.neg += t.score;
  s.pos *= amplify;
  s.neg *= amplify;
  return s;
}

}  // namespace nilesenti
