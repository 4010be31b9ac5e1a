#include "nilesenti/embeddings.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "nilesenti/types.hpp"
#include "nilesenti/utf8.hpp"
#include "numfmt.hpp"

namespace nilesenti {
namespace {

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool is_integer(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

EmbeddingTable::EmbeddingTable(std::size_t dim) : dim_(dim), oov_(std::make_unique<OovCache>()) {
  if (dim == 0) throw Error("embedding dimension must be positive");
}

bool EmbeddingTable::insert(std::string word, std::vector<double> vector) {
  if (vector.size() != dim_) throw Error("embedding for `" + word + "` has wrong dimension");
  const auto [it, fresh] = vectors_.insert_or_assign(std::move(word), std::move(vector));
  return fresh;
}

const std::vector<double>* EmbeddingTable::find(const std::string& word) const {
  const auto it = vectors_.find(word);
  return it == vectors_.end() ? nullptr : &it->second;
}

std::vector<double> random_oov_vector(const std::string& word, std::uint64_t seed, std::size_t dim) {
  std::mt19937_64 rng(utf8::fnv1a(word, utf8::fnv1a("oov") ^ seed));
  std::vector<double> v(dim);
  for (auto& x : v) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0,1)
    x = (2.0 * u - 1.0) * kOovRange;
  }
  return v;
}

std::vector<double> EmbeddingTable::lookup(const std::string& word, std::uint64_t seed) const {
  if (const auto* v = find(word)) return *v;
  std::lock_guard lock(oov_->mutex);
  auto key = std::make_pair(seed, word);
  auto it = oov_->vectors.find(key);
  if (it == oov_->vectors.end()) {
    it = oov_->vectors.emplace(std::move(key), random_oov_vector(word, seed, dim_)).first;
  }
  return it->second;
}

std::size_t EmbeddingTable::oov_cache_size() const {
  std::lock_guard lock(oov_->mutex);
  return oov_->vectors.size();
}

void EmbeddingTable::write(std::ostream& out) const {
  std::vector<const std::string*> words;
  words.reserve(vectors_.size());
  for (const auto& [w, v] : vectors_) words.push_back(&w);
  std::sort(words.begin(), words.end(), [](const auto* a, const auto* b) { return *a < *b; });
  out << vectors_.size() << ' ' << dim_ << '\n';
  for (const auto* w : words) {
    out << *w;
    for (double x : vectors_.at(*w)) out << ' ' << format_double(x);
    out << '\n';
  }
}

std::uint64_t EmbeddingTable::fingerprint() const {
  std::ostringstream body;
  write(body);
  return utf8::fnv1a(body.str());
}

EmbeddingTable parse_embeddings(std::istream& in, std::size_t dim, const std::string& source) {
  EmbeddingTable table(dim);
  std::string line;
  int lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = split_spaces(line);
    if (fields.empty()) continue;
    const std::string where = source + ": line " + std::to_string(lineno);
    if (first) {
      first = false;
      if (fields.size() == 2 && dim != 1 && is_integer(fields[0]) && is_integer(fields[1])) {
        if (static_cast<std::size_t>(parse_int(fields[1], where)) != dim) {
          throw Error(where + ": header dimension " + std::string(fields[1]) + " != expected " +
                      std::to_string(dim));
        }
        continue;
      }
    }
    if (fields.size() != dim + 1) {
      throw Error(where + ": expected " + std::to_string(dim) + " values, got " +
                  std::to_string(fields.size() - 1));
    }
    std::vector<double> v(dim);
    for (std::size_t k = 0; k < dim; ++k) v[k] = parse_double(fields[k + 1], where);
    std::string word(fields[0]);
    if (!table.insert(word, std::move(v))) {
      table.add_warning(where + ": duplicate word `" + word + "`, keeping the last vector");
    }
  }
  return table;
}

EmbeddingTable load_embeddings(const std::string& path, std::size_t dim) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open embeddings: " + path);
  return parse_embeddings(in, dim, path);
}

TweetMatrix embed_tweet(const TokenStream& tokens, const EmbeddingTable& table, std::size_t max_len,
                        std::uint64_t seed) {
  if (max_len == 0) throw Error("max_len must be at least 1");
  TweetMatrix m;
  m.rows = max_len;
  m.cols = table.dim();
  m.data.assign(m.rows * m.cols, 0.0);
  const std::size_t len = std::min(tokens.size(), max_len);
  const std::size_t start = (max_len - len) / 2;
  m.fill_span = {start, start + len};
  for (std::size_t k = 0; k < len; ++k) {
    const auto v = table.lookup(tokens.tokens[k], seed);
    std::copy(v.begin(), v.end(), m.data.begin() + static_cast<std::ptrdiff_t>((start + k) * m.cols));
  }
  return m;
}

}  // namespace nilesenti
