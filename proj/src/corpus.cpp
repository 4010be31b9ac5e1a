#include "nilesenti/corpus.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "nilesenti/lexicon.hpp"
#include "nilesenti/preprocess.hpp"

namespace nilesenti {
namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  for (;;) {
    const auto tab = line.find('\t');
    fields.push_back(line.substr(0, tab));
    if (tab == std::string_view::npos) break;
    line.remove_prefix(tab + 1);
  }
  return fields;
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i]))) return false;
  }
  return true;
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

}  // namespace

Dataset parse_dataset(std::istream& in, Task task, const std::string& source) {
  Dataset ds;
  ds.task = task;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fail = [&](const std::string& what) {
      return Error(source + ": line " + std::to_string(lineno) + ": " + what);
    };
    const auto fields = split_tabs(line);
    if (fields.size() != 4) throw fail("expected 4 fields");
    Tweet t;
    t.id = std::string(trim(fields[0]));
    if (t.id.empty()) throw fail("empty id");
    if (fields[1] != "NONE") t.topic = std::string(fields[1]);
    if (task == Task::B && !t.topic) throw fail("task B record without topic");
    if (fields[2] != "UNKNOWN") {
      const auto label = parse_polarity(fields[2]);
      if (!label || !iequals(fields[2], to_string(*label))) {
        throw fail("unknown label `" + std::string(fields[2]) + "`");
      }
      if (task == Task::B && *label == Polarity::Neutral) throw fail("neutral label in a two-class task");
      t.label = label;
    }
    t.text = std::string(trim(fields[3]));
    if (t.text.empty()) throw fail("empty text");
    ds.tweets.push_back(std::move(t));
  }
  return ds;
}

Dataset load_dataset(const std::string& path, Task task) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open dataset: " + path);
  return parse_dataset(in, task, path);
}

void write_dataset(const Dataset& ds, std::ostream& out) {
  for (const auto& t : ds.tweets) {
    out << t.id << '\t' << (t.topic ? *t.topic : "NONE") << '\t'
        << (t.label ? std::string(to_string(*t.label)) : "UNKNOWN") << '\t' << t.text << '\n';
  }
}

Dataset clean_training_set(const Dataset& train, const Dataset& dev) {
  std::vector<std::string> keys;
  keys.reserve(train.size());
  std::unordered_map<std::string, std::set<std::optional<Polarity>>> labels_by_text;
  for (const auto& t : train.tweets) {
    keys.push_back(normalize_text(t.text));
    labels_by_text[keys.back()].insert(t.label);
  }
  std::unordered_set<std::string> dev_texts;
  for (const auto& t : dev.tweets) dev_texts.insert(normalize_text(t.text));

  Dataset out;
  out.task = train.task;
  std::unordered_set<std::string> kept;
  std::unordered_set<std::string> kept_ids;
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto& key = keys[i];
    if (labels_by_text[key].size() > 1) continue;
    if (dev_texts.contains(key)) continue;
    if (kept.contains(key) || kept_ids.contains(train.tweets[i].id)) continue;
    kept.insert(key);
    kept_ids.insert(train.tweets[i].id);
    out.tweets.push_back(train.tweets[i]);
  }
  return out;
}

Dataset augment_with_lexicon(const Dataset& train, const Lexicon& lexicon, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw Error("lexicon threshold must lie in [0,1]");
  Dataset out = train;
  const auto& entries = lexicon.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!(entries[i].score > threshold)) continue;
    Tweet t;
    t.id = "lex:" + std::to_string(i);
    t.text = entries[i].raw_term;
    t.label = entries[i].polarity;
    out.tweets.push_back(std::move(t));
  }
  return out;
}

void write_predictions(const std::vector<Prediction>& predictions, std::ostream& out) {
  std::unordered_set<std::string> ids;
  for (const auto& [id, label] : predictions) {
    if (!ids.insert(id).second) throw Error("duplicate prediction id `" + id + "`");
  }
  for (const auto& [id, label] : predictions) out << id << '\t' << to_string(label) << '\n';
}

void write_predictions(const std::vector<Prediction>& predictions, const std::string& path) {
  std::ostringstream body;
  write_predictions(predictions, body);
  write_file_atomically(path, body.str());
}

std::vector<Prediction> parse_predictions(std::istream& in, const std::string& source) {
  std::vector<Prediction> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() < 2) throw Error(source + ": line " + std::to_string(lineno) + ": expected id<TAB>label");
    const auto label = parse_polarity(fields[1]);
    if (!label) throw Error(source + ": line " + std::to_string(lineno) + ": unknown label");
    out.emplace_back(std::string(fields[0]), *label);
  }
  return out;
}

std::vector<Prediction> load_predictions(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open predictions: " + path);
  return parse_predictions(in, path);
}

void write_file_atomically(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path);
    out << contents;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error("write failed: " + path);
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("cannot write " + path);
  }
}

}  // namespace nilesenti
