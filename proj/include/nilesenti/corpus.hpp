#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nilesenti/types.hpp"

namespace nilesenti {

class Lexicon;

enum class Task { A, B };

struct Tweet {
  std::string id;
  std::optional<std::string> topic;
  std::string text;
  std::optional<Polarity> label;  // absent for UNKNOWN rows
};

struct Dataset {
  std::vector<Tweet> tweets;
  Task task = Task::A;

  std::size_t size() const { return tweets.size(); }
  bool empty() const { return tweets.empty(); }
};

// Tab-separated `id, topic, label, text`; topic `NONE` means absent and label
// `UNKNOWN` marks an unlabeled row.
Dataset parse_dataset(std::istream& in, Task task, const std::string& source = "dataset");
Dataset load_dataset(const std::string& path, Task task);
void write_dataset(const Dataset& ds, std::ostream& out);

// Conflicting-label texts dropped, consistent duplicates reduced to their
// first occurrence, texts also present in dev removed. Texts are compared
// after normalize_text.
Dataset clean_training_set(const Dataset& train, const Dataset& dev);

// Appends one synthetic tweet (id `lex:<entry index>`) per lexicon entry whose
// score is strictly above threshold.
Dataset augment_with_lexicon(const Dataset& train, const Lexicon& lexicon, double threshold);

using Prediction = std::pair<std::string, Polarity>;

void write_predictions(const std::vector<Prediction>& predictions, std::ostream& out);
void write_predictions(const std::vector<Prediction>& predictions, const std::string& path);

// Reads `id<TAB>label[<TAB>...]`; extra columns are ignored.
std::vector<Prediction> parse_predictions(std::istream& in, const std::string& source = "predictions");
std::vector<Prediction> load_predictions(const std::string& path);

// Writes via a sibling temporary file and renames it into place, so a failed
// run leaves no partial output behind.
void write_file_atomically(const std::string& path, const std::string& contents);

}  // namespace nilesenti
