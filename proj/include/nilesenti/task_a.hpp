#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nilesenti/cnb.hpp"
#include "nilesenti/corpus.hpp"
#include "nilesenti/features.hpp"
#include "nilesenti/lexicon.hpp"

namespace nilesenti {

struct TaskAOptions {
  double amplify = 2.0;
  double lexicon_threshold = 0.8;
  int max_order = 2;
  NgramWeighting weighting = NgramWeighting::IdfPresence;
  CnbOptions cnb;
};

// Everything needed to label a tweet positive/negative/neutral.
struct TaskAModel {
  Vocabulary vocab;
  Lexicon lexicon;
  CnbModel cnb;
  double amplify = 2.0;
  NgramWeighting weighting = NgramWeighting::IdfPresence;

  std::uint64_t fingerprint() const;
};

// Cleans train against dev, appends lexicon entries above the threshold,
// builds the n-gram vocabulary and fits the CNB model.
TaskAModel train_task_a(const Dataset& train, const Dataset& dev, const Lexicon& lexicon, const TaskAOptions& options);

Polarity predict_task_a(const TaskAModel& model, const Tweet& tweet);
std::vector<Prediction> predict_task_a(const TaskAModel& model, const Dataset& data);

std::string render_task_a(const TaskAModel& model);
TaskAModel parse_task_a(std::istream& in, const std::string& source = "task-a model");
TaskAModel load_task_a(const std::string& path);

}  // namespace nilesenti
