#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "nilesenti/corpus.hpp"
#include "nilesenti/embeddings.hpp"
#include "nilesenti/eval.hpp"
#include "nilesenti/features.hpp"
#include "nilesenti/lexicon.hpp"
#include "nilesenti/neural.hpp"
#include "nilesenti/task_a.hpp"

namespace nilesenti {

// Two-class majority; a Neutral vote is an error.
Polarity majority_vote(const std::array<Polarity, 3>& votes);

struct EnsembleOptions {
  double amplify = 2.0;
  std::size_t max_len = 35;
  std::uint64_t seed = 42;
  TrainConfig logreg;
  TrainConfig mlp;
  TrainConfig cnn;
  std::size_t mlp_hidden = 64;
  CnnShape cnn_shape;
};

struct EnsembleModel {
  DenseNet logreg;
  DenseNet mlp;
  CnnParams cnn;
  Vocabulary vocab;  // unigrams of the topic-aware vectors
  Lexicon lexicon;
  EmbeddingTable embeddings;
  TaskAModel task_a;
  double amplify = 2.0;
  std::size_t max_len = 35;
  std::uint64_t seed = 42;
};

struct TopicVerdict {
  Polarity label = Polarity::Positive;
  std::array<Polarity, 3> votes{};  // logreg, mlp, cnn
};

TopicVerdict classify_topic_tweet(const Tweet& tweet, const EnsembleModel& model, double amplify, std::uint64_t seed);
TopicVerdict classify_topic_tweet(const Tweet& tweet, const EnsembleModel& model);
std::vector<TopicVerdict> classify_topic_tweets(const Dataset& data, const EnsembleModel& model);

// Inputs for the three classifiers, built the way classify_topic_tweet does.
SparseVector topic_vector(const Tweet& tweet, const EnsembleModel& model, double amplify);
TweetMatrix topic_matrix(const Tweet& tweet, const EnsembleModel& model, std::uint64_t seed);

// Fits all three classifiers on the labeled tweets of `train`.
EnsembleModel train_ensemble(const Dataset& train, const Lexicon& lexicon, EmbeddingTable embeddings,
                             TaskAModel task_a, const EnsembleOptions& options);

struct EnsembleReport {
  MetricsReport logreg, mlp, cnn, ensemble;
};

EnsembleReport evaluate_ensemble(const Dataset& data, const EnsembleModel& model);

// Directory layout: taska.model logreg.model mlp.model cnn.model vocab.tsv
// lexicon.tsv embeddings.vec manifest.cfg.
void save_ensemble(const EnsembleModel& model, const std::string& dir);
EnsembleModel load_ensemble(const std::string& dir);

}  // namespace nilesenti
