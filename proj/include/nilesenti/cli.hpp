#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "nilesenti/ensemble.hpp"
#include "nilesenti/eval.hpp"
#include "nilesenti/task_a.hpp"

namespace nilesenti {

struct RunConfig {
  double amplify = 2.0;
  double lexicon_threshold = 0.8;
  std::size_t max_len = 35;
  std::size_t embedding_dim = 100;
  std::uint64_t seed = 42;
  CnbOptions cnb;
  NgramWeighting weighting = NgramWeighting::IdfPresence;
  TrainConfig logreg;
  TrainConfig mlp;
  TrainConfig cnn;
  std::size_t mlp_hidden = 64;
  CnnShape cnn_shape;
  Aggregate aggregate = Aggregate::Macro;

  // Recognised keys: amplify lexicon_threshold max_len embedding_dim seed
  // cnb.smoothing cnb.normalize cnb.prior weighting mlp.hidden cnn.filters
  // cnn.hidden aggregate, and {logreg,mlp,cnn}.{lr,epochs,batch_size,l2}.
  void set(const std::string& key, const std::string& value);
  void apply(const std::map<std::string, std::string>& values);

  TaskAOptions task_a_options() const;
  EnsembleOptions ensemble_options() const;
};

// Runs one subcommand; args exclude the program name. Returns 0 on success,
// 1 on a runtime error and 2 on a usage error.
int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace nilesenti
