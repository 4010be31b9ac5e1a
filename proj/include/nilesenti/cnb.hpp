#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nilesenti/features.hpp"
#include "nilesenti/types.hpp"

namespace nilesenti {

struct CnbOptions {
  double smoothing = 1.0;
  bool normalize = true;   // per-class L1 weight normalization (WCNB)
  bool use_prior = false;  // subtract ln P(c) from the complement score
};

// Complement Naive Bayes over nonnegative sparse features.
struct CnbModel {
  std::vector<Polarity> classes;             // enum order of the labels seen
  std::vector<std::vector<double>> weights;  // [class][feature]
  std::vector<double> log_prior;             // [class], used only with use_prior
  std::size_t dimension = 0;
  CnbOptions options;
};

// For each class c: w_ci = ln((a + N_~c,i) / (a*V + sum_k N_~c,k)), where
// N_~c,i sums feature i over the documents not labeled c; with normalize the
// row is divided by its L1 norm.
CnbModel train_cnb(std::span<const SparseVector> vectors, std::span<const Polarity> labels,
                   const CnbOptions& options = {});

struct CnbPrediction {
  Polarity label = Polarity::Positive;
  std::vector<double> scores;  // aligned with model.classes
};

// argmin_c sum_i v_i w_ci; ties go to the earlier class. Indices at or past
// the model dimension are ignored.
CnbPrediction predict_cnb(const CnbModel& model, const SparseVector& v);

// `[cnb]` section body.
void write_cnb(const CnbModel& model, std::ostream& out);
CnbModel read_cnb(std::span<const std::string> lines, const std::string& source = "cnb model");

}  // namespace nilesenti
