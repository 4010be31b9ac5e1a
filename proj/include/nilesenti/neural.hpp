#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nilesenti/embeddings.hpp"
#include "nilesenti/features.hpp"
#include "nilesenti/types.hpp"

namespace nilesenti {

enum class Activation { Identity, Relu, Sigmoid, Softmax };

std::string_view to_string(Activation a);

struct DenseLayer {
  Eigen::MatrixXd weights;  // out x in
  Eigen::VectorXd bias;     // out
  Activation activation = Activation::Identity;
};

// Feed-forward net over a sparse input. Classifiers end in a 2-way softmax
// whose outputs are ordered (Positive, Negative).
struct DenseNet {
  std::vector<DenseLayer> layers;

  std::size_t input_dim() const { return layers.empty() ? 0 : static_cast<std::size_t>(layers.front().weights.cols()); }
  std::size_t output_dim() const { return layers.empty() ? 0 : static_cast<std::size_t>(layers.back().weights.rows()); }
};

struct ConvBank {
  std::size_t window = 0;
  Eigen::MatrixXd kernels;  // n_filters x (window * dim), a kernel row matches a row-major window
  Eigen::VectorXd bias;     // n_filters
};

struct CnnShape {
  std::size_t n_filters = 100;
  std::size_t hidden = 25;
};

// Two convolution banks (windows 3 and 4) -> relu -> global max-pool ->
// 25-unit relu layer -> 2-way softmax.
struct CnnParams {
  std::size_t dim = 100;
  std::array<ConvBank, 2> banks;
  DenseLayer hidden;  // relu
  DenseLayer output;  // softmax

  std::size_t n_filters() const { return static_cast<std::size_t>(banks[0].kernels.rows()); }
};

inline constexpr std::array<std::size_t, 2> kCnnWindows = {3, 4};

struct TrainConfig {
  double learning_rate = 0.01;
  int epochs = 50;
  int batch_size = 32;
  std::uint64_t seed = 42;
  double l2 = 0.0;

  void validate() const;
};

using Probabilities = std::array<double, 2>;  // (Positive, Negative)

using SparseExample = std::pair<SparseVector, Polarity>;
using MatrixExample = std::pair<TweetMatrix, Polarity>;

DenseNet init_logreg(std::size_t input_dim, std::uint64_t seed);
DenseNet init_mlp(std::size_t input_dim, std::size_t hidden, std::uint64_t seed);
CnnParams init_cnn(std::size_t dim, const CnnShape& shape, std::uint64_t seed);

Probabilities net_forward(const DenseNet& net, const SparseVector& x);
Probabilities cnn_forward(const CnnParams& p, const TweetMatrix& m);

// Mini-batch SGD on mean cross-entropy; L2 on weight matrices. Deterministic
// in cfg.seed and independent of the order of `data`.
DenseNet train_logreg(std::span<const SparseExample> data, const TrainConfig& cfg);
DenseNet train_mlp(std::span<const SparseExample> data, const TrainConfig& cfg, std::size_t hidden = 64);
CnnParams train_cnn(std::span<const MatrixExample> data, const TrainConfig& cfg, const CnnShape& shape = {});

// Continues training from given parameters.
void fit(DenseNet& net, std::span<const SparseExample> data, const TrainConfig& cfg);
void fit(CnnParams& cnn, std::span<const MatrixExample> data, const TrainConfig& cfg);

// Mean cross-entropy plus l2/2 * sum of squared weights.
double mean_loss(const DenseNet& net, std::span<const SparseExample> data, double l2 = 0.0);
double mean_loss(const CnnParams& cnn, std::span<const MatrixExample> data, double l2 = 0.0);

double accuracy(const DenseNet& net, std::span<const SparseExample> data);
double accuracy(const CnnParams& cnn, std::span<const MatrixExample> data);

struct NetPrediction {
  Polarity label = Polarity::Positive;
  Probabilities probabilities{0.5, 0.5};
};

// argmax; an exact tie goes to Positive.
Polarity argmax_label(const Probabilities& p);

NetPrediction predict_net(const DenseNet& net, const SparseVector& x);
NetPrediction predict_net(const CnnParams& cnn, const TweetMatrix& m);

// Largest |g_analytic - g_numeric| / max(|g_a|, |g_n|, 1e-8) over every
// parameter, numeric gradients by central differences with step h.
double gradient_check(const DenseNet& net, const SparseVector& x, Polarity label, double l2 = 0.0, double h = 1e-5);
double gradient_check(const CnnParams& cnn, const TweetMatrix& m, Polarity label, double l2 = 0.0, double h = 1e-5);

// Section bodies for the model container.
void write_dense_net(const DenseNet& net, std::ostream& out);
DenseNet read_dense_net(std::span<const std::string> lines, const std::string& source = "dense net");
void write_cnn(const CnnParams& cnn, std::ostream& out);
CnnParams read_cnn(std::span<const std::string> lines, const std::string& source = "cnn");

}  // namespace nilesenti
