#include "nilesenti/neural.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "numfmt.hpp"

namespace nilesenti {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using WindowView = Eigen::Map<const RowMatrix, 0, Eigen::OuterStride<>>;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

 private:
  std::mt19937_64 engine_;
};

constexpr std::uint64_t kInitStream = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kShuffleStream = 0xd1b54a32d192ed03ULL;

void glorot(Eigen::MatrixXd& m, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = (2.0 * rng.uniform() - 1.0) * limit;
  }
}

DenseLayer make_layer(std::size_t in, std::size_t out, Activation act, Rng& rng) {
  DenseLayer l;
  l.weights.resize(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in));
  glorot(l.weights, in, out, rng);
  l.bias = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(out));
  l.activation = act;
  return l;
}

int label_index(Polarity p) {
  switch (p) {
    case Polarity::Positive:
      return 0;
    case Polarity::Negative:
      return 1;
    case Polarity::Neutral:
      break;
  }
  throw Error("two-class models accept only positive/negative labels");
}

Eigen::VectorXd activate(Activation a, const Eigen::VectorXd& z) {
  switch (a) {
    case Activation::Identity:
      return z;
    case Activation::Relu:
      return z.cwiseMax(0.0);
    case Activation::Sigmoid:
      return (1.0 + (-z.array()).exp()).inverse().matrix();
    case Activation::Softmax: {
      const Eigen::ArrayXd e = (z.array() - z.maxCoeff()).exp();
      return (e / e.sum()).matrix();
    }
  }
  return z;
}

// d activation / d z, elementwise, for the hidden activations.
Eigen::VectorXd activation_slope(Activation a, const Eigen::VectorXd& z, const Eigen::VectorXd& out) {
  switch (a) {
    case Activation::Identity:
      return Eigen::VectorXd::Ones(z.size());
    case Activation::Relu:
      return (z.array() > 0.0).cast<double>().matrix();
    case Activation::Sigmoid:
      return (out.array() * (1.0 - out.array())).matrix();
    case Activation::Softmax:
      break;
  }
  throw Error("softmax is only supported as the output activation");
}

// Cross-entropy of softmax(logits) against class y; fills probabilities and
// d loss / d logits.
double softmax_xent(const Eigen::VectorXd& logits, int y, Eigen::VectorXd& probs, Eigen::VectorXd* dlogits) {
  const double mx = logits.maxCoeff();
  const Eigen::ArrayXd shifted = logits.array() - mx;
  const double lse = std::log(shifted.exp().sum());
  probs = (shifted - lse).exp().matrix();
  if (dlogits) {
    *dlogits = probs;
    (*dlogits)(y) -= 1.0;
  }
  return lse - shifted(y);
}

Probabilities to_probabilities(const Eigen::VectorXd& p) { return {p(0), p(1)}; }

// Visits matching parameter tensors of two same-shaped models as flat arrays.
template <class F>
void visit(DenseNet& a, DenseNet& b, F&& f) {
  for (std::size_t l = 0; l < a.layers.size(); ++l) {
    f(a.layers[l].weights.data(), b.layers[l].weights.data(), a.layers[l].weights.size(), true);
    f(a.layers[l].bias.data(), b.layers[l].bias.data(), a.layers[l].bias.size(), false);
  }
}

template <class F>
void visit(CnnParams& a, CnnParams& b, F&& f) {
  for (std::size_t k = 0; k < a.banks.size(); ++k) {
    f(a.banks[k].kernels.data(), b.banks[k].kernels.data(), a.banks[k].kernels.size(), true);
    f(a.banks[k].bias.data(), b.banks[k].bias.data(), a.banks[k].bias.size(), false);
  }
  for (const auto& pair : {std::make_pair(&a.hidden, &b.hidden), std::make_pair(&a.output, &b.output)}) {
    f(pair.first->weights.data(), pair.second->weights.data(), pair.first->weights.size(), true);
    f(pair.first->bias.data(), pair.second->bias.data(), pair.first->bias.size(), false);
  }
}

template <class Model>
Model zeros_like(const Model& m) {
  Model z = m;
  visit(z, z, [](double* p, double*, Eigen::Index n, bool) { std::fill(p, p + n, 0.0); });
  return z;
}

template <class Model>
double weight_penalty(const Model& m, double l2) {
  if (l2 == 0.0) return 0.0;
  double sq = 0.0;
  Model& mm = const_cast<Model&>(m);
  visit(mm, mm, [&](double* p, double*, Eigen::Index n, bool is_weight) {
    if (!is_weight) return;
    for (Eigen::Index i = 0; i < n; ++i) sq += p[i] * p[i];
  });
  return 0.5 * l2 * sq;
}

// ---- dense nets ----------------------------------------------------------

void check_input(const DenseNet& net, const SparseVector& x) {
  if (net.layers.empty()) throw Error("dense net has no layers");
  if (x.dimension != net.input_dim()) {
    throw Error("input dimension " + std::to_string(x.dimension) + " does not match network input " +
                std::to_string(net.input_dim()));
  }
  if (net.layers.back().activation != Activation::Softmax || net.output_dim() != 2) {
    throw Error("classifier must end in a 2-way softmax");
  }
}

// Per-example cross-entropy; accumulates its gradient into grad if given.
double dense_loss_grad(const DenseNet& net, const SparseVector& x, int y, DenseNet* grad,
                       Eigen::VectorXd* probs_out = nullptr) {
  const std::size_t n_layers = net.layers.size();
  std::vector<Eigen::VectorXd> z(n_layers), a(n_layers);
  {
    const DenseLayer& first = net.layers[0];
    Eigen::VectorXd z0 = first.bias;
    for (const auto& [i, v] : x.entries) z0.noalias() += v * first.weights.col(static_cast<Eigen::Index>(i));
    z[0] = std::move(z0);
  }
  for (std::size_t l = 0;; ++l) {
    const bool last = l + 1 == n_layers;
    if (!last) a[l] = activate(net.layers[l].activation, z[l]);
    if (last) break;
    z[l + 1] = net.layers[l + 1].weights * a[l] + net.layers[l + 1].bias;
  }
  Eigen::VectorXd probs, delta;
  const double loss = softmax_xent(z.back(), y, probs, grad ? &delta : nullptr);
  if (probs_out) *probs_out = probs;
  if (!grad) return loss;

  for (std::size_t l = n_layers; l-- > 0;) {
    DenseLayer& g = grad->layers[l];
    if (l == 0) {
      for (const auto& [i, v] : x.entries) g.weights.col(static_cast<Eigen::Index>(i)).noalias() += v * delta;
    } else {
      g.weights.noalias() += delta * a[l - 1].transpose();
    }
    g.bias += delta;
    if (l > 0) {
      const Eigen::VectorXd da = net.layers[l].weights.transpose() * delta;
      delta = da.cwiseProduct(activation_slope(net.layers[l - 1].activation, z[l - 1], a[l - 1]));
    }
  }
  return loss;
}

// ---- cnn -----------------------------------------------------------------

void check_input(const CnnParams& p, const TweetMatrix& m) {
  if (m.cols != p.dim) {
    throw Error("matrix width " + std::to_string(m.cols) + " does not match embedding dim " + std::to_string(p.dim));
  }
  if (m.rows < kCnnWindows.back()) throw Error("matrix has fewer rows than the widest convolution window");
  if (m.data.size() != m.rows * m.cols) throw Error("malformed tweet matrix");
}

double cnn_loss_grad(const CnnParams& p, const TweetMatrix& m, int y, CnnParams* grad,
                     Eigen::VectorXd* probs_out = nullptr) {
  const auto n_filters = static_cast<Eigen::Index>(p.n_filters());
  const auto dim = static_cast<Eigen::Index>(p.dim);
  Eigen::VectorXd pooled(2 * n_filters);
  std::array<std::vector<Eigen::Index>, 2> argmax;
  for (std::size_t k = 0; k < p.banks.size(); ++k) {
    const ConvBank& bank = p.banks[k];
    const auto w = static_cast<Eigen::Index>(bank.window);
    const auto positions = static_cast<Eigen::Index>(m.rows) - w + 1;
    const WindowView windows(m.data.data(), positions, w * dim, Eigen::OuterStride<>(dim));
    Eigen::MatrixXd responses = windows * bank.kernels.transpose();
    responses.rowwise() += bank.bias.transpose();
    argmax[k].resize(static_cast<std::size_t>(n_filters));
    for (Eigen::Index f = 0; f < n_filters; ++f) {
      Eigen::Index at = 0;
      pooled(static_cast<Eigen::Index>(k) * n_filters + f) = responses.col(f).maxCoeff(&at);
      argmax[k][static_cast<std::size_t>(f)] = at;
    }
  }
  // relu commutes with max, so pooling pre-activations is equivalent.
  const Eigen::VectorXd h0 = pooled.cwiseMax(0.0);
  const Eigen::VectorXd z1 = p.hidden.weights * h0 + p.hidden.bias;
  const Eigen::VectorXd h1 = z1.cwiseMax(0.0);
  const Eigen::VectorXd logits = p.output.weights * h1 + p.output.bias;

  Eigen::VectorXd probs, dlogits;
  const double loss = softmax_xent(logits, y, probs, grad ? &dlogits : nullptr);
  if (probs_out) *probs_out = probs;
  if (!grad) return loss;

  grad->output.weights.noalias() += dlogits * h1.transpose();
  grad->output.bias += dlogits;
  const Eigen::VectorXd dz1 = (p.output.weights.transpose() * dlogits).cwiseProduct((z1.array() > 0.0).cast<double>().matrix());
  grad->hidden.weights.noalias() += dz1 * h0.transpose();
  grad->hidden.bias += dz1;
  const Eigen::VectorXd dh0 = p.hidden.weights.transpose() * dz1;
  for (std::size_t k = 0; k < p.banks.size(); ++k) {
    const auto w = static_cast<Eigen::Index>(p.banks[k].window);
    ConvBank& g = grad->banks[k];
    for (Eigen::Index f = 0; f < n_filters; ++f) {
      const Eigen::Index slot = static_cast<Eigen::Index>(k) * n_filters + f;
      if (!(pooled(slot) > 0.0)) continue;
      const double gf = dh0(slot);
      const Eigen::Index row = argmax[k][static_cast<std::size_t>(f)];
      const Eigen::Map<const Eigen::RowVectorXd> window(m.data.data() + row * dim, w * dim);
      g.kernels.row(f).noalias() += gf * window;
      g.bias(f) += gf;
    }
  }
  return loss;
}

// ---- training --------------------------------------------------------------

bool less_content(const SparseVector& a, const SparseVector& b) { return a.entries < b.entries; }
bool less_content(const TweetMatrix& a, const TweetMatrix& b) {
  return std::lexicographical_compare(a.data.begin(), a.data.end(), b.data.begin(), b.data.end());
}

template <class Example>
std::vector<std::size_t> canonical_order(std::span<const Example> data) {
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const int la = label_index(data[a].second);
    const int lb = label_index(data[b].second);
    if (la != lb) return la < lb;
    return less_content(data[a].first, data[b].first);
  });
  return order;
}

template <class Example>
void check_training_data(std::span<const Example> data) {
  bool pos = false, neg = false;
  for (const auto& ex : data) {
    if (label_index(ex.second) == 0) {
      pos = true;
    } else {
      neg = true;
    }
  }
  if (!pos || !neg) throw Error("training data needs at least one positive and one negative example");
}

template <class Model, class Example, class LossGrad>
void sgd_fit(Model& model, std::span<const Example> data, const TrainConfig& cfg, LossGrad loss_grad) {
  cfg.validate();
  check_training_data(data);
  std::vector<std::size_t> order = canonical_order(data);
  Rng rng(cfg.seed ^ kShuffleStream);
  Model grad = zeros_like(model);
  const auto batch = static_cast<std::size_t>(cfg.batch_size);
  const double lr = cfg.learning_rate;
  const double shrink = 1.0 / (1.0 + lr * cfg.l2);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t stop = std::min(order.size(), start + batch);
      visit(grad, grad, [](double* p, double*, Eigen::Index n, bool) { std::fill(p, p + n, 0.0); });
      for (std::size_t j = start; j < stop; ++j) {
        const auto& ex = data[order[j]];
        loss_grad(model, ex.first, label_index(ex.second), &grad);
      }
      const double step = lr / static_cast<double>(stop - start);
      visit(model, grad, [&](double* w, double* g, Eigen::Index n, bool is_weight) {
        if (is_weight) {
          for (Eigen::Index i = 0; i < n; ++i) w[i] = (w[i] - step * g[i]) * shrink;
        } else {
          for (Eigen::Index i = 0; i < n; ++i) w[i] -= step * g[i];
        }
      });
    }
  }
}

template <class Model, class Input, class LossGrad>
double check_gradient(const Model& model, const Input& x, int y, double l2, double h, LossGrad loss_grad) {
  Model analytic = zeros_like(model);
  loss_grad(model, x, y, &analytic);
  Model probe = model;
  Model base = model;
  visit(base, analytic, [&](double* w, double* g, Eigen::Index n, bool is_weight) {
    if (!is_weight || l2 == 0.0) return;
    for (Eigen::Index i = 0; i < n; ++i) g[i] += l2 * w[i];
  });

  // Collect flat pointers to the probe parameters and analytic gradients.
  std::vector<std::pair<double*, double>> params;
  visit(probe, analytic, [&](double* w, double* g, Eigen::Index n, bool) {
    for (Eigen::Index i = 0; i < n; ++i) params.emplace_back(w + i, g[i]);
  });
  auto total_loss = [&] { return loss_grad(probe, x, y, nullptr) + weight_penalty(probe, l2); };

  double worst = 0.0;
  for (auto& [w, ga] : params) {
    const double saved = *w;
    *w = saved + h;
    const double up = total_loss();
    *w = saved - h;
    const double down = total_loss();
    *w = saved;
    const double gn = (up - down) / (2.0 * h);
    const double denom = std::max({std::abs(ga), std::abs(gn), 1e-8});
    worst = std::max(worst, std::abs(ga - gn) / denom);
  }
  return worst;
}

// ---- serialization ---------------------------------------------------------

void write_row(std::ostream& out, const double* p, Eigen::Index n, Eigen::Index stride = 1) {
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i) out << ' ';
    out << format_double(p[i * stride]);
  }
  out << '\n';
}

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) write_row(out, m.data() + r, m.cols(), m.rows());
}

void write_layer(std::ostream& out, const DenseLayer& l) {
  out << "layer rows=" << l.weights.rows() << " cols=" << l.weights.cols() << " activation=" << to_string(l.activation)
      << '\n';
  write_matrix(out, l.weights);
  write_row(out, l.bias.data(), l.bias.size());
}

Activation parse_activation(const std::string& s, const std::string& where) {
  for (auto a : {Activation::Identity, Activation::Relu, Activation::Sigmoid, Activation::Softmax}) {
    if (to_string(a) == s) return a;
  }
  throw Error(where + ": unknown activation `" + s + "`");
}

class LineCursor {
 public:
  LineCursor(std::span<const std::string> lines, std::string source) : lines_(lines), source_(std::move(source)) {}

  const std::string& next() {
    while (pos_ < lines_.size() && lines_[pos_].empty()) ++pos_;
    if (pos_ >= lines_.size()) throw Error(source_ + ": unexpected end of section");
    return lines_[pos_++];
  }
  std::string where() const { return source_ + ": line " + std::to_string(pos_); }
  bool done() {
    while (pos_ < lines_.size() && lines_[pos_].empty()) ++pos_;
    return pos_ >= lines_.size();
  }

  // `head k1=v1 k2=v2 ...`
  std::map<std::string, std::string> header(std::string_view head) {
    std::istringstream in(next());
    std::string word;
    in >> word;
    if (word != head) throw Error(where() + ": expected `" + std::string(head) + "`");
    std::map<std::string, std::string> kv;
    while (in >> word) {
      const auto eq = word.find('=');
      if (eq == std::string::npos) throw Error(where() + ": expected key=value");
      kv[word.substr(0, eq)] = word.substr(eq + 1);
    }
    return kv;
  }

  std::string value(std::string_view key) {
    const std::string& line = next();
    if (!line.starts_with(std::string(key) + "=")) throw Error(where() + ": expected `" + std::string(key) + "=`");
    return line.substr(key.size() + 1);
  }

  void row(double* out, Eigen::Index n, Eigen::Index stride = 1) {
    const std::string& line = next();
    std::size_t i = 0;
    Eigen::Index k = 0;
    while (i < line.size()) {
      const auto sp = line.find(' ', i);
      const auto tok = std::string_view(line).substr(i, sp == std::string::npos ? std::string::npos : sp - i);
      if (k >= n) throw Error(where() + ": too many values");
      out[k++ * stride] = parse_double(tok, where());
      if (sp == std::string::npos) break;
      i = sp + 1;
    }
    if (k != n) throw Error(where() + ": expected " + std::to_string(n) + " values");
  }

  Eigen::MatrixXd matrix(Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) row(m.data() + r, cols, rows);
    return m;
  }

  DenseLayer layer() {
    const auto kv = header("layer");
    const std::string w = where();
    DenseLayer l;
    const auto rows = parse_int(kv.count("rows") ? kv.at("rows") : "", w);
    const auto cols = parse_int(kv.count("cols") ? kv.at("cols") : "", w);
    l.activation = parse_activation(kv.count("activation") ? kv.at("activation") : "", w);
    l.weights = matrix(rows, cols);
    l.bias.resize(rows);
    row(l.bias.data(), rows);
    return l;
  }

 private:
  std::span<const std::string> lines_;
  std::string source_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::Identity:
      return "identity";
    case Activation::Relu:
      return "relu";
    case Activation::Sigmoid:
      return "sigmoid";
    case Activation::Softmax:
      return "softmax";
  }
  return "identity";
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw Error("learning_rate must be positive");
  if (epochs < 0) throw Error("epochs must be non-negative");
  if (batch_size <= 0) throw Error("batch_size must be positive");
  if (!(l2 >= 0.0)) throw Error("l2 must be non-negative");
}

DenseNet init_logreg(std::size_t input_dim, std::uint64_t seed) {
  Rng rng(seed ^ kInitStream);
  DenseNet net;
  net.layers.push_back(make_layer(input_dim, 2, Activation::Softmax, rng));
  return net;
}

DenseNet init_mlp(std::size_t input_dim, std::size_t hidden, std::uint64_t seed) {
  Rng rng(seed ^ kInitStream);
  DenseNet net;
  net.layers.push_back(make_layer(input_dim, hidden, Activation::Relu, rng));
  net.layers.push_back(make_layer(hidden, 2, Activation::Softmax, rng));
  return net;
}

CnnParams init_cnn(std::size_t dim, const CnnShape& shape, std::uint64_t seed) {
  if (dim == 0 || shape.n_filters == 0 || shape.hidden == 0) throw Error("cnn shape must be positive");
  Rng rng(seed ^ kInitStream);
  CnnParams p;
  p.dim = dim;
  for (std::size_t k = 0; k < kCnnWindows.size(); ++k) {
    ConvBank& b = p.banks[k];
    b.window = kCnnWindows[k];
    b.kernels.resize(static_cast<Eigen::Index>(shape.n_filters), static_cast<Eigen::Index>(b.window * dim));
    glorot(b.kernels, b.window * dim, shape.n_filters, rng);
    b.bias = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(shape.n_filters));
  }
  p.hidden = make_layer(2 * shape.n_filters, shape.hidden, Activation::Relu, rng);
  p.output = make_layer(shape.hidden, 2, Activation::Softmax, rng);
  return p;
}

Probabilities net_forward(const DenseNet& net, const SparseVector& x) {
  check_input(net, x);
  Eigen::VectorXd probs;
  dense_loss_grad(net, x, 0, nullptr, &probs);
  return to_probabilities(probs);
}

Probabilities cnn_forward(const CnnParams& p, const TweetMatrix& m) {
  check_input(p, m);
  Eigen::VectorXd probs;
  cnn_loss_grad(p, m, 0, nullptr, &probs);
  return to_probabilities(probs);
}

void fit(DenseNet& net, std::span<const SparseExample> data, const TrainConfig& cfg) {
  for (const auto& ex : data) check_input(net, ex.first);
  sgd_fit(net, data, cfg, [](const DenseNet& m, const SparseVector& x, int y, DenseNet* g) {
    return dense_loss_grad(m, x, y, g);
  });
}

void fit(CnnParams& cnn, std::span<const MatrixExample> data, const TrainConfig& cfg) {
  std::size_t rows = 0;
  for (const auto& ex : data) {
    check_input(cnn, ex.first);
    if (rows != 0 && ex.first.rows != rows) throw Error("tweet matrices differ in row count");
    rows = ex.first.rows;
  }
  sgd_fit(cnn, data, cfg, [](const CnnParams& m, const TweetMatrix& x, int y, CnnParams* g) {
    return cnn_loss_grad(m, x, y, g);
  });
}

namespace {
std::size_t common_dimension(std::span<const SparseExample> data) {
  if (data.empty()) throw Error("training data is empty");
  const std::size_t dim = data.front().first.dimension;
  for (const auto& ex : data) {
    if (ex.first.dimension != dim) throw Error("training vectors differ in dimension");
  }
  return dim;
}
}  // namespace

DenseNet train_logreg(std::span<const SparseExample> data, const TrainConfig& cfg) {
  cfg.validate();
  DenseNet net = init_logreg(common_dimension(data), cfg.seed);
  fit(net, data, cfg);
  return net;
}

DenseNet train_mlp(std::span<const SparseExample> data, const TrainConfig& cfg, std::size_t hidden) {
  cfg.validate();
  DenseNet net = init_mlp(common_dimension(data), hidden, cfg.seed);
  fit(net, data, cfg);
  return net;
}

CnnParams train_cnn(std::span<const MatrixExample> data, const TrainConfig& cfg, const CnnShape& shape) {
  cfg.validate();
  if (data.empty()) throw Error("training data is empty");
  CnnParams p = init_cnn(data.front().first.cols, shape, cfg.seed);
  fit(p, data, cfg);
  return p;
}

double mean_loss(const DenseNet& net, std::span<const SparseExample> data, double l2) {
  if (data.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& ex : data) {
    check_input(net, ex.first);
    sum += dense_loss_grad(net, ex.first, label_index(ex.second), nullptr);
  }
  return sum / static_cast<double>(data.size()) + weight_penalty(net, l2);
}

double mean_loss(const CnnParams& cnn, std::span<const MatrixExample> data, double l2) {
  if (data.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& ex : data) {
    check_input(cnn, ex.first);
    sum += cnn_loss_grad(cnn, ex.first, label_index(ex.second), nullptr);
  }
  return sum / static_cast<double>(data.size()) + weight_penalty(cnn, l2);
}

double accuracy(const DenseNet& net, std::span<const SparseExample> data) {
  if (data.empty()) return 0.0;
  std::size_t hit = 0;
  for (const auto& ex : data) hit += predict_net(net, ex.first).label == ex.second ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(data.size());
}

double accuracy(const CnnParams& cnn, std::span<const MatrixExample> data) {
  if (data.empty()) return 0.0;
  std::size_t hit = 0;
  for (const auto& ex : data) hit += predict_net(cnn, ex.first).label == ex.second ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(data.size());
}

Polarity argmax_label(const Probabilities& p) { return p[0] >= p[1] ? Polarity::Positive : Polarity::Negative; }

NetPrediction predict_net(const DenseNet& net, const SparseVector& x) {
  NetPrediction out;
  out.probabilities = net_forward(net, x);
  out.label = argmax_label(out.probabilities);
  return out;
}

NetPrediction predict_net(const CnnParams& cnn, const TweetMatrix& m) {
  NetPrediction out;
  out.probabilities = cnn_forward(cnn, m);
  out.label = argmax_label(out.probabilities);
  return out;
}

double gradient_check(const DenseNet& net, const SparseVector& x, Polarity label, double l2, double h) {
  check_input(net, x);
  return check_gradient(net, x, label_index(label), l2, h,
                        [](const DenseNet& m, const SparseVector& v, int y, DenseNet* g) {
                          return dense_loss_grad(m, v, y, g);
                        });
}

double gradient_check(const CnnParams& cnn, const TweetMatrix& m, Polarity label, double l2, double h) {
  check_input(cnn, m);
  return check_gradient(cnn, m, label_index(label), l2, h,
                        [](const CnnParams& p, const TweetMatrix& x, int y, CnnParams* g) {
                          return cnn_loss_grad(p, x, y, g);
                        });
}

void write_dense_net(const DenseNet& net, std::ostream& out) {
  out << "layers=" << net.layers.size() << '\n';
  for (const auto& l : net.layers) write_layer(out, l);
}

DenseNet read_dense_net(std::span<const std::string> lines, const std::string& source) {
  LineCursor cur(lines, source);
  const auto n = parse_int(cur.value("layers"), cur.where());
  DenseNet net;
  for (long long i = 0; i < n; ++i) net.layers.push_back(cur.layer());
  for (std::size_t l = 1; l < net.layers.size(); ++l) {
    if (net.layers[l].weights.cols() != net.layers[l - 1].weights.rows()) {
      throw Error(source + ": layer dimensions do not chain");
    }
  }
  if (!cur.done()) throw Error(cur.where() + ": trailing data");
  return net;
}

void write_cnn(const CnnParams& cnn, std::ostream& out) {
  out << "dim=" << cnn.dim << '\n' << "filters=" << cnn.n_filters() << '\n';
  for (const auto& b : cnn.banks) {
    out << "bank window=" << b.window << " rows=" << b.kernels.rows() << " cols=" << b.kernels.cols() << '\n';
    write_matrix(out, b.kernels);
    write_row(out, b.bias.data(), b.bias.size());
  }
  write_layer(out, cnn.hidden);
  write_layer(out, cnn.output);
}

CnnParams read_cnn(std::span<const std::string> lines, const std::string& source) {
  LineCursor cur(lines, source);
  CnnParams p;
  p.dim = static_cast<std::size_t>(parse_int(cur.value("dim"), cur.where()));
  const auto filters = parse_int(cur.value("filters"), cur.where());
  for (std::size_t k = 0; k < p.banks.size(); ++k) {
    const auto kv = cur.header("bank");
    const std::string w = cur.where();
    ConvBank& b = p.banks[k];
    b.window = static_cast<std::size_t>(parse_int(kv.count("window") ? kv.at("window") : "", w));
    if (b.window != kCnnWindows[k]) throw Error(w + ": unexpected window size");
    const auto rows = parse_int(kv.count("rows") ? kv.at("rows") : "", w);
    const auto cols = parse_int(kv.count("cols") ? kv.at("cols") : "", w);
    if (rows != filters || cols != static_cast<long long>(b.window * p.dim)) throw Error(w + ": bank shape mismatch");
    b.kernels = cur.matrix(rows, cols);
    b.bias.resize(rows);
    cur.row(b.bias.data(), rows);
  }
  p.hidden = cur.layer();
  p.output = cur.layer();
  if (p.hidden.weights.cols() != 2 * filters || p.output.weights.cols() != p.hidden.weights.rows() ||
      p.output.weights.rows() != 2) {
    throw Error(source + ": dense layer shapes do not chain");
  }
  if (!cur.done()) throw Error(cur.where() + ": trailing data");
  return p;
}

}  // namespace nilesenti
