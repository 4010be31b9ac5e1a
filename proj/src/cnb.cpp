#include "nilesenti/cnb.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>

#include "numfmt.hpp"

namespace nilesenti {
namespace {

std::string class_list(const std::vector<Polarity>& classes) {
  std::string out;
  for (auto c : classes) {
    if (!out.empty()) out += ',';
    out += to_string(c);
  }
  return out;
}

}  // namespace

CnbModel train_cnb(std::span<const SparseVector> vectors, std::span<const Polarity> labels,
                   const CnbOptions& options) {
  if (vectors.size() != labels.size()) throw Error("train_cnb: vectors and labels differ in length");
  if (vectors.size() < 2) throw Error("train_cnb: need at least two documents");
  if (!(options.smoothing > 0.0)) throw Error("train_cnb: smoothing must be positive");

  const std::size_t dim = vectors.front().dimension;
  for (const auto& v : vectors) {
    if (v.dimension != dim) throw Error("train_cnb: vectors disagree on dimension");
    for (const auto& [i, w] : v.entries) {
      if (w < 0.0) throw Error("train_cnb: negative feature weight at index " + std::to_string(i));
    }
  }

  CnbModel model;
  model.dimension = dim;
  model.options = options;
  for (auto p : {Polarity::Positive, Polarity::Negative, Polarity::Neutral}) {
    if (std::find(labels.begin(), labels.end(), p) != labels.end()) model.classes.push_back(p);
  }
  if (model.classes.size() < 2) throw Error("train_cnb: need at least two distinct labels");
  const std::size_t n_classes = model.classes.size();
  auto class_index = [&](Polarity p) {
    return static_cast<std::size_t>(std::find(model.classes.begin(), model.classes.end(), p) -
                                    model.classes.begin());
  };

  // Canonical accumulation order: by label, then by vector content.
  std::vector<std::size_t> order(vectors.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (labels[a] != labels[b]) return labels[a] < labels[b];
    return vectors[a].entries < vectors[b].entries;
  });

  // Per-class feature totals, then complements as sums over the other classes.
  std::vector<std::vector<double>> per_class(n_classes, std::vector<double>(dim, 0.0));
  std::vector<std::size_t> docs_per_class(n_classes, 0);
  for (std::size_t d : order) {
    const std::size_t c = class_index(labels[d]);
    ++docs_per_class[c];
    for (const auto& [i, w] : vectors[d].entries) per_class[c][i] += w;
  }

  const double a = options.smoothing;
  model.weights.assign(n_classes, std::vector<double>(dim, 0.0));
  model.log_prior.assign(n_classes, 0.0);
  for (std::size_t c = 0; c < n_classes; ++c) {
    std::vector<double> complement(dim, 0.0);
    for (std::size_t o = 0; o < n_classes; ++o) {
      if (o == c) continue;
      for (std::size_t i = 0; i < dim; ++i) complement[i] += per_class[o][i];
    }
    double total = 0.0;
    for (double x : complement) total += x;
    const double denom = a * static_cast<double>(dim) + total;
    auto& w = model.weights[c];
    for (std::size_t i = 0; i < dim; ++i) w[i] = std::log((a + complement[i]) / denom);
    if (options.normalize) {
      double l1 = 0.0;
      for (double x : w) l1 += std::abs(x);
      if (l1 > 0.0) {
        for (double& x : w) x /= l1;
      }
    }
    model.log_prior[c] =
        std::log(static_cast<double>(docs_per_class[c]) / static_cast<double>(vectors.size()));
  }
  return model;
}

CnbPrediction predict_cnb(const CnbModel& model, const SparseVector& v) {
  CnbPrediction pred;
  pred.scores.assign(model.classes.size(), 0.0);
  for (std::size_t c = 0; c < model.classes.size(); ++c) {
    double s = 0.0;
    for (const auto& [i, x] : v.entries) {
      if (i < model.dimension) s += x * model.weights[c][i];
    }
    if (model.options.use_prior) s -= model.log_prior[c];
    pred.scores[c] = s;
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < pred.scores.size(); ++c) {
    if (pred.scores[c] < pred.scores[best]) best = c;
  }
  pred.label = model.classes.empty() ? Polarity::Positive : model.classes[best];
  return pred;
}

void write_cnb(const CnbModel& model, std::ostream& out) {
  out << "classes=" << class_list(model.classes) << '\n'
      << "smoothing=" << format_double(model.options.smoothing) << '\n'
      << "normalize=" << (model.options.normalize ? 1 : 0) << '\n'
      << "prior=" << (model.options.use_prior ? 1 : 0) << '\n'
      << "dimension=" << model.dimension << '\n';
  out << "log_prior=";
  for (std::size_t c = 0; c < model.log_prior.size(); ++c) {
    if (c) out << ',';
    out << format_double(model.log_prior[c]);
  }
  out << '\n';
  for (std::size_t c = 0; c < model.classes.size(); ++c) {
    const auto name = to_string(model.classes[c]);
    for (std::size_t i = 0; i < model.dimension; ++i) {
      out << name << '\t' << i << '\t' << format_double(model.weights[c][i]) << '\n';
    }
  }
}

CnbModel read_cnb(std::span<const std::string> lines, const std::string& source) {
  CnbModel m;
  std::map<std::string, std::string> keys;
  std::size_t lineno = 0;
  bool sized = false;
  auto split_csv = [](const std::string& s) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= s.size()) {
      const auto comma = s.find(',', start);
      parts.push_back(s.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return parts;
  };
  for (const auto& line : lines) {
    ++lineno;
    const std::string where = source + ": line " + std::to_string(lineno);
    if (line.empty()) continue;
    if (line.find('\t') == std::string::npos) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw Error(where + ": expected key=value");
      keys[line.substr(0, eq)] = line.substr(eq + 1);
      continue;
    }
    if (!sized) {
      for (const char* k : {"classes", "smoothing", "normalize", "prior", "dimension"}) {
        if (!keys.contains(k)) throw Error(source + ": missing `" + k + "`");
      }
      for (const auto& name : split_csv(keys["classes"])) {
        const auto p = parse_polarity(name);
        if (!p) throw Error(source + ": bad class `" + name + "`");
        m.classes.push_back(*p);
      }
      m.options.smoothing = parse_double(keys["smoothing"], source);
      m.options.normalize = keys["normalize"] == "1";
      m.options.use_prior = keys["prior"] == "1";
      m.dimension = static_cast<std::size_t>(parse_int(keys["dimension"], source));
      m.weights.assign(m.classes.size(), std::vector<double>(m.dimension, 0.0));
      m.log_prior.assign(m.classes.size(), 0.0);
      if (keys.contains("log_prior") && !keys["log_prior"].empty()) {
        const auto parts = split_csv(keys["log_prior"]);
        if (parts.size() != m.classes.size()) throw Error(source + ": log_prior size mismatch");
        for (std::size_t c = 0; c < parts.size(); ++c) m.log_prior[c] = parse_double(parts[c], source);
      }
      sized = true;
    }
    const auto t1 = line.find('\t');
    const auto t2 = line.find('\t', t1 + 1);
    if (t2 == std::string::npos) throw Error(where + ": expected class<TAB>index<TAB>weight");
    const auto cls = parse_polarity(line.substr(0, t1));
    const auto it = cls ? std::find(m.classes.begin(), m.classes.end(), *cls) : m.classes.end();
    if (it == m.classes.end()) throw Error(where + ": unknown class");
    const auto idx = static_cast<std::size_t>(parse_int(line.substr(t1 + 1, t2 - t1 - 1), where));
    if (idx >= m.dimension) throw Error(where + ": index out of range");
    m.weights[static_cast<std::size_t>(it - m.classes.begin())][idx] = parse_double(line.substr(t2 + 1), where);
  }
  if (!sized) throw Error(source + ": no weights");
  return m;
}

}  // namespace nilesenti
