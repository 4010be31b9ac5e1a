#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "nilesenti/cnb.hpp"

namespace testing {

// Dense recomputation of complement weights straight from the formula.
struct CnbOracle {
  std::vector<nilesenti::Polarity> classes;
  std::vector<std::vector<double>> weights;
};

inline CnbOracle cnb_oracle(const std::vector<std::vector<double>>& docs,
                            const std::vector<nilesenti::Polarity>& labels, double a, bool normalize) {
  using nilesenti::Polarity;
  CnbOracle o;
  for (auto p : {Polarity::Positive, Polarity::Negative, Polarity::Neutral}) {
    for (auto l : labels) {
      if (l == p) {
        o.classes.push_back(p);
        break;
      }
    }
  }
  const std::size_t v = docs.empty() ? 0 : docs[0].size();
  for (auto c : o.classes) {
    std::vector<double> w(v);
    double total = 0.0;
    for (std::size_t d = 0; d < docs.size(); ++d) {
      if (labels[d] == c) continue;
      for (std::size_t k = 0; k < v; ++k) total += docs[d][k];
    }
    for (std::size_t i = 0; i < v; ++i) {
      double n = 0.0;
      for (std::size_t d = 0; d < docs.size(); ++d) {
        if (labels[d] != c) n += docs[d][i];
      }
      w[i] = std::log((a + n) / (a * static_cast<double>(v) + total));
    }
    if (normalize) {
      double l1 = 0.0;
      for (double x : w) l1 += std::fabs(x);
      if (l1 > 0.0) {
        for (double& x : w) x /= l1;
      }
    }
    o.weights.push_back(w);
  }
  return o;
}

inline nilesenti::Polarity cnb_oracle_predict(const CnbOracle& o, const std::vector<double>& x) {
  std::size_t best = 0;
  double best_score = 0.0;
  for (std::size_t c = 0; c < o.classes.size(); ++c) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * o.weights[c][i];
    if (c == 0 || s < best_score) {
      best = c;
      best_score = s;
    }
  }
  return o.classes[best];
}

inline nilesenti::SparseVector to_sparse(const std::vector<double>& dense) {
  std::vector<std::pair<std::size_t, double>> pairs;
  for (std::size_t i = 0; i < dense.size(); ++i) pairs.emplace_back(i, dense[i]);
  return nilesenti::SparseVector::from_pairs(dense.size(), pairs);
}

// Small random corpus with at least two distinct labels.
struct TinyCorpus {
  std::vector<std::vector<double>> docs;
  std::vector<nilesenti::Polarity> labels;
};

inline TinyCorpus tiny_corpus(std::mt19937_64& rng) {
  using nilesenti::Polarity;
  static const Polarity all[] = {Polarity::Positive, Polarity::Negative, Polarity::Neutral};
  TinyCorpus c;
  const std::size_t n_classes = 2 + rng() % 2;
  const std::size_t n_docs = std::max<std::size_t>(2, 1 + rng() % 5);
  const std::size_t v = 1 + rng() % 6;
  std::vector<Polarity> pool(all, all + 3);
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(n_classes);
  for (std::size_t d = 0; d < n_docs; ++d) {
    std::vector<double> x(v);
    for (auto& e : x) e = (rng() % 3 == 0) ? 0.0 : static_cast<double>(rng() % 5) + (rng() % 2 ? 0.25 : 0.0);
    c.docs.push_back(x);
    c.labels.push_back(d < 2 ? pool[d] : pool[rng() % n_classes]);
  }
  return c;
}

}  // namespace testing
