#include "nilesenti/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include "numfmt.hpp"

namespace nilesenti {
namespace {

std::size_t class_slot(std::span<const Polarity> classes, Polarity p) {
  const auto it = std::find(classes.begin(), classes.end(), p);
  if (it == classes.end()) throw Error("label `" + std::string(to_string(p)) + "` is not in the class set");
  return static_cast<std::size_t>(it - classes.begin());
}

double f1_of(const ConfusionMatrix& cm, std::size_t c) {
  std::size_t tp = cm.counts[c][c], pred = 0, gold = 0;
  for (std::size_t k = 0; k < cm.classes.size(); ++k) {
    pred += cm.counts[k][c];
    gold += cm.counts[c][k];
  }
  const double p = pred ? static_cast<double>(tp) / static_cast<double>(pred) : 0.0;
  const double r = gold ? static_cast<double>(tp) / static_cast<double>(gold) : 0.0;
  return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

double smooth(double p, double eps) { return (p + eps) / (1.0 + 2.0 * eps); }

double epsilon_for(long long n_test) {
  if (n_test <= 0) throw Error("n_test must be positive");
  return 0.5 / static_cast<double>(n_test);
}

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

}  // namespace

std::size_t ConfusionMatrix::total() const {
  std::size_t t = 0;
  for (const auto& row : counts) {
    for (auto c : row) t += c;
  }
  return t;
}

ConfusionMatrix confusion_matrix(std::span<const Polarity> gold, std::span<const Polarity> pred,
                                 std::span<const Polarity> classes) {
  if (gold.size() != pred.size()) {
    throw Error("gold and predicted labels differ in length (" + std::to_string(gold.size()) + " vs " +
                std::to_string(pred.size()) + ")");
  }
  ConfusionMatrix cm;
  cm.classes.assign(classes.begin(), classes.end());
  cm.counts.assign(classes.size(), std::vector<std::size_t>(classes.size(), 0));
  for (std::size_t i = 0; i < gold.size(); ++i) ++cm.counts[class_slot(classes, gold[i])][class_slot(classes, pred[i])];
  return cm;
}

MetricsReport classification_metrics(std::span<const Polarity> gold, std::span<const Polarity> pred,
                                     std::span<const Polarity> classes) {
  const ConfusionMatrix cm = confusion_matrix(gold, pred, classes);
  MetricsReport r;
  double recall_sum = 0.0;
  std::size_t correct = 0;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    std::size_t row = 0;
    for (auto n : cm.counts[c]) row += n;
    if (row) recall_sum += static_cast<double>(cm.counts[c][c]) / static_cast<double>(row);
    correct += cm.counts[c][c];
  }
  r.rho = classes.empty() ? 0.0 : recall_sum / static_cast<double>(classes.size());
  double f1 = 0.0;
  for (auto p : {Polarity::Positive, Polarity::Negative}) {
    const auto it = std::find(classes.begin(), classes.end(), p);
    if (it != classes.end()) f1 += f1_of(cm, static_cast<std::size_t>(it - classes.begin()));
  }
  r.f1_pn = f1 / 2.0;
  r.acc = gold.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(gold.size());
  return r;
}

std::vector<Prevalence> classify_and_count(std::span<const std::pair<std::string, Polarity>> predictions) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> counts;
  for (const auto& [topic, label] : predictions) {
    auto& c = counts[topic];
    if (label == Polarity::Positive) {
      ++c.first;
    } else if (label == Polarity::Negative) {
      ++c.second;
    } else {
      throw Error("quantification accepts only positive/negative labels (topic `" + topic + "`)");
    }
  }
  std::vector<Prevalence> out;
  out.reserve(counts.size());
  for (const auto& [topic, c] : counts) {
    Prevalence p;
    p.topic = topic;
    p.count = c.first + c.second;
    p.positive = static_cast<double>(c.first) / static_cast<double>(p.count);
    p.negative = static_cast<double>(c.second) / static_cast<double>(p.count);
    out.push_back(p);
  }
  return out;
}

double kld_with_epsilon(const Prevalence& truth, const Prevalence& estimate, double epsilon) {
  if (!(epsilon >= 0.0)) throw Error("epsilon must be non-negative");
  double sum = 0.0;
  for (auto [t, e] : {std::pair{truth.positive, estimate.positive}, std::pair{truth.negative, estimate.negative}}) {
    const double ts = smooth(t, epsilon);
    const double es = smooth(e, epsilon);
    if (ts > 0.0) sum += ts * std::log(ts / es);
  }
  return std::max(sum, 0.0);
}

double kld(const Prevalence& truth, const Prevalence& estimate, long long n_test) {
  return kld_with_epsilon(truth, estimate, epsilon_for(n_test));
}

AbsErrors abs_error_metrics_with_epsilon(const Prevalence& truth, const Prevalence& estimate, double epsilon) {
  if (!(epsilon >= 0.0)) throw Error("epsilon must be non-negative");
  AbsErrors r;
  r.ae = (std::abs(estimate.positive - truth.positive) + std::abs(estimate.negative - truth.negative)) / 2.0;
  double rae = 0.0;
  for (auto [t, e] : {std::pair{truth.positive, estimate.positive}, std::pair{truth.negative, estimate.negative}}) {
    const double ts = smooth(t, epsilon);
    rae += std::abs(smooth(e, epsilon) - ts) / ts;
  }
  r.rae = rae / 2.0;
  return r;
}

AbsErrors abs_error_metrics(const Prevalence& truth, const Prevalence& estimate, long long n_test) {
  return abs_error_metrics_with_epsilon(truth, estimate, epsilon_for(n_test));
}

MetricsReport quantification_metrics(std::span<const Prevalence> gold, std::span<const Prevalence> estimate,
                                     Aggregate aggregate) {
  if (gold.empty()) throw Error("no gold topics to score");
  std::map<std::string, const Prevalence*> est;
  for (const auto& e : estimate) {
    if (!est.emplace(e.topic, &e).second) throw Error("duplicate estimated topic `" + e.topic + "`");
  }
  std::set<std::string> seen;
  double k = 0.0, ae = 0.0, rae = 0.0;
  Prevalence pooled_gold, pooled_est;
  for (const auto& g : gold) {
    if (!seen.insert(g.topic).second) throw Error("duplicate gold topic `" + g.topic + "`");
    const auto it = est.find(g.topic);
    if (it == est.end()) throw Error("no estimate for topic `" + g.topic + "`");
    if (g.count == 0) throw Error("gold topic `" + g.topic + "` has no tweet count");
    const auto n = static_cast<long long>(g.count);
    if (aggregate == Aggregate::Macro) {
      k += kld(g, *it->second, n);
      const auto a = abs_error_metrics(g, *it->second, n);
      ae += a.ae;
      rae += a.rae;
    } else {
      const double w = static_cast<double>(g.count);
      pooled_gold.positive += w * g.positive;
      pooled_gold.negative += w * g.negative;
      pooled_est.positive += w * it->second->positive;
      pooled_est.negative += w * it->second->negative;
      pooled_gold.count += g.count;
    }
  }
  MetricsReport r;
  if (aggregate == Aggregate::Macro) {
    const double n = static_cast<double>(gold.size());
    r.kld = k / n;
    r.ae = ae / n;
    r.rae = rae / n;
  } else {
    const double n = static_cast<double>(pooled_gold.count);
    for (Prevalence* p : {&pooled_gold, &pooled_est}) {
      p->positive /= n;
      p->negative /= n;
    }
    const auto total = static_cast<long long>(pooled_gold.count);
    r.kld = kld(pooled_gold, pooled_est, total);
    const auto a = abs_error_metrics(pooled_gold, pooled_est, total);
    r.ae = a.ae;
    r.rae = a.rae;
  }
  return r;
}

void write_prevalences(std::span<const Prevalence> prevalences, std::ostream& out) {
  for (const auto& p : prevalences) out << p.topic << '\t' << fixed6(p.positive) << '\t' << fixed6(p.negative) << '\n';
}

std::vector<Prevalence> parse_prevalences(std::istream& in, const std::string& source) {
  std::vector<Prevalence> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = source + ": line " + std::to_string(lineno);
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
      throw Error(where + ": expected 3 fields");
    }
    Prevalence p;
    p.topic = line.substr(0, t1);
    p.positive = parse_double(line.substr(t1 + 1, t2 - t1 - 1), where);
    p.negative = parse_double(line.substr(t2 + 1), where);
    if (p.positive < 0.0 || p.negative < 0.0 || std::abs(p.positive + p.negative - 1.0) > 1e-5) {
      throw Error(where + ": prevalences must be non-negative and sum to 1");
    }
    out.push_back(std::move(p));
  }
  return out;
}

void write_report(const MetricsReport& report, std::ostream& out) {
  const std::pair<const char*, const std::optional<double>*> fields[] = {
      {"rho", &report.rho}, {"f1_pn", &report.f1_pn}, {"acc", &report.acc},
      {"kld", &report.kld}, {"ae", &report.ae},       {"rae", &report.rae}};
  for (const auto& [name, value] : fields) {
    if (*value) out << name << '=' << fixed6(**value) << '\n';
  }
}

}  // namespace nilesenti
