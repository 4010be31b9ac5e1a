#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nilesenti/types.hpp"

namespace nilesenti {

struct ConfusionMatrix {
  std::vector<Polarity> classes;
  std::vector<std::vector<std::size_t>> counts;  // [gold][pred]

  std::size_t total() const;
};

ConfusionMatrix confusion_matrix(std::span<const Polarity> gold, std::span<const Polarity> pred,
                                 std::span<const Polarity> classes);

struct MetricsReport {
  std::optional<double> rho;
  std::optional<double> f1_pn;
  std::optional<double> acc;
  std::optional<double> kld;
  std::optional<double> ae;
  std::optional<double> rae;
};

// Average recall over `classes` (a class absent from gold contributes 0),
// mean F1 of Positive and Negative, and accuracy.
MetricsReport classification_metrics(std::span<const Polarity> gold, std::span<const Polarity> pred,
                                     std::span<const Polarity> classes);

struct Prevalence {
  std::string topic;
  double positive = 0.0;
  double negative = 0.0;
  std::size_t count = 0;  // tweets behind the estimate, 0 when unknown

  bool operator==(const Prevalence&) const = default;
};

// Per-topic label proportions, topics in lexicographic order.
std::vector<Prevalence> classify_and_count(std::span<const std::pair<std::string, Polarity>> predictions);

// Smoothing is p' = (p + eps) / (1 + 2 eps); eps = 0.5 / n_test.
double kld(const Prevalence& truth, const Prevalence& estimate, long long n_test);
double kld_with_epsilon(const Prevalence& truth, const Prevalence& estimate, double epsilon);

struct AbsErrors {
  double ae = 0.0;
  double rae = 0.0;
};

AbsErrors abs_error_metrics(const Prevalence& truth, const Prevalence& estimate, long long n_test);
AbsErrors abs_error_metrics_with_epsilon(const Prevalence& truth, const Prevalence& estimate, double epsilon);

enum class Aggregate { Macro, Micro };

// Scores every gold topic against its estimate; n_test for a topic is the gold
// count. Macro averages per-topic values, micro pools all tweets first.
MetricsReport quantification_metrics(std::span<const Prevalence> gold, std::span<const Prevalence> estimate,
                                     Aggregate aggregate = Aggregate::Macro);

// `topic<TAB>p_positive<TAB>p_negative`, 6 decimals.
void write_prevalences(std::span<const Prevalence> prevalences, std::ostream& out);
std::vector<Prevalence> parse_prevalences(std::istream& in, const std::string& source = "prevalences");

// Populated fields as key=value lines, 6 decimals.
void write_report(const MetricsReport& report, std::ostream& out);

}  // namespace nilesenti
