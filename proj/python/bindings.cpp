#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "nilesenti/cli.hpp"
#include "nilesenti/cnb.hpp"
#include "nilesenti/ensemble.hpp"
#include "nilesenti/eval.hpp"
#include "nilesenti/lexicon.hpp"
#include "nilesenti/preprocess.hpp"

namespace py = pybind11;
using namespace nilesenti;

namespace {

Polarity polarity(const std::string& s) {
  const auto p = parse_polarity(s);
  if (!p) throw Error("unknown label `" + s + "`");
  return *p;
}

std::vector<Polarity> polarities(const std::vector<std::string>& v) {
  std::vector<Polarity> out;
  out.reserve(v.size());
  for (const auto& s : v) out.push_back(polarity(s));
  return out;
}

SparseVector sparse(const std::map<std::size_t, double>& entries, std::size_t dimension) {
  return SparseVector::from_pairs(dimension, {entries.begin(), entries.end()});
}

Prevalence prevalence(double positive, double negative) {
  Prevalence p;
  p.positive = positive;
  p.negative = negative;
  return p;
}

py::dict report_dict(const MetricsReport& r) {
  py::dict d;
  const std::pair<const char*, const std::optional<double>*> fields[] = {
      {"rho", &r.rho}, {"f1_pn", &r.f1_pn}, {"acc", &r.acc}, {"kld", &r.kld}, {"ae", &r.ae}, {"rae", &r.rae}};
  for (const auto& [k, v] : fields) {
    if (*v) d[k] = **v;
  }
  return d;
}

Lexicon lexicon_from_text(const std::string& text) {
  std::istringstream in(text);
  return parse_lexicon(in, "lexicon text");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Arabic tweet sentiment: preprocessing, CNB, voting ensemble and quantification metrics";

  py::register_exception<Error>(m, "NilesentiError", PyExc_ValueError);

  m.def("normalize_text", [](const std::string& s) { return normalize_text(s); });
  m.def("reduce_elongation", [](const std::string& s) { return reduce_elongation(s); });
  m.def("replace_emoticons", [](const std::string& s) { return replace_emoticons(s); });
  m.def("prepare_text", [](const std::string& s) { return prepare_text(s); });
  m.def("light_stem", [](const std::string& s) { return light_stem(s); });
  m.def("tokenize_and_stem", [](const std::string& s) { return tokenize_and_stem(s).tokens; });

  py::class_<Lexicon>(m, "Lexicon")
      .def_static("from_text", &lexicon_from_text, py::arg("text"))
      .def_static("load", &load_lexicon, py::arg("path"))
      .def("__len__", &Lexicon::size);

  m.def(
      "prepare_neural_tokens",
      [](const std::string& text, std::optional<std::string> topic, bool mask_topic, const Lexicon* lexicon) {
        const Lexicon empty;
        const TokenStream t = prepare_neural_tokens(text, topic, mask_topic, lexicon ? *lexicon : empty);
        return py::make_tuple(t.tokens, t.topic_span);
      },
      py::arg("text"), py::arg("topic") = py::none(), py::arg("mask_topic") = true, py::arg("lexicon") = nullptr);

  m.def(
      "classification_metrics",
      [](const std::vector<std::string>& gold, const std::vector<std::string>& pred,
         const std::vector<std::string>& classes) {
        const auto g = polarities(gold), p = polarities(pred), c = polarities(classes);
        return report_dict(classification_metrics(g, p, c));
      },
      py::arg("gold"), py::arg("pred"), py::arg("classes") = std::vector<std::string>{"positive", "negative", "neutral"});

  m.def(
      "kld",
      [](double true_pos, double est_pos, long long n_test) {
        return kld(prevalence(true_pos, 1.0 - true_pos), prevalence(est_pos, 1.0 - est_pos), n_test);
      },
      py::arg("true_positive"), py::arg("estimated_positive"), py::arg("n_test"));
  m.def(
      "abs_error_metrics",
      [](double true_pos, double est_pos, long long n_test) {
        const auto r =
            abs_error_metrics(prevalence(true_pos, 1.0 - true_pos), prevalence(est_pos, 1.0 - est_pos), n_test);
        return py::make_tuple(r.ae, r.rae);
      },
      py::arg("true_positive"), py::arg("estimated_positive"), py::arg("n_test"));

  m.def(
      "classify_and_count",
      [](const std::vector<std::pair<std::string, std::string>>& predictions) {
        std::vector<std::pair<std::string, Polarity>> p;
        for (const auto& [topic, label] : predictions) p.emplace_back(topic, polarity(label));
        py::list out;
        for (const auto& r : classify_and_count(p)) {
          out.append(py::make_tuple(r.topic, r.positive, r.negative, r.count));
        }
        return out;
      },
      py::arg("predictions"));

  m.def(
      "majority_vote",
      [](const std::vector<std::string>& votes) {
        if (votes.size() != 3) throw Error("majority_vote takes exactly three votes");
        return std::string(to_string(majority_vote({polarity(votes[0]), polarity(votes[1]), polarity(votes[2])})));
      },
      py::arg("votes"));

  py::class_<CnbModel>(m, "CnbModel")
      .def_property_readonly("classes",
                             [](const CnbModel& c) {
                               std::vector<std::string> out;
                               for (auto p : c.classes) out.emplace_back(to_string(p));
                               return out;
                             })
      .def_readonly("weights", &CnbModel::weights)
      .def_readonly("dimension", &CnbModel::dimension)
      .def(
          "predict",
          [](const CnbModel& c, const std::map<std::size_t, double>& x) {
            const auto r = predict_cnb(c, sparse(x, c.dimension));
            return py::make_tuple(std::string(to_string(r.label)), r.scores);
          },
          py::arg("features"));

  m.def(
      "train_cnb",
      [](const std::vector<std::map<std::size_t, double>>& docs, const std::vector<std::string>& labels,
         std::size_t dimension, double smoothing, bool normalize) {
        std::vector<SparseVector> x;
        for (const auto& d : docs) x.push_back(sparse(d, dimension));
        CnbOptions opts;
        opts.smoothing = smoothing;
        opts.normalize = normalize;
        const auto y = polarities(labels);
        return train_cnb(x, y, opts);
      },
      py::arg("docs"), py::arg("labels"), py::arg("dimension"), py::arg("smoothing") = 1.0,
      py::arg("normalize") = true);

  m.def(
      "run",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_command(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs a CLI subcommand in process; returns (exit_code, stdout, stderr).");
}
