#include "nilesenti/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>

#include "nilesenti/corpus.hpp"
#include "nilesenti/model_io.hpp"
#include "numfmt.hpp"

namespace nilesenti {
namespace {

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw Error("config `" + key + "`: expected a boolean, got `" + v + "`");
}

std::size_t parse_count(const std::string& v, const std::string& key) {
  const auto n = parse_int(v, "config `" + key + "`");
  if (n <= 0) throw Error("config `" + key + "` must be positive");
  return static_cast<std::size_t>(n);
}

std::string read_whole(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// A dataset has 4 tab fields per line, a prevalence file 3.
bool looks_like_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    return std::count(line.begin(), line.end(), '\t') >= 3;
  }
  return false;
}

std::unordered_map<std::string, Polarity> prediction_map(const std::vector<Prediction>& preds, const std::string& src) {
  std::unordered_map<std::string, Polarity> m;
  for (const auto& [id, label] : preds) {
    if (!m.emplace(id, label).second) throw Error(src + ": duplicate id `" + id + "`");
  }
  return m;
}

std::vector<Prevalence> gold_prevalences(const Dataset& gold) {
  std::vector<std::pair<std::string, Polarity>> labeled;
  for (const auto& t : gold.tweets) {
    if (t.label) labeled.emplace_back(*t.topic, *t.label);
  }
  return classify_and_count(labeled);
}

std::map<std::string, std::size_t> topic_counts(const Dataset& ds) {
  std::map<std::string, std::size_t> counts;
  for (const auto& t : ds.tweets) ++counts[*t.topic];
  return counts;
}

struct Options {
  std::string config;
  std::vector<std::string> sets;
  std::optional<double> amplify, lexicon_threshold;
  std::optional<std::size_t> max_len, embedding_dim;
  std::optional<std::uint64_t> seed;
};

void add_config_flags(CLI::App* cmd, Options& o, bool neural) {
  cmd->add_option("--config", o.config, "flat key = value config file");
  cmd->add_option("--set", o.sets, "override one config key (key=value), repeatable");
  cmd->add_option("--amplify", o.amplify, "lexicon feature amplification");
  cmd->add_option("--lexicon-threshold", o.lexicon_threshold, "augmentation score threshold");
  cmd->add_option("--seed", o.seed, "random seed (default 42)");
  if (neural) {
    cmd->add_option("--max-len", o.max_len, "CNN input rows");
    cmd->add_option("--embedding-dim", o.embedding_dim, "embedding dimension");
  }
}

RunConfig resolve(const Options& o) {
  RunConfig cfg;
  if (!o.config.empty()) cfg.apply(load_key_values(o.config));
  for (const auto& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw Error("--set expects key=value, got `" + s + "`");
    cfg.set(s.substr(0, eq), s.substr(eq + 1));
  }
  if (o.amplify) cfg.amplify = *o.amplify;
  if (o.lexicon_threshold) cfg.lexicon_threshold = *o.lexicon_threshold;
  if (o.max_len) cfg.max_len = *o.max_len;
  if (o.embedding_dim) cfg.embedding_dim = *o.embedding_dim;
  if (o.seed) cfg.seed = *o.seed;
  return cfg;
}

void write_report_block(std::ostream& out, const std::string& title, const MetricsReport& r) {
  out << "# " << title << '\n';
  write_report(r, out);
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  const std::string where = "config `" + key + "`";
  if (key == "amplify") {
    amplify = parse_double(value, where);
  } else if (key == "lexicon_threshold") {
    lexicon_threshold = parse_double(value, where);
  } else if (key == "max_len") {
    max_len = parse_count(value, key);
  } else if (key == "embedding_dim") {
    embedding_dim = parse_count(value, key);
  } else if (key == "seed") {
    seed = static_cast<std::uint64_t>(parse_int(value, where));
  } else if (key == "cnb.smoothing") {
    cnb.smoothing = parse_double(value, where);
  } else if (key == "cnb.normalize") {
    cnb.normalize = parse_bool(value, key);
  } else if (key == "cnb.prior") {
    cnb.use_prior = parse_bool(value, key);
  } else if (key == "weighting") {
    if (value == "idf") {
      weighting = NgramWeighting::IdfPresence;
    } else if (value == "tfidf") {
      weighting = NgramWeighting::TfIdf;
    } else {
      throw Error(where + ": expected idf or tfidf");
    }
  } else if (key == "mlp.hidden") {
    mlp_hidden = parse_count(value, key);
  } else if (key == "cnn.filters") {
    cnn_shape.n_filters = parse_count(value, key);
  } else if (key == "cnn.hidden") {
    cnn_shape.hidden = parse_count(value, key);
  } else if (key == "aggregate") {
    if (value == "macro") {
      aggregate = Aggregate::Macro;
    } else if (value == "micro") {
      aggregate = Aggregate::Micro;
    } else {
      throw Error(where + ": expected macro or micro");
    }
  } else {
    const auto dot = key.find('.');
    TrainConfig* tc = nullptr;
    const std::string model = key.substr(0, dot);
    if (model == "logreg") tc = &logreg;
    if (model == "mlp") tc = &mlp;
    if (model == "cnn") tc = &cnn;
    const std::string field = dot == std::string::npos ? "" : key.substr(dot + 1);
    if (!tc) throw Error("unknown config key `" + key + "`");
    if (field == "lr") {
      tc->learning_rate = parse_double(value, where);
    } else if (field == "epochs") {
      tc->epochs = static_cast<int>(parse_int(value, where));
    } else if (field == "batch_size") {
      tc->batch_size = static_cast<int>(parse_int(value, where));
    } else if (field == "l2") {
      tc->l2 = parse_double(value, where);
    } else {
      throw Error("unknown config key `" + key + "`");
    }
    tc->validate();
  }
}

void RunConfig::apply(const std::map<std::string, std::string>& values) {
  for (const auto& [k, v] : values) set(k, v);
}

TaskAOptions RunConfig::task_a_options() const {
  TaskAOptions o;
  o.amplify = amplify;
  o.lexicon_threshold = lexicon_threshold;
  o.weighting = weighting;
  o.cnb = cnb;
  return o;
}

EnsembleOptions RunConfig::ensemble_options() const {
  EnsembleOptions o;
  o.amplify = amplify;
  o.max_len = max_len;
  o.seed = seed;
  o.logreg = logreg;
  o.mlp = mlp;
  o.cnn = cnn;
  for (TrainConfig* tc : {&o.logreg, &o.mlp, &o.cnn}) tc->seed = seed;
  o.mlp_hidden = mlp_hidden;
  o.cnn_shape = cnn_shape;
  return o;
}

int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Arabic tweet sentiment: CNB (task A), voting ensemble (task B), quantification (task D)", "nilesenti"};
  app.require_subcommand(1, 1);
  std::function<void()> action;

  // train-a
  Options a_opts;
  std::string a_train, a_dev, a_lexicon, a_out;
  auto* train_a = app.add_subcommand("train-a", "train the task A CNB model");
  train_a->add_option("--train", a_train, "training tweets")->required();
  train_a->add_option("--dev", a_dev, "development tweets")->required();
  train_a->add_option("--lexicon", a_lexicon, "scored lexicon")->required();
  train_a->add_option("--out", a_out, "model file to write")->required();
  add_config_flags(train_a, a_opts, false);
  train_a->callback([&] {
    action = [&] {
      const RunConfig cfg = resolve(a_opts);
      const Dataset train = load_dataset(a_train, Task::A);
      const Dataset dev = load_dataset(a_dev, Task::A);
      const Lexicon lex = load_lexicon(a_lexicon);
      const TaskAModel model = train_task_a(train, dev, lex, cfg.task_a_options());
      std::vector<Polarity> gold, pred;
      for (const auto& t : dev.tweets) {
        if (!t.label) continue;
        gold.push_back(*t.label);
        pred.push_back(predict_task_a(model, t));
      }
      const std::string body = render_task_a(model);
      write_file_atomically(a_out, body);
      if (!gold.empty()) {
        const std::array<Polarity, 3> classes{Polarity::Positive, Polarity::Negative, Polarity::Neutral};
        write_report_block(out, "dev", classification_metrics(gold, pred, classes));
      }
    };
  });

  // predict-a
  std::string pa_model, pa_in, pa_out;
  auto* predict_a = app.add_subcommand("predict-a", "label tweets with a task A model");
  predict_a->add_option("--model", pa_model, "model from train-a")->required();
  predict_a->add_option("--in", pa_in, "tweets to label")->required();
  predict_a->add_option("--out", pa_out, "predictions file to write")->required();
  predict_a->callback([&] {
    action = [&] {
      const TaskAModel model = load_task_a(pa_model);
      const Dataset data = load_dataset(pa_in, Task::A);
      write_predictions(predict_task_a(model, data), pa_out);
    };
  });

  // train-b
  Options b_opts;
  std::string b_train, b_dev, b_lexicon, b_embeddings, b_taska, b_out;
  auto* train_b = app.add_subcommand("train-b", "train the task B voting ensemble");
  train_b->add_option("--train", b_train, "training tweets with topics")->required();
  train_b->add_option("--dev", b_dev, "development tweets with topics")->required();
  train_b->add_option("--lexicon", b_lexicon, "scored lexicon")->required();
  train_b->add_option("--embeddings", b_embeddings, "word vectors, text format")->required();
  train_b->add_option("--taska-model", b_taska, "model from train-a")->required();
  train_b->add_option("--out", b_out, "model directory to write")->required();
  add_config_flags(train_b, b_opts, true);
  train_b->callback([&] {
    action = [&] {
      const RunConfig cfg = resolve(b_opts);
      const Dataset train = load_dataset(b_train, Task::B);
      const Dataset dev = load_dataset(b_dev, Task::B);
      const Lexicon lex = load_lexicon(b_lexicon);
      const TaskAModel task_a = load_task_a(b_taska);
      const EnsembleOptions opts = cfg.ensemble_options();
      EmbeddingTable vectors = load_embeddings(b_embeddings, cfg.embedding_dim);
      for (const auto& w : vectors.warnings()) err << "warning: " << w << '\n';

      std::ostringstream report;
      if (std::any_of(dev.tweets.begin(), dev.tweets.end(), [](const Tweet& t) { return t.label.has_value(); })) {
        const EnsembleModel held_out = train_ensemble(clean_training_set(train, dev), lex,
                                                      load_embeddings(b_embeddings, cfg.embedding_dim), task_a, opts);
        const EnsembleReport r = evaluate_ensemble(dev, held_out);
        write_report_block(report, "dev logreg", r.logreg);
        write_report_block(report, "dev mlp", r.mlp);
        write_report_block(report, "dev cnn", r.cnn);
        write_report_block(report, "dev ensemble", r.ensemble);
      }
      Dataset merged = train;
      merged.tweets.insert(merged.tweets.end(), dev.tweets.begin(), dev.tweets.end());
      const Dataset final_data = clean_training_set(merged, Dataset{{}, Task::B});
      const EnsembleModel model = train_ensemble(final_data, lex, std::move(vectors), task_a, opts);
      save_ensemble(model, b_out);
      out << report.str();
    };
  });

  // predict-b
  std::string pb_models, pb_in, pb_out;
  auto* predict_b = app.add_subcommand("predict-b", "label topic tweets with the voting ensemble");
  predict_b->add_option("--models", pb_models, "directory from train-b")->required();
  predict_b->add_option("--in", pb_in, "tweets with topics")->required();
  predict_b->add_option("--out", pb_out, "predictions file to write")->required();
  predict_b->callback([&] {
    action = [&] {
      const EnsembleModel model = load_ensemble(pb_models);
      const Dataset data = load_dataset(pb_in, Task::B);
      const auto verdicts = classify_topic_tweets(data, model);
      std::set<std::string> ids;
      std::ostringstream body;
      for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& id = data.tweets[i].id;
        if (!ids.insert(id).second) throw Error(pb_in + ": duplicate id `" + id + "`");
        const auto& v = verdicts[i];
        body << id << '\t' << to_string(v.label) << '\t' << to_string(v.votes[0]) << '\t' << to_string(v.votes[1])
             << '\t' << to_string(v.votes[2]) << '\n';
      }
      write_file_atomically(pb_out, body.str());
    };
  });

  // quantify
  std::string q_pred, q_topics, q_out;
  auto* quantify = app.add_subcommand("quantify", "per-topic prevalences by classify and count");
  quantify->add_option("--predictions", q_pred, "predictions file")->required();
  quantify->add_option("--gold-topics", q_topics, "tweets with topics (labels unused)")->required();
  quantify->add_option("--out", q_out, "prevalence file to write")->required();
  quantify->callback([&] {
    action = [&] {
      const auto preds = load_predictions(q_pred);
      const Dataset topics = load_dataset(q_topics, Task::B);
      std::unordered_map<std::string, std::string> topic_of;
      for (const auto& t : topics.tweets) topic_of.emplace(t.id, *t.topic);
      prediction_map(preds, q_pred);
      std::vector<std::pair<std::string, Polarity>> tagged;
      for (const auto& [id, label] : preds) {
        const auto it = topic_of.find(id);
        if (it == topic_of.end()) throw Error(q_pred + ": id `" + id + "` has no topic in " + q_topics);
        tagged.emplace_back(it->second, label);
      }
      std::ostringstream body;
      write_prevalences(classify_and_count(tagged), body);
      write_file_atomically(q_out, body.str());
    };
  });

  // eval
  std::string e_task, e_gold, e_pred, e_topics, e_aggregate = "macro";
  auto* eval = app.add_subcommand("eval", "score predictions against gold labels");
  eval->add_option("--task", e_task, "a, b or d")->required()->check(CLI::IsMember({"a", "b", "d"}));
  eval->add_option("--gold", e_gold, "gold tweets (or, for d, a prevalence file)")->required();
  eval->add_option("--pred", e_pred, "predictions (for d, a prevalence file)")->required();
  eval->add_option("--gold-topics", e_topics, "task d: tweets giving per-topic counts for a prevalence gold file");
  eval->add_option("--aggregate", e_aggregate, "task d: macro or micro")->check(CLI::IsMember({"macro", "micro"}));
  eval->callback([&] {
    action = [&] {
      if (e_task == "d") {
        std::vector<Prevalence> gold;
        if (looks_like_dataset(e_gold)) {
          gold = gold_prevalences(load_dataset(e_gold, Task::B));
        } else {
          std::istringstream in(read_whole(e_gold));
          gold = parse_prevalences(in, e_gold);
          if (e_topics.empty()) throw Error("eval --task d with a prevalence gold file needs --gold-topics");
          const auto counts = topic_counts(load_dataset(e_topics, Task::B));
          for (auto& g : gold) {
            const auto it = counts.find(g.topic);
            if (it == counts.end()) throw Error(e_topics + ": no tweets for topic `" + g.topic + "`");
            g.count = it->second;
          }
        }
        std::istringstream in(read_whole(e_pred));
        const auto est = parse_prevalences(in, e_pred);
        write_report(quantification_metrics(gold, est, e_aggregate == "micro" ? Aggregate::Micro : Aggregate::Macro),
                     out);
        return;
      }
      const Task task = e_task == "a" ? Task::A : Task::B;
      const Dataset gold = load_dataset(e_gold, task);
      const auto pred = prediction_map(load_predictions(e_pred), e_pred);
      std::vector<Polarity> g, p;
      for (const auto& t : gold.tweets) {
        if (!t.label) continue;
        const auto it = pred.find(t.id);
        if (it == pred.end()) throw Error(e_pred + ": no prediction for id `" + t.id + "`");
        g.push_back(*t.label);
        p.push_back(it->second);
      }
      std::vector<Polarity> classes{Polarity::Positive, Polarity::Negative};
      if (task == Task::A) classes.push_back(Polarity::Neutral);
      write_report(classification_metrics(g, p, classes), out);
    };
  });

  std::vector<std::string> storage{"nilesenti"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }
  try {
    if (action) action();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace nilesenti
