#include "nilesenti/ensemble.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "nilesenti/model_io.hpp"
#include "numfmt.hpp"

namespace nilesenti {
namespace {

constexpr const char* kManifestFormat = "nilesenti-ensemble v1";

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot open " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string net_file(const std::string& kind, const std::map<std::string, std::string>& ids,
                     const std::string& body_name, const std::string& body) {
  ModelFile f;
  f.kind = kind;
  std::string cfg;
  for (const auto& [k, v] : ids) cfg += k + "=" + v + "\n";
  f.add("config", cfg);
  f.add(body_name, body);
  return render_model(f);
}

void check_ids(const ModelFile& f, const std::map<std::string, std::string>& manifest, const std::string& path) {
  const auto cfg = parse_key_values(f.section("config"), path + " [config]");
  for (const auto& [k, v] : cfg) {
    const auto it = manifest.find(k);
    if (it == manifest.end() || it->second != v) {
      throw Error(path + ": `" + k + "` does not match the manifest; submodels come from different runs");
    }
  }
}

const std::string& require(const std::map<std::string, std::string>& kv, const std::string& key,
                           const std::string& source) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw Error(source + ": missing `" + key + "`");
  return it->second;
}

}  // namespace

Polarity majority_vote(const std::array<Polarity, 3>& votes) {
  int pos = 0;
  for (auto v : votes) {
    if (v == Polarity::Neutral) throw Error("majority_vote: votes must be positive or negative");
    if (v == Polarity::Positive) ++pos;
  }
  return pos >= 2 ? Polarity::Positive : Polarity::Negative;
}

SparseVector topic_vector(const Tweet& tweet, const EnsembleModel& model, double amplify) {
  if (!tweet.topic) throw Error("tweet `" + tweet.id + "` has no topic");
  const Polarity overall = predict_task_a(model.task_a, tweet);
  return vectorize_task_b(tweet, model.vocab, model.lexicon, overall, amplify);
}

TweetMatrix topic_matrix(const Tweet& tweet, const EnsembleModel& model, std::uint64_t seed) {
  if (!tweet.topic) throw Error("tweet `" + tweet.id + "` has no topic");
  const TokenStream tokens = prepare_neural_tokens(tweet.text, tweet.topic, true, model.lexicon);
  return embed_tweet(tokens, model.embeddings, model.max_len, seed);
}

TopicVerdict classify_topic_tweet(const Tweet& tweet, const EnsembleModel& model, double amplify,
                                  std::uint64_t seed) {
  const SparseVector x = topic_vector(tweet, model, amplify);
  const TweetMatrix m = topic_matrix(tweet, model, seed);
  TopicVerdict v;
  v.votes = {predict_net(model.logreg, x).label, predict_net(model.mlp, x).label, predict_net(model.cnn, m).label};
  v.label = majority_vote(v.votes);
  return v;
}

TopicVerdict classify_topic_tweet(const Tweet& tweet, const EnsembleModel& model) {
  return classify_topic_tweet(tweet, model, model.amplify, model.seed);
}

std::vector<TopicVerdict> classify_topic_tweets(const Dataset& data, const EnsembleModel& model) {
  std::vector<TopicVerdict> out;
  out.reserve(data.size());
  for (const auto& t : data.tweets) out.push_back(classify_topic_tweet(t, model));
  return out;
}

EnsembleModel train_ensemble(const Dataset& train, const Lexicon& lexicon, EmbeddingTable embeddings,
                             TaskAModel task_a, const EnsembleOptions& options) {
  EnsembleModel model;
  model.lexicon = lexicon;
  model.embeddings = std::move(embeddings);
  model.task_a = std::move(task_a);
  model.amplify = options.amplify;
  model.max_len = options.max_len;
  model.seed = options.seed;

  std::vector<const Tweet*> labeled;
  std::vector<TokenStream> docs;
  for (const auto& t : train.tweets) {
    if (!t.label) continue;
    if (!t.topic) throw Error("tweet `" + t.id + "` has no topic");
    labeled.push_back(&t);
    docs.push_back(task_b_tokens(t, model.lexicon));
  }
  if (labeled.empty()) throw Error("task B training set has no labeled tweets");
  model.vocab = build_vocabulary(docs, 1);

  std::vector<SparseExample> sparse;
  std::vector<MatrixExample> dense;
  for (const Tweet* t : labeled) {
    sparse.emplace_back(topic_vector(*t, model, model.amplify), *t->label);
    dense.emplace_back(topic_matrix(*t, model, model.seed), *t->label);
  }
  model.logreg = train_logreg(sparse, options.logreg);
  model.mlp = train_mlp(sparse, options.mlp, options.mlp_hidden);
  model.cnn = train_cnn(dense, options.cnn, options.cnn_shape);
  return model;
}

EnsembleReport evaluate_ensemble(const Dataset& data, const EnsembleModel& model) {
  std::vector<Polarity> gold;
  std::array<std::vector<Polarity>, 4> pred;
  for (const auto& t : data.tweets) {
    if (!t.label) continue;
    const TopicVerdict v = classify_topic_tweet(t, model);
    gold.push_back(*t.label);
    for (std::size_t k = 0; k < 3; ++k) pred[k].push_back(v.votes[k]);
    pred[3].push_back(v.label);
  }
  const std::array<Polarity, 2> classes{Polarity::Positive, Polarity::Negative};
  EnsembleReport r;
  r.logreg = classification_metrics(gold, pred[0], classes);
  r.mlp = classification_metrics(gold, pred[1], classes);
  r.cnn = classification_metrics(gold, pred[2], classes);
  r.ensemble = classification_metrics(gold, pred[3], classes);
  return r;
}

void save_ensemble(const EnsembleModel& model, const std::string& dir) {
  std::ostringstream vocab, lex, emb, logreg, mlp, cnn;
  model.vocab.write(vocab);
  write_lexicon(model.lexicon, lex);
  model.embeddings.write(emb);
  write_dense_net(model.logreg, logreg);
  write_dense_net(model.mlp, mlp);
  write_cnn(model.cnn, cnn);

  const std::map<std::string, std::string> sparse_ids = {{"lexicon_id", hex_id(model.lexicon.fingerprint())},
                                                         {"taska_id", hex_id(model.task_a.fingerprint())},
                                                         {"vocab_id", hex_id(model.vocab.fingerprint())}};
  const std::map<std::string, std::string> cnn_ids = {{"embeddings_id", hex_id(model.embeddings.fingerprint())},
                                                      {"lexicon_id", hex_id(model.lexicon.fingerprint())}};
  std::ostringstream manifest;
  manifest << "format = " << kManifestFormat << '\n'
           << "amplify = " << format_double(model.amplify) << '\n'
           << "max_len = " << model.max_len << '\n'
           << "seed = " << model.seed << '\n'
           << "embedding_dim = " << model.embeddings.dim() << '\n';
  auto all_ids = sparse_ids;
  all_ids.insert(cnn_ids.begin(), cnn_ids.end());
  for (const auto& [k, v] : all_ids) manifest << k << " = " << v << '\n';

  const std::vector<std::pair<std::string, std::string>> files = {
      {"taska.model", render_task_a(model.task_a)},
      {"logreg.model", net_file("logreg", sparse_ids, "logreg", logreg.str())},
      {"mlp.model", net_file("mlp", sparse_ids, "mlp", mlp.str())},
      {"cnn.model", net_file("cnn", cnn_ids, "cnn", cnn.str())},
      {"vocab.tsv", vocab.str()},
      {"lexicon.tsv", lex.str()},
      {"embeddings.vec", emb.str()},
      {"manifest.cfg", manifest.str()},
  };
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir + ": " + ec.message());
  for (const auto& [name, body] : files) write_file_atomically((fs::path(dir) / name).string(), body);
}

EnsembleModel load_ensemble(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  if (!fs::is_directory(root)) throw Error("model directory not found: " + dir);
  const std::string manifest_path = (root / "manifest.cfg").string();
  const auto manifest = load_key_values(manifest_path);
  if (require(manifest, "format", manifest_path) != kManifestFormat) {
    throw Error(manifest_path + ": unsupported format");
  }

  EnsembleModel m;
  m.amplify = parse_double(require(manifest, "amplify", manifest_path), manifest_path);
  m.max_len = static_cast<std::size_t>(parse_int(require(manifest, "max_len", manifest_path), manifest_path));
  m.seed = static_cast<std::uint64_t>(parse_int(require(manifest, "seed", manifest_path), manifest_path));
  const auto dim =
      static_cast<std::size_t>(parse_int(require(manifest, "embedding_dim", manifest_path), manifest_path));

  m.task_a = load_task_a((root / "taska.model").string());
  {
    std::istringstream in(read_file(root / "vocab.tsv"));
    m.vocab = Vocabulary::read(in, (root / "vocab.tsv").string());
  }
  m.lexicon = load_lexicon((root / "lexicon.tsv").string());
  m.embeddings = load_embeddings((root / "embeddings.vec").string(), dim);

  const std::pair<const char*, std::uint64_t> actual[] = {{"vocab_id", m.vocab.fingerprint()},
                                                          {"lexicon_id", m.lexicon.fingerprint()},
                                                          {"embeddings_id", m.embeddings.fingerprint()},
                                                          {"taska_id", m.task_a.fingerprint()}};
  for (const auto& [key, id] : actual) {
    if (require(manifest, key, manifest_path) != hex_id(id)) {
      throw Error(dir + ": " + key + " in the manifest does not match the stored files");
    }
  }

  for (const char* name : {"logreg", "mlp"}) {
    const std::string path = (root / (std::string(name) + ".model")).string();
    const ModelFile f = load_model(path, name);
    check_ids(f, manifest, path);
    (std::string(name) == "logreg" ? m.logreg : m.mlp) = read_dense_net(f.section(name), path);
  }
  {
    const std::string path = (root / "cnn.model").string();
    const ModelFile f = load_model(path, "cnn");
    check_ids(f, manifest, path);
    m.cnn = read_cnn(f.section("cnn"), path);
  }
  const std::size_t expected = m.vocab.size() + TopicFeaturesB::kCount;
  if (m.logreg.input_dim() != expected || m.mlp.input_dim() != expected) {
    throw Error(dir + ": network input size does not match the vocabulary");
  }
  if (m.cnn.dim != dim) throw Error(dir + ": cnn width does not match the embeddings");
  return m;
}

}  // namespace nilesenti
