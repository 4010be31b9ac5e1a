#include "nilesenti/task_a.hpp"

#include <fstream>
#include <sstream>

#include "nilesenti/model_io.hpp"
#include "nilesenti/utf8.hpp"
#include "numfmt.hpp"

namespace nilesenti {
namespace {

std::string_view weighting_name(NgramWeighting w) { return w == NgramWeighting::TfIdf ? "tfidf" : "idf"; }

NgramWeighting parse_weighting(const std::string& s, const std::string& where) {
  if (s == "idf") return NgramWeighting::IdfPresence;
  if (s == "tfidf") return NgramWeighting::TfIdf;
  throw Error(where + ": unknown weighting `" + s + "`");
}

}  // namespace

std::uint64_t TaskAModel::fingerprint() const {
  std::ostringstream cnb_text;
  write_cnb(cnb, cnb_text);
  std::uint64_t h = utf8::fnv1a(hex_id(vocab.fingerprint()) + hex_id(lexicon.fingerprint()));
  h = utf8::fnv1a(format_double(amplify) + std::string(weighting_name(weighting)), h);
  return utf8::fnv1a(cnb_text.str(), h);
}

TaskAModel train_task_a(const Dataset& train, const Dataset& dev, const Lexicon& lexicon,
                        const TaskAOptions& options) {
  const Dataset cleaned = clean_training_set(train, dev);
  const Dataset data = augment_with_lexicon(cleaned, lexicon, options.lexicon_threshold);

  std::vector<const Tweet*> labeled;
  std::vector<TokenStream> docs;
  for (const auto& t : data.tweets) {
    if (!t.label) continue;
    labeled.push_back(&t);
    docs.push_back(task_a_tokens(t.text));
  }
  if (labeled.size() < 2) throw Error("task A training needs at least two labeled tweets");

  TaskAModel model;
  model.vocab = build_vocabulary(docs, options.max_order);
  model.lexicon = lexicon;
  model.amplify = options.amplify;
  model.weighting = options.weighting;

  std::vector<SparseVector> vectors;
  std::vector<Polarity> labels;
  vectors.reserve(labeled.size());
  for (const Tweet* t : labeled) {
    vectors.push_back(vectorize_task_a(*t, model.vocab, model.lexicon, model.amplify, model.weighting));
    labels.push_back(*t->label);
  }
  model.cnb = train_cnb(vectors, labels, options.cnb);
  return model;
}

Polarity predict_task_a(const TaskAModel& model, const Tweet& tweet) {
  return predict_cnb(model.cnb, vectorize_task_a(tweet, model.vocab, model.lexicon, model.amplify, model.weighting))
      .label;
}

std::vector<Prediction> predict_task_a(const TaskAModel& model, const Dataset& data) {
  std::vector<Prediction> out;
  out.reserve(data.size());
  for (const auto& t : data.tweets) out.emplace_back(t.id, predict_task_a(model, t));
  return out;
}

std::string render_task_a(const TaskAModel& model) {
  ModelFile f;
  f.kind = "task-a";
  f.add("config", "amplify=" + format_double(model.amplify) + "\nweighting=" +
                      std::string(weighting_name(model.weighting)) + "\n");
  std::ostringstream vocab, lex, cnb;
  model.vocab.write(vocab);
  write_lexicon(model.lexicon, lex);
  write_cnb(model.cnb, cnb);
  f.add("vocab", vocab.str());
  f.add("lexicon", lex.str());
  f.add("cnb", cnb.str());
  return render_model(f);
}

TaskAModel parse_task_a(std::istream& in, const std::string& source) {
  const ModelFile f = parse_model(in, source);
  if (f.kind != "task-a") throw Error(source + ": expected a task-a model, found " + f.kind);
  const auto cfg = parse_key_values(f.section("config"), source + " [config]");
  for (const char* k : {"amplify", "weighting"}) {
    if (!cfg.contains(k)) throw Error(source + ": [config] missing `" + k + "`");
  }
  TaskAModel m;
  m.amplify = parse_double(cfg.at("amplify"), source);
  m.weighting = parse_weighting(cfg.at("weighting"), source);
  std::istringstream vocab(f.text("vocab"));
  m.vocab = Vocabulary::read(vocab, source + " [vocab]");
  std::istringstream lex(f.text("lexicon"));
  m.lexicon = parse_lexicon(lex, source + " [lexicon]");
  m.cnb = read_cnb(f.section("cnb"), source + " [cnb]");
  if (m.cnb.dimension != m.vocab.size() + LexicalFeaturesA::kCount) {
    throw Error(source + ": cnb dimension does not match the vocabulary");
  }
  return m;
}

TaskAModel load_task_a(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model: " + path);
  return parse_task_a(in, path);
}

}  // namespace nilesenti
