#include <doctest.h>

#include <filesystem>
#include <random>

#include "ensemble_fixture.hpp"
#include "nilesenti/ensemble.hpp"

using namespace nilesenti;

namespace {

constexpr auto P = Polarity::Positive;
constexpr auto N = Polarity::Negative;

DenseNet biased_net(std::size_t dim, std::size_t hidden, Polarity favored) {
  DenseNet net = hidden ? init_mlp(dim, hidden, 1) : init_logreg(dim, 1);
  for (auto& l : net.layers) {
    l.weights.setZero();
    l.bias.setZero();
  }
  net.layers.back().bias[favored == P ? 0 : 1] = 1.0;
  return net;
}

const EnsembleModel& fixture_model() {
  static const EnsembleModel m = testing::synthetic_ensemble(testing::synthetic_topic_tweets(60, 3));
  return m;
}

}  // namespace

TEST_CASE("majority vote examples") {
  CHECK(majority_vote({P, P, N}) == P);
  CHECK(majority_vote({N, N, N}) == N);
  CHECK(majority_vote({P, N, P}) == P);
  CHECK(majority_vote({N, N, P}) == N);
  CHECK_THROWS_AS(majority_vote({P, Polarity::Neutral, N}), Error);
}

TEST_CASE("majority vote ignores vote order") {
  for (int mask = 0; mask < 8; ++mask) {
    std::array<Polarity, 3> v{};
    for (int k = 0; k < 3; ++k) v[k] = (mask >> k) & 1 ? P : N;
    const Polarity ref = majority_vote(v);
    const int pos = __builtin_popcount(mask);
    CHECK(ref == (pos >= 2 ? P : N));
    std::sort(v.begin(), v.end());
    do {
      CHECK(majority_vote(v) == ref);
    } while (std::next_permutation(v.begin(), v.end()));
  }
}

TEST_CASE("hand-built submodels vote two to one") {
  Dataset tiny = testing::synthetic_topic_tweets(12, 1);
  EnsembleModel m;
  m.lexicon = testing::synthetic_lexicon();
  m.embeddings = testing::synthetic_embeddings(4);
  m.task_a = testing::synthetic_task_a(tiny);
  std::vector<TokenStream> docs;
  for (const auto& t : tiny.tweets) docs.push_back(task_b_tokens(t, m.lexicon));
  m.vocab = build_vocabulary(docs, 1);
  const std::size_t dim = m.vocab.size() + TopicFeaturesB::kCount;
  m.logreg = biased_net(dim, 0, P);
  m.mlp = biased_net(dim, 3, P);
  m.cnn = init_cnn(4, CnnShape{2, 2}, 1);
  m.cnn.output.weights.setZero();
  m.cnn.output.bias << 0.0, 1.0;
  m.cnn.hidden.weights.setZero();

  for (const auto& t : tiny.tweets) {
    const TopicVerdict v = classify_topic_tweet(t, m);
    CHECK(v.votes == std::array<Polarity, 3>{P, P, N});
    CHECK(v.label == P);
  }
  m.mlp = biased_net(dim, 3, N);
  CHECK(classify_topic_tweet(tiny.tweets[0], m).label == N);
}

TEST_CASE("overall sentiment slot follows the task A verdict") {
  const EnsembleModel& m = fixture_model();
  const std::size_t slot = m.vocab.size();
  std::size_t k = 0;
  for (; k < kTaskBFeatureNames.size(); ++k) {
    if (kTaskBFeatureNames[k] == "overallSentiment") break;
  }
  std::vector<std::string> texts = {"الاهلي رائع ممتاز", "الاهلي فاشل مقرف", "الاهلي كان هذا", "الاهلي", "الاهلي w1 w2"};
  bool saw_polar = false;
  for (const auto& text : texts) {
    Tweet t;
    t.id = "q";
    t.text = text;
    t.topic = "الاهلي";
    const Polarity a = predict_task_a(m.task_a, t);
    const double expected = a == P ? m.amplify : a == N ? -m.amplify : 0.0;
    CHECK(topic_vector(t, m, m.amplify).at(slot + k) == expected);
    saw_polar = saw_polar || a != Polarity::Neutral;
    classify_topic_tweet(t, m);
  }
  CHECK(saw_polar);
}

TEST_CASE("a neutral task A verdict feeds zero") {
  EnsembleModel m;
  Dataset tiny = testing::synthetic_topic_tweets(12, 1);
  Dataset a;
  a.task = Task::A;
  for (std::size_t i = 0; i < 6; ++i) {
    Tweet t;
    t.id = "n" + std::to_string(i);
    t.text = "كان هذا مع " + std::to_string(i);
    t.label = Polarity::Neutral;
    a.tweets.push_back(t);
  }
  for (auto t : tiny.tweets) {
    t.topic.reset();
    a.tweets.push_back(t);
  }
  m.lexicon = testing::synthetic_lexicon();
  m.task_a = train_task_a(a, Dataset{}, m.lexicon, TaskAOptions{});
  Tweet q;
  q.id = "q";
  q.text = "كان هذا مع الاهلي";
  q.topic = "الاهلي";
  REQUIRE(predict_task_a(m.task_a, q) == Polarity::Neutral);
  std::vector<TokenStream> docs = {task_b_tokens(q, m.lexicon)};
  m.vocab = build_vocabulary(docs, 1);
  std::size_t k = 0;
  while (kTaskBFeatureNames[k] != "overallSentiment") ++k;
  CHECK(topic_vector(q, m, 2.0).at(m.vocab.size() + k) == 0.0);
}

TEST_CASE("an outvoted classifier always disagrees with the ensemble") {
  const EnsembleModel& m = fixture_model();
  const Dataset probe = testing::synthetic_topic_tweets(40, 99);
  for (const auto& v : classify_topic_tweets(probe, m)) {
    int agree = 0;
    for (auto x : v.votes) agree += x == v.label ? 1 : 0;
    CHECK(agree >= 2);
  }
}

TEST_CASE("trained ensemble fits its training data") {
  const Dataset train = testing::synthetic_topic_tweets(60, 3);
  const EnsembleReport r = evaluate_ensemble(train, fixture_model());
  CHECK(*r.ensemble.acc >= 0.9);
}

TEST_CASE("save and load round-trip") {
  const EnsembleModel& m = fixture_model();
  testing::TempDir dir;
  const std::string path = dir.file("model");
  save_ensemble(m, path);
  const EnsembleModel back = load_ensemble(path);
  const Dataset probe = testing::synthetic_topic_tweets(30, 5);
  const auto a = classify_topic_tweets(probe, m), b = classify_topic_tweets(probe, back);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].votes == b[i].votes);
    CHECK(a[i].label == b[i].label);
  }

  const std::string again = dir.file("again");
  save_ensemble(back, again);
  for (const char* f : {"manifest.cfg", "logreg.model", "mlp.model", "cnn.model", "taska.model", "vocab.tsv",
                        "lexicon.tsv", "embeddings.vec"}) {
    CHECK(testing::slurp(path + "/" + f) == testing::slurp(again + "/" + f));
  }
}

TEST_CASE("mismatched submodels are rejected") {
  testing::TempDir dir;
  const std::string a = dir.file("a");
  save_ensemble(fixture_model(), a);

  const std::string b = dir.file("b");
  const EnsembleModel other = testing::synthetic_ensemble(testing::synthetic_topic_tweets(20, 8));
  save_ensemble(other, b);
  std::filesystem::copy_file(b + "/vocab.tsv", a + "/vocab.tsv", std::filesystem::copy_options::overwrite_existing);
  CHECK_THROWS_AS(load_ensemble(a), Error);

  save_ensemble(fixture_model(), a);
  std::filesystem::copy_file(b + "/mlp.model", a + "/mlp.model", std::filesystem::copy_options::overwrite_existing);
  CHECK_THROWS_AS(load_ensemble(a), Error);

  CHECK_THROWS_AS(load_ensemble(dir.file("missing")), Error);
}
