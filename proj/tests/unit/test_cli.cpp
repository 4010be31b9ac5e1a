#include <doctest.h>

#include <filesystem>

#include "cli_runner.hpp"
#include "helpers.hpp"
#include "nilesenti/cli.hpp"
#include "nilesenti/model_io.hpp"

using namespace nilesenti;
using testing::data_path;
using testing::run_cli;

namespace {

std::vector<std::string> train_b_args(const std::string& out) {
  return {"train-b", "--train", data_path("taskb_train.tsv"), "--dev", data_path("taskb_dev.tsv"), "--lexicon",
          data_path("lexicon.tsv"), "--embeddings", data_path("embeddings.vec"), "--taska-model", "", "--out", out,
          "--set", "cnn.filters=8", "--set", "mlp.epochs=30"};
}

}  // namespace

TEST_CASE("usage errors exit with 2, runtime errors with 1") {
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"bogus"}).code == 2);
  const auto missing = run_cli({"predict-b", "--in", "x"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("error:") != std::string::npos);
  CHECK(run_cli({"--help"}).code == 0);

  testing::TempDir dir;
  const auto bad = run_cli({"predict-a", "--model", dir.file("none.model"), "--in", data_path("taska_dev.tsv"),
                            "--out", dir.file("p.tsv")});
  CHECK(bad.code == 1);
  CHECK(bad.err.rfind("error: ", 0) == 0);
  CHECK_FALSE(std::filesystem::exists(dir.file("p.tsv")));
}

TEST_CASE("train-a then predict-a on the fixture") {
  testing::TempDir dir;
  const std::string model = dir.file("a.model");
  const auto train = run_cli({"train-a", "--train", data_path("taska_train.tsv"), "--dev", data_path("taska_dev.tsv"),
                              "--lexicon", data_path("lexicon.tsv"), "--out", model});
  REQUIRE(train.code == 0);
  CHECK(!testing::report_value(train.out, "rho", "dev").empty());

  const std::string preds = dir.file("a.pred");
  REQUIRE(run_cli({"predict-a", "--model", model, "--in", data_path("taska_dev.tsv"), "--out", preds}).code == 0);
  const auto ev = run_cli({"eval", "--task", "a", "--gold", data_path("taska_dev.tsv"), "--pred", preds});
  REQUIRE(ev.code == 0);
  CHECK(std::stod(testing::report_value(ev.out, "acc")) >= 0.9);

  // A bad row fails the whole run without touching the output.
  testing::spit(dir.file("bad.tsv"), "1\tNONE\tpositive\tok\n2\tNONE\n");
  const auto fail = run_cli({"train-a", "--train", dir.file("bad.tsv"), "--dev", data_path("taska_dev.tsv"),
                             "--lexicon", data_path("lexicon.tsv"), "--out", dir.file("b.model")});
  CHECK(fail.code == 1);
  CHECK(fail.err.find("line 2") != std::string::npos);
  CHECK_FALSE(std::filesystem::exists(dir.file("b.model")));
}

TEST_CASE("train-b and predict-b are deterministic") {
  testing::TempDir dir;
  const std::string taska = dir.file("a.model");
  REQUIRE(run_cli({"train-a", "--train", data_path("taska_train.tsv"), "--dev", data_path("taska_dev.tsv"),
                   "--lexicon", data_path("lexicon.tsv"), "--out", taska})
              .code == 0);
  std::string outputs[2];
  for (int run = 0; run < 2; ++run) {
    const std::string models = dir.file("b" + std::to_string(run));
    auto args = train_b_args(models);
    args[10] = taska;
    const auto r = run_cli(args);
    REQUIRE(r.code == 0);
    CHECK(!testing::report_value(r.out, "acc", "dev ensemble").empty());
    const std::string preds = dir.file("p" + std::to_string(run));
    REQUIRE(run_cli({"predict-b", "--models", models, "--in", data_path("taskb_dev.tsv"), "--out", preds}).code == 0);
    outputs[run] = testing::slurp(preds);
  }
  CHECK(outputs[0] == outputs[1]);
  CHECK(!outputs[0].empty());
  for (const auto& entry : std::filesystem::directory_iterator(dir.file("b0"))) {
    const auto name = entry.path().filename().string();
    CHECK(testing::slurp(entry.path().string()) == testing::slurp(dir.file("b1") + "/" + name));
  }
}

TEST_CASE("eval task d on identical prevalences is zero") {
  testing::TempDir dir;
  const std::string prev = dir.file("gold.prev");
  testing::spit(prev, "مصر\t0.600000\t0.400000\nالاهلي\t1.000000\t0.000000\n");
  testing::spit(dir.file("topics.tsv"),
                "1\tمصر\tpositive\tx\n2\tمصر\tpositive\tx\n3\tمصر\tpositive\tx\n4\tمصر\tnegative\tx\n"
                "5\tمصر\tnegative\tx\n6\tالاهلي\tpositive\tx\n");
  const auto r = run_cli({"eval", "--task", "d", "--gold", prev, "--pred", prev, "--gold-topics", dir.file("topics.tsv")});
  REQUIRE(r.code == 0);
  CHECK(testing::report_value(r.out, "kld") == "0.000000");
  CHECK(testing::report_value(r.out, "ae") == "0.000000");
  CHECK(testing::report_value(r.out, "rae") == "0.000000");

  CHECK(run_cli({"eval", "--task", "d", "--gold", prev, "--pred", prev}).code == 1);
  CHECK(run_cli({"eval", "--task", "x", "--gold", prev, "--pred", prev}).code == 2);
}

TEST_CASE("config precedence: defaults, file, --set, flags") {
  RunConfig cfg;
  CHECK(cfg.amplify == 2.0);
  CHECK(cfg.seed == 42);
  cfg.apply({{"amplify", "3"}, {"mlp.lr", "0.5"}, {"cnn.filters", "7"}});
  CHECK(cfg.amplify == 3.0);
  CHECK(cfg.mlp.learning_rate == 0.5);
  CHECK(cfg.cnn_shape.n_filters == 7);
  CHECK_THROWS_AS(cfg.set("nonsense", "1"), Error);
  CHECK_THROWS_AS(cfg.set("amplify", "abc"), Error);
  cfg.set("seed", "9");
  const auto e = cfg.ensemble_options();
  CHECK(e.logreg.seed == 9);
  CHECK(e.mlp.seed == 9);
  CHECK(e.cnn.seed == 9);

  testing::TempDir dir;
  testing::spit(dir.file("run.cfg"), "# comment\namplify = 5\nlexicon_threshold = 0.5\n");
  const std::vector<std::string> base = {"train-a", "--train", data_path("taska_train.tsv"), "--dev",
                                         data_path("taska_dev.tsv"), "--lexicon", data_path("lexicon.tsv")};
  auto amplify_of = [&](std::vector<std::string> extra) {
    std::vector<std::string> args = base;
    args.push_back("--out");
    args.push_back(dir.file("m.model"));
    args.insert(args.end(), extra.begin(), extra.end());
    REQUIRE(run_cli(args).code == 0);
    const ModelFile f = load_model(dir.file("m.model"), "task-a");
    return parse_key_values(f.section("config"), "config").at("amplify");
  };
  CHECK(amplify_of({}) == "2");
  CHECK(amplify_of({"--config", dir.file("run.cfg")}) == "5");
  CHECK(amplify_of({"--config", dir.file("run.cfg"), "--set", "amplify=6"}) == "6");
  CHECK(amplify_of({"--config", dir.file("run.cfg"), "--set", "amplify=6", "--amplify", "7"}) == "7");
  CHECK(run_cli({"train-a", "--train", data_path("taska_train.tsv"), "--dev", data_path("taska_dev.tsv"), "--lexicon",
                 data_path("lexicon.tsv"), "--out", dir.file("z.model"), "--set", "bogus=1"})
            .code == 1);
}
