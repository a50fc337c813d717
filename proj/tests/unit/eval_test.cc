//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>
#include <httplib.h>
#include <json.hpp>

#include "chemgym/chem/smiles.h"
#include "chemgym/error.h"
#include "chemgym/eval/harness.h"
#include "chemgym/eval/metrics.h"
#include "chemgym/eval/prediction.h"
#include "chemgym/eval/prompt.h"
#include "chemgym/eval/provider.h"
#include "chemgym/random.h"

namespace chemgym {
namespace {

using nlohmann::json;

const std::string kData = CHEMGYM_TEST_DATA_DIR;
const std::string kDemo = CHEMGYM_DEMO_DIR;

AnswerType classification() {
  AnswerType t;
  t.kind = AnswerKind::kClassification;
  t.labels = { "True", "False" };
  return t;
}

AnswerType regression() {
  AnswerType t;
  t.kind = AnswerKind::kRegression;
  return t;
}

AnswerType generation() {
  AnswerType t;
  t.kind = AnswerKind::kGeneration;
  return t;
}

Prediction number(double v) {
  Prediction p;
  p.kind = PredictionKind::kNumber;
  p.number = v;
  return p;
}

Prediction label(const std::string &s) {
  Prediction p;
  p.kind = PredictionKind::kLabel;
  p.text = s;
  return p;
}

json read_json(const std::string &path) {
  std::ifstream in(path);
  return json::parse(in);
}

TEST(Parse, Completion) {
  Prediction p = parse_completion("<think>hm</think><answer>0.82</answer>",
                                  regression());
  EXPECT_EQ(p.kind, PredictionKind::kNumber);
  EXPECT_DOUBLE_EQ(p.number, 0.82);
  EXPECT_FALSE(parse_completion("0.82", regression()).valid());
  EXPECT_FALSE(parse_completion("<answer>abc</answer>", regression()).valid());

  p = parse_completion("<answer>CC(=O)O</answer>", generation());
  EXPECT_EQ(p.kind, PredictionKind::kMolecule);
  EXPECT_EQ(p.text, chem::canonicalize_smiles("OC(C)=O"));
  EXPECT_FALSE(parse_completion("<answer>C1CC</answer>", generation()).valid());

  EXPECT_EQ(parse_completion("<answer> True </answer>", classification()).text,
            "True");
  EXPECT_FALSE(parse_completion("<answer>true</answer>", classification())
                   .valid());
}

TEST(ClassProbs, ClosedForm) {
  auto p = class_probs_from_logprobs({ { "True", -1.5 }, { "False", -1.5 } },
                                     { "True", "False" });
  EXPECT_DOUBLE_EQ(p["True"], 0.5);
  EXPECT_DOUBLE_EQ(p["False"], 0.5);

  p = class_probs_from_logprobs({ { "A", 0.0 }, { "B", -std::log(3.0) } },
                                { "A", "B" });
  EXPECT_NEAR(p["A"], 0.75, 1e-15);
  EXPECT_NEAR(p["B"], 0.25, 1e-15);

  json fx = read_json(kData + "/metric_fixtures.json");
  auto want = fx["softmax_1_0_m1"].get<std::vector<double>>();
  p = class_probs_from_logprobs({ { "x", 1.0 }, { "y", 0.0 }, { "z", -1.0 },
                                  { "other", 5.0 } },
                                { "x", "y", "z" });
  EXPECT_NEAR(p["x"], want[0], 1e-15);
  EXPECT_NEAR(p["y"], want[1], 1e-15);
  EXPECT_NEAR(p["z"], want[2], 1e-15);

  auto q = class_probs_from_logprobs({ { "x", 101.0 }, { "y", 100.0 },
                                       { "z", 99.0 } },
                                     { "x", "y", "z" });
  for (const auto &[k, v] : p)
    EXPECT_NEAR(q[k], v, 1e-14);
}

TEST(ClassProbs, Errors) {
  EXPECT_THROW(class_probs_from_logprobs({ { "A", 0.0 } }, { "Ab", "Ac" },
                                         &static_cast<const Vocabulary &>(
                                             Vocabulary::with_default_text())),
               AmbiguousLabelTokens);
  EXPECT_THROW(class_probs_from_logprobs({ { "C", 0.0 } }, { "A", "B" }),
               DegenerateInput);
  auto p = class_probs_from_logprobs({ { "A", 0.0 } }, { "A", "B" });
  EXPECT_EQ(p["A"], 1.0);
  EXPECT_EQ(p["B"], 0.0);
}

TEST(Aggregate, Rules) {
  std::vector<Prediction> odd { number(1.0), number(3.0), number(2.0) };
  EXPECT_EQ(aggregate(odd, "median").value.number, 2.0);
  std::vector<Prediction> even { number(1.0), number(2.0), number(3.0),
                                 number(4.0) };
  EXPECT_EQ(aggregate(even, "median").value.number, 2.5);
  std::vector<Prediction> labels { label("A"), label("A"), label("B") };
  EXPECT_EQ(aggregate(labels, "majority").value.text, "A");
  std::vector<Prediction> tie { label("B"), label("A") };
  EXPECT_EQ(aggregate(tie, "majority").value.text, "A");

  std::vector<Prediction> mixed { number(5.0), Prediction(), number(1.0) };
  EvalAggregate a = aggregate(mixed, "median");
  EXPECT_EQ(a.value.number, 3.0);
  EXPECT_EQ(a.n_valid, 2u);
  EXPECT_NEAR(a.validity_fraction(), 2.0 / 3.0, 1e-15);

  std::vector<Prediction> none { Prediction(), Prediction() };
  EXPECT_THROW(aggregate(none, "median"), AllInvalid);
  EXPECT_THROW(aggregate(odd, "mode"), ConfigError);
}

TEST(Aggregate, PermutationAndMedianInvariance) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Prediction> p;
    for (int i = 0; i < 7; ++i)
      p.push_back(number(static_cast<double>(rng.uniform_index(20))));
    double m = aggregate(p, "median").value.number;
    rng.shuffle(std::span<Prediction>(p));
    EXPECT_EQ(aggregate(p, "median").value.number, m);
    for (auto &x : p)
      if (x.number > m)
        x.number = m + 100;
    EXPECT_EQ(aggregate(p, "median").value.number, m);
  }
}

TEST(Aggregate, ClassProbabilitiesAveraged) {
  Prediction a = label("True"), b = label("False");
  a.class_probabilities = std::map<std::string, double> {
    { "True", 0.9 }, { "False", 0.1 } };
  b.class_probabilities = std::map<std::string, double> {
    { "True", 0.3 }, { "False", 0.7 } };
  std::vector<Prediction> p { a, b, Prediction() };
  EvalAggregate g = aggregate(p, "majority");
  ASSERT_TRUE(g.value.class_probabilities);
  EXPECT_NEAR(g.value.class_probabilities->at("True"), 0.6, 1e-15);
}

TEST(Aggregate, Custom) {
  register_aggregator("max", [](std::span<const Prediction> v) {
    Prediction out = v.front();
    for (const auto &p : v)
      out.number = std::max(out.number, p.number);
    return out;
  });
  EXPECT_TRUE(has_aggregator("max"));
  std::vector<Prediction> p { number(1), number(7), number(3) };
  EXPECT_EQ(aggregate(p, "max").value.number, 7.0);
}

TEST(Metrics, Trivial) {
  std::vector<double> v { 1, 2, 3, 4 }, r { 4, 3, 2, 1 };
  EXPECT_EQ(mae(v, v), 0.0);
  EXPECT_EQ(rmse(v, v), 0.0);
  EXPECT_DOUBLE_EQ(spearman(v, r), -1.0);
  std::vector<std::string> s { "a", "b" };
  EXPECT_EQ(accuracy(s, s), 1.0);
  std::vector<int> y { 0, 0, 1, 1 };
  EXPECT_EQ(auroc(v, y), 1.0);
  EXPECT_EQ(auprc(v, y), 1.0);

  std::vector<double> c { 1, 1, 1, 1 };
  EXPECT_THROW(spearman(c, v), DegenerateInput);
  std::vector<int> one { 1, 1, 1, 1 };
  EXPECT_THROW(auroc(v, one), DegenerateInput);
  std::vector<double> short_v { 1, 2 };
  EXPECT_THROW(mae(v, short_v), LengthMismatch);
}

TEST(Metrics, ReferenceFixtures) {
  json fx = read_json(kData + "/metric_fixtures.json");
  for (const auto &f : fx["fixtures"]) {
    auto scores = f["scores"].get<std::vector<double>>();
    auto labels = f["labels"].get<std::vector<int>>();
    auto x = f["x"].get<std::vector<double>>();
    auto y = f["y"].get<std::vector<double>>();
    EXPECT_NEAR(auroc(scores, labels), f["auroc"].get<double>(), 1e-9);
    EXPECT_NEAR(auprc(scores, labels), f["auprc"].get<double>(), 1e-9);
    EXPECT_NEAR(spearman(x, y), f["spearman"].get<double>(), 1e-9);
  }
}

TEST(Metrics, AurocMonotoneInvariance) {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> s(30), t(30);
    std::vector<int> y(30);
    for (int i = 0; i < 30; ++i) {
      s[i] = std::floor(rng.uniform01() * 10) / 10 - 0.5;
      y[i] = rng.bernoulli(0.4);
    }
    y[0] = 0;
    y[1] = 1;
    for (int i = 0; i < 30; ++i)
      t[i] = std::exp(3 * s[i]) + s[i];
    EXPECT_NEAR(auroc(s, y), auroc(t, y), 1e-12);
  }
}

TEST(Metrics, Molecular) {
  std::vector<chem::Molecule> in { chem::parse_smiles("CCCCO"),
                                   chem::parse_smiles("c1ccccc1") };
  std::vector<std::optional<chem::Molecule>> out {
    chem::parse_smiles("CCCO"), std::nullopt };
  EXPECT_DOUBLE_EQ(tanimoto_sim_mean(in, out),
                   tanimoto_sim_mean(std::span(in).first(1),
                                     std::span(out).first(1)));
  EXPECT_EQ(success_rate(in, out, lighter_than(100)), 0.5);
  double w_in = molecular_weight(in[0]), w_out = molecular_weight(*out[0]);
  EXPECT_NEAR(w_in, 74.123, 1e-3);
  EXPECT_DOUBLE_EQ(relative_improvement(in, out, molecular_weight),
                   (w_out - w_in) / w_in);

  std::vector<std::optional<std::vector<std::string>>> sets {
    std::vector<std::string> { "CCO", "C" },
    std::vector<std::string> { "C", "OCC" },
    std::vector<std::string> { "CCN" },
    std::nullopt,
  };
  EXPECT_EQ(uniqueness(sets), 0.5);
}

TaskRecord prompt_record(std::vector<std::string> templates) {
  TaskRecord r;
  r.id = "p";
  r.category = "2d_molecule";
  r.task_id = "t";
  r.prompt_templates = std::move(templates);
  r.entities["mol"] = Entity { "smiles", "OCC", EntityRole::kInput };
  r.answer = "True";
  r.answer_type = classification();
  return r;
}

TEST(Prompt, SingleTemplateNoAugmentation) {
  PromptPlan plan;
  plan.augmentation = { 0, 0, 0 };
  TaskRecord r = prompt_record({ "Is {mol} ok? {{x}}" });
  Rng rng(1);
  std::string first = assemble_prompt(r, plan, rng).text;
  EXPECT_EQ(first, "Is <smiles>OCC</smiles> ok? {x}");
  for (int i = 0; i < 20; ++i)
    EXPECT_EQ(assemble_prompt(r, plan, rng).text, first);
}

TEST(Prompt, TemplateUniformity) {
  PromptPlan plan;
  TaskRecord r = prompt_record({ "a {mol}", "b {mol}", "c {mol}", "d {mol}" });
  std::vector<double> counts(4, 0);
  for (int i = 0; i < 400; ++i) {
    Rng rng(mix_seed(99, i));
    ++counts[assemble_prompt(r, plan, rng).template_index];
  }
  double stat = 0;
  for (double c : counts)
    stat += (c - 100) * (c - 100) / 100;
  boost::math::chi_squared dist(3);
  EXPECT_GT(boost::math::cdf(boost::math::complement(dist, stat)), 0.001);
}

TEST(Prompt, FewShotAndErrors) {
  PromptPlan plan;
  plan.augmentation = { 0, 0, 0 };
  plan.few_shot = 2;
  for (const char *s : { "C", "CC", "CCC" }) {
    TaskRecord t = prompt_record({ "Q {mol}" });
    t.entities["mol"].value = s;
    plan.train_split.push_back(t);
  }
  Rng rng(5);
  std::string text = assemble_prompt(prompt_record({ "Q {mol}" }), plan, rng)
                         .text;
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 6);
  EXPECT_NE(text.find("<answer>True</answer>\n\nQ <smiles>OCC</smiles>"),
            std::string::npos);

  PromptPlan bad;
  Rng r2(1);
  EXPECT_THROW(assemble_prompt(prompt_record({ "Q {protein}" }), bad, r2),
               MissingPlaceholder);
  bad.repetitions = 0;
  EXPECT_THROW(assemble_prompt(prompt_record({ "Q {mol}" }), bad, r2),
               ConfigError);
}

TEST(Provider, Mock) {
  MockProvider mock;
  mock.add("e", { CompletionResult { "one", std::nullopt },
                  CompletionResult { "two", std::nullopt } });
  CompletionRequest req;
  req.example_id = "e";
  req.repetition = 3;
  EXPECT_EQ(mock.complete(req).text, "two");
  req.example_id = "missing";
  EXPECT_THROW(mock.complete(req), ProviderError);
}

TEST(Provider, HttpAgainstLocalServer) {
  httplib::Server server;
  json seen;
  server.Post("/v1/chat/completions",
              [&](const httplib::Request &req, httplib::Response &res) {
    seen = json::parse(req.body);
    seen["auth"] = req.get_header_value("Authorization");
    json reply = {
      { "choices", json::array({ {
        { "message", { { "role", "assistant" },
                       { "content", "<answer>True</answer>" } } },
        { "logprobs", { { "content", json::array({ {
          { "token", "<" },
          { "top_logprobs", json::array({
            { { "token", "True" }, { "logprob", -0.25 } },
            { { "token", "False" }, { "logprob", -1.5 } } }) } } }) } } },
      } }) },
    };
    res.set_content(reply.dump(), "application/json");
  });
  int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  ::setenv("CHEMGYM_TEST_KEY", "secret", 1);
  HttpProviderConfig cfg;
  cfg.base_url = "http://127.0.0.1:" + std::to_string(port) + "/v1/";
  cfg.model = "demo-model";
  cfg.api_key_env = "CHEMGYM_TEST_KEY";
  HttpProvider http(cfg);
  CompletionRequest req;
  req.prompt = "Is it?";
  req.temperature = 0.7;
  req.max_tokens = 64;
  req.want_logprobs = true;
  CompletionResult res = http.complete(req);
  server.stop();
  t.join();

  EXPECT_EQ(res.text, "<answer>True</answer>");
  ASSERT_TRUE(res.first_token_logprobs);
  EXPECT_EQ(res.first_token_logprobs->at("False"), -1.5);
  EXPECT_EQ(seen["model"], "demo-model");
  EXPECT_EQ(seen["messages"][0]["content"], "Is it?");
  EXPECT_EQ(seen["max_tokens"], 64);
  EXPECT_EQ(seen["logprobs"], true);
  EXPECT_EQ(seen["auth"], "Bearer secret");

  HttpProviderConfig dead = cfg;
  dead.base_url = "http://127.0.0.1:" + std::to_string(port) + "/v1";
  dead.timeout_seconds = 2;
  EXPECT_THROW(HttpProvider(dead).complete(req), ProviderError);
}

TEST(Harness, DemoSuiteMatchesOracle) {
  SuiteConfig suite = load_suite(kDemo + "/suite.ini");
  ASSERT_EQ(suite.benchmarks.size(), 3u);
  auto mock = MockProvider::load(suite.mock_script);
  SuiteResult result = run_suite(suite, *mock);
  json want = read_json(kData + "/demo_expected.json");
  std::size_t examples = 0;
  for (const auto &b : result.benchmarks) {
    examples += b.examples.size();
    ASSERT_TRUE(want.contains(b.name)) << b.name;
    for (const auto &[metric, value] : want[b.name].items()) {
      ASSERT_TRUE(b.metrics.at(metric)) << b.name << " " << metric;
      EXPECT_NEAR(*b.metrics.at(metric), value.get<double>(), 1e-9)
          << b.name << " " << metric;
    }
  }
  EXPECT_EQ(examples, 50u);

  RunOptions serial;
  serial.threads = 1;
  EXPECT_EQ(summary_csv(run_suite(suite, *mock, serial)),
            summary_csv(result));
}

TEST(Harness, SuiteErrors) {
  auto dir = std::filesystem::temp_directory_path() / "chemgym_suite_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "bad.ini") << "[x]\ndata = x.jsonl\nmetrics = bogus\n";
  EXPECT_THROW(load_suite((dir / "bad.ini").string()), ConfigError);
  std::ofstream(dir / "empty.ini") << "[suite]\nname = e\n";
  EXPECT_THROW(load_suite((dir / "empty.ini").string()), ConfigError);
  EXPECT_THROW(load_suite((dir / "missing.ini").string()), IoError);
}

}  // namespace
}  // namespace chemgym
