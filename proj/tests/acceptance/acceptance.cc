//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chemgym/chem/selfies.h"
#include "chemgym/chem/smiles.h"
#include "chemgym/error.h"
#include "chemgym/eval/harness.h"
#include "chemgym/eval/metrics.h"
#include "chemgym/eval/prediction.h"
#include "chemgym/eval/provider.h"
#include "chemgym/hybrid_ops/ops.h"
#include "chemgym/random.h"
#include "chemgym/rewards/rewards.h"
#include "chemgym/sampler/registry.h"
#include "chemgym/tokenizer/tokenizer.h"
#include "support/op_oracles.h"
#include "support/test_support.h"

namespace chemgym {
namespace {

using nlohmann::json;
using namespace test_support;

const std::string kData = CHEMGYM_TEST_DATA_DIR;
const std::string kDemo = CHEMGYM_DEMO_DIR;
const std::string kCli = CHEMGYM_CLI;

// Collects failures; prints the first few to stderr.
class Check {
public:
  explicit Check(std::string name): name_(std::move(name)) { }

  bool expect(bool ok, const std::string &what) {
    if (!ok) {
      if (failures_ < 10)
        std::cerr << "  " << name_ << ": " << what << '\n';
      ++failures_;
    }
    return ok;
  }

  bool near(double got, double want, double tol, const std::string &what) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << ": got " << got << ", want " << want << " (tol " << tol
        << ")";
    return expect(std::abs(got - want) <= tol, msg.str());
  }

  int failures() const { return failures_; }

private:
  std::string name_;
  int failures_ = 0;
};

std::string str(double x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

json read_json(const std::string &path) {
  std::ifstream in(path);
  return json::parse(in);
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

TaskRecord reward_record(AnswerKind kind, const std::string &answer) {
  TaskRecord r;
  r.category = "2d_molecule";
  r.task_id = "t";
  r.prompt_templates = { "?" };
  r.answer = answer;
  r.answer_type.kind = kind;
  if (kind == AnswerKind::kClassification)
    r.answer_type.labels = { "True", "False" };
  if (kind == AnswerKind::kRegression)
    r.answer_type.range = std::make_pair(0.0, 10.0);
  return r;
}

void reward_exactness(Check &c) {
  c.expect(reward_format("<think>x</think><answer>y</answer>") == 1.0,
           "format: well formed");
  c.expect(reward_format("no tags at all") == -1.0, "format: no tags");
  c.expect(reward_format("<think>a<think>b</think>") == 0.0,
           "format: unbalanced");
  const std::pair<std::size_t, double> think[] = {
    { 0, -1.0 }, { 2500, 0.0 }, { 5000, 1.0 }, { 9000, 1.0 } };
  for (auto [n, want] : think) {
    std::string s = "<think>" + std::string(n, 'x') + "</think>";
    c.expect(reward_think(parse_completion_spans(s)) == want,
             "think length " + std::to_string(n));
  }
  c.expect(reward_classification("True", "True") == 1.0, "qa True/True");
  c.expect(reward_classification("False", "True") == 0.0, "qa False/True");
  c.expect(reward_classification("True, because the ring...", "True") == -1.0,
           "qa with explanation");
  const std::pair<double, double> range { 0.0, 10.0 };
  c.expect(reward_regression("5.0", "5.0", range) == 1.0, "reg 5.0");
  c.expect(reward_regression("3.0", "5.0", range) == 1.0 - 2.0 / 10.0,
           "reg 3.0");
  c.near(reward_regression("3.14159", "5.0", range), -0.185841, 1e-12,
         "reg 3.14159");
  c.expect(reward_generation("c1ccncc1", nullptr) == 1.0,
           "generation: valid, validity only");
  c.expect(reward_generation("gibberish", nullptr) == -1.0,
           "generation: gibberish");
  std::vector<std::string> g { "CC(=O)O" };
  c.expect(reward_generation("OC(C)=O", &g) == 1.0,
           "generation: non-canonical member");
  c.expect(reward_generation("CCO", &g) == -1.0,
           "generation: valid non-member");

  int rows = 0;
  for (const auto &line : read_lines(kData + "/reward_transcripts.jsonl")) {
    json j = json::parse(line);
    RewardReport r =
        score(task_from_json(j["record"]),
              parse_completion_spans(j["completion"].get<std::string>()));
    const json &e = j["expected"];
    std::string tag = "transcript " + std::to_string(rows);
    c.near(r.r_format, e["r_format"].get<double>(), 1e-12,
           tag + " r_format");
    c.near(r.r_think, e["r_think"].get<double>(), 1e-12, tag + " r_think");
    c.near(r.r_task, e["r_task"].get<double>(), 1e-12, tag + " r_task");
    c.near(r.total, e["total"].get<double>(), 1e-12, tag + " total");
    ++rows;
  }
  c.expect(rows == 18, "transcript count " + std::to_string(rows));

  Rng rng(20260101);
  TaskRecord cls = reward_record(AnswerKind::kClassification, "True");
  TaskRecord reg = reward_record(AnswerKind::kRegression, "3.5");
  TaskRecord gen = reward_record(AnswerKind::kGeneration, "");
  TaskRecord gt = gen;
  gt.answer_type.mode = GenerationMode::kGroundTruth;
  gt.answer_type.ground_truth = { "CCO" };
  const TaskRecord *records[] = { &cls, &reg, &gen, &gt };
  for (int i = 0; i < 100000; ++i) {
    std::string text = random_completion(rng);
    const TaskRecord &rec = *records[i % 4];
    RewardReport r = score(rec, parse_completion_spans(text));
    bool ok = (r.r_format == -1 || r.r_format == 0 || r.r_format == 1) &&
              r.r_think >= -1 && r.r_think <= 1 && std::isfinite(r.r_task) &&
              r.r_task <= 1 && (&rec == &reg || r.r_task >= -1) &&
              r.total == r.r_format + r.r_think + r.r_task;
    if (!c.expect(ok, "fuzz bounds: " + text.substr(0, 80)))
      break;
  }
}

void tokenizer_golden(Check &c) {
  static const Vocabulary vocab = Vocabulary::with_default_text();
  const std::string acetic = "<smiles>CC(=O)O</smiles>";
  std::vector<std::string> want { "<smiles>", "sm_C", "sm_C", "sm_(", "sm_=",
                                  "sm_O", "sm_)", "sm_O", "</smiles>" };
  TokenSequence seq = tokenize(acetic, vocab);
  c.expect(token_names(seq.ids, vocab) == want, "acetic acid token names");
  c.expect(detokenize(seq.ids, vocab) == acetic, "acetic acid round trip");

  auto lines = read_lines(kData + "/token_corpus.txt");
  c.expect(lines.size() == 10000, "corpus has 10000 lines");
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!c.expect(detokenize(tokenize(lines[i], vocab).ids, vocab) == lines[i],
                  "corpus line " + std::to_string(i + 1)))
      break;
  }
}

void chemistry_round_trips(Check &c) {
  auto corpus = read_table(kData + "/corpus_1000.smi");
  c.expect(corpus.size() == 1000, "corpus has 1000 molecules");
  Rng rng(7);
  for (const auto &row : corpus) {
    chem::Molecule m = chem::parse_smiles(row[0]);
    const std::string canon = chem::to_canonical_smiles(m);
    c.expect(chem::canonicalize_smiles(canon) == canon,
             "canonical fixed point: " + row[0]);
    for (int k = 0; k < 20; ++k) {
      std::string r = chem::random_traversal_smiles(m, rng);
      c.expect(chem::canonicalize_smiles(r) == canon,
               "randomized: " + row[0] + " -> " + r);
    }
    std::string sf = chem::encode_selfies(m);
    c.expect(chem::to_canonical_smiles(chem::decode_selfies(sf)) == canon,
             "selfies: " + row[0] + " -> " + sf);
  }
  for (const auto &row : read_table(kData + "/selfies_reference.tsv")) {
    std::string canon = chem::canonicalize_smiles(row[0]);
    c.expect(chem::to_canonical_smiles(chem::decode_selfies(row[1])) == canon,
             "reference selfies: " + row[1]);
  }

  const auto &alphabet = chem::selfies_alphabet();
  Rng fuzz(20260311);
  int failures = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string s;
    for (int k = 0; k < 50; ++k)
      s += alphabet[fuzz.uniform_index(alphabet.size())];
    try {
      chem::parse_smiles(
          chem::to_canonical_smiles(chem::decode_selfies(s)));
    } catch (const Error &e) {
      c.expect(false, "selfies fuzz: " + s + ": " + e.what());
      ++failures;
    }
  }
  c.expect(failures == 0, std::to_string(failures) + " fuzz failures");
}

TaskRecord sampler_record(const std::string &category, const std::string &task,
                          std::size_t i) {
  TaskRecord r;
  r.id = task + "-" + std::to_string(i);
  r.category = category;
  r.task_id = task;
  r.prompt_templates = { "?" };
  r.answer = "True";
  r.answer_type.labels = { "True", "False" };
  return r;
}

void sampler(Check &c) {
  Registry reg;
  const std::size_t sizes[] = { 1, 10, 100, 1000, 100000, 1000000 };
  for (std::size_t k = 0; k < kDefaultCategories.size(); ++k) {
    std::string cat(kDefaultCategories[k]);
    for (std::size_t t = 0; t <= k; ++t) {
      std::string task = cat + "_" + std::to_string(t);
      reg.add_task(cat, task,
                   std::make_shared<GeneratedStore>(
                       sizes[k], [=](std::size_t i) {
                         return sampler_record(cat, task, i);
                       }));
    }
  }
  reg.finalize();
  Rng rng(3);
  std::vector<double> cats(6);
  std::vector<std::vector<double>> tasks(6);
  for (std::size_t k = 0; k < 6; ++k)
    tasks[k].assign(k + 1, 0);
  for (int i = 0; i < 60000; ++i) {
    Draw d = sample_draw(reg, rng);
    ++cats[d.category];
    ++tasks[d.category][d.task];
  }
  double p = chi2_p(cats);
  c.expect(p > 0.001, "category chi2 p = " + str(p));
  for (std::size_t k = 1; k < 6; ++k) {
    p = chi2_p(tasks[k]);
    c.expect(p > 0.001,
             "task chi2 p = " + str(p) + " in category " + std::to_string(k));
  }

  Rng a(11), b(11);
  c.expect(sample_batch(reg, 200, a) == sample_batch(reg, 200, b),
           "same seed reproduces the batch");
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

void aggregation_metrics(Check &c) {
  std::vector<Prediction> odd { number(1), number(3), number(2) };
  c.expect(aggregate(odd, "median").value.number == 2.0, "median of 3");
  std::vector<Prediction> even { number(1), number(2), number(3), number(4) };
  c.expect(aggregate(even, "median").value.number == 2.5, "median of 4");
  std::vector<Prediction> labels { label("A"), label("A"), label("B") };
  c.expect(aggregate(labels, "majority").value.text == "A", "majority");

  auto p = class_probs_from_logprobs({ { "A", 0.0 }, { "B", -std::log(3.0) } },
                                     { "A", "B" });
  c.near(p["A"], 0.75, 1e-15, "softmax A");
  c.near(p["B"], 0.25, 1e-15, "softmax B");
  json fx = read_json(kData + "/metric_fixtures.json");
  auto want = fx["softmax_1_0_m1"].get<std::vector<double>>();
  p = class_probs_from_logprobs({ { "x", 1.0 }, { "y", 0.0 }, { "z", -1.0 } },
                                { "x", "y", "z" });
  c.near(p["x"], want[0], 1e-15, "softmax x");
  c.near(p["y"], want[1], 1e-15, "softmax y");
  c.near(p["z"], want[2], 1e-15, "softmax z");

  int n = 0;
  for (const auto &f : fx["fixtures"]) {
    auto scores = f["scores"].get<std::vector<double>>();
    auto y = f["labels"].get<std::vector<int>>();
    auto xs = f["x"].get<std::vector<double>>();
    auto ys = f["y"].get<std::vector<double>>();
    std::string tag = "fixture " + std::to_string(n++);
    c.near(auroc(scores, y), f["auroc"].get<double>(), 1e-9, tag + " auroc");
    c.near(auprc(scores, y), f["auprc"].get<double>(), 1e-9, tag + " auprc");
    c.near(spearman(xs, ys), f["spearman"].get<double>(), 1e-9,
           tag + " spearman");
  }
  c.expect(n > 0, "metric fixtures present");

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
    c.near(auroc(t, y), auroc(s, y), 1e-12,
           "monotone invariance trial " + std::to_string(trial));
  }
}

void hybrid_ops(Check &c) {
  Rng rng(1);
  Matrix h = random_matrix(12, 5, 1.0, rng).cwiseAbs();
  for (int t = 0; t < h.rows(); ++t)
    h.row(t) /= h.row(t).sum();
  double err = (shortconv_forward(h, identity_shortconv(5, 3)) - h)
                   .cwiseAbs().maxCoeff();
  c.expect(err <= 1e-12, "identity error " + str(err));

  for (int trial = 0; trial < 50; ++trial) {
    int L = 1 + static_cast<int>(rng.uniform_index(9));
    int d = 1 + static_cast<int>(rng.uniform_index(5));
    int k = 1 + static_cast<int>(rng.uniform_index(4));
    ShortConvParams p = random_shortconv(d, k, rng);
    Matrix x = random_matrix(L, d, 1.0, rng);
    err = rel_error(shortconv_forward(x, p), shortconv_oracle(to_grid(x), p));
    c.expect(err <= 1e-12, "shortconv oracle error " + str(err));
  }
  const int configs[][2] = { { 1, 1 }, { 2, 2 }, { 4, 2 }, { 4, 1 },
                             { 3, 3 }, { 6, 2 } };
  for (int trial = 0; trial < 50; ++trial) {
    auto [nq, nkv] = configs[trial % 6];
    int L = 1 + static_cast<int>(rng.uniform_index(8));
    int d = 2 + static_cast<int>(rng.uniform_index(5));
    int hd = 1 + static_cast<int>(rng.uniform_index(4));
    GQAParams p = random_gqa(d, nq, nkv, hd, rng);
    Matrix x = random_matrix(L, d, 1.5, rng);
    err = rel_error(gqa_forward(x, p), attention_oracle(to_grid(x), p));
    c.expect(err <= 1e-12, "attention oracle error " + str(err));
  }

  for (int trial = 0; trial < 3; ++trial) {
    ShortConvParams sp = random_shortconv(4, 3, rng);
    err = grad_check(differentiable(sp), random_matrix(7, 4, 1.0, rng), 1e-5,
                     trial);
    c.expect(err <= 1e-4, "shortconv gradient error " + str(err));
    GQAParams gp = random_gqa(6, 4, 2, 3, rng);
    err = grad_check(differentiable(gp), random_matrix(6, 6, 1.0, rng), 1e-5,
                     trial);
    c.expect(err <= 1e-4, "attention gradient error " + str(err));
  }

  const int L = 64, d = 8;
  ShortConvParams sc = random_shortconv(d, 3, rng);
  GQAParams ga = random_gqa(d, 4, 2, 4, rng);
  Matrix x = random_matrix(L, d, 1.0, rng);
  Matrix base_sc = shortconv_forward(x, sc), base_ga = gqa_forward(x, ga);
  for (int t = 0; t < L; ++t) {
    Matrix y = x;
    y.row(t) += random_matrix(1, d, 3.0, rng);
    bool sc_ok = shortconv_forward(y, sc).topRows(t) == base_sc.topRows(t);
    bool ga_ok = gqa_forward(y, ga).topRows(t) == base_ga.topRows(t);
    c.expect(sc_ok && ga_ok, "causality at position " + std::to_string(t));
  }

  const std::vector<int> lengths { 256, 1024, 4096 };
  ShortConvParams tsc = random_shortconv(16, 3, rng);
  GQAParams tga = random_gqa(16, 2, 1, 8, rng);
  Matrix big = random_matrix(4096, 16, 1.0, rng);
  auto conv = time_lengths([&](int n) {
    volatile double s = shortconv_forward(big.topRows(n), tsc).sum();
    (void)s;
  }, lengths, 9);
  auto attn = time_lengths([&](int n) {
    volatile double s = gqa_forward(big.topRows(n), tga).sum();
    (void)s;
  }, lengths, 2);
  double conv_slope = loglog_slope(conv), attn_slope = loglog_slope(attn);
  std::cerr << "  shortconv slope " << conv_slope << ", attention slope "
            << attn_slope << '\n';
  c.expect(conv_slope < 1.5, "shortconv slope " + str(conv_slope));
  c.expect(attn_slope > 1.5, "attention slope " + str(attn_slope));
}

int run_command(const std::string &command, std::string &out) {
  FILE *pipe = popen(command.c_str(), "r");
  if (!pipe)
    return -1;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0)
    out.append(buf, n);
  return pclose(pipe);
}

std::vector<std::string> split_csv_line(const std::string &line) {
  std::vector<std::string> cols;
  std::stringstream in(line);
  std::string col;
  while (std::getline(in, col, ','))
    cols.push_back(col);
  if (!line.empty() && line.back() == ',')
    cols.emplace_back();
  return cols;
}

void end_to_end(Check &c) {
  namespace fs = std::filesystem;
  fs::path root = fs::temp_directory_path() / "chemgym_acceptance_e2e";
  fs::remove_all(root);
  std::string runs[2];
  for (int i = 0; i < 2; ++i) {
    fs::path dir = root / std::to_string(i);
    fs::create_directories(dir);
    std::string cmd = "'" + kCli + "' evaluate --provider mock --suite '" +
                      kDemo + "/suite.ini' --out '" + dir.string() + "'";
    std::string out;
    int rc = run_command(cmd, out);
    c.expect(rc == 0, "evaluate exit status " + std::to_string(rc));
    c.expect(read_file((dir / "summary.csv").string()) == out,
             "summary.csv matches stdout");
    runs[i] = out;
    for (const char *b : { "bbbp", "logp", "molopt" }) {
      std::string name = std::string(b) + ".jsonl";
      if (i == 1)
        c.expect(read_file((root / "0" / name).string()) ==
                     read_file((dir / name).string()),
                 name + " is deterministic");
    }
  }
  c.expect(!runs[0].empty() && runs[0] == runs[1],
           "summary is deterministic");

  std::stringstream csv(runs[0]);
  std::string line;
  std::getline(csv, line);
  std::vector<std::string> header = split_csv_line(line);
  std::map<std::string, std::map<std::string, std::string>> table;
  std::size_t examples = 0;
  while (std::getline(csv, line)) {
    auto cols = split_csv_line(line);
    for (std::size_t k = 1; k < cols.size() && k < header.size(); ++k)
      table[cols[0]][header[k]] = cols[k];
    examples += std::stoul(table[cols[0]]["examples"]);
  }
  c.expect(examples == 50, "examples " + std::to_string(examples));

  // The CSV prints six decimals; the in-process run is checked tightly.
  json want = read_json(kData + "/demo_expected.json");
  SuiteConfig suite = load_suite(kDemo + "/suite.ini");
  auto mock = MockProvider::load(suite.mock_script);
  SuiteResult result = run_suite(suite, *mock);
  for (const auto &[bench, metrics] : want.items()) {
    const BenchmarkResult *got = nullptr;
    for (const auto &b : result.benchmarks)
      if (b.name == bench)
        got = &b;
    if (!c.expect(got != nullptr, "benchmark " + bench))
      continue;
    for (const auto &[metric, value] : metrics.items()) {
      std::string tag = bench + " " + metric;
      const std::string &cell = table[bench][metric];
      if (c.expect(!cell.empty(), tag + " in summary"))
        c.near(std::stod(cell), value.get<double>(), 5e-7, tag + " (csv)");
      auto it = got->metrics.find(metric);
      if (c.expect(it != got->metrics.end() && it->second, tag + " computed"))
        c.near(*it->second, value.get<double>(), 1e-9, tag);
    }
  }
  fs::remove_all(root);
}

struct Criterion {
  std::string name;
  double limit_seconds;
  std::function<void(Check &)> run;
};

const std::vector<Criterion> &criteria() {
  static const std::vector<Criterion> all {
    { "reward_exactness", 10, reward_exactness },
    { "tokenizer_golden", 30, tokenizer_golden },
    { "chemistry_round_trips", 120, chemistry_round_trips },
    { "sampler", 30, sampler },
    { "aggregation_metrics", 30, aggregation_metrics },
    { "hybrid_ops", 180, hybrid_ops },
    { "end_to_end", 60, end_to_end },
  };
  return all;
}

bool run(const Criterion &criterion) {
  Check check(criterion.name);
  auto start = std::chrono::steady_clock::now();
  try {
    criterion.run(check);
  } catch (const std::exception &e) {
    check.expect(false, std::string("exception: ") + e.what());
  }
  double seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start).count();
  check.expect(seconds <= criterion.limit_seconds,
               "exceeded " + str(criterion.limit_seconds) + " s");
  bool ok = check.failures() == 0;
  std::printf("%s %s (%.2f s)\n", ok ? "PASS" : "FAIL",
              criterion.name.c_str(), seconds);
  std::fflush(stdout);
  return ok;
}

}  // namespace
}  // namespace chemgym

int main(int argc, char **argv) {
  CLI::App app("chemgym acceptance checks");
  std::string only;
  bool list = false;
  app.add_option("--criterion", only, "Run a single criterion");
  app.add_flag("--list", list, "List criterion names");
  CLI11_PARSE(app, argc, argv);

  bool ok = true, found = false;
  for (const auto &c : chemgym::criteria()) {
    if (list) {
      std::printf("%s\n", c.name.c_str());
      continue;
    }
    if (!only.empty() && c.name != only)
      continue;
    found = true;
    ok = chemgym::run(c) && ok;
  }
  if (list)
    return 0;
  if (!found) {
    std::fprintf(stderr, "unknown criterion '%s'\n", only.c_str());
    return 2;
  }
  return ok ? 0 : 1;
}
