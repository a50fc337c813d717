//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemgym/eval/harness.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <boost/algorithm/string/trim.hpp>
#include <boost/property_tree/ini_parser.hpp>

#include "chemgym/chem/smiles.h"
#include "chemgym/error.h"
#include "chemgym/eval/metrics.h"
#include "chemgym/random.h"
#include "chemgym/rewards/rewards.h"
#include "chemgym/sampler/registry.h"

namespace chemgym {

using nlohmann::json;

namespace {

std::vector<std::string> split_list(const std::string &s) {
  std::vector<std::string> out;
  std::string item;
  for (char c : s + ",") {
    if (c != ',') {
      item += c;
      continue;
    }
    boost::algorithm::trim(item);
    if (!item.empty())
      out.push_back(item);
    item.clear();
  }
  return out;
}

std::string resolve(const std::filesystem::path &base, const std::string &p) {
  if (p.empty())
    return p;
  std::filesystem::path file = p;
  return (file.is_relative() ? base / file : file).string();
}

std::vector<TaskRecord> read_records(const std::string &path) {
  auto store = load_jsonl(path);
  std::vector<TaskRecord> out;
  for (std::size_t i = 0; i < store->size(); ++i)
    out.push_back(store->get(i));
  return out;
}

std::string default_rule(AnswerKind k) {
  return k == AnswerKind::kRegression ? "median" : "majority";
}

std::vector<std::string> default_metrics(AnswerKind k) {
  switch (k) {
  case AnswerKind::kClassification:
    return {"accuracy", "auroc", "auprc", "val"};
  case AnswerKind::kRegression:
    return {"mae", "rmse", "spearman", "val"};
  case AnswerKind::kGeneration:
    return {"accuracy", "val", "sim", "unique"};
  }
  return {};
}

const char *kind_name(AnswerKind k) {
  switch (k) {
  case AnswerKind::kClassification:
    return "classification";
  case AnswerKind::kRegression:
    return "regression";
  case AnswerKind::kGeneration:
    return "generation";
  }
  return "";
}

std::set<std::string> truth_molecules(const TaskRecord &rec) {
  std::set<std::string> out;
  std::vector<std::string> src = rec.answer_type.ground_truth;
  if (src.empty())
    src.push_back(rec.answer);
  for (const auto &s : src) {
    try {
      out.insert(chem::canonicalize_smiles(s));
    } catch (const Error &) { }
  }
  return out;
}

std::optional<chem::Molecule> input_molecule(const TaskRecord &rec) {
  for (const auto &[name, e] : rec.entities) {
    if (e.role != EntityRole::kInput)
      continue;
    try {
      if (auto m = entity_molecule(e))
        return m;
    } catch (const Error &) { }
  }
  return std::nullopt;
}

PropertyOracle property_oracle(const std::string &name) {
  if (name == "molecular_weight")
    return molecular_weight;
  if (name == "heavy_atom_count")
    return heavy_atom_count;
  throw ConfigError("unknown property oracle '" + name + "'");
}

template <class F>
std::optional<double> guarded(F &&f) {
  try {
    return f();
  } catch (const DegenerateInput &) {
    return std::nullopt;
  }
}

}  // namespace

SuiteConfig load_suite(const std::string &path) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(path, tree);
  } catch (const pt::ini_parser_error &e) {
    if (e.line() == 0)
      throw IoError("cannot read suite " + path);
    throw ConfigError(std::string("suite: ") + e.what());
  }
  std::filesystem::path base = std::filesystem::path(path).parent_path();
  SuiteConfig s;
  s.name = std::filesystem::path(path).stem().string();
  try {
    for (const auto &[section, body] : tree) {
      if (section == "suite") {
        s.name = body.get<std::string>("name", s.name);
        s.seed = body.get<std::uint64_t>("seed", s.seed);
        s.temperature = body.get<double>("temperature", s.temperature);
        s.max_tokens = body.get<int>("max_tokens", s.max_tokens);
        s.mock_script = resolve(base, body.get<std::string>("mock", ""));
        auto &a = s.augmentation;
        a.p_format_convert =
            body.get<double>("p_format_convert", a.p_format_convert);
        a.p_random_traversal =
            body.get<double>("p_random_traversal", a.p_random_traversal);
        a.p_input_isolation =
            body.get<double>("p_input_isolation", a.p_input_isolation);
        continue;
      }
      BenchmarkConfig b;
      b.name = section;
      b.data = resolve(base, body.get<std::string>("data"));
      b.train_data = resolve(base, body.get<std::string>("train_data", ""));
      b.repetitions = body.get<int>("repetitions", 1);
      b.few_shot = body.get<int>("few_shot", 0);
      b.aggregation = body.get<std::string>("aggregation", "");
      b.metrics = split_list(body.get<std::string>("metrics", ""));
      b.positive_label = body.get<std::string>("positive_label", "");
      b.property = body.get<std::string>("property", b.property);
      b.success_max_weight =
          body.get<double>("success_max_weight", b.success_max_weight);
      for (const auto &[key, value] : body)
        if (key.rfind("template", 0) == 0)
          b.template_pool.push_back(value.data());
      for (const auto &m : b.metrics)
        if (std::find(kMetricNames.begin(), kMetricNames.end(), m) ==
            kMetricNames.end())
          throw ConfigError("benchmark '" + b.name + "': unknown metric '" +
                            m + "'");
      if (b.repetitions < 1)
        throw ConfigError("benchmark '" + b.name +
                          "': repetitions must be at least 1");
      if (b.few_shot > 0 && b.train_data.empty())
        throw ConfigError("benchmark '" + b.name +
                          "': few_shot needs train_data");
      s.benchmarks.push_back(std::move(b));
    }
  } catch (const pt::ptree_error &e) {
    throw ConfigError(std::string("suite: ") + e.what());
  }
  s.augmentation.validate();
  if (s.benchmarks.empty())
    throw ConfigError("suite defines no benchmarks");
  return s;
}

std::map<std::string, std::optional<double>> compute_metrics(
    const BenchmarkConfig &config, const std::vector<ExampleResult> &examples) {
  std::map<std::string, std::optional<double>> out;
  if (examples.empty())
    return out;
  const AnswerType &type = examples.front().record.answer_type;
  std::vector<std::string> wanted =
      config.metrics.empty() ? default_metrics(type.kind) : config.metrics;

  for (const auto &m : wanted) {
    std::optional<double> v;
    if (m == "val") {
      std::size_t valid = 0, total = 0;
      for (const auto &e : examples) {
        valid += e.aggregate.n_valid;
        total += e.aggregate.predictions.size();
      }
      v = validity_fraction(valid, total);
    } else if (m == "accuracy") {
      std::vector<std::string> pred, truth;
      for (const auto &e : examples) {
        if (type.kind == AnswerKind::kGeneration) {
          auto t = truth_molecules(e.record);
          bool hit = !e.all_invalid && t.count(e.aggregate.value.text);
          pred.push_back(hit ? "1" : "0");
          truth.push_back("1");
        } else {
          pred.push_back(e.all_invalid ? std::string("\x01invalid")
                                       : e.aggregate.value.text);
          truth.push_back(std::string(trim_ascii(e.record.answer)));
        }
      }
      v = guarded([&] { return accuracy(pred, truth); });
    } else if (m == "mae" || m == "rmse" || m == "spearman") {
      std::vector<double> pred, truth;
      for (const auto &e : examples) {
        auto t = parse_decimal(e.record.answer);
        if (e.all_invalid || !t)
          continue;
        pred.push_back(e.aggregate.value.number);
        truth.push_back(*t);
      }
      v = guarded([&] {
        return m == "mae" ? mae(pred, truth)
            : m == "rmse" ? rmse(pred, truth) : spearman(pred, truth);
      });
    } else if (m == "auroc" || m == "auprc") {
      std::string positive = config.positive_label;
      if (positive.empty() && !type.labels.empty())
        positive = type.labels.front();
      std::vector<double> scores;
      std::vector<int> labels;
      bool complete = true;
      for (const auto &e : examples) {
        if (e.all_invalid)
          continue;
        const auto &cp = e.aggregate.value.class_probabilities;
        if (!cp) {
          complete = false;
          break;
        }
        auto it = cp->find(positive);
        scores.push_back(it == cp->end() ? 0.0 : it->second);
        labels.push_back(trim_ascii(e.record.answer) == positive);
      }
      if (complete)
        v = guarded([&] {
          return m == "auroc" ? auroc(scores, labels) : auprc(scores, labels);
        });
    } else if (m == "sim" || m == "sr" || m == "ri") {
      std::vector<chem::Molecule> in;
      std::vector<std::optional<chem::Molecule>> outm;
      for (const auto &e : examples) {
        auto mol = input_molecule(e.record);
        if (!mol)
          continue;
        in.push_back(std::move(*mol));
        if (e.all_invalid)
          outm.push_back(std::nullopt);
        else
          outm.push_back(chem::parse_smiles(e.aggregate.value.text));
      }
      v = guarded([&] {
        if (m == "sim")
          return tanimoto_sim_mean(in, outm);
        if (m == "sr")
          return success_rate(in, outm, lighter_than(config.success_max_weight));
        return relative_improvement(in, outm, property_oracle(config.property));
      });
    } else if (m == "unique") {
      std::vector<std::optional<std::vector<std::string>>> sets;
      for (const auto &e : examples) {
        if (e.all_invalid) {
          sets.push_back(std::nullopt);
          continue;
        }
        std::vector<std::string> parts;
        std::stringstream ss(e.aggregate.value.text);
        std::string part;
        while (std::getline(ss, part, '.'))
          parts.push_back(part);
        sets.push_back(std::move(parts));
      }
      v = guarded([&] { return uniqueness(sets); });
    }
    out[m] = v;
  }
  return out;
}

SuiteResult run_suite(const SuiteConfig &suite, CompletionProvider &provider,
                      const RunOptions &options) {
  SuiteResult result;
  result.name = suite.name;
  for (std::size_t b = 0; b < suite.benchmarks.size(); ++b) {
    const BenchmarkConfig &cfg = suite.benchmarks[b];
    std::vector<TaskRecord> records = read_records(cfg.data);
    if (records.empty())
      throw ConfigError("benchmark '" + cfg.name + "' has no examples");
    AnswerKind kind = records.front().answer_type.kind;
    for (const auto &r : records)
      if (r.answer_type.kind != kind)
        throw ConfigError("benchmark '" + cfg.name + "' mixes answer kinds");
    std::string rule = cfg.aggregation.empty() ? default_rule(kind)
                                               : cfg.aggregation;

    PromptPlan plan;
    plan.repetitions = cfg.repetitions;
    plan.template_pool = cfg.template_pool;
    plan.augmentation = suite.augmentation;
    plan.temperature = suite.temperature;
    plan.max_tokens = suite.max_tokens;
    plan.few_shot = cfg.few_shot;
    if (!cfg.train_data.empty())
      plan.train_split = read_records(cfg.train_data);
    plan.validate();

    const std::size_t reps = static_cast<std::size_t>(cfg.repetitions);
    const std::size_t jobs = records.size() * reps;
    std::vector<Prediction> preds(jobs);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    const std::uint64_t bench_seed = mix_seed(suite.seed, b);

    auto work = [&] {
      for (;;) {
        std::size_t j = next.fetch_add(1);
        if (j >= jobs || failed.load())
          return;
        std::size_t i = j / reps;
        int r = static_cast<int>(j % reps);
        try {
          std::uint64_t seed = mix_seed(mix_seed(bench_seed, i), r);
          Rng rng(seed);
          const TaskRecord &rec = records[i];
          AssembledPrompt prompt = assemble_prompt(rec, plan, rng);
          CompletionRequest req;
          req.prompt = prompt.text;
          req.temperature = plan.temperature;
          req.max_tokens = plan.max_tokens;
          req.want_logprobs = kind == AnswerKind::kClassification;
          req.example_id = rec.id.empty() ? std::to_string(i) : rec.id;
          req.repetition = r;
          req.seed = seed;
          CompletionResult res = provider.complete(req);
          Prediction p = parse_completion(res.text, rec.answer_type);
          if (kind == AnswerKind::kClassification && res.first_token_logprobs) {
            try {
              p.class_probabilities = class_probs_from_logprobs(
                  *res.first_token_logprobs, rec.answer_type.labels);
            } catch (const DegenerateInput &) { }
          }
          p.template_index = prompt.template_index;
          p.augmentation_seed = seed;
          preds[j] = std::move(p);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error)
            error = std::current_exception();
          failed.store(true);
          return;
        }
      }
    };

    std::size_t workers = provider.max_in_flight();
    if (options.threads > 0)
      workers = std::min(workers, options.threads);
    workers = std::max<std::size_t>(1, std::min(workers, jobs));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < workers; ++t)
      pool.emplace_back(work);
    work();
    for (auto &t : pool)
      t.join();
    if (error)
      std::rethrow_exception(error);

    BenchmarkResult br;
    br.name = cfg.name;
    br.kind = kind;
    br.repetitions = cfg.repetitions;
    for (std::size_t i = 0; i < records.size(); ++i) {
      ExampleResult er;
      er.record = records[i];
      std::span<const Prediction> mine(preds.data() + i * reps, reps);
      try {
        er.aggregate = aggregate(mine, rule);
      } catch (const AllInvalid &) {
        er.all_invalid = true;
        er.aggregate.predictions.assign(mine.begin(), mine.end());
        er.aggregate.rule = rule;
      }
      br.examples.push_back(std::move(er));
    }
    br.metrics = compute_metrics(cfg, br.examples);
    result.benchmarks.push_back(std::move(br));
  }
  return result;
}

std::string summary_csv(const SuiteResult &result) {
  std::ostringstream out;
  out << "benchmark,kind,examples,repetitions";
  for (auto m : kMetricNames)
    out << ',' << m;
  out << '\n';
  for (const auto &b : result.benchmarks) {
    out << b.name << ',' << kind_name(b.kind) << ',' << b.examples.size()
        << ',' << b.repetitions;
    for (auto m : kMetricNames) {
      out << ',';
      auto it = b.metrics.find(std::string(m));
      if (it != b.metrics.end() && it->second) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", *it->second);
        out << buf;
      }
    }
    out << '\n';
  }
  return out.str();
}

json example_to_json(const ExampleResult &r) {
  json preds = json::array();
  for (const auto &p : r.aggregate.predictions)
    preds.push_back(prediction_to_json(p));
  json j = {
    {"id", r.record.id},
    {"task_id", r.record.task_id},
    {"answer", r.record.answer},
    {"rule", r.aggregate.rule},
    {"predictions", preds},
    {"n_valid", r.aggregate.n_valid},
    {"validity", r.aggregate.validity_fraction()},
  };
  j["value"] = r.all_invalid ? json(nullptr)
                             : prediction_to_json(r.aggregate.value);
  return j;
}

void write_results(const SuiteResult &result, const std::string &dir) {
  std::filesystem::create_directories(dir);
  for (const auto &b : result.benchmarks) {
    std::string path = (std::filesystem::path(dir) / (b.name + ".jsonl"))
                           .string();
    std::ofstream out(path);
    if (!out)
      throw IoError("cannot write " + path);
    for (const auto &e : b.examples)
      out << example_to_json(e).dump() << '\n';
  }
  std::string path = (std::filesystem::path(dir) / "summary.csv").string();
  std::ofstream out(path);
  if (!out)
    throw IoError("cannot write " + path);
  out << summary_csv(result);
}

}  // namespace chemgym
