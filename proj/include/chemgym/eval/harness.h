//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMGYM_EVAL_HARNESS_H_
#define CHEMGYM_EVAL_HARNESS_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "chemgym/eval/prediction.h"
#include "chemgym/eval/prompt.h"
#include "chemgym/eval/provider.h"
#include "chemgym/task.h"

namespace chemgym {

// Summary columns, in CSV order.
inline constexpr std::array<std::string_view, 11> kMetricNames {
  "accuracy", "mae", "rmse", "spearman", "auroc", "auprc", "val", "sim", "sr",
  "ri", "unique",
};

struct BenchmarkConfig {
  std::string name;
  std::string data;         // JSONL of task records
  std::string train_data;   // JSONL pool for few-shot examples
  int repetitions = 1;
  int few_shot = 0;
  std::string aggregation;  // defaults by answer kind
  std::vector<std::string> metrics;  // defaults by answer kind
  std::vector<std::string> template_pool;
  std::string positive_label;        // defaults to the first label
  std::string property = "molecular_weight";
  double success_max_weight = 500.0;
};

/// Benchmark suite, read from an INI file:
///
///   [suite]
///   name = demo
///   seed = 7
///   temperature = 0
///   max_tokens = 512
///   mock = mock.jsonl
///   p_format_convert = 0
///   p_random_traversal = 0
///
///   [bbbp]
///   data = bbbp.jsonl
///   repetitions = 3
///   aggregation = majority
///   metrics = accuracy, auroc, auprc, val
///
/// Every section other than [suite] is a benchmark. Relative paths are
/// resolved against the suite file. Throws ConfigError or IoError.
struct SuiteConfig {
  std::string name;
  std::uint64_t seed = 0;
  double temperature = 0.0;
  int max_tokens = 1024;
  AugmentationPolicy augmentation;
  std::string mock_script;
  std::vector<BenchmarkConfig> benchmarks;
};

SuiteConfig load_suite(const std::string &path);

struct ExampleResult {
  TaskRecord record;
  EvalAggregate aggregate;
  bool all_invalid = false;
};

struct BenchmarkResult {
  std::string name;
  AnswerKind kind = AnswerKind::kClassification;
  int repetitions = 1;
  std::vector<ExampleResult> examples;
  std::map<std::string, std::optional<double>> metrics;  // nullopt: undefined
};

struct SuiteResult {
  std::string name;
  std::vector<BenchmarkResult> benchmarks;
};

struct RunOptions {
  std::size_t threads = 0;  // 0: provider limit
};

/// Runs every repetition of every example, aggregates per example and
/// computes the selected metrics. Repetition r of example i in benchmark b
/// uses seed mix_seed(mix_seed(mix_seed(seed, b), i), r) for template choice
/// and augmentation, so results do not depend on scheduling. At most
/// min(threads, provider.max_in_flight()) requests are in flight.
SuiteResult run_suite(const SuiteConfig &suite, CompletionProvider &provider,
                      const RunOptions &options = {});

// Metrics for already aggregated examples.
std::map<std::string, std::optional<double>> compute_metrics(
    const BenchmarkConfig &config, const std::vector<ExampleResult> &examples);

std::string summary_csv(const SuiteResult &result);
nlohmann::json example_to_json(const ExampleResult &r);

// Writes <benchmark>.jsonl per benchmark and summary.csv into `dir`.
void write_results(const SuiteResult &result, const std::string &dir);

}  // namespace chemgym

#endif  // CHEMGYM_EVAL_HARNESS_H_
