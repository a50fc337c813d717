//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chemgym/chem/selfies.h"
#include "chemgym/chem/smiles.h"
#include "chemgym/error.h"
#include "chemgym/eval/harness.h"
#include "chemgym/eval/provider.h"
#include "chemgym/hybrid_ops/ops.h"
#include "chemgym/random.h"
#include "chemgym/rewards/rewards.h"
#include "chemgym/sampler/registry.h"
#include "chemgym/task.h"
#include "chemgym/tokenizer/augment.h"
#include "chemgym/tokenizer/tokenizer.h"
#include "chemgym/tokenizer/vocabulary.h"

#ifndef CHEMGYM_DEFAULT_DATA_DIR
#define CHEMGYM_DEFAULT_DATA_DIR "data"
#endif

namespace {

using nlohmann::json;
using namespace chemgym;

// Data error tied to an input line.
struct LineError {
  std::size_t line;
  std::string code;
  std::string message;
  std::optional<std::size_t> position;
};

struct Io {
  std::string input = "-";
  std::string output = "-";
  std::ifstream file_in;
  std::ofstream file_out;

  std::istream &in() {
    if (input == "-")
      return std::cin;
    if (!file_in.is_open()) {
      file_in.open(input, std::ios::binary);
      if (!file_in)
        throw IoError("cannot open " + input);
    }
    return file_in;
  }

  std::ostream &out() {
    if (output == "-")
      return std::cout;
    if (!file_out.is_open()) {
      file_out.open(output, std::ios::binary);
      if (!file_out)
        throw IoError("cannot write " + output);
    }
    return file_out;
  }
};

// Calls fn(line, index) for each non-blank input line, with 1-based line
// numbers attached to any error.
template <class F>
void for_each_line(std::istream &in, F &&fn) {
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos)
      continue;
    try {
      fn(line, n);
    } catch (const PositionedError &e) {
      throw LineError { n, e.code(), e.what(), e.position() };
    } catch (const Error &e) {
      throw LineError { n, e.code(), e.what(), std::nullopt };
    } catch (const json::exception &e) {
      throw LineError { n, "FormatError", e.what(), std::nullopt };
    }
  }
}

json parse_line(const std::string &line) {
  return json::parse(line);
}

Vocabulary load_vocab(const std::string &path) {
  return path.empty() ? Vocabulary::with_default_text()
                      : Vocabulary::load(path);
}

std::string resolve_suite(const std::string &suite) {
  if (std::filesystem::exists(suite))
    return std::filesystem::is_directory(suite)
        ? (std::filesystem::path(suite) / "suite.ini").string()
        : suite;
  const char *env = std::getenv("CHEMGYM_DATA_DIR");
  std::filesystem::path dir = env && *env ? env : CHEMGYM_DEFAULT_DATA_DIR;
  std::filesystem::path candidate = dir / suite / "suite.ini";
  if (std::filesystem::exists(candidate))
    return candidate.string();
  throw ConfigError("unknown suite '" + suite + "'");
}

json check(const std::string &name, double value, double limit, bool below) {
  bool pass = below ? value <= limit : value >= limit;
  return { { "check", name }, { "value", value }, { "limit", limit },
           { "pass", pass } };
}

json run_opcheck(std::uint64_t seed, bool timing) {
  Rng rng(seed);
  json results = json::array();

  Matrix h = random_matrix(12, 5, 1.0, rng).cwiseAbs();
  for (int t = 0; t < h.rows(); ++t)
    h.row(t) /= h.row(t).sum();
  double err = (shortconv_forward(h, identity_shortconv(5)) - h)
                   .cwiseAbs().maxCoeff();
  results.push_back(check("shortconv_identity", err, 1e-12, true));

  Matrix w = random_matrix(4, 3, 1.0, rng);
  results.push_back(check("grad_linear",
                          grad_check(differentiable_linear(w),
                                     random_matrix(5, 4, 1.0, rng), 1e-5),
                          1e-8, true));
  ShortConvParams sc = random_shortconv(4, 3, rng);
  results.push_back(check("grad_shortconv",
                          grad_check(differentiable(sc),
                                     random_matrix(7, 4, 1.0, rng), 1e-5),
                          1e-4, true));
  GQAParams ga = random_gqa(6, 4, 2, 3, rng);
  results.push_back(check("grad_gqa",
                          grad_check(differentiable(ga),
                                     random_matrix(6, 6, 1.0, rng), 1e-5),
                          1e-4, true));

  ShortConvParams sc64 = random_shortconv(8, 3, rng);
  GQAParams ga64 = random_gqa(8, 4, 2, 4, rng);
  Matrix x = random_matrix(64, 8, 1.0, rng);
  Matrix y = x;
  y.row(40).array() += 1.0;
  double leak = std::max(
      (shortconv_forward(x, sc64) - shortconv_forward(y, sc64))
          .topRows(40).cwiseAbs().maxCoeff(),
      (gqa_forward(x, ga64) - gqa_forward(y, ga64))
          .topRows(40).cwiseAbs().maxCoeff());
  results.push_back(check("causality_L64", leak, 0.0, true));

  if (timing) {
    const std::vector<int> lengths { 256, 1024, 4096 };
    ShortConvParams tsc = random_shortconv(16, 3, rng);
    GQAParams tga = random_gqa(16, 2, 1, 8, rng);
    Matrix big = random_matrix(4096, 16, 1.0, rng);
    auto conv = time_lengths([&](int L) {
      volatile double s = shortconv_forward(big.topRows(L), tsc).sum();
      (void)s;
    }, lengths, 5);
    auto attn = time_lengths([&](int L) {
      volatile double s = gqa_forward(big.topRows(L), tga).sum();
      (void)s;
    }, lengths, 2);
    results.push_back(check("shortconv_timing_slope", loglog_slope(conv), 1.5,
                            true));
    results.push_back(check("attention_timing_slope", loglog_slope(attn), 1.5,
                            false));
  }
  return results;
}

void report(const std::string &code, const std::string &message,
            std::optional<std::size_t> line,
            std::optional<std::size_t> position, bool as_json) {
  if (as_json) {
    json e = { { "code", code }, { "message", message } };
    if (line)
      e["line"] = *line;
    if (position)
      e["position"] = *position;
    std::cerr << json { { "error", e } }.dump() << '\n';
  } else {
    std::cerr << "chemgym: " << code;
    if (line)
      std::cerr << " (line " << *line << ")";
    std::cerr << ": " << message << '\n';
  }
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app { "chemgym: chemistry gym data, rewards and evaluation" };
  app.require_subcommand(1);
  bool json_errors = false;
  app.add_flag("--json-errors", json_errors,
               "Write errors to stderr as JSON objects");
  std::uint64_t seed = 0;
  Io io;
  auto add_io = [&](CLI::App *sub) {
    sub->add_option("-i,--input", io.input, "Input file (- for stdin)");
    sub->add_option("-o,--output", io.output, "Output file (- for stdout)");
  };
  auto add_seed = [&](CLI::App *sub) {
    sub->add_option("--seed", seed, "Random seed");
  };

  // convert
  auto *convert = app.add_subcommand(
      "convert", "Convert molecules, one per line (SMILES or SELFIES)");
  std::string conv_from = "smiles", conv_to = "canonical";
  int conv_count = 1;
  convert->add_option("--from", conv_from, "Input format")
      ->check(CLI::IsMember({ "smiles", "selfies" }));
  convert->add_option("--to", conv_to, "Output form")
      ->check(CLI::IsMember({ "smiles", "canonical", "selfies", "random",
                              "random-selfies" }));
  convert->add_option("--count", conv_count,
                      "Variants per molecule for random forms")
      ->check(CLI::PositiveNumber);
  add_io(convert);
  add_seed(convert);

  // tokenize / detokenize
  std::string vocab_path;
  bool no_isolation = false;
  auto *tok = app.add_subcommand(
      "tokenize", "JSONL {\"text\"} to {\"ids\", \"tokens\"}");
  tok->add_option("--vocab", vocab_path, "Vocabulary file");
  tok->add_flag("--no-isolation", no_isolation,
                "Treat tagged spans in user and system turns as text");
  add_io(tok);
  auto *detok = app.add_subcommand("detokenize",
                                   "JSONL {\"ids\"} to {\"text\"}");
  detok->add_option("--vocab", vocab_path, "Vocabulary file");
  add_io(detok);

  // augment
  AugmentationPolicy policy;
  auto *augment = app.add_subcommand(
      "augment", "Augment JSONL task records");
  augment->add_option("--p-format-convert", policy.p_format_convert);
  augment->add_option("--p-random-traversal", policy.p_random_traversal);
  augment->add_option("--p-input-isolation", policy.p_input_isolation);
  add_io(augment);
  add_seed(augment);

  // sample
  std::string manifest;
  std::size_t sample_n = 1;
  auto *sample = app.add_subcommand(
      "sample", "Draw task records from a registry manifest");
  sample->add_option("--manifest", manifest, "Registry manifest (INI)")
      ->required();
  sample->add_option("-n,--count", sample_n, "Number of records");
  sample->add_option("-o,--output", io.output, "Output file (- for stdout)");
  add_seed(sample);

  // score
  RewardWeights weights;
  auto *score_cmd = app.add_subcommand(
      "score", "JSONL {\"task\", \"completion\"} to reward reports");
  score_cmd->add_option("--w-format", weights.format);
  score_cmd->add_option("--w-think", weights.think);
  score_cmd->add_option("--w-task", weights.task);
  add_io(score_cmd);

  // evaluate
  std::string suite_name, provider_name = "mock", mock_script, out_dir;
  HttpProviderConfig http;
  std::size_t threads = 0;
  std::optional<std::uint64_t> eval_seed;
  auto *evaluate = app.add_subcommand(
      "evaluate", "Run a benchmark suite; prints the summary CSV");
  evaluate->add_option("--suite", suite_name,
                       "Suite file, directory, or name under the data dir")
      ->required();
  evaluate->add_option("--provider", provider_name)
      ->check(CLI::IsMember({ "mock", "http" }));
  evaluate->add_option("--mock-script", mock_script,
                       "Scripted completions (default: from the suite)");
  evaluate->add_option("--base-url", http.base_url);
  evaluate->add_option("--model", http.model);
  evaluate->add_option("--api-key-env", http.api_key_env);
  evaluate->add_option("--max-in-flight", http.max_in_flight);
  evaluate->add_option("--threads", threads);
  evaluate->add_option("--out", out_dir,
                       "Directory for per-benchmark JSONL and summary.csv");
  evaluate->add_option("--seed", eval_seed, "Override the suite seed");

  // opcheck
  bool skip_timing = false;
  auto *opcheck = app.add_subcommand(
      "opcheck", "Verify the sequence operators; JSON report per check");
  opcheck->add_flag("--skip-timing", skip_timing);
  add_seed(opcheck);

  // vocab-gen
  std::string vocab_base;
  auto *vocab_gen = app.add_subcommand(
      "vocab-gen", "Write a complete vocabulary file");
  vocab_gen->add_option("--base", vocab_base,
                        "Partial vocabulary (token<TAB>id lines) to extend");
  vocab_gen->add_option("-o,--output", io.output, "Output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    if (json_errors)
      report("UsageError", e.what(), std::nullopt, std::nullopt, true);
    else
      app.exit(e);
    return 2;
  }

  try {
    if (*convert) {
      Rng rng(seed);
      std::ostream &out = io.out();
      for_each_line(io.in(), [&](const std::string &line, std::size_t) {
        chem::Molecule m = conv_from == "smiles"
            ? chem::parse_smiles(line) : chem::decode_selfies(line);
        if (conv_to == "canonical" || conv_to == "smiles") {
          out << chem::to_canonical_smiles(m) << '\n';
        } else if (conv_to == "selfies") {
          out << chem::encode_selfies(m) << '\n';
        } else {
          Rng line_rng = rng.fork(0);
          rng.next_u64();
          for (int i = 0; i < conv_count; ++i)
            out << (conv_to == "random"
                        ? chem::random_traversal_smiles(m, line_rng)
                        : chem::random_traversal_selfies(m, line_rng))
                << '\n';
        }
      });
    } else if (*tok) {
      Vocabulary vocab = load_vocab(vocab_path);
      TokenizeOptions options;
      options.isolate_inputs = !no_isolation;
      std::ostream &out = io.out();
      for_each_line(io.in(), [&](const std::string &line, std::size_t) {
        json j = parse_line(line);
        TokenSequence seq =
            tokenize(j.at("text").get<std::string>(), vocab, options);
        out << json { { "ids", seq.ids },
                      { "tokens", token_names(seq.ids, vocab) } }.dump()
            << '\n';
      });
    } else if (*detok) {
      Vocabulary vocab = load_vocab(vocab_path);
      std::ostream &out = io.out();
      for_each_line(io.in(), [&](const std::string &line, std::size_t) {
        auto ids = parse_line(line).at("ids").get<std::vector<int>>();
        out << json { { "text", detokenize(ids, vocab) } }.dump() << '\n';
      });
    } else if (*augment) {
      policy.validate();
      std::ostream &out = io.out();
      std::size_t index = 0;
      for_each_line(io.in(), [&](const std::string &line, std::size_t n) {
        TaskRecord rec = task_from_json(parse_line(line), n);
        Rng rng(mix_seed(seed, index++));
        TaskRecord aug = augment_record(rec, policy, rng);
        bool isolate = draw_input_isolation(policy, rng);
        out << json { { "record", task_to_json(aug) },
                      { "isolate_inputs", isolate } }.dump()
            << '\n';
      });
    } else if (*sample) {
      Registry reg = load_manifest(manifest);
      Rng rng(seed);
      std::ostream &out = io.out();
      for (const auto &r : sample_batch(reg, sample_n, rng))
        out << task_to_json(r).dump() << '\n';
    } else if (*score_cmd) {
      std::ostream &out = io.out();
      for_each_line(io.in(), [&](const std::string &line, std::size_t n) {
        json j = parse_line(line);
        const json &task = j.contains("task") ? j.at("task") : j.at("record");
        TaskRecord rec = task_from_json(task, n);
        Completion c =
            parse_completion_spans(j.at("completion").get<std::string>());
        out << report_to_json(score(rec, c, weights)).dump() << '\n';
      });
    } else if (*evaluate) {
      SuiteConfig suite = load_suite(resolve_suite(suite_name));
      if (eval_seed)
        suite.seed = *eval_seed;
      std::unique_ptr<CompletionProvider> provider;
      if (provider_name == "mock") {
        std::string script = mock_script.empty() ? suite.mock_script
                                                 : mock_script;
        if (script.empty())
          throw ConfigError("the mock provider needs a script");
        provider = MockProvider::load(script);
      } else {
        provider = std::make_unique<HttpProvider>(http);
      }
      RunOptions options;
      options.threads = threads;
      SuiteResult result = run_suite(suite, *provider, options);
      if (!out_dir.empty())
        write_results(result, out_dir);
      std::cout << summary_csv(result);
    } else if (*opcheck) {
      json results = run_opcheck(seed, !skip_timing);
      bool ok = true;
      for (const auto &r : results) {
        std::cout << r.dump() << '\n';
        ok = ok && r["pass"].get<bool>();
      }
      return ok ? 0 : 1;
    } else if (*vocab_gen) {
      Vocabulary vocab = vocab_base.empty() ? Vocabulary::with_default_text()
                                            : Vocabulary::load(vocab_base);
      vocab.save(io.out());
    }
    if (io.file_out.is_open()) {
      io.file_out.flush();
      if (!io.file_out)
        throw IoError("write to " + io.output + " failed");
    }
  } catch (const LineError &e) {
    report(e.code, e.message, e.line, e.position, json_errors);
    return 1;
  } catch (const PositionedError &e) {
    report(e.code(), e.what(), std::nullopt, e.position(), json_errors);
    return 1;
  } catch (const Error &e) {
    report(e.code(), e.what(), std::nullopt, std::nullopt, json_errors);
    return 1;
  } catch (const json::exception &e) {
    report("FormatError", e.what(), std::nullopt, std::nullopt, json_errors);
    return 1;
  }
  return 0;
}
