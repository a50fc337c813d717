//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMGYM_EVAL_PROVIDER_H_
#define CHEMGYM_EVAL_PROVIDER_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace chemgym {

struct CompletionRequest {
  std::string prompt;
  double temperature = 0.0;
  int max_tokens = 1024;
  bool want_logprobs = false;
  std::string example_id;
  int repetition = 0;
  std::uint64_t seed = 0;
};

struct CompletionResult {
  std::string text;
  // Top logprobs of the first generated token.
  std::optional<std::map<std::string, double>> first_token_logprobs;
};

// Prompt in, raw text out. Implementations must be callable from several
// threads at once, up to max_in_flight() concurrent calls.
class CompletionProvider {
public:
  virtual ~CompletionProvider() = default;
  virtual CompletionResult complete(const CompletionRequest &req) = 0;
  virtual std::size_t max_in_flight() const = 0;
};

/// Replays scripted completions. Script lines are JSON objects:
///   {"example_id": "...", "completions": ["...", ...],
///    "logprobs": [{"True": -0.1, "False": -2.3}, ...]}   (optional)
/// Repetition r of an example gets completions[r % n] and the logprobs at the
/// same index. Unknown example ids throw ProviderError.
class MockProvider : public CompletionProvider {
public:
  explicit MockProvider(std::size_t max_in_flight = 4)
      : max_in_flight_(max_in_flight) { }

  static std::unique_ptr<MockProvider> load(const std::string &path);

  void add(const std::string &example_id, std::vector<CompletionResult> script);
  CompletionResult complete(const CompletionRequest &req) override;
  std::size_t max_in_flight() const override { return max_in_flight_; }

private:
  std::map<std::string, std::vector<CompletionResult>> scripts_;
  std::size_t max_in_flight_;
};

struct HttpProviderConfig {
  std::string base_url = "http://localhost:8000/v1";
  std::string model;
  std::string api_key_env = "CHEMGYM_API_KEY";
  int top_logprobs = 20;
  int timeout_seconds = 120;
  std::size_t max_in_flight = 8;
};

/// Client for OpenAI-compatible chat-completion endpoints.
///
/// POST {base_url}/chat/completions with
///   {"model", "messages": [{"role": "user", "content": prompt}],
///    "temperature", "max_tokens", "seed",
///    "logprobs": true, "top_logprobs": k}        (when logprobs are wanted)
/// and reads choices[0].message.content and
/// choices[0].logprobs.content[0].top_logprobs[*].{token, logprob}.
/// The bearer token is read from the environment variable named by
/// api_key_env; no Authorization header is sent when it is unset.
/// Transport and protocol failures throw ProviderError.
class HttpProvider : public CompletionProvider {
public:
  explicit HttpProvider(HttpProviderConfig config);

  CompletionResult complete(const CompletionRequest &req) override;
  std::size_t max_in_flight() const override { return config_.max_in_flight; }

private:
  HttpProviderConfig config_;
  std::string scheme_host_port_;
  std::string path_prefix_;
};

}  // namespace chemgym

#endif  // CHEMGYM_EVAL_PROVIDER_H_
