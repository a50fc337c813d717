//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemgym/eval/provider.h"

#include <cstdlib>
#include <fstream>

#include <httplib.h>
#include <json.hpp>

#include "chemgym/error.h"

namespace chemgym {

using nlohmann::json;

std::unique_ptr<MockProvider> MockProvider::load(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open mock script '" + path + "'");
  auto mock = std::make_unique<MockProvider>();
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    try {
      json j = json::parse(line);
      std::vector<CompletionResult> script;
      const json &texts = j.at("completions");
      for (std::size_t i = 0; i < texts.size(); ++i) {
        CompletionResult r;
        r.text = texts[i].get<std::string>();
        if (j.contains("logprobs") && i < j["logprobs"].size() &&
            !j["logprobs"][i].is_null())
          r.first_token_logprobs =
              j["logprobs"][i].get<std::map<std::string, double>>();
        script.push_back(std::move(r));
      }
      mock->add(j.at("example_id").get<std::string>(), std::move(script));
    } catch (const json::exception &e) {
      throw FormatError(path + ": line " + std::to_string(n) + ": " + e.what(),
                        n);
    } catch (const ProviderError &e) {
      throw FormatError(path + ": line " + std::to_string(n) + ": " + e.what(),
                        n);
    }
  }
  return mock;
}

void MockProvider::add(const std::string &example_id,
                       std::vector<CompletionResult> script) {
  if (script.empty())
    throw ProviderError("empty script for example '" + example_id + "'");
  scripts_[example_id] = std::move(script);
}

CompletionResult MockProvider::complete(const CompletionRequest &req) {
  auto it = scripts_.find(req.example_id);
  if (it == scripts_.end())
    throw ProviderError("no scripted completion for example '" +
                        req.example_id + "'");
  return it->second[static_cast<std::size_t>(req.repetition) %
                    it->second.size()];
}

HttpProvider::HttpProvider(HttpProviderConfig config)
    : config_(std::move(config)) {
  const std::string &url = config_.base_url;
  std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw ConfigError("base URL needs a scheme: '" + url + "'");
  std::size_t path_start = url.find('/', scheme_end + 3);
  scheme_host_port_ = url.substr(0, path_start);
  path_prefix_ = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!path_prefix_.empty() && path_prefix_.back() == '/')
    path_prefix_.pop_back();
  if (config_.max_in_flight == 0)
    throw ConfigError("max_in_flight must be positive");
}

CompletionResult HttpProvider::complete(const CompletionRequest &req) {
  json body = {
    {"model", config_.model},
    {"messages", json::array({{{"role", "user"}, {"content", req.prompt}}})},
    {"temperature", req.temperature},
    {"max_tokens", req.max_tokens},
    {"seed", req.seed & 0x7fffffffffffffffULL},
  };
  if (req.want_logprobs) {
    body["logprobs"] = true;
    body["top_logprobs"] = config_.top_logprobs;
  }
  httplib::Headers headers;
  if (const char *key = std::getenv(config_.api_key_env.c_str()); key && *key)
    headers.emplace("Authorization", std::string("Bearer ") + key);

  httplib::Client client(scheme_host_port_);
  client.set_read_timeout(config_.timeout_seconds, 0);
  client.set_write_timeout(config_.timeout_seconds, 0);
  auto res = client.Post(path_prefix_ + "/chat/completions", headers,
                         body.dump(), "application/json");
  if (!res)
    throw ProviderError("request failed: " + httplib::to_string(res.error()));
  if (res->status != 200)
    throw ProviderError("HTTP " + std::to_string(res->status) + ": " +
                        res->body.substr(0, 200));
  try {
    json j = json::parse(res->body);
    const json &choice = j.at("choices").at(0);
    CompletionResult out;
    const json &content = choice.at("message").at("content");
    out.text = content.is_null() ? "" : content.get<std::string>();
    if (choice.contains("logprobs") && choice["logprobs"].is_object() &&
        choice["logprobs"].contains("content") &&
        choice["logprobs"]["content"].is_array() &&
        !choice["logprobs"]["content"].empty()) {
      std::map<std::string, double> top;
      for (const auto &t : choice["logprobs"]["content"][0].at("top_logprobs"))
        top.emplace(t.at("token").get<std::string>(),
                    t.at("logprob").get<double>());
      out.first_token_logprobs = std::move(top);
    }
    return out;
  } catch (const json::exception &e) {
    throw ProviderError(std::string("malformed response: ") + e.what());
  }
}

}  // namespace chemgym
