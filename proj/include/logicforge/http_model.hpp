#pragma once

#include <cstdlib>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "logicforge/errors.hpp"
#include "logicforge/model_adapter.hpp"

namespace logicforge {

// Chat-completions style JSON endpoint. Auth comes from the environment
// variable named in the config; the token itself never appears in files.
struct EndpointConfig {
  std::string base_url = "http://127.0.0.1:8080";
  std::string model_name = "default";
  std::string auth_env = "LOGICFORGE_API_TOKEN";
  double timeout_seconds = 30.0;
  int max_retries = 2;
  double temperature = 0.0;
};

class HttpModel : public Model {
 public:
  explicit HttpModel(EndpointConfig config) : config_(std::move(config)) {
    if (config_.timeout_seconds <= 0) {
      throw Error(Errc::config_error, "timeout must be positive");
    }
    if (config_.max_retries < 0) {
      throw Error(Errc::config_error, "max_retries must be >= 0");
    }
    if (!config_.auth_env.empty()) {
      const char* token = std::getenv(config_.auth_env.c_str());
      if (token == nullptr || *token == '\0') {
        throw Error(Errc::auth_missing, "environment variable " + config_.auth_env + " is unset");
      }
      token_ = token;
    }
  }

  std::string name() const override { return "endpoint:" + config_.model_name; }

  ModelReply answer(const ModelRequest& request) override {
    nlohmann::json body;
    body["model"] = config_.model_name;
    body["messages"] = nlohmann::json::array({{{"role", "user"}, {"content", request.question}}});
    body["temperature"] = config_.temperature;
    const std::string payload = body.dump();

    std::string last_error = "no attempt made";
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
      httplib::Client client(config_.base_url);
      const auto secs = static_cast<time_t>(config_.timeout_seconds);
      const auto usecs =
          static_cast<time_t>((config_.timeout_seconds - static_cast<double>(secs)) * 1e6);
      client.set_connection_timeout(secs, usecs);
      client.set_read_timeout(secs, usecs);
      client.set_write_timeout(secs, usecs);
      if (!token_.empty()) client.set_bearer_token_auth(token_);

      auto res = client.Post("/v1/chat/completions", payload, "application/json");
      if (!res) {
        last_error = "transport: " + httplib::to_string(res.error());
        continue;
      }
      if (res->status != 200) {
        last_error = "http status " + std::to_string(res->status);
        continue;
      }
      try {
        const auto j = nlohmann::json::parse(res->body);
        return ModelReply::success(j.at("choices").at(0).at("message").at("content").get<std::string>());
      } catch (const std::exception& e) {
        last_error = std::string("bad response body: ") + e.what();
      }
    }
    return ModelReply::failure(last_error);
  }

 private:
  EndpointConfig config_;
  std::string token_;
};

} // namespace logicforge
