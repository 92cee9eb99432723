#include "shadowforge/synth/backend.hpp"

#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "shadowforge/core/errors.hpp"
#include "shadowforge/core/hashing.hpp"
#include "shadowforge/core/image_io.hpp"
#include "shadowforge/synth/stub.hpp"

namespace shadowforge {

std::vector<uint8_t> StubBackend::do_generate(const GenerationRequest& req) {
  TensorShape shape{channels_, req.native_resolution, req.native_resolution};
  return encode_png(stub_generate(req.class_index, req.seed, shape));
}

struct RemoteBackend::Impl {
  std::string base_url;
  std::string token;
  SleepFn sleep;
  httplib::Client client;

  Impl(std::string url, std::string tok, SleepFn s)
      : base_url(std::move(url)),
        token(std::move(tok)),
        sleep(std::move(s)),
        client(base_url) {
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(120, 0);
  }
};

RemoteBackend::RemoteBackend(std::string base_url, std::string token, SleepFn sleeper) {
  if (base_url.empty()) throw InvalidInput("RemoteBackend: empty base URL");
  if (!sleeper)
    sleeper = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  impl_ = std::make_unique<Impl>(std::move(base_url), std::move(token), std::move(sleeper));
}

RemoteBackend::~RemoteBackend() = default;

std::unique_ptr<RemoteBackend> RemoteBackend::from_env() {
  const char* url = std::getenv("SHADOWFORGE_T2I_URL");
  if (!url || !*url)
    throw ConfigError("remote backend requested but SHADOWFORGE_T2I_URL is not set");
  const char* token = std::getenv("SHADOWFORGE_T2I_TOKEN");
  return std::make_unique<RemoteBackend>(url, token ? token : "");
}

std::vector<uint8_t> RemoteBackend::do_generate(const GenerationRequest& req) {
  nlohmann::json body = {
      {"prompt", req.prompt}, {"seed", req.seed},
      {"steps", req.inference_steps},
      {"width", req.native_resolution},
      {"height", req.native_resolution},
  };
  const std::string payload = body.dump();
  httplib::Headers headers;
  if (!impl_->token.empty())
    headers.emplace("Authorization", "Bearer " + impl_->token);

  const std::string describe =
      "txt2img(prompt=\"" + req.prompt + "\", seed=" + std::to_string(req.seed) + ")";
  constexpr int kRetries = 3;  // after the initial attempt
  std::string last_error;
  for (int attempt = 0; attempt <= kRetries; ++attempt) {
    if (attempt > 0)
      impl_->sleep(std::chrono::milliseconds(1000LL << (attempt - 1)));
    auto res = impl_->client.Post("/txt2img", headers, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "server status " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200)
      throw GenerationError(describe + " rejected with status " +
                            std::to_string(res->status));
    try {
      auto json = nlohmann::json::parse(res->body);
      return base64_decode(json.at("image_b64").get<std::string>());
    } catch (const std::exception& e) {
      throw GenerationError(describe + " returned an unusable response: " + e.what());
    }
  }
  throw GenerationError(describe + " failed after " + std::to_string(kRetries + 1) +
                        " attempts; last error: " + last_error);
}

}  // namespace shadowforge
