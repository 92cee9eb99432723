#include "shadowforge/server/server.hpp"

#include <atomic>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include <httplib.h>
#include <json.hpp>

#include "shadowforge/core/errors.hpp"
#include "shadowforge/server/protocol.hpp"
#include "shadowforge/zoo/checkpoint.hpp"

namespace shadowforge {

void ServerConfig::validate() const {
  if (mode != "hard" && mode != "soft")
    throw ConfigError("server mode must be \"hard\" or \"soft\", got \"" + mode + "\"");
  if (port < 0 || port > 65535) throw ConfigError("server port out of range");
}

struct MlaasServer::Impl {
  ServerConfig config;
  Network<float> net;
  httplib::Server server;
  std::thread thread;
  std::atomic<int64_t> served{0};
  std::atomic<bool> live{false};
  int bound_port = 0;
  std::mutex budget_mutex;
  std::unordered_map<std::string, int64_t> used_by_key;
  std::unordered_set<std::string> keys;

  Impl(ServerConfig cfg, Network<float> model)
      : config(std::move(cfg)), net(std::move(model)) {
    config.validate();
    keys.insert(config.api_keys.begin(), config.api_keys.end());
    install_routes();
  }

  static void reply_json(httplib::Response& res, int status, const nlohmann::json& j) {
    res.status = status;
    res.set_content(j.dump(), "application/json");
  }

  /// All-or-nothing per-key debit.
  bool try_debit(const std::string& key, int n) {
    if (config.per_key_budget < 0) return true;
    std::lock_guard lock(budget_mutex);
    int64_t& used = used_by_key[key];
    if (used + n > config.per_key_budget) return false;
    used += n;
    return true;
  }

  void refund(const std::string& key, int n) {
    if (config.per_key_budget < 0) return;
    std::lock_guard lock(budget_mutex);
    used_by_key[key] -= n;
  }

  void install_routes() {
    server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("ok", "text/plain");
    });

    server.Get("/v1/stats", [this](const httplib::Request&, httplib::Response& res) {
      reply_json(res, 200, {{"queries_served", served.load()}});
    });

    server.Post("/v1/predict", [this](const httplib::Request& req, httplib::Response& res) {
      const std::string key = req.get_header_value("X-Api-Key");
      if (!keys.empty() && !keys.count(key)) {
        reply_json(res, 401, {{"error", "unauthorized"}});
        return;
      }
      nlohmann::json body = nlohmann::json::parse(req.body, nullptr, false);
      if (body.is_discarded()) {
        reply_json(res, 400, {{"error", "request body is not valid JSON"}});
        return;
      }
      ImageBatch<float> batch;
      try {
        batch = parse_predict_request(body, net.input_shape());
      } catch (const InvalidInput& e) {
        reply_json(res, 400, {{"error", e.what()}});
        return;
      }
      if (!try_debit(key, batch.size())) {
        reply_json(res, 429, {{"error", "budget_exhausted"}});
        return;
      }
      try {
        if (config.mode == "hard") {
          nlohmann::json labels = nlohmann::json::array();
          for (int label : net.predict(batch)) labels.push_back(label);
          reply_json(res, 200, {{"labels", std::move(labels)}});
        } else {
          MatX<float> probs = softmax<float>(net.logits(batch));
          std::string out = "{\"probs\":[";
          for (Eigen::Index i = 0; i < probs.rows(); ++i) {
            if (i) out += ',';
            out += '[';
            for (Eigen::Index j = 0; j < probs.cols(); ++j) {
              if (j) out += ',';
              out += format_float9(probs(i, j));
            }
            out += ']';
          }
          out += "]}";
          res.status = 200;
          res.set_content(out, "application/json");
        }
        served.fetch_add(batch.size());
      } catch (const std::exception& e) {
        refund(key, batch.size());
        reply_json(res, 500, {{"error", e.what()}});
      }
    });
  }
};

MlaasServer::MlaasServer(ServerConfig config)
    : MlaasServer(config, load_checkpoint(config.checkpoint_path).net) {}

MlaasServer::MlaasServer(ServerConfig config, Network<float> net)
    : impl_(std::make_unique<Impl>(std::move(config), std::move(net))) {}

MlaasServer::~MlaasServer() { stop(); }

int MlaasServer::start() {
  auto& impl = *impl_;
  if (impl.live.load()) return impl.bound_port;
  if (impl.config.port == 0) {
    impl.bound_port = impl.server.bind_to_any_port(impl.config.host);
    if (impl.bound_port <= 0) throw IoError("server: failed to bind an ephemeral port");
  } else {
    if (!impl.server.bind_to_port(impl.config.host, impl.config.port))
      throw IoError("server: failed to bind " + impl.config.host + ":" +
                    std::to_string(impl.config.port));
    impl.bound_port = impl.config.port;
  }
  impl.thread = std::thread([&impl] { impl.server.listen_after_bind(); });
  impl.server.wait_until_ready();
  impl.live.store(true);
  return impl.bound_port;
}

void MlaasServer::stop() {
  auto& impl = *impl_;
  if (!impl.live.exchange(false)) return;
  impl.server.stop();
  if (impl.thread.joinable()) impl.thread.join();
}

bool MlaasServer::running() const { return impl_->live.load(); }

int64_t MlaasServer::queries_served() const { return impl_->served.load(); }

int MlaasServer::port() const { return impl_->bound_port; }

}  // namespace shadowforge
