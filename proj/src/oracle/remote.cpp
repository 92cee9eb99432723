#include "shadowforge/oracle/remote.hpp"

#include <httplib.h>
#include <json.hpp>

#include "shadowforge/server/protocol.hpp"

namespace shadowforge {

struct RemoteOracle::Impl {
  httplib::Client client;
  std::string api_key;

  Impl(const std::string& base_url, std::string key)
      : client(base_url), api_key(std::move(key)) {
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(300, 0);
  }

  nlohmann::json post_predict(const ImageBatch<float>& batch) {
    httplib::Headers headers;
    if (!api_key.empty()) headers.emplace("X-Api-Key", api_key);
    auto res = client.Post("/v1/predict", headers, predict_request_json(batch),
                           "application/json");
    if (!res)
      throw IoError("remote oracle: transport error: " + httplib::to_string(res.error()));
    if (res->status == 429) throw BudgetExhausted("remote oracle: budget_exhausted");
    if (res->status != 200)
      throw IoError("remote oracle: status " + std::to_string(res->status) + ": " +
                    res->body);
    auto json = nlohmann::json::parse(res->body, nullptr, false);
    if (json.is_discarded())
      throw IoError("remote oracle: response is not valid JSON");
    return json;
  }
};

RemoteOracle::RemoteOracle(std::string base_url, std::string api_key,
                           TensorShape input_shape, int num_classes)
    : impl_(std::make_unique<Impl>(base_url, std::move(api_key))),
      shape_(input_shape),
      classes_(num_classes) {
  if (num_classes < 2) throw InvalidInput("RemoteOracle: num_classes must be >= 2");
}

RemoteOracle::~RemoteOracle() = default;

std::vector<int> RemoteOracle::predict_hard(const ImageBatch<float>& batch) {
  auto json = impl_->post_predict(batch);
  if (!json.contains("labels"))
    throw IoError("remote oracle: response lacks \"labels\" (server in soft mode?)");
  auto labels = json["labels"].get<std::vector<int>>();
  if (static_cast<int>(labels.size()) != batch.size())
    throw IoError("remote oracle: label count mismatch");
  for (int y : labels)
    if (y < 0 || y >= classes_)
      throw IoError("remote oracle: label " + std::to_string(y) + " out of range");
  return labels;
}

MatX<float> RemoteOracle::predict_soft(const ImageBatch<float>& batch) {
  auto json = impl_->post_predict(batch);
  if (!json.contains("probs"))
    throw IoError("remote oracle: response lacks \"probs\" (server in hard mode?)");
  const auto& rows = json["probs"];
  if (static_cast<int>(rows.size()) != batch.size())
    throw IoError("remote oracle: probability row count mismatch");
  MatX<float> probs(batch.size(), classes_);
  for (int i = 0; i < batch.size(); ++i) {
    const auto& row = rows.at(i);
    if (static_cast<int>(row.size()) != classes_)
      throw IoError("remote oracle: probability row width mismatch");
    for (int j = 0; j < classes_; ++j)
      probs(i, j) = static_cast<float>(row.at(j).get<double>());
  }
  return probs;
}

}  // namespace shadowforge
