#include "shadowforge/server/protocol.hpp"

#include <cstdio>

#include "shadowforge/core/errors.hpp"

namespace shadowforge {

std::string format_float9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string predict_request_json(const ImageBatch<float>& batch) {
  const int n = batch.size();
  const TensorShape& s = batch.shape;
  std::string out;
  out.reserve(static_cast<size_t>(n) * s.elems() * 12 + 64);
  out += "{\"shape\":[";
  out += std::to_string(n) + "," + std::to_string(s.channels) + "," +
         std::to_string(s.height) + "," + std::to_string(s.width);
  out += "],\"data\":[";
  char buf[32];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < s.elems(); ++j) {
      if (i || j) out += ',';
      std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(batch.data(i, j)));
      out += buf;
    }
  out += "]}";
  return out;
}

ImageBatch<float> parse_predict_request(const nlohmann::json& body,
                                        const TensorShape& expected) {
  if (!body.contains("shape") || !body.contains("data"))
    throw InvalidInput("request must contain \"shape\" and \"data\"");
  const auto& shape = body["shape"];
  if (!shape.is_array() || shape.size() != 4)
    throw InvalidInput("\"shape\" must be [N,C,H,W]");
  const int64_t n = shape.at(0).get<int64_t>();
  TensorShape s{shape.at(1).get<int>(), shape.at(2).get<int>(), shape.at(3).get<int>()};
  if (n < 1) throw InvalidInput("batch must contain at least one image");
  if (!(s == expected))
    throw InvalidInput("image shape " + s.str() + " does not match served model " +
                       expected.str());
  const auto& data = body["data"];
  if (!data.is_array() ||
      static_cast<int64_t>(data.size()) != n * static_cast<int64_t>(s.elems()))
    throw InvalidInput("\"data\" must hold exactly N*C*H*W floats");
  ImageBatch<float> batch = ImageBatch<float>::zeros(s, static_cast<int>(n));
  size_t idx = 0;
  for (int i = 0; i < static_cast<int>(n); ++i)
    for (int j = 0; j < s.elems(); ++j, ++idx) {
      const auto& v = data.at(idx);
      if (!v.is_number()) throw InvalidInput("\"data\" must be numeric");
      batch.data(i, j) = static_cast<float>(v.get<double>());
    }
  return batch;
}

}  // namespace shadowforge
