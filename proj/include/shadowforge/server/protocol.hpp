#pragma once

#include <string>

#include <json.hpp>

#include "shadowforge/core/types.hpp"

namespace shadowforge {

/// Prediction wire format: floats travel as decimal strings with 9
/// significant digits, which round-trips float32 exactly.
std::string format_float9(double v);

/// {"shape":[N,C,H,W],"data":[...]} with row-major CHW data in [0,1].
std::string predict_request_json(const ImageBatch<float>& batch);

/// Validates and decodes a predict request against the served input shape.
/// Throws InvalidInput with a client-presentable message.
ImageBatch<float> parse_predict_request(const nlohmann::json& body,
                                        const TensorShape& expected);

}  // namespace shadowforge
