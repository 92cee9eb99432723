#include "shadowforge/zoo/checkpoint.hpp"

#include "shadowforge/core/blob_io.hpp"

namespace shadowforge {

namespace {

nlohmann::json spec_to_json(const ClassifierSpec& s) {
  return {{"arch_id", s.arch_id},
          {"num_classes", s.num_classes},
          {"input_shape", {s.input_shape.channels, s.input_shape.height, s.input_shape.width}},
          {"seed", s.seed}};
}

ClassifierSpec spec_from_json(const nlohmann::json& j) {
  ClassifierSpec s;
  s.arch_id = j.at("arch_id").get<std::string>();
  s.num_classes = j.at("num_classes").get<int>();
  auto shape = j.at("input_shape");
  s.input_shape = {shape.at(0).get<int>(), shape.at(1).get<int>(), shape.at(2).get<int>()};
  s.seed = j.at("seed").get<uint64_t>();
  return s;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Network<float>& net,
                     const ClassifierSpec& spec, const CheckpointMeta& meta) {
  auto params = net.param_tensors();
  auto state = net.state_tensors();
  std::vector<int64_t> sizes;
  std::vector<float> payload;
  int64_t total = 0;
  for (const auto* t : params) total += t->size();
  for (const auto* t : state) total += t->size();
  payload.reserve(total);
  for (const auto* t : params) {
    sizes.push_back(t->size());
    payload.insert(payload.end(), t->data(), t->data() + t->size());
  }
  for (const auto* t : state) {
    sizes.push_back(t->size());
    payload.insert(payload.end(), t->data(), t->data() + t->size());
  }
  nlohmann::json header = {{"kind", "classifier-checkpoint"},
                           {"schema_version", 1},
                           {"spec", spec_to_json(spec)},
                           {"meta",
                            {{"epochs", meta.epochs},
                             {"final_lr", meta.final_lr},
                             {"dataset_id", meta.dataset_id},
                             {"seed", meta.seed}}},
                           {"param_tensors", static_cast<int64_t>(params.size())},
                           {"state_tensors", static_cast<int64_t>(state.size())},
                           {"tensor_sizes", sizes}};
  save_blob(path, std::move(header), payload);
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path) {
  Blob blob = load_blob(path);
  const auto& h = blob.header;
  try {
    if (h.at("kind").get<std::string>() != "classifier-checkpoint" ||
        h.at("schema_version").get<int>() != 1)
      throw CheckpointError(path.string() + ": not a classifier checkpoint");

    LoadedCheckpoint out;
    out.spec = spec_from_json(h.at("spec"));
    out.meta.epochs = h.at("meta").at("epochs").get<int>();
    out.meta.final_lr = h.at("meta").at("final_lr").get<double>();
    out.meta.dataset_id = h.at("meta").at("dataset_id").get<std::string>();
    out.meta.seed = h.at("meta").at("seed").get<uint64_t>();
    out.net = build_classifier<float>(out.spec);

    auto params = out.net.param_tensors();
    auto state = out.net.state_tensors();
    std::vector<MatX<float>*> tensors(params.begin(), params.end());
    tensors.insert(tensors.end(), state.begin(), state.end());
    const auto sizes = h.at("tensor_sizes").get<std::vector<int64_t>>();
    if (sizes.size() != tensors.size())
      throw CheckpointError(path.string() + ": tensor count mismatch");
    size_t offset = 0;
    for (size_t i = 0; i < tensors.size(); ++i) {
      if (sizes[i] != tensors[i]->size())
        throw CheckpointError(path.string() + ": tensor " + std::to_string(i) +
                              " size mismatch");
      if (offset + static_cast<size_t>(sizes[i]) > blob.payload.size())
        throw CheckpointError(path.string() + ": payload shorter than tensor table");
      std::copy(blob.payload.begin() + offset, blob.payload.begin() + offset + sizes[i],
                tensors[i]->data());
      offset += static_cast<size_t>(sizes[i]);
    }
    if (offset != blob.payload.size())
      throw CheckpointError(path.string() + ": payload longer than tensor table");
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(path.string() + ": malformed header: " + e.what());
  }
}

}  // namespace shadowforge
