#include "shadowforge/data/dataset.hpp"

#include <algorithm>

#include "shadowforge/core/errors.hpp"
#include "shadowforge/core/hashing.hpp"
#include "shadowforge/core/image_io.hpp"
#include "shadowforge/synth/resize.hpp"

namespace shadowforge {

LabeledSetF make_pattern_dataset(int num_classes, int per_class,
                                 const PatternParams& params, const TensorShape& shape,
                                 uint64_t seed) {
  if (num_classes < 1) throw InvalidInput("make_pattern_dataset: num_classes must be >= 1");
  if (per_class < 1) throw InvalidInput("make_pattern_dataset: per_class must be >= 1");
  const int total = num_classes * per_class;
  LabeledSetF set;
  set.images = ImageBatchF::zeros(shape, total);
  set.labels.resize(total);
  set.num_classes = num_classes;
  const uint64_t stream = derive_seed(seed, "pattern-dataset");
  for (int i = 0; i < total; ++i) {
    const int cls = i / per_class;
    Rng rng(derive_seed(stream, static_cast<uint64_t>(i)));
    set.images.set_image(i, render_pattern(cls, params, shape, rng));
    set.labels[i] = cls;
  }
  return set;
}

LabeledSetF load_dataset(const SyntheticManifest& m,
                         const std::filesystem::path& base_dir, bool verify_hashes) {
  if (m.entries.empty()) throw InvalidInput("load_dataset: empty manifest");
  LabeledSetF set;
  set.images = ImageBatchF::zeros(m.target_shape, m.size());
  set.labels.resize(m.entries.size());
  int max_class = 0;
  for (size_t i = 0; i < m.entries.size(); ++i) {
    const auto& e = m.entries[i];
    const auto path = base_dir / e.image_path;
    auto bytes = read_file(path);
    if (verify_hashes) {
      auto digest = sha256_hex(std::span<const uint8_t>(bytes.data(), bytes.size()));
      if (digest != e.sha256)
        throw IoError("load_dataset: hash mismatch for " + path.string());
    }
    auto image = decode_png(std::span<const uint8_t>(bytes.data(), bytes.size()));
    if (image.shape.channels != m.target_shape.channels)
      throw InvalidInput("load_dataset: " + path.string() + " has " +
                         std::to_string(image.shape.channels) +
                         " channels, manifest expects " +
                         std::to_string(m.target_shape.channels));
    set.images.set_image(static_cast<int>(i), resize_area(image, m.target_shape));
    set.labels[i] = e.class_index;
    max_class = std::max(max_class, e.class_index);
  }
  set.num_classes = max_class + 1;
  return set;
}

}  // namespace shadowforge
