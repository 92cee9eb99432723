#include "shadowforge/config/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "shadowforge/core/errors.hpp"

namespace shadowforge {
namespace {

/// Tracks which keys of a JSON object were consumed; finish() rejects strays.
class StrictView {
 public:
  StrictView(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object())
      throw ConfigError("config: \"" + path_ + "\" must be an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <typename T>
  T get(const std::string& key, T fallback) {
    used_.insert(key);
    if (!j_.contains(key)) return fallback;
    try {
      return j_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("config: bad value type for \"" + dotted(key) + "\"");
    }
  }

  /// Nested object; nullptr when absent.
  const nlohmann::json* object(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) return nullptr;
    const auto& v = j_.at(key);
    if (!v.is_object())
      throw ConfigError("config: \"" + dotted(key) + "\" must be an object");
    return &v;
  }

  /// Marks the key consumed and exposes the raw value (any type).
  const nlohmann::json* raw(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) return nullptr;
    return &j_.at(key);
  }

  const nlohmann::json* array(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) return nullptr;
    const auto& v = j_.at(key);
    if (!v.is_array())
      throw ConfigError("config: \"" + dotted(key) + "\" must be an array");
    return &v;
  }

  std::string dotted(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void finish() const {
    for (const auto& item : j_.items())
      if (!used_.count(item.key()))
        throw ConfigError("config: unknown key \"" + dotted(item.key()) + "\"");
  }

 private:
  const nlohmann::json& j_;
  std::string path_;
  std::set<std::string> used_;
};

TensorShape parse_shape(const nlohmann::json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3)
    throw ConfigError("config: \"" + path + "\" must be [channels, height, width]");
  TensorShape s;
  try {
    s.channels = v.at(0).get<int>();
    s.height = v.at(1).get<int>();
    s.width = v.at(2).get<int>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config: \"" + path + "\" must hold integers");
  }
  if (s.channels < 1 || s.height < 1 || s.width < 1)
    throw ConfigError("config: \"" + path + "\" dimensions must be positive");
  return s;
}

TrainSchedule parse_schedule(const nlohmann::json* j, const std::string& path,
                             TrainSchedule defaults) {
  TrainSchedule s = defaults;
  if (!j) return s;
  StrictView v(*j, path);
  s.epochs = v.get<int>("epochs", s.epochs);
  s.batch_size = v.get<int>("batch_size", s.batch_size);
  s.initial_lr = v.get<double>("initial_lr", s.initial_lr);
  s.momentum = v.get<double>("momentum", s.momentum);
  s.weight_decay = v.get<double>("weight_decay", s.weight_decay);
  s.anchor_decay = v.get<double>("anchor_decay", s.anchor_decay);
  s.label_smoothing = v.get<double>("label_smoothing", s.label_smoothing);
  s.augment_hflip = v.get<bool>("augment_hflip", s.augment_hflip);
  v.finish();
  try {
    s.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError("config: \"" + path + "\": " + e.what());
  }
  return s;
}

PatternParams parse_pattern(const nlohmann::json* j, const std::string& path) {
  PatternParams p;
  if (!j) return p;
  StrictView v(*j, path);
  p.angle_offset = v.get<double>("angle_offset", p.angle_offset);
  p.freq_offset = v.get<double>("freq_offset", p.freq_offset);
  p.amplitude = v.get<double>("amplitude", p.amplitude);
  p.noise_sigma = v.get<double>("noise_sigma", p.noise_sigma);
  p.phase_jitter = v.get<double>("phase_jitter", p.phase_jitter);
  p.angle_jitter = v.get<double>("angle_jitter", p.angle_jitter);
  p.mix = v.get<double>("mix", p.mix);
  v.finish();
  return p;
}

DatasetConfig parse_dataset(const nlohmann::json* j) {
  DatasetConfig d;
  if (!j) return d;
  StrictView v(*j, "dataset");
  d.kind = v.get<std::string>("kind", d.kind);
  if (d.kind != "procedural" && d.kind != "manifest")
    throw ConfigError("config: dataset.kind must be \"procedural\" or \"manifest\"");
  d.id = v.get<std::string>("id", d.id);
  d.num_classes = v.get<int>("num_classes", d.num_classes);
  if (d.num_classes < 2) throw ConfigError("config: dataset.num_classes must be >= 2");
  if (const auto* sh = v.raw("shape")) d.shape = parse_shape(*sh, "dataset.shape");
  d.train_per_class = v.get<int>("train_per_class", d.train_per_class);
  d.test_per_class = v.get<int>("test_per_class", d.test_per_class);
  if (d.train_per_class < 1 || d.test_per_class < 1)
    throw ConfigError("config: dataset per-class counts must be positive");
  d.pattern = parse_pattern(v.object("pattern"), "dataset.pattern");
  d.train_manifest = v.get<std::string>("train_manifest", d.train_manifest);
  d.test_manifest = v.get<std::string>("test_manifest", d.test_manifest);
  if (d.kind == "manifest" && (d.train_manifest.empty() || d.test_manifest.empty()))
    throw ConfigError("config: dataset.kind \"manifest\" requires train_manifest and test_manifest");
  v.finish();
  return d;
}

SyntheticConfig parse_synthetic(const nlohmann::json* j) {
  SyntheticConfig s;
  if (!j) return s;
  StrictView v(*j, "synthetic");
  s.backend = v.get<std::string>("backend", s.backend);
  if (s.backend != "stub" && s.backend != "remote")
    throw ConfigError("config: synthetic.backend must be \"stub\" or \"remote\"");
  s.per_class = v.get<int>("per_class", s.per_class);
  if (s.per_class < 1) throw ConfigError("config: synthetic.per_class must be positive");
  s.inference_steps = v.get<int>("inference_steps", s.inference_steps);
  s.native_resolution = v.get<int>("native_resolution", s.native_resolution);
  s.workers = v.get<int>("workers", s.workers);
  if (s.workers < 1) throw ConfigError("config: synthetic.workers must be positive");
  s.cache_dir = v.get<std::string>("cache_dir", s.cache_dir);
  v.finish();
  return s;
}

TargetConfig parse_target(const nlohmann::json* j) {
  TargetConfig t;
  t.schedule.epochs = 15;
  if (!j) return t;
  StrictView v(*j, "target");
  t.arch = v.get<std::string>("arch", t.arch);
  t.schedule = parse_schedule(v.object("schedule"), "target.schedule", t.schedule);
  t.checkpoint = v.get<std::string>("checkpoint", t.checkpoint);
  t.server_url = v.get<std::string>("server_url", t.server_url);
  t.api_key = v.get<std::string>("api_key", t.api_key);
  t.serve_mode = v.get<std::string>("serve_mode", t.serve_mode);
  if (t.serve_mode != "hard" && t.serve_mode != "soft")
    throw ConfigError("config: target.serve_mode must be \"hard\" or \"soft\"");
  t.serve_budget = v.get<std::int64_t>("serve_budget", t.serve_budget);
  v.finish();
  return t;
}

SubstituteConfig parse_substitute(const nlohmann::json* j) {
  SubstituteConfig s;
  s.pretrain.epochs = 10;
  s.distill.epochs = 30;
  s.distill.initial_lr = 0.01;  // fine-tuning step size; pretraining keeps 0.1
  s.distill.batch_size = 64;
  if (!j) return s;
  StrictView v(*j, "substitute");
  s.arch = v.get<std::string>("arch", s.arch);
  s.pretrain = parse_schedule(v.object("pretrain"), "substitute.pretrain", s.pretrain);
  s.distill = parse_schedule(v.object("distill"), "substitute.distill", s.distill);
  v.finish();
  return s;
}

AttackSpec parse_attack(const nlohmann::json& j, const std::string& path) {
  AttackSpec a;
  StrictView v(j, path);
  a.method = parse_attack_method(v.get<std::string>("method", "fgsm"));
  a.epsilon = v.get<double>("epsilon", a.epsilon);
  a.alpha = v.get<double>("alpha", a.alpha);
  a.steps = v.get<int>("steps", a.steps);
  a.targeted = v.get<bool>("targeted", a.targeted);
  const std::string rule = v.get<std::string>("target_rule", "next-class");
  if (rule == "next-class") {
    a.target_rule = TargetRule::NextClass;
  } else if (rule == "fixed-class") {
    a.target_rule = TargetRule::FixedClass;
  } else {
    throw ConfigError("config: \"" + path + ".target_rule\" must be \"next-class\" or \"fixed-class\"");
  }
  a.target_class = v.get<int>("target_class", a.target_class);
  a.random_start = v.get<bool>("random_start", a.random_start);
  v.finish();
  try {
    a.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError("config: \"" + path + "\": " + e.what());
  }
  return a;
}

EvalConfig parse_eval(const nlohmann::json* j) {
  EvalConfig e;
  if (!j) return e;
  StrictView v(*j, "eval");
  e.attack_sample_count = v.get<int>("attack_sample_count", e.attack_sample_count);
  if (e.attack_sample_count < 1)
    throw ConfigError("config: eval.attack_sample_count must be positive");
  v.finish();
  return e;
}

nlohmann::json schedule_to_json(const TrainSchedule& s) {
  return {{"epochs", s.epochs},
          {"batch_size", s.batch_size},
          {"initial_lr", s.initial_lr},
          {"momentum", s.momentum},
          {"weight_decay", s.weight_decay},
          {"anchor_decay", s.anchor_decay},
          {"label_smoothing", s.label_smoothing},
          {"augment_hflip", s.augment_hflip}};
}

nlohmann::json attack_to_json(const AttackSpec& a) {
  return {{"method", attack_method_name(a.method)},
          {"epsilon", a.epsilon},
          {"alpha", a.alpha},
          {"steps", a.steps},
          {"targeted", a.targeted},
          {"target_rule", a.target_rule == TargetRule::NextClass ? "next-class" : "fixed-class"},
          {"target_class", a.target_class},
          {"random_start", a.random_start}};
}

}  // namespace

ExperimentConfig parse_config(const nlohmann::json& j) {
  ExperimentConfig c;
  StrictView v(j, "");
  c.schema_version = v.get<int>("schema_version", 1);
  if (c.schema_version != 1)
    throw ConfigError("config: unsupported schema_version " + std::to_string(c.schema_version));
  c.run_id = v.get<std::string>("run_id", c.run_id);
  if (c.run_id.empty()) throw ConfigError("config: run_id must be nonempty");
  c.seed = v.get<std::uint64_t>("seed", c.seed);
  c.output_dir = v.get<std::string>("output_dir", c.output_dir);
  if (c.output_dir.empty()) throw ConfigError("config: output_dir must be nonempty");
  c.budget = v.get<std::int64_t>("budget", c.budget);
  if (c.budget < 0) throw ConfigError("config: budget must be >= 0");
  c.dataset = parse_dataset(v.object("dataset"));
  c.synthetic = parse_synthetic(v.object("synthetic"));
  c.target = parse_target(v.object("target"));
  c.substitute = parse_substitute(v.object("substitute"));
  if (const auto* arr = v.array("attacks")) {
    c.attacks.clear();
    for (std::size_t i = 0; i < arr->size(); ++i)
      c.attacks.push_back(parse_attack(arr->at(i), "attacks." + std::to_string(i)));
  }
  c.eval = parse_eval(v.object("eval"));
  if (const auto* arr = v.array("sweep_budgets")) {
    c.sweep_budgets.clear();
    for (const auto& b : *arr) {
      if (!b.is_number_integer() || b.get<std::int64_t>() < 0)
        throw ConfigError("config: sweep_budgets must hold non-negative integers");
      c.sweep_budgets.push_back(b.get<int>());
    }
  }
  if (const auto* arr = v.array("sweep_seeds")) {
    c.sweep_seeds.clear();
    for (const auto& s : *arr) {
      if (!s.is_number_unsigned() && !s.is_number_integer())
        throw ConfigError("config: sweep_seeds must hold integers");
      c.sweep_seeds.push_back(s.get<std::uint64_t>());
    }
  }
  v.finish();
  return c;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open " + path.string());
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config: " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["schema_version"] = c.schema_version;
  j["run_id"] = c.run_id;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  j["budget"] = c.budget;
  j["dataset"] = {{"kind", c.dataset.kind},
                  {"id", c.dataset.id},
                  {"num_classes", c.dataset.num_classes},
                  {"shape", {c.dataset.shape.channels, c.dataset.shape.height, c.dataset.shape.width}},
                  {"train_per_class", c.dataset.train_per_class},
                  {"test_per_class", c.dataset.test_per_class},
                  {"pattern",
                   {{"angle_offset", c.dataset.pattern.angle_offset},
                    {"freq_offset", c.dataset.pattern.freq_offset},
                    {"amplitude", c.dataset.pattern.amplitude},
                    {"noise_sigma", c.dataset.pattern.noise_sigma},
                    {"phase_jitter", c.dataset.pattern.phase_jitter},
                    {"angle_jitter", c.dataset.pattern.angle_jitter},
                    {"mix", c.dataset.pattern.mix}}},
                  {"train_manifest", c.dataset.train_manifest},
                  {"test_manifest", c.dataset.test_manifest}};
  j["synthetic"] = {{"backend", c.synthetic.backend},
                    {"per_class", c.synthetic.per_class},
                    {"inference_steps", c.synthetic.inference_steps},
                    {"native_resolution", c.synthetic.native_resolution},
                    {"workers", c.synthetic.workers},
                    {"cache_dir", c.synthetic.cache_dir}};
  j["target"] = {{"arch", c.target.arch},
                 {"schedule", schedule_to_json(c.target.schedule)},
                 {"checkpoint", c.target.checkpoint},
                 {"server_url", c.target.server_url},
                 {"api_key", c.target.api_key},
                 {"serve_mode", c.target.serve_mode},
                 {"serve_budget", c.target.serve_budget}};
  j["substitute"] = {{"arch", c.substitute.arch},
                     {"pretrain", schedule_to_json(c.substitute.pretrain)},
                     {"distill", schedule_to_json(c.substitute.distill)}};
  j["attacks"] = nlohmann::json::array();
  for (const auto& a : c.attacks) j["attacks"].push_back(attack_to_json(a));
  j["eval"] = {{"attack_sample_count", c.eval.attack_sample_count}};
  j["sweep_budgets"] = c.sweep_budgets;
  j["sweep_seeds"] = c.sweep_seeds;
  return j;
}

std::pair<std::string, std::string> split_override(const std::string& kv) {
  const auto pos = kv.find('=');
  if (pos == std::string::npos || pos == 0)
    throw ConfigError("config: override \"" + kv + "\" must look like key=value");
  return {kv.substr(0, pos), kv.substr(pos + 1)};
}

void apply_override(nlohmann::json& j, const std::string& dotted_key,
                    const std::string& value) {
  if (dotted_key.empty()) throw ConfigError("config: empty override key");
  std::vector<std::string> segments;
  std::stringstream ss(dotted_key);
  std::string seg;
  while (std::getline(ss, seg, '.')) segments.push_back(seg);
  if (segments.empty() || dotted_key.back() == '.')
    throw ConfigError("config: malformed override key \"" + dotted_key + "\"");

  nlohmann::json* node = &j;
  for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
    const std::string& s = segments[i];
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(s);
      } catch (const std::exception&) {
        throw ConfigError("config: override \"" + dotted_key + "\": \"" + s +
                          "\" is not an array index");
      }
      if (idx >= node->size())
        throw ConfigError("config: override \"" + dotted_key + "\": index " + s +
                          " out of range");
      node = &(*node)[idx];
    } else {
      if (!node->is_object() && !node->is_null())
        throw ConfigError("config: override \"" + dotted_key +
                          "\" descends into a non-object value at \"" + s + "\"");
      node = &(*node)[s];
    }
  }

  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(value);
  } catch (const nlohmann::json::exception&) {
    parsed = value;  // plain string
  }
  const std::string& leaf = segments.back();
  if (node->is_array()) {
    std::size_t idx = 0;
    try {
      idx = std::stoul(leaf);
    } catch (const std::exception&) {
      throw ConfigError("config: override \"" + dotted_key + "\": \"" + leaf +
                        "\" is not an array index");
    }
    if (idx >= node->size())
      throw ConfigError("config: override \"" + dotted_key + "\": index " + leaf +
                        " out of range");
    (*node)[idx] = parsed;
  } else {
    if (!node->is_object() && !node->is_null())
      throw ConfigError("config: override \"" + dotted_key +
                        "\" writes into a non-object value");
    (*node)[leaf] = parsed;
  }
}

}  // namespace shadowforge
