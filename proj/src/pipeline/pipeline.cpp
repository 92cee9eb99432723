#include "shadowforge/pipeline/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "shadowforge/core/blob_io.hpp"
#include "shadowforge/core/errors.hpp"
#include "shadowforge/core/image_io.hpp"
#include "shadowforge/core/rng.hpp"
#include "shadowforge/eval/report_io.hpp"
#include "shadowforge/eval/sweep.hpp"
#include "shadowforge/oracle/remote.hpp"
#include "shadowforge/synth/pool.hpp"
#include "shadowforge/synth/stub.hpp"
#include "shadowforge/train/ops.hpp"
#include "shadowforge/zoo/checkpoint.hpp"

namespace shadowforge {
namespace {

nlohmann::json attack_spec_json(const AttackSpec& spec) {
  return {{"method", attack_method_name(spec.method)},
          {"epsilon", spec.epsilon},
          {"alpha", spec.alpha},
          {"steps", spec.steps},
          {"targeted", spec.targeted},
          {"target_rule", spec.target_rule == TargetRule::NextClass ? "next-class" : "fixed-class"},
          {"target_class", spec.target_class},
          {"random_start", spec.random_start},
          {"seed", spec.seed}};
}

void save_image_batch_blob(const std::filesystem::path& path, const ImageBatchF& batch) {
  std::vector<float> payload(static_cast<std::size_t>(batch.size()) * batch.shape.elems());
  for (int i = 0; i < batch.size(); ++i)
    for (Eigen::Index j = 0; j < batch.data.cols(); ++j)
      payload[static_cast<std::size_t>(i) * batch.shape.elems() + j] = batch.data(i, j);
  nlohmann::json header{{"kind", "image-batch"},
                        {"schema_version", 1},
                        {"shape", {batch.size(), batch.shape.channels, batch.shape.height,
                                   batch.shape.width}}};
  save_blob(path, std::move(header), payload);
}

ImageBatchF load_image_batch_blob(const std::filesystem::path& path) {
  Blob blob = load_blob(path);
  if (blob.header.value("kind", "") != "image-batch")
    throw IoError("image batch blob " + path.string() + " has wrong kind");
  const auto sh = blob.header.at("shape");
  const int n = sh.at(0).get<int>();
  TensorShape shape{sh.at(1).get<int>(), sh.at(2).get<int>(), sh.at(3).get<int>()};
  if (blob.payload.size() != static_cast<std::size_t>(n) * shape.elems())
    throw IoError("image batch blob " + path.string() + " payload size mismatch");
  ImageBatchF batch = ImageBatchF::zeros(shape, n);
  for (int i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < batch.data.cols(); ++j)
      batch.data(i, j) = blob.payload[static_cast<std::size_t>(i) * shape.elems() + j];
  return batch;
}

std::vector<int> json_int_vector(const nlohmann::json& j) {
  std::vector<int> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(v.get<int>());
  return out;
}

}  // namespace

Pipeline::Pipeline(ExperimentConfig cfg, bool resume)
    : cfg_(std::move(cfg)), resume_(resume) {
  paths_.root = cfg_.output_dir;
  std::filesystem::create_directories(paths_.root);
  // The run directory always carries the fully resolved configuration.
  write_file_atomic(paths_.config_json(), config_to_json(cfg_).dump(2) + "\n");
}

bool Pipeline::stage_done(const std::string& stage) const {
  return resume_ && std::filesystem::exists(paths_.marker(stage));
}

void Pipeline::mark_done(const std::string& stage) {
  write_file_atomic(paths_.marker(stage), std::string());
}

void Pipeline::require_artifact(const std::filesystem::path& p,
                                const std::string& hint) const {
  if (!std::filesystem::exists(p))
    throw ConfigError("missing artifact " + p.string() + "; run `" + hint + "` first");
}

std::filesystem::path Pipeline::cache_dir() const {
  if (!cfg_.synthetic.cache_dir.empty()) return cfg_.synthetic.cache_dir;
  return paths_.root / "cache";
}

const LabeledSetF& Pipeline::train_set() {
  if (!train_) {
    if (cfg_.dataset.kind == "manifest") {
      train_ = load_dataset(load_manifest(cfg_.dataset.train_manifest),
                            std::filesystem::path(cfg_.dataset.train_manifest).parent_path());
    } else {
      train_ = make_pattern_dataset(cfg_.dataset.num_classes, cfg_.dataset.train_per_class,
                                    cfg_.dataset.pattern, cfg_.dataset.shape,
                                    derive_seed(cfg_.seed, "real-train"));
    }
  }
  return *train_;
}

const LabeledSetF& Pipeline::test_set() {
  if (!test_) {
    if (cfg_.dataset.kind == "manifest") {
      test_ = load_dataset(load_manifest(cfg_.dataset.test_manifest),
                           std::filesystem::path(cfg_.dataset.test_manifest).parent_path());
    } else {
      test_ = make_pattern_dataset(cfg_.dataset.num_classes, cfg_.dataset.test_per_class,
                                   cfg_.dataset.pattern, cfg_.dataset.shape,
                                   derive_seed(cfg_.seed, "real-test"));
    }
  }
  return *test_;
}

const LabeledSetF& Pipeline::synthetic_set() {
  if (!synthetic_) {
    require_artifact(paths_.manifest_json(), "gen");
    synthetic_ = load_dataset(load_manifest(paths_.manifest_json()), paths_.root);
  }
  return *synthetic_;
}

BlackBoxOracle& Pipeline::target_oracle() {
  if (!oracle_) {
    if (!cfg_.target.server_url.empty()) {
      oracle_ = std::make_unique<RemoteOracle>(cfg_.target.server_url, cfg_.target.api_key,
                                               cfg_.dataset.shape, cfg_.dataset.num_classes);
    } else {
      const auto ckpt = cfg_.target.checkpoint.empty()
                            ? paths_.target_checkpoint()
                            : std::filesystem::path(cfg_.target.checkpoint);
      require_artifact(ckpt, "train-target");
      oracle_ = std::make_unique<InProcessOracle>(load_checkpoint(ckpt).net);
    }
  }
  return *oracle_;
}

void Pipeline::gen() {
  if (stage_done("gen")) return;
  PoolRequest req;
  req.vocab = default_vocabulary(cfg_.dataset.num_classes);
  req.per_class_count = cfg_.synthetic.per_class;
  req.base_seed = derive_seed(cfg_.seed, "pool");
  req.inference_steps = cfg_.synthetic.inference_steps;
  req.native_resolution = cfg_.synthetic.native_resolution;
  req.target_shape = cfg_.dataset.shape;
  req.workers = cfg_.synthetic.workers;

  std::unique_ptr<TextToImageBackend> backend;
  if (cfg_.synthetic.backend == "remote")
    backend = RemoteBackend::from_env();
  else
    backend = std::make_unique<StubBackend>(cfg_.dataset.shape.channels);

  ImageCache cache(cache_dir());
  SyntheticManifest manifest = generate_pool(req, *backend, cache, paths_.root);
  save_manifest(paths_.manifest_json(), manifest);
  mark_done("gen");
}

void Pipeline::train_target() {
  if (stage_done("train-target")) return;
  if (!cfg_.target.checkpoint.empty()) {
    // Externally supplied model: nothing to train, just verify it is present.
    require_artifact(cfg_.target.checkpoint, "train-target (external checkpoint missing)");
    mark_done("train-target");
    return;
  }
  if (!cfg_.target.server_url.empty()) {
    mark_done("train-target");  // the target lives behind the server
    return;
  }
  ClassifierSpec spec{cfg_.target.arch, cfg_.dataset.num_classes, cfg_.dataset.shape,
                      derive_seed(cfg_.seed, "target-init")};
  TrainSchedule sched = cfg_.target.schedule;
  sched.seed = derive_seed(cfg_.seed, "target-fit");
  TrainedClassifier trained = shadowforge::train_target(spec, train_set(), sched);
  CheckpointMeta meta;
  meta.epochs = sched.epochs;
  meta.final_lr = sched.epochs > 0 ? cosine_lr(sched.initial_lr, sched.epochs - 1, sched.epochs) : 0.0;
  meta.dataset_id = cfg_.dataset.id;
  meta.seed = spec.seed;
  save_checkpoint(paths_.target_checkpoint(), trained.net, spec, meta);
  save_history_csv(paths_.target_history(), trained.history);
  mark_done("train-target");
}

void Pipeline::pretrain() {
  if (stage_done("pretrain")) return;
  const LabeledSetF& synth = synthetic_set();
  ClassifierSpec spec{cfg_.substitute.arch, cfg_.dataset.num_classes, cfg_.dataset.shape,
                      derive_seed(cfg_.seed, "substitute-init")};
  Network<float> substitute = build_classifier<float>(spec);
  TrainSchedule sched = cfg_.substitute.pretrain;
  sched.seed = derive_seed(cfg_.seed, "pretrain-fit");
  History history = shadowforge::pretrain(substitute, synth, sched);
  CheckpointMeta meta;
  meta.epochs = sched.epochs;
  meta.final_lr = sched.epochs > 0 ? cosine_lr(sched.initial_lr, sched.epochs - 1, sched.epochs) : 0.0;
  meta.dataset_id = "synthetic:" + cfg_.dataset.id;
  meta.seed = spec.seed;
  save_checkpoint(paths_.pretrain_checkpoint(), substitute, spec, meta);
  save_history_csv(paths_.pretrain_history(), history);
  mark_done("pretrain");
}

void Pipeline::distill() {
  if (stage_done("distill")) return;
  require_artifact(paths_.pretrain_checkpoint(), "pretrain");
  LoadedCheckpoint pre = load_checkpoint(paths_.pretrain_checkpoint());

  QueryLedger ledger(cfg_.budget);
  CheckpointMeta meta;
  meta.dataset_id = cfg_.dataset.id;
  meta.seed = pre.spec.seed;

  if (cfg_.budget == 0) {
    // Zero-query protocol: the pretrained substitute is the final substitute.
    write_file_atomic(paths_.zero_query_marker(),
                      std::string("no queries spent: budget is 0\n"));
    save_checkpoint(paths_.distill_checkpoint(), pre.net, pre.spec, meta);
    save_history_csv(paths_.distill_history(), History{});
  } else {
    BlackBoxOracle& oracle = target_oracle();
    QueriedPairSet pairs;
    try {
      pairs = collect_query_set(synthetic_set(), static_cast<int>(cfg_.budget),
                                derive_seed(cfg_.seed, "distill-select"), oracle, ledger);
    } catch (const BudgetExhausted& e) {
      write_file_atomic(paths_.ledger_json(), ledger.snapshot().dump(2) + "\n");
      throw BudgetExhausted(std::string(e.what()) + "\nledger: " + ledger.snapshot().dump());
    }
    TrainSchedule sched = cfg_.substitute.distill;
    sched.seed = derive_seed(cfg_.seed, "distill-fit");
    History history = shadowforge::distill(pre.net, pairs, sched);
    meta.epochs = sched.epochs;
    meta.final_lr = sched.epochs > 0 ? cosine_lr(sched.initial_lr, sched.epochs - 1, sched.epochs) : 0.0;
    save_checkpoint(paths_.distill_checkpoint(), pre.net, pre.spec, meta);
    save_history_csv(paths_.distill_history(), history);
  }
  write_file_atomic(paths_.ledger_json(), ledger.snapshot().dump(2) + "\n");
  mark_done("distill");
}

void Pipeline::attack() {
  require_artifact(paths_.distill_checkpoint(), "distill");
  Network<float> substitute = load_checkpoint(paths_.distill_checkpoint()).net;

  const LabeledSetF& test = test_set();
  const int n = std::min(cfg_.eval.attack_sample_count, test.size());
  std::vector<int> order(test.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(cfg_.seed, "attack-sample"));
  rng.shuffle(order);
  std::vector<int> indices(order.begin(), order.begin() + n);
  std::sort(indices.begin(), indices.end());
  LabeledSetF sample = test.subset(indices);

  std::filesystem::create_directories(paths_.adv_dir());
  save_image_batch_blob(paths_.adv_dir() / "clean.blob", sample.images);
  nlohmann::json index_json{{"schema_version", 1},
                            {"sample_indices", indices},
                            {"true_labels", sample.labels},
                            {"attacks", nlohmann::json::array()}};

  double max_eps = 0.0;
  for (std::size_t i = 0; i < cfg_.attacks.size(); ++i) {
    AttackSpec spec = cfg_.attacks[i];
    spec.seed = derive_seed(cfg_.seed, "attack-" + std::to_string(i));
    AttackResult<float> result = batch_attack(substitute, sample.images, sample.labels, spec);
    const std::string stem = "attack_" + std::to_string(i);
    save_image_batch_blob(paths_.adv_dir() / (stem + ".blob"), result.adversarial);
    std::vector<double> norms(result.linf_norms.data(),
                              result.linf_norms.data() + result.linf_norms.size());
    nlohmann::json sidecar{{"spec", attack_spec_json(spec)},
                           {"source_dataset", cfg_.dataset.id},
                           {"seed", spec.seed},
                           {"attack_labels", result.attack_labels},
                           {"linf_norms", norms}};
    write_file_atomic(paths_.adv_dir() / (stem + ".json"), sidecar.dump(2) + "\n");
    index_json["attacks"].push_back({{"stem", stem}, {"spec", attack_spec_json(spec)}});
    max_eps = std::max(max_eps, spec.epsilon);
  }

  // Equal-budget random noise, the floor any gradient attack must beat.
  if (max_eps > 0.0) {
    ImageBatchF noisy = uniform_noise_baseline(sample.images, max_eps,
                                               derive_seed(cfg_.seed, "noise"));
    save_image_batch_blob(paths_.adv_dir() / "noise.blob", noisy);
    index_json["noise_epsilon"] = max_eps;
  }
  write_file_atomic(paths_.adv_dir() / "index.json", index_json.dump(2) + "\n");
}

void Pipeline::evaluate() {
  require_artifact(paths_.distill_checkpoint(), "distill");
  require_artifact(paths_.adv_dir() / "index.json", "attack");
  Network<float> substitute = load_checkpoint(paths_.distill_checkpoint()).net;
  BlackBoxOracle& oracle = target_oracle();
  QueryLedger eval_ledger = QueryLedger::unlimited();

  const LabeledSetF& test = test_set();
  const std::vector<int> sub_labels = substitute.predict(test.images);
  const std::vector<int> tgt_labels = oracle.query_hard(test.images, eval_ledger, kEvalPurpose);

  std::ifstream idx_f(paths_.adv_dir() / "index.json");
  nlohmann::json index_json = nlohmann::json::parse(idx_f);
  const std::vector<int> sample_indices = json_int_vector(index_json.at("sample_indices"));
  const std::vector<int> sample_true = json_int_vector(index_json.at("true_labels"));
  std::vector<int> sample_clean_tgt;
  sample_clean_tgt.reserve(sample_indices.size());
  for (int idx : sample_indices) sample_clean_tgt.push_back(tgt_labels[idx]);

  nlohmann::json ledger_json;
  if (std::filesystem::exists(paths_.ledger_json())) {
    std::ifstream lf(paths_.ledger_json());
    ledger_json = nlohmann::json::parse(lf);
  }

  nlohmann::json pred{{"schema_version", 1},
                      {"dataset_id", cfg_.dataset.id},
                      {"target_arch", cfg_.target.arch},
                      {"substitute_arch", cfg_.substitute.arch},
                      {"budget", cfg_.budget},
                      {"seed", cfg_.seed},
                      {"ledger", ledger_json},
                      {"test_true_labels", test.labels},
                      {"target_test_labels", tgt_labels},
                      {"substitute_test_labels", sub_labels},
                      {"attack_sample_indices", sample_indices},
                      {"attacks", nlohmann::json::array()}};

  for (const auto& entry : index_json.at("attacks")) {
    const std::string stem = entry.at("stem").get<std::string>();
    ImageBatchF adv = load_image_batch_blob(paths_.adv_dir() / (stem + ".blob"));
    std::ifstream sf(paths_.adv_dir() / (stem + ".json"));
    nlohmann::json sidecar = nlohmann::json::parse(sf);
    const std::vector<int> adv_tgt = oracle.query_hard(adv, eval_ledger, kEvalPurpose);
    const auto& spec = entry.at("spec");
    pred["attacks"].push_back({{"method", spec.at("method")},
                               {"targeted", spec.at("targeted")},
                               {"epsilon", spec.at("epsilon")},
                               {"alpha", spec.at("alpha")},
                               {"steps", spec.at("steps")},
                               {"attack_labels", sidecar.at("attack_labels")},
                               {"target_clean_labels", sample_clean_tgt},
                               {"target_adv_labels", adv_tgt},
                               {"true_labels", sample_true}});
  }

  if (index_json.contains("noise_epsilon")) {
    ImageBatchF noisy = load_image_batch_blob(paths_.adv_dir() / "noise.blob");
    const std::vector<int> noise_tgt = oracle.query_hard(noisy, eval_ledger, kEvalPurpose);
    pred["noise_baseline"] = {{"epsilon", index_json.at("noise_epsilon")},
                              {"target_clean_labels", sample_clean_tgt},
                              {"target_adv_labels", noise_tgt},
                              {"true_labels", sample_true}};
  }

  pred["eval_queries"] = eval_ledger.used();
  write_file_atomic(paths_.predictions_json(), pred.dump(2) + "\n");
}

void Pipeline::report() {
  require_artifact(paths_.predictions_json(), "eval");
  std::ifstream pf(paths_.predictions_json());
  nlohmann::json pred = nlohmann::json::parse(pf);

  const std::vector<int> truth = json_int_vector(pred.at("test_true_labels"));
  const std::vector<int> tgt = json_int_vector(pred.at("target_test_labels"));
  const std::vector<int> sub = json_int_vector(pred.at("substitute_test_labels"));

  ExtractionReport rep;
  rep.dataset_id = pred.at("dataset_id").get<std::string>();
  rep.target_arch = pred.at("target_arch").get<std::string>();
  rep.substitute_arch = pred.at("substitute_arch").get<std::string>();
  rep.budget = pred.at("budget").get<std::int64_t>();
  rep.ledger_snapshot = pred.at("ledger");
  rep.queries_used = rep.ledger_snapshot.is_object()
                         ? rep.ledger_snapshot.value("used", std::int64_t(0))
                         : 0;
  rep.eval_queries = pred.at("eval_queries").get<std::int64_t>();
  rep.target_test_accuracy = label_match_rate(tgt, truth);
  rep.substitute_test_accuracy = label_match_rate(sub, truth);
  rep.agreement_rate = label_match_rate(sub, tgt);
  rep.seed = pred.at("seed").get<std::uint64_t>();

  std::vector<AsrReport> asrs;
  for (const auto& a : pred.at("attacks")) {
    asrs.push_back(asr_from_labels(
        json_int_vector(a.at("true_labels")), json_int_vector(a.at("target_clean_labels")),
        json_int_vector(a.at("target_adv_labels")), a.at("targeted").get<bool>(),
        json_int_vector(a.at("attack_labels")), a.at("method").get<std::string>(),
        a.at("epsilon").get<double>(), a.at("alpha").get<double>(),
        a.at("steps").get<int>()));
  }
  if (pred.contains("noise_baseline")) {
    const auto& nb = pred.at("noise_baseline");
    asrs.push_back(asr_from_labels(json_int_vector(nb.at("true_labels")),
                                   json_int_vector(nb.at("target_clean_labels")),
                                   json_int_vector(nb.at("target_adv_labels")), false, {},
                                   "noise", nb.at("epsilon").get<double>(), 0.0, 0));
  }

  emit_report(paths_.reports_dir(), {rep}, asrs, rep.ledger_snapshot);
}

void Pipeline::sweep() {
  require_artifact(paths_.pretrain_checkpoint(), "pretrain");
  Network<float> pretrained = load_checkpoint(paths_.pretrain_checkpoint()).net;

  SweepContext ctx;
  ctx.pretrained = &pretrained;
  ctx.target = &target_oracle();
  ctx.pool = &synthetic_set();
  ctx.test_set = &test_set();
  ctx.distill_schedule = cfg_.substitute.distill;
  ctx.dataset_id = cfg_.dataset.id;
  ctx.target_arch = cfg_.target.arch;
  ctx.substitute_arch = cfg_.substitute.arch;

  std::vector<ExtractionReport> all;
  for (const std::uint64_t s : cfg_.sweep_seeds) {
    std::vector<ExtractionReport> reports = budget_sweep(ctx, cfg_.sweep_budgets, s);
    all.insert(all.end(), reports.begin(), reports.end());
  }

  std::filesystem::create_directories(paths_.reports_dir());
  nlohmann::json j{{"schema_version", 1}, {"sweep", nlohmann::json::array()}};
  for (const auto& r : all) j["sweep"].push_back(extraction_report_to_json(r));
  write_file_atomic(paths_.reports_dir() / "sweep.csv", extraction_reports_csv(all));
  write_file_atomic(paths_.reports_dir() / "sweep.json", j.dump(2) + "\n");
  write_file_atomic(paths_.reports_dir() / "sweep.md", report_markdown(all, {}));
}

void Pipeline::run_all() {
  gen();
  train_target();
  pretrain();
  distill();
  attack();
  evaluate();
  report();
}

}  // namespace shadowforge
