/* Copyright 2026 The NoiseKWS Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "bench/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <tuple>

#include "adapt/adapt.hpp"
#include "bench/run_manifest.hpp"
#include "common/checksum.hpp"
#include "common/csv.hpp"
#include "common/error.hpp"
#include "common/kv_config.hpp"
#include "common/rng.hpp"
#include "dsp/frontend.hpp"
#include "nn/weights_io.hpp"

namespace nkws::bench {
namespace fs = std::filesystem;

std::filesystem::path Context::resolved_noise_dir() const {
  return noise_dir.empty() ? data_root / kDefaultNoiseDirName : noise_dir;
}

void Context::info(const std::string& message) const {
  if (log) log(message);
}

namespace {

fs::path suffixed(const fs::path& p, const char* suffix) {
  fs::path out = p;
  out += suffix;
  return out;
}

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

RunManifest start_manifest(const Context& ctx, const std::string& command) {
  RunManifest m;
  m.command = command;
  m.args = ctx.args;
  m.config = ctx.profile.to_config();
  m.config.set("profile", ctx.profile.name);
  m.seeds["seed"] = ctx.seed;
  m.started_at = utc_timestamp();
  if (!ctx.manifest.empty()) m.add_input(ctx.manifest);
  return m;
}

void finish_manifest(RunManifest& m, const fs::path& artifact) {
  m.add_artifact(artifact);
  m.finished_at = utc_timestamp();
  m.write(manifest_path_for(artifact));
}

// Everything needed to turn manifest rows into features.
struct Workspace {
  data::CorpusIndex index;
  std::shared_ptr<const data::NoiseBank> bank;
  std::unique_ptr<data::ClipLoader> loader;
  std::unique_ptr<dsp::LogMelFrontend> frontend;

  explicit Workspace(const Context& ctx)
      : index(load_index(ctx)),
        bank(std::make_shared<data::NoiseBank>(ctx.resolved_noise_dir())),
        loader(std::make_unique<data::ClipLoader>(index.root, bank)),
        frontend(std::make_unique<dsp::LogMelFrontend>()) {}

  train::DataInputs inputs(const Context& ctx) const {
    return {index, *loader, *frontend, ctx.profile.data};
  }
};

std::string percent(double fraction) {
  return std::to_string(static_cast<int>(std::lround(fraction * 100.0)));
}

void check_fraction(ModelKind kind, std::optional<double> fraction) {
  if (kind == ModelKind::kBaseline && fraction) {
    fail(ErrorCode::kUsage, "baseline pretraining takes no noise fraction");
  }
  if (kind == ModelKind::kNoiseAware &&
      (!fraction || !train::is_noise_aware_fraction(*fraction))) {
    fail(ErrorCode::kUsage, "noise-aware pretraining needs --fraction in {0.2,0.4,0.6,0.8,1.0}");
  }
}

std::string model_id_of(const nn::WeightFile& file, const fs::path& path) {
  const auto it = file.provenance.find("model_id");
  return it != file.provenance.end() ? it->second : path.stem().string();
}

train::TrainResult train_kind(const Context& ctx, const Workspace& ws, ModelKind kind,
                              std::optional<double> fraction, std::uint64_t seed) {
  train::TrainConfig cfg = ctx.profile.train;
  cfg.seed = seed;
  const std::string id = model_id(kind, fraction);
  const auto on_epoch = [&ctx, &id](const train::EpochLog& e) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s epoch %d lr %.3g loss %.4f train_acc %.4f val_acc %.4f",
                  id.c_str(), e.epoch, e.lr, e.train_loss, e.train_acc, e.val_acc);
    ctx.info(buf);
  };
  if (kind == ModelKind::kBaseline) {
    return train::build_baseline(ws.inputs(ctx), ctx.profile.arch, cfg, on_epoch);
  }
  return train::build_noise_aware(ws.inputs(ctx), ctx.profile.arch,
                                  train::NoiseAwareMix::standard(*fraction), cfg, on_epoch);
}

nn::Provenance pretrain_provenance(const Context& ctx, ModelKind kind,
                                   std::optional<double> fraction, std::uint64_t seed) {
  nn::Provenance p = {{"kind", kind == ModelKind::kBaseline ? "baseline" : "noise-aware"},
                      {"model_id", model_id(kind, fraction)},
                      {"profile", ctx.profile.name},
                      {"seed", std::to_string(seed)},
                      {"data_seed", std::to_string(ctx.seed)}};
  if (fraction) p["fraction"] = percent(*fraction);
  return p;
}

// Trains into path unless a matching model is already there.
nn::WeightFile ensure_model(const Context& ctx, const Workspace& ws, ModelKind kind,
                            std::optional<double> fraction, std::uint64_t seed,
                            const fs::path& path) {
  const auto want = pretrain_provenance(ctx, kind, fraction, seed);
  if (fs::exists(path)) {
    auto file = nn::load_weights(path);
    if (file.provenance == want && file.arch == ctx.profile.arch) {
      ctx.info("reusing " + path.string());
      return file;
    }
    ctx.info("retraining " + path.string() + " (settings changed)");
  }
  const auto result = train_kind(ctx, ws, kind, fraction, seed);
  ensure_parent(path);
  nn::save_weights(result.params, ctx.profile.arch, path, want);
  write_csv(suffixed(path, ".log.csv"), train::training_log_csv(result.log));
  return {ctx.profile.arch, result.params, want};
}

struct ConditionScorer {
  const Context& ctx;
  const Workspace& ws;
  std::map<std::pair<std::string, int>, train::FeatureSet> cache;

  const train::FeatureSet& test_set(const std::string& source, int snr) {
    auto key = std::make_pair(source, snr);
    auto it = cache.find(key);
    if (it == cache.end()) {
      it = cache
               .emplace(key, train::condition_features(ws.inputs(ctx), data::Split::kTest,
                                                       data::make_condition(source, snr),
                                                       ctx.seed))
               .first;
    }
    return it->second;
  }
};

std::vector<std::uint64_t> seeds_or(const std::vector<std::uint64_t>& seeds,
                                    std::vector<std::uint64_t> fallback) {
  return seeds.empty() ? fallback : seeds;
}

}  // namespace

data::CorpusIndex load_index(const Context& ctx) {
  if (ctx.data_root.empty()) fail(ErrorCode::kUsage, "no data root (--data-root or NOISEKWS_DATA_ROOT)");
  if (!ctx.manifest.empty()) return data::index_from_manifest(read_csv(ctx.manifest), ctx.data_root);
  auto index = data::scan_corpus(ctx.data_root);
  data::add_silence_entries(index, ctx.seed);
  return index;
}

std::size_t cmd_prepare(const Context& ctx, const fs::path& out_manifest) {
  RunManifest run = start_manifest(ctx, "prepare");
  Context scan = ctx;
  scan.manifest.clear();
  const auto index = load_index(scan);
  const data::NoiseBank bank(ctx.resolved_noise_dir());
  std::vector<std::string> missing;
  for (auto group : {std::span<const std::string_view>(data::kPretrainSources),
                     std::span<const std::string_view>(data::kOnSiteSources)}) {
    for (auto s : group) {
      if (!data::is_generated_source(s) && !fs::exists(ctx.resolved_noise_dir() / (std::string(s) + ".wav"))) {
        missing.emplace_back(s);
      }
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += " " + m;
    ctx.info("warning: noise directory " + ctx.resolved_noise_dir().string() + " lacks:" + list);
  }
  const auto table = data::corpus_manifest(index);
  ensure_parent(out_manifest);
  write_csv(out_manifest, table);
  ctx.info("manifest: " + std::to_string(index.entries.size()) + " clips, " +
           std::to_string(index.silence.size()) + " silence entries");
  finish_manifest(run, out_manifest);
  return table.rows.size();
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "baseline") return ModelKind::kBaseline;
  if (name == "noise-aware" || name == "noise_aware") return ModelKind::kNoiseAware;
  fail(ErrorCode::kUsage, "unknown model kind '" + std::string(name) + "' (baseline|noise-aware)");
}

std::string model_id(ModelKind kind, std::optional<double> fraction) {
  if (kind == ModelKind::kBaseline) return "baseline";
  return "noise_aware_" + percent(fraction.value_or(1.0));
}

PretrainSummary cmd_pretrain(const Context& ctx, ModelKind kind, std::optional<double> fraction,
                             const fs::path& out_weights) {
  check_fraction(kind, fraction);
  if (ctx.profile.name == "paper") {
    ctx.info("warning: the paper profile trains on the full corpus for 50 epochs; expect hours");
  }
  RunManifest run = start_manifest(ctx, "pretrain");
  const Workspace ws(ctx);
  const auto result = train_kind(ctx, ws, kind, fraction, ctx.seed);
  ensure_parent(out_weights);
  nn::save_weights(result.params, ctx.profile.arch, out_weights,
                   pretrain_provenance(ctx, kind, fraction, ctx.seed));
  const auto log_path = suffixed(out_weights, ".log.csv");
  write_csv(log_path, train::training_log_csv(result.log));
  run.add_artifact(log_path);
  finish_manifest(run, out_weights);
  PretrainSummary s;
  s.model_id = model_id(kind, fraction);
  s.epochs = static_cast<int>(result.log.size());
  s.final_val_acc = result.log.empty() ? 0.0 : result.log.back().val_acc;
  return s;
}

void cmd_adapt(const Context& ctx, const AdaptRequest& request, const fs::path& out_weights) {
  if (request.shots < 1 || request.shots > 5) fail(ErrorCode::kUsage, "--shots must be in 1..5");
  if (request.epochs < 1 || request.epochs > 5) fail(ErrorCode::kUsage, "--epochs must be in 1..5");
  data::NoiseCondition cond;
  try {
    cond = data::make_condition(request.source, request.snr_db);
  } catch (const Error& e) {
    fail(ErrorCode::kUsage, e.what());
  }
  RunManifest run = start_manifest(ctx, "adapt");
  run.seeds["adapt_seed"] = request.seed;
  const auto bytes = read_file_bytes(request.weights);
  auto file = nn::decode_weights(bytes);
  run.add_input(request.weights);

  const Workspace ws(ctx);
  const auto shots = data::sample_shots(ws.index, cond, request.shots,
                                        derive_seed(request.seed, "shots"), ctx.profile.data);
  const auto features = train::featurize(shots.items, *ws.loader, *ws.frontend);
  const adapt::AdaptConfig cfg{request.shots, request.epochs, ctx.profile.adapt_lr};
  const auto base = std::make_shared<const nn::ModelParams<float>>(std::move(file.params));
  const auto model = adapt::adapt(base, file.arch, features, cond, cfg, request.seed);
  auto provenance = model.provenance(nn::stored_checksum(bytes));
  provenance["source"] = model_id_of(file, request.weights);
  ensure_parent(out_weights);
  nn::save_weights(model.materialize(), file.arch, out_weights, provenance);
  ctx.info("adapted " + request.weights.string() + " to " + cond.source + "@" +
           std::to_string(cond.snr_db) + " dB in " + std::to_string(model.steps) + " steps");
  finish_manifest(run, out_weights);
}

std::vector<std::optional<data::NoiseCondition>> parse_conditions(const std::string& text) {
  std::vector<std::optional<data::NoiseCondition>> out;
  for (const auto& token : split_list(text)) {
    if (token == "clean") {
      out.emplace_back(std::nullopt);
      continue;
    }
    const auto at = token.find('@');
    try {
      if (at == std::string::npos) {
        for (int snr : data::kSnrGrid) out.emplace_back(data::make_condition(token, snr));
      } else {
        out.emplace_back(data::make_condition(
            token.substr(0, at), static_cast<int>(parse_int(token.substr(at + 1), "snr"))));
      }
    } catch (const Error& e) {
      fail(ErrorCode::kUsage, e.what());
    }
  }
  if (out.empty()) fail(ErrorCode::kUsage, "no evaluation conditions given");
  return out;
}

std::vector<train::EvalRow> cmd_evaluate(
    const Context& ctx, const fs::path& weights,
    const std::vector<std::optional<data::NoiseCondition>>& conditions,
    const fs::path& out_csv) {
  RunManifest run = start_manifest(ctx, "evaluate");
  const auto file = nn::load_weights(weights);
  run.add_input(weights);
  const std::string id = model_id_of(file, weights);
  const Workspace ws(ctx);
  ConditionScorer scorer{ctx, ws, {}};
  std::vector<train::EvalRow> rows;
  for (const auto& cond : conditions) {
    if (!cond) {
      const auto set = train::clean_features(ws.inputs(ctx), data::Split::kTest, ctx.seed);
      rows.push_back(train::evaluate(file.params, file.arch, set, id));
    } else {
      rows.push_back(train::evaluate(file.params, file.arch,
                                     scorer.test_set(cond->source, cond->snr_db), id,
                                     cond->source, cond->snr_db));
    }
  }
  ensure_parent(out_csv);
  write_csv(out_csv, train::eval_report_csv(rows));
  finish_manifest(run, out_csv);
  return rows;
}

std::vector<FigureRow> cmd_experiment(const Context& ctx, const std::string& figure_id,
                                      const ExperimentOptions& options,
                                      const fs::path& out_csv) {
  if (!is_figure_id(figure_id)) {
    fail(ErrorCode::kUsage, "unknown figure '" + figure_id + "' (fig3|fig4|fig5|fig6)");
  }
  if (ctx.profile.name == "paper") {
    ctx.info("warning: full-scale replication with the paper profile is a long-running "
             "optional job (many hours of training)");
  }
  RunManifest run = start_manifest(ctx, "experiment " + figure_id);
  const fs::path work = options.work_dir.empty()
                            ? suffixed(out_csv, ".models")
                            : options.work_dir;
  const Workspace ws(ctx);
  ConditionScorer scorer{ctx, ws, {}};
  const auto model_path = [&](ModelKind kind, std::optional<double> fraction, std::uint64_t s) {
    return work / (ctx.profile.name + "_" + model_id(kind, fraction) + "_s" +
                   std::to_string(s) + ".nkws");
  };

  std::vector<FigureRow> rows;
  const auto score_pretrain_grid = [&](const nn::WeightFile& model, const std::string& id,
                                       std::uint64_t seed) {
    for (auto source : data::kPretrainSources) {
      for (int snr : data::kSnrGrid) {
        FigureRow row;
        row.figure_id = figure_id;
        row.model_id = id;
        row.noise_source = std::string(source);
        row.test_snr_db = snr;
        row.seed = seed;
        row.accuracy = train::evaluate(model.params, model.arch,
                                       scorer.test_set(row.noise_source, snr))
                           .accuracy;
        rows.push_back(row);
      }
    }
  };

  if (figure_id == "fig3" || figure_id == "fig4") {
    std::vector<std::pair<ModelKind, std::optional<double>>> models;
    if (figure_id == "fig3") {
      for (double f : train::kNoiseAwareFractions) models.emplace_back(ModelKind::kNoiseAware, f);
    } else {
      models = {{ModelKind::kBaseline, std::nullopt}, {ModelKind::kNoiseAware, 1.0}};
    }
    for (std::uint64_t seed : seeds_or(options.seeds, {ctx.seed})) {
      run.seeds["pretrain_seed_" + std::to_string(seed)] = seed;
      for (const auto& [kind, fraction] : models) {
        const auto path = model_path(kind, fraction, seed);
        const auto model = ensure_model(ctx, ws, kind, fraction, seed, path);
        run.add_input(path);
        score_pretrain_grid(model, model_id(kind, fraction), seed);
      }
    }
  } else {
    const auto seeds = seeds_or(options.seeds, ctx.profile.sweep_seeds);
    for (auto s : seeds) run.seeds["adapt_seed_" + std::to_string(s)] = s;
    adapt::SweepSpec spec;
    for (auto s : data::kOnSiteSources) spec.sources.emplace_back(s);
    spec.seeds = seeds;
    spec.lr = ctx.profile.adapt_lr;
    spec.data_seed = ctx.seed;
    std::vector<std::pair<ModelKind, std::optional<double>>> models;
    if (figure_id == "fig5") {
      models = {{ModelKind::kBaseline, std::nullopt}, {ModelKind::kNoiseAware, 1.0}};
      spec.adapt_snrs = {-3, 24};
      spec.test_snrs.assign(data::kSnrGrid.begin(), data::kSnrGrid.end());
    } else {
      models = {{ModelKind::kBaseline, std::nullopt}};
      spec.adapt_snrs = options.snrs.empty() ? ctx.profile.fig6_snrs : options.snrs;
      spec.shots = ctx.profile.fig6_shots;
      spec.epochs = {1, 2, 3, 4, 5};
    }
    for (const auto& [kind, fraction] : models) {
      const auto path = model_path(kind, fraction, ctx.seed);
      auto model = ensure_model(ctx, ws, kind, fraction, ctx.seed, path);
      run.add_input(path);
      const auto base = std::make_shared<const nn::ModelParams<float>>(std::move(model.params));
      const auto sweep = adapt::adaptation_sweep(base, model.arch, ws.inputs(ctx), spec);
      const std::string id = model_id(kind, fraction);
      for (const auto& r : sweep) {
        FigureRow row;
        row.figure_id = figure_id;
        row.model_id = id;
        row.noise_source = r.source;
        row.train_snr_db = r.adapt_snr_db;
        row.test_snr_db = r.test_snr_db;
        row.shots = r.shots;
        row.epochs = r.epochs;
        row.seed = r.seed;
        row.accuracy = r.accuracy_after;
        if (figure_id == "fig6" && r.epochs == 1) {
          FigureRow before = row;
          before.epochs = 0;
          before.accuracy = r.accuracy_before;
          rows.push_back(before);
        }
        rows.push_back(row);
      }
    }
  }

  std::stable_sort(rows.begin(), rows.end(), [](const FigureRow& a, const FigureRow& b) {
    return std::tie(a.model_id, a.noise_source, a.train_snr_db, a.shots, a.epochs, a.seed,
                    a.test_snr_db) < std::tie(b.model_id, b.noise_source, b.train_snr_db,
                                              b.shots, b.epochs, b.seed, b.test_snr_db);
  });
  ensure_parent(out_csv);
  write_csv(out_csv, figure_table_csv(rows));
  finish_manifest(run, out_csv);
  return rows;
}

void cmd_synth(const fs::path& root, const fs::path& noise_dir,
               const data::SynthCorpusConfig& cfg) {
  data::synthesize_corpus(root, cfg);
  data::synthesize_noise_dir(noise_dir.empty() ? root / kDefaultNoiseDirName : noise_dir,
                             derive_seed(cfg.seed, "noise"));
}

}  // namespace nkws::bench
