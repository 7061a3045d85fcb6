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

#include <algorithm>
#include <filesystem>
#include <set>

#include "bench/commands.hpp"
#include "bench/figure_table.hpp"
#include "bench/run_manifest.hpp"
#include "common/checksum.hpp"
#include "doctest.h"
#include "nn/weights_io.hpp"
#include "support.hpp"

namespace nkws::bench {
namespace {

namespace fs = std::filesystem;

// Desk profile shrunk to a network and data budget that trains in seconds.
Context small_context(std::vector<std::string>* log = nullptr) {
  Context ctx;
  ctx.data_root = testing::tiny_corpus();
  ctx.profile.apply(KvConfig::parse(
      "arch.channels = 2,2,2,2,3\n"
      "train.max_epochs = 2\n"
      "train.lr0 = 0.001\n"
      "data.classes = Yes,No,Unknown,Silence\n"
      "data.max_train_per_class = 8\n"
      "data.max_val_per_class = 4\n"
      "data.max_test_per_class = 4\n"));
  if (log) ctx.log = [log](const std::string& s) { log->push_back(s); };
  return ctx;
}

std::size_t word_clips_on_disk(const fs::path& root) {
  std::size_t n = 0;
  for (const auto& dir : fs::directory_iterator(root)) {
    const auto name = dir.path().filename().string();
    if (!dir.is_directory() || name.front() == '_') continue;
    for (const auto& f : fs::directory_iterator(dir)) n += f.path().extension() == ".wav";
  }
  return n;
}

bool any_contains(const std::vector<std::string>& lines, const std::string& needle) {
  return std::any_of(lines.begin(), lines.end(),
                     [&](const std::string& l) { return l.find(needle) != std::string::npos; });
}

FigureRow adapted_row() {
  FigureRow r;
  r.figure_id = "fig5";
  r.model_id = "baseline";
  r.noise_source = "dog_bark";
  r.train_snr_db = -3;
  r.test_snr_db = 6;
  r.shots = 1;
  r.epochs = 1;
  r.seed = 2;
  r.accuracy = 0.5;
  return r;
}

}  // namespace

TEST_SUITE("bench") {
  TEST_CASE("golden CSV headers") {
    CHECK(std::string(kFigureTableHeader) ==
          "figure_id,model_id,noise_source,train_snr_db,test_snr_db,shots,epochs,seed,accuracy");
    CHECK(std::string(train::kEvalReportHeader) == "model_id,noise_source,snr_db,accuracy,n_examples");
    CHECK(std::string(train::kTrainingLogHeader) == "epoch,lr,train_loss,train_acc,val_acc");
    CHECK(data::kManifestHeader ==
          CsvRow{"path", "word", "class_index", "split", "noise_source", "snr_db", "seed"});
  }

  TEST_CASE("figure table round trip and schema rules") {
    FigureRow pre;
    pre.figure_id = "fig3";
    pre.model_id = "noise_aware_40";
    pre.noise_source = "babble";
    pre.test_snr_db = -3;
    pre.seed = 1;
    pre.accuracy = 0.123456789;
    const std::vector<FigureRow> rows = {pre, adapted_row()};
    const std::string text = format_csv(figure_table_csv(rows));
    CHECK(text ==
          std::string(kFigureTableHeader) +
              "\nfig3,noise_aware_40,babble,,-3,,,1,0.123457\n"
              "fig5,baseline,dog_bark,-3,6,1,1,2,0.500000\n");
    auto back = parse_figure_table(parse_csv(text));
    REQUIRE(back.size() == 2);
    CHECK(back[1] == rows[1]);
    CHECK(back[0].accuracy == doctest::Approx(0.123457));

    auto bad = adapted_row();
    bad.shots.reset();
    NKWS_CHECK_ERROR(validate_row(bad), ErrorCode::kConfigInvalid);
    bad = pre;
    bad.epochs = 1;
    NKWS_CHECK_ERROR(validate_row(bad), ErrorCode::kConfigInvalid);
    bad = pre;
    bad.accuracy = 1.5;
    NKWS_CHECK_ERROR(validate_row(bad), ErrorCode::kConfigInvalid);
    bad.figure_id = "fig7";
    NKWS_CHECK_ERROR(validate_row(bad), ErrorCode::kConfigInvalid);

    auto extra = parse_csv(text);
    extra.header.push_back("extra");
    for (auto& r : extra.rows) r.push_back("");
    NKWS_CHECK_ERROR(parse_figure_table(extra), ErrorCode::kCorruptHeader);
  }

  TEST_CASE("profiles") {
    const auto paper = make_profile("paper");
    CHECK(paper.train.max_epochs == 50);
    CHECK(paper.train.batch_size == 16);
    CHECK(paper.train.adam.lr0 == 1e-4);
    CHECK(paper.data.classes.empty());
    const auto desk = make_profile("desk");
    CHECK(desk.train.max_epochs == 10);
    CHECK(desk.data.classes.size() == 5);
    CHECK(desk.data.max_train_per_class == 80);
    CHECK(desk.train.adam.lr0 == 1e-3);
    CHECK(desk.adapt_lr == 1e-4);
    NKWS_CHECK_ERROR(make_profile("laptop"), ErrorCode::kUsage);
    auto p = desk;
    NKWS_CHECK_ERROR(p.apply(KvConfig::parse("train.epochs = 3")), ErrorCode::kConfigInvalid);
    auto q = desk;
    q.apply(desk.to_config());
    CHECK(q.to_config().to_text() == desk.to_config().to_text());
  }

  TEST_CASE("run manifest") {
    testing::TempDir dir;
    write_file_bytes(dir / "a.bin", std::vector<std::uint8_t>{'1', '2', '3', '4', '5', '6', '7', '8', '9'});
    CHECK(content_id(dir / "a.bin") == "cbf43926");
    RunManifest m;
    m.command = "prepare";
    m.args = {"--seed", "3"};
    m.config.set("train.lr0", "0.0001");
    m.seeds["seed"] = 3;
    m.add_input(dir / "a.bin");
    m.started_at = utc_timestamp();
    m.write(dir / "m.json");
    const auto back = RunManifest::read(dir / "m.json");
    CHECK(back.to_json() == m.to_json());
    CHECK(m.started_at.size() == 20);
    CHECK(manifest_path_for("x/model.nkws") == fs::path("x/model.nkws.manifest.json"));
  }

  TEST_CASE("prepare is idempotent and counts every entry") {
    testing::TempDir dir;
    const auto ctx = small_context();
    const std::size_t rows = cmd_prepare(ctx, dir / "m1.csv");
    cmd_prepare(ctx, dir / "m2.csv");
    CHECK(read_file_bytes(dir / "m1.csv") == read_file_bytes(dir / "m2.csv"));
    CHECK(fs::exists(dir / "m1.csv.manifest.json"));

    const auto table = read_csv(dir / "m1.csv");
    CHECK(table.rows.size() == rows);
    const std::size_t silence = static_cast<std::size_t>(std::count_if(
        table.rows.begin(), table.rows.end(),
        [](const CsvRow& r) { return r[1] == data::kSilenceToken; }));
    CHECK(silence > 0);
    CHECK(rows == word_clips_on_disk(testing::tiny_corpus()) + silence);

    // A prepared manifest reproduces the scanned index.
    auto from_manifest = ctx;
    from_manifest.manifest = dir / "m1.csv";
    const auto a = load_index(ctx);
    const auto b = load_index(from_manifest);
    CHECK(a.entries.size() == b.entries.size());
    CHECK(a.silence.size() == b.silence.size());
  }

  TEST_CASE("prepare fails without background noise") {
    testing::TempDir dir;
    fs::copy(testing::tiny_corpus(), dir / "c", fs::copy_options::recursive);
    fs::remove_all(dir / "c" / "_background_noise_");
    auto ctx = small_context();
    ctx.data_root = dir / "c";
    NKWS_CHECK_ERROR(cmd_prepare(ctx, dir / "m.csv"), ErrorCode::kMissingBackgroundNoise);
    CHECK_FALSE(fs::exists(dir / "m.csv"));
  }

  TEST_CASE("pretrain, adapt and evaluate") {
    testing::TempDir dir;
    std::vector<std::string> log;
    const auto ctx = small_context(&log);

    NKWS_CHECK_ERROR(cmd_pretrain(ctx, ModelKind::kNoiseAware, std::nullopt, dir / "x.nkws"),
                     ErrorCode::kUsage);
    NKWS_CHECK_ERROR(cmd_pretrain(ctx, ModelKind::kNoiseAware, 0.5, dir / "x.nkws"),
                     ErrorCode::kUsage);
    NKWS_CHECK_ERROR(cmd_pretrain(ctx, ModelKind::kBaseline, 0.2, dir / "x.nkws"),
                     ErrorCode::kUsage);
    NKWS_CHECK_ERROR(parse_model_kind("fancy"), ErrorCode::kUsage);
    CHECK(model_id(ModelKind::kNoiseAware, 0.6) == "noise_aware_60");

    const auto summary = cmd_pretrain(ctx, ModelKind::kBaseline, std::nullopt, dir / "base.nkws");
    CHECK(summary.epochs == 2);
    CHECK(read_csv(dir / "base.nkws.log.csv").rows.size() == 2);
    CHECK(fs::exists(dir / "base.nkws.manifest.json"));
    const auto base = nn::load_weights(dir / "base.nkws");
    CHECK(base.provenance.at("model_id") == "baseline");
    CHECK(base.arch == ctx.profile.arch);
    CHECK(any_contains(log, "epoch 2"));

    const auto noisy = cmd_pretrain(ctx, ModelKind::kNoiseAware, 1.0, dir / "na.nkws");
    CHECK(noisy.model_id == "noise_aware_100");

    AdaptRequest req;
    CHECK(req.shots == 1);
    CHECK(req.epochs == 1);
    req.weights = dir / "base.nkws";
    req.source = "street_music";
    req.snr_db = -3;
    req.seed = 4;
    cmd_adapt(ctx, req, dir / "adapted.nkws");
    const auto adapted = nn::load_weights(dir / "adapted.nkws");
    CHECK(adapted.provenance.at("noise_source") == "street_music");
    CHECK(adapted.provenance.at("snr_db") == "-3");
    CHECK(adapted.provenance.at("shots") == "1");
    CHECK(adapted.provenance.at("epochs") == "1");
    CHECK(adapted.provenance.at("seed") == "4");
    // One shot of each of the four active classes.
    CHECK(adapted.provenance.at("steps") == "4");
    CHECK(adapted.provenance.at("source") == "baseline");
    CHECK(adapted.provenance.at("base_checksum") ==
          hex32(nn::stored_checksum(read_file_bytes(dir / "base.nkws"))));
    for (std::size_t i = 0; i + 2 < adapted.params.tensors.size(); ++i) {
      CHECK(adapted.params.tensors[i] == base.params.tensors[i]);
    }

    req.shots = 6;
    NKWS_CHECK_ERROR(cmd_adapt(ctx, req, dir / "bad.nkws"), ErrorCode::kUsage);
    req.shots = 1;
    req.epochs = 0;
    NKWS_CHECK_ERROR(cmd_adapt(ctx, req, dir / "bad.nkws"), ErrorCode::kUsage);
    req.epochs = 1;
    req.snr_db = 5;
    NKWS_CHECK_ERROR(cmd_adapt(ctx, req, dir / "bad.nkws"), ErrorCode::kUsage);

    const auto conditions = parse_conditions("clean,car_horn");
    REQUIRE(conditions.size() == 11);
    const auto rows = cmd_evaluate(ctx, dir / "base.nkws", conditions, dir / "eval.csv");
    REQUIRE(rows.size() == 11);
    const auto table = read_csv(dir / "eval.csv");
    CHECK(format_csv(CsvTable{table.header, {}}) == std::string(train::kEvalReportHeader) + "\n");
    CHECK(table.rows.size() == 11);
    CHECK(table.rows[0][1] == "clean");
    CHECK(table.rows[0][2].empty());
    CHECK(table.rows[3][1] == "car_horn");

    // Direct library evaluation of the same condition.
    const auto index = load_index(ctx);
    data::ClipLoader loader(index.root, std::make_shared<data::NoiseBank>(ctx.resolved_noise_dir()));
    dsp::LogMelFrontend fe;
    const train::DataInputs in{index, loader, fe, ctx.profile.data};
    const auto direct = train::evaluate(
        base.params, base.arch,
        train::condition_features(in, data::Split::kTest, data::make_condition("car_horn", 6), ctx.seed));
    const auto it = std::find_if(rows.begin(), rows.end(), [](const train::EvalRow& r) {
      return r.noise_source == "car_horn" && r.snr_db == 6;
    });
    REQUIRE(it != rows.end());
    CHECK(it->accuracy == direct.accuracy);
    CHECK(it->n_examples == direct.n_examples);
    const auto clean = train::evaluate(base.params, base.arch,
                                       train::clean_features(in, data::Split::kTest, ctx.seed));
    CHECK(rows[0].accuracy == clean.accuracy);

    NKWS_CHECK_ERROR(parse_conditions("car_horn@7"), ErrorCode::kUsage);
    NKWS_CHECK_ERROR(parse_conditions("thunder"), ErrorCode::kUsage);
  }

  TEST_CASE("experiment grids") {
    testing::TempDir dir;
    std::vector<std::string> log;
    const auto ctx = small_context(&log);
    ExperimentOptions opts;
    opts.work_dir = dir / "models";

    const auto fig5 = cmd_experiment(ctx, "fig5", {{3}, {}, opts.work_dir}, dir / "fig5.csv");
    CHECK(fig5.size() == 3 * 2 * 10 * 2);
    std::set<std::string> models;
    for (const auto& r : fig5) {
      models.insert(r.model_id);
      CHECK(r.seed == 3);
      CHECK(r.shots == 1);
      CHECK(r.epochs == 1);
    }
    CHECK(models == std::set<std::string>{"baseline", "noise_aware_100"});
    const auto parsed = parse_figure_table(read_csv(dir / "fig5.csv"));
    REQUIRE(parsed.size() == fig5.size());
    for (std::size_t i = 0; i < parsed.size(); ++i) {
      auto a = parsed[i];
      CHECK(std::abs(a.accuracy - fig5[i].accuracy) < 5e-7);
      a.accuracy = fig5[i].accuracy;
      CHECK(a == fig5[i]);
    }

    // Cached models are reused and the rows reproduce exactly.
    log.clear();
    cmd_experiment(ctx, "fig5", {{3}, {}, opts.work_dir}, dir / "fig5b.csv");
    CHECK(any_contains(log, "reusing"));
    CHECK(read_file_bytes(dir / "fig5.csv") == read_file_bytes(dir / "fig5b.csv"));

    const auto fig6 = cmd_experiment(ctx, "fig6", {{1, 2}, {0}, opts.work_dir}, dir / "fig6.csv");
    // 3 sources x 1 SNR x 2 shot counts x 2 seeds x (5 epochs + before).
    CHECK(fig6.size() == 3 * 1 * 2 * 2 * 6);
    for (const auto& r : fig6) {
      CHECK(r.train_snr_db == 0);
      CHECK(r.test_snr_db == 0);
    }

    const auto fig3 = cmd_experiment(ctx, "fig3", {{1}, {}, opts.work_dir}, dir / "fig3.csv");
    CHECK(fig3.size() == 5 * 6 * 10);
    std::set<std::string> fractions, sources;
    for (const auto& r : fig3) {
      fractions.insert(r.model_id);
      sources.insert(r.noise_source);
      CHECK_FALSE(r.shots.has_value());
    }
    CHECK(fractions.size() == 5);
    CHECK(sources == std::set<std::string>{"white", "pink", "babble", "office", "kitchen",
                                           "living_room"});

    NKWS_CHECK_ERROR(cmd_experiment(ctx, "fig9", opts, dir / "x.csv"), ErrorCode::kUsage);
  }

  TEST_CASE("paper profile warns and keeps 50 epochs") {
    testing::TempDir dir;
    std::vector<std::string> log;
    Context ctx;
    ctx.data_root = testing::tiny_corpus();
    ctx.profile = make_profile("paper");
    ctx.profile.apply(KvConfig::parse(
        "arch.channels = 2,2,2,2,2\n"
        "data.max_train_per_class = 1\n"
        "data.max_val_per_class = 1\n"
        "data.max_test_per_class = 1\n"));
    ctx.log = [&log](const std::string& s) { log.push_back(s); };
    cmd_pretrain(ctx, ModelKind::kBaseline, std::nullopt, dir / "p.nkws");
    CHECK(any_contains(log, "warning"));
    CHECK(read_csv(dir / "p.nkws.log.csv").rows.size() == 50);

    log.clear();
    const auto rows = cmd_experiment(ctx, "fig4", {{}, {}, dir / "models"}, dir / "fig4.csv");
    CHECK(any_contains(log, "long-running"));
    CHECK(rows.size() == 2 * 6 * 10);
  }
}

}  // namespace nkws::bench
