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

// noisekws: prepare data, pretrain, adapt and evaluate keyword-spotting
// models, and regenerate experiment tables.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "noisekws/noisekws.h"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitFailure = 1;

struct Common {
  std::string config;
  std::string profile = "desk";
  std::string data_root;
  std::string noise_dir;
  std::string manifest;
  std::string out;
  std::uint64_t seed = 1;
  bool quiet = false;
};

void log_to_stderr(const char* message, void*) { std::fprintf(stderr, "%s\n", message); }

int report(nkws_status status) {
  if (status == NKWS_OK) return 0;
  std::fprintf(stderr, "noisekws: %s: %s\n", nkws_status_name(status), nkws_last_error());
  return status == NKWS_ERR_USAGE ? kExitUsage : kExitFailure;
}

class Session {
 public:
  Session() { status_ = nkws_session_create(&handle_); }
  ~Session() { nkws_session_free(handle_); }
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  nkws_status configure(const Common& c, int argc, char** argv) {
    if (status_ != NKWS_OK) return status_;
    std::string root = c.data_root;
    if (root.empty()) {
      if (const char* env = std::getenv("NOISEKWS_DATA_ROOT")) root = env;
    }
    const std::pair<const char*, std::string> settings[] = {
        {"profile", c.profile}, {"seed", std::to_string(c.seed)}, {"data_root", root},
        {"noise_dir", c.noise_dir}, {"manifest", c.manifest}};
    for (const auto& [key, value] : settings) {
      if (const auto s = nkws_session_set(handle_, key, value.c_str()); s != NKWS_OK) return s;
    }
    if (!c.config.empty()) {
      if (const auto s = nkws_session_set(handle_, "config", c.config.c_str()); s != NKWS_OK) {
        return s;
      }
    }
    for (int i = 0; i < argc; ++i) nkws_session_set(handle_, "arg", argv[i]);
    if (!c.quiet) nkws_session_set_log(handle_, log_to_stderr, nullptr);
    return NKWS_OK;
  }

  nkws_session* get() { return handle_; }

 private:
  nkws_session* handle_ = nullptr;
  nkws_status status_ = NKWS_OK;
};

const char* or_null(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noise-robust keyword spotting: pretraining and few-shot on-site adaptation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(nkws_version()));

  Common common;
  app.add_option("--config", common.config, "key = value file overriding profile settings");
  app.add_option("--profile", common.profile, "Experiment profile")
      ->check(CLI::IsMember({"paper", "desk"}));
  app.add_option("--seed", common.seed, "Base seed");
  app.add_option("--data-root", common.data_root,
                 "Speech Commands root (default: $NOISEKWS_DATA_ROOT)");
  app.add_option("--noise-dir", common.noise_dir,
                 "Directory of <source>.wav noise recordings (default: <data-root>/_noise_sources_)");
  app.add_option("--manifest", common.manifest, "Prepared corpus manifest to use instead of a scan");
  app.add_option("--out", common.out, "Output path");
  app.add_flag("-q,--quiet", common.quiet, "Suppress progress messages");
  app.fallthrough();

  auto* prepare = app.add_subcommand("prepare", "Scan the corpus and write its split manifest");

  auto* pretrain = app.add_subcommand("pretrain", "Train a baseline or noise-aware model");
  std::string kind;
  double fraction = NAN;
  pretrain->add_option("--kind", kind, "baseline or noise-aware")
      ->required()
      ->check(CLI::IsMember({"baseline", "noise-aware"}));
  pretrain->add_option("--fraction", fraction, "Extra noisy fraction for noise-aware: 0.2..1.0");

  auto* adapt = app.add_subcommand("adapt", "Fine-tune the fc layer to an on-site noise condition");
  std::string weights;
  std::string source;
  int snr = 0;
  int shots = 1;
  int epochs = 1;
  std::uint64_t adapt_seed = 0;
  adapt->add_option("--weights", weights, "Pretrained weight file")->required();
  adapt->add_option("--source", source, "Noise source")->required();
  adapt->add_option("--snr", snr, "SNR in dB (-3..24, step 3)")->required();
  adapt->add_option("--shots", shots, "Examples per class (1..5)");
  adapt->add_option("--epochs", epochs, "Passes over the shots (1..5)");
  auto* adapt_seed_opt = adapt->add_option("--adapt-seed", adapt_seed, "Shot sampling seed (default: --seed)");

  auto* evaluate = app.add_subcommand("evaluate", "Score a model on clean and noisy test sets");
  std::string conditions = "clean";
  evaluate->add_option("--weights", weights, "Weight file")->required();
  evaluate->add_option("--conditions", conditions,
                       "Comma list of clean, <source> (all SNRs) or <source>@<snr>");

  auto* experiment = app.add_subcommand("experiment", "Regenerate a figure's accuracy table");
  std::string figure;
  std::string seeds;
  std::string snrs;
  std::string work_dir;
  experiment->add_option("--figure", figure, "fig3, fig4, fig5 or fig6")
      ->required()
      ->check(CLI::IsMember({"fig3", "fig4", "fig5", "fig6"}));
  experiment->add_option("--seeds", seeds, "Comma list of seeds");
  experiment->add_option("--snrs", snrs, "Comma list of adaptation SNRs (fig6)");
  experiment->add_option("--work-dir", work_dir, "Cache for pretrained models");

  auto* synth = app.add_subcommand("synth", "Write a synthetic corpus in the Speech Commands layout");
  std::size_t keyword_clips = 0;
  std::size_t other_clips = 0;
  synth->add_option("--keyword-clips", keyword_clips, "Clips per keyword folder");
  synth->add_option("--other-clips", other_clips, "Clips per other-word folder");

  auto* spectrogram = app.add_subcommand("spectrogram", "Dump the log-mel spectrogram of a WAV");
  std::string wav;
  spectrogram->add_option("--wav", wav, "Input WAV")->required();

  auto* classify = app.add_subcommand("classify", "Classify one WAV clip");
  classify->add_option("--weights", weights, "Weight file")->required();
  classify->add_option("--wav", wav, "Input WAV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  const auto need_out = [&common](const char* what) {
    if (common.out.empty()) {
      std::fprintf(stderr, "noisekws: %s needs --out\n", what);
      return false;
    }
    return true;
  };

  if (*spectrogram) {
    if (!need_out("spectrogram")) return kExitUsage;
    return report(nkws_write_spectrogram(wav.c_str(), common.out.c_str()));
  }
  if (*classify) {
    nkws_model* model = nullptr;
    if (const auto s = nkws_model_load(weights.c_str(), &model); s != NKWS_OK) return report(s);
    int label = 0;
    float logits[NKWS_NUM_CLASSES];
    const auto s = nkws_model_classify_wav(model, wav.c_str(), &label, logits);
    nkws_model_free(model);
    if (s != NKWS_OK) return report(s);
    std::printf("%s\n", nkws_class_name(label));
    return 0;
  }
  if (*synth) {
    std::string root = common.data_root;
    if (root.empty()) {
      if (const char* env = std::getenv("NOISEKWS_DATA_ROOT")) root = env;
    }
    if (root.empty()) {
      std::fprintf(stderr, "noisekws: synth needs --data-root\n");
      return kExitUsage;
    }
    return report(nkws_synth_corpus(root.c_str(), or_null(common.noise_dir), common.seed,
                                    keyword_clips, other_clips));
  }

  Session session;
  if (const auto s = session.configure(common, argc, argv); s != NKWS_OK) return report(s);

  if (*prepare) {
    if (!need_out("prepare")) return kExitUsage;
    size_t rows = 0;
    const auto s = nkws_prepare(session.get(), common.out.c_str(), &rows);
    if (s == NKWS_OK && !common.quiet) std::fprintf(stderr, "wrote %zu manifest rows\n", rows);
    return report(s);
  }
  if (*pretrain) {
    if (!need_out("pretrain")) return kExitUsage;
    return report(nkws_pretrain(session.get(), kind.c_str(), fraction, common.out.c_str()));
  }
  if (*adapt) {
    if (!need_out("adapt")) return kExitUsage;
    const std::uint64_t seed = adapt_seed_opt->count() ? adapt_seed : common.seed;
    return report(nkws_adapt(session.get(), weights.c_str(), source.c_str(), snr, shots, epochs,
                             seed, common.out.c_str()));
  }
  if (*evaluate) {
    if (!need_out("evaluate")) return kExitUsage;
    return report(nkws_evaluate(session.get(), weights.c_str(), conditions.c_str(),
                                common.out.c_str(), nullptr));
  }
  if (*experiment) {
    if (!need_out("experiment")) return kExitUsage;
    size_t rows = 0;
    const auto s = nkws_experiment(session.get(), figure.c_str(), or_null(seeds), or_null(snrs),
                                   or_null(work_dir), common.out.c_str(), &rows);
    if (s == NKWS_OK && !common.quiet) std::fprintf(stderr, "wrote %zu rows\n", rows);
    return report(s);
  }
  return kExitUsage;
}
