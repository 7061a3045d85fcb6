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

#include "noisekws/noisekws.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "bench/commands.hpp"
#include "common/error.hpp"
#include "common/kv_config.hpp"
#include "dataset/labels.hpp"
#include "dsp/frontend.hpp"
#include "dsp/wav.hpp"
#include "json.hpp"
#include "nn/weights_io.hpp"
#include "train/trainer.hpp"

struct nkws_model {
  nkws::nn::WeightFile file;
};

struct nkws_session {
  std::string data_root;
  std::string noise_dir;
  std::string manifest;
  std::string profile = "desk";
  std::uint64_t seed = 1;
  nkws::KvConfig file_config;
  nkws::KvConfig overrides;
  std::vector<std::string> args;
  nkws_log_fn log = nullptr;
  void* log_user = nullptr;
};

namespace {

thread_local std::string g_last_error;

nkws_status to_status(nkws::ErrorCode code) {
  return static_cast<nkws_status>(static_cast<int>(code) + 1);
}

template <typename F>
nkws_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return NKWS_OK;
  } catch (const nkws::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return NKWS_ERR_INTERNAL;
  } catch (const std::filesystem::filesystem_error& e) {
    g_last_error = e.what();
    return NKWS_ERR_IO;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return NKWS_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) nkws::fail(nkws::ErrorCode::kInvalidArgument, std::string(what) + " is NULL");
}

const nkws::dsp::LogMelFrontend& shared_frontend() {
  static const nkws::dsp::LogMelFrontend frontend;
  return frontend;
}

// One-second clip, zero-padded or trimmed like corpus examples.
nkws::dsp::AudioClip load_clip(const char* path) {
  return nkws::dsp::pad_or_trim(nkws::dsp::read_wav(path), nkws::dsp::kClipSamples);
}

nkws::bench::Context make_context(const nkws_session& s) {
  nkws::bench::Context ctx;
  ctx.data_root = s.data_root;
  ctx.noise_dir = s.noise_dir;
  ctx.manifest = s.manifest;
  ctx.profile = nkws::bench::make_profile(s.profile);
  nkws::KvConfig cfg = s.file_config;
  cfg.merge(s.overrides);
  ctx.profile.apply(cfg);
  ctx.seed = s.seed;
  ctx.args = s.args;
  if (s.log) {
    ctx.log = [fn = s.log, user = s.log_user](const std::string& m) { fn(m.c_str(), user); };
  }
  return ctx;
}

std::vector<std::uint64_t> parse_seeds(const char* text) {
  std::vector<std::uint64_t> out;
  if (!text) return out;
  for (const auto& t : nkws::split_list(text)) {
    const long long v = nkws::parse_int(t, "seed");
    if (v < 0) nkws::fail(nkws::ErrorCode::kUsage, "seeds must be >= 0");
    out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

}  // namespace

extern "C" {

const char* nkws_version(void) { return NOISEKWS_VERSION_STRING; }

const char* nkws_status_name(nkws_status status) {
  if (status == NKWS_OK) return "Ok";
  if (status < NKWS_OK || status > NKWS_ERR_INTERNAL) return "Unknown";
  return nkws::error_code_name(static_cast<nkws::ErrorCode>(static_cast<int>(status) - 1));
}

const char* nkws_last_error(void) { return g_last_error.c_str(); }

const char* nkws_class_name(int index) {
  if (index < 0 || index >= nkws::data::kNumClasses) return nullptr;
  return nkws::data::kClassNames[static_cast<std::size_t>(index)].data();
}

nkws_status nkws_log_mel_from_wav(const char* wav_path, float* out, size_t capacity) {
  return guarded([&] {
    require(wav_path, "wav_path");
    require(out, "out");
    const auto spec = shared_frontend().compute(load_clip(wav_path));
    if (capacity < spec.values.size()) {
      nkws::fail(nkws::ErrorCode::kInvalidArgument,
                 "output buffer holds " + std::to_string(capacity) + " floats, need " +
                     std::to_string(spec.values.size()));
    }
    std::memcpy(out, spec.values.data(), spec.values.size() * sizeof(float));
  });
}

nkws_status nkws_write_spectrogram(const char* wav_path, const char* out_path) {
  return guarded([&] {
    require(wav_path, "wav_path");
    require(out_path, "out_path");
    nkws::dsp::write_spectrogram(out_path, shared_frontend().compute(load_clip(wav_path)));
  });
}

nkws_status nkws_model_load(const char* path, nkws_model** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    auto model = std::make_unique<nkws_model>();
    model->file = nkws::nn::load_weights(path);
    *out = model.release();
  });
}

nkws_status nkws_model_save(const nkws_model* model, const char* path) {
  return guarded([&] {
    require(model, "model");
    require(path, "path");
    nkws::nn::save_weights(model->file.params, model->file.arch, path, model->file.provenance);
  });
}

void nkws_model_free(nkws_model* model) { delete model; }

nkws_status nkws_model_describe(const nkws_model* model, char* buf, size_t capacity,
                                size_t* needed) {
  return guarded([&] {
    require(model, "model");
    const nlohmann::json j = {
        {"arch", nlohmann::json::parse(nkws::nn::arch_to_json(model->file.arch))},
        {"provenance", model->file.provenance},
        {"parameters", model->file.params.total_values()}};
    const std::string text = j.dump();
    if (needed) *needed = text.size() + 1;
    if (buf && capacity > 0) {
      const std::size_t n = std::min(capacity - 1, text.size());
      std::memcpy(buf, text.data(), n);
      buf[n] = '\0';
    }
  });
}

nkws_status nkws_model_classify_wav(const nkws_model* model, const char* wav_path,
                                    int* class_index, float* logits) {
  return guarded([&] {
    require(model, "model");
    require(wav_path, "wav_path");
    nkws::train::FeatureSet set;
    set.append(shared_frontend().compute(load_clip(wav_path)), 0);
    const auto out = nkws::nn::model_forward(model->file.params, model->file.arch, set.all());
    if (logits) std::memcpy(logits, out.data(), out.size() * sizeof(float));
    if (class_index) *class_index = nkws::train::argmax_class(out.values());
  });
}

nkws_status nkws_session_create(nkws_session** out) {
  return guarded([&] {
    require(out, "out");
    *out = new nkws_session();
  });
}

void nkws_session_free(nkws_session* session) { delete session; }

nkws_status nkws_session_set(nkws_session* session, const char* key, const char* value) {
  return guarded([&] {
    require(session, "session");
    require(key, "key");
    require(value, "value");
    const std::string k = key;
    if (k == "data_root") {
      session->data_root = value;
    } else if (k == "noise_dir") {
      session->noise_dir = value;
    } else if (k == "manifest") {
      session->manifest = value;
    } else if (k == "profile") {
      nkws::bench::make_profile(value);
      session->profile = value;
    } else if (k == "seed") {
      const long long v = nkws::parse_int(value, "seed");
      if (v < 0) nkws::fail(nkws::ErrorCode::kUsage, "seed must be >= 0");
      session->seed = static_cast<std::uint64_t>(v);
    } else if (k == "config") {
      session->file_config = nkws::KvConfig::load(value);
    } else if (k == "arg") {
      session->args.emplace_back(value);
    } else if (k.rfind("config.", 0) == 0) {
      session->overrides.set(k.substr(7), value);
    } else {
      nkws::fail(nkws::ErrorCode::kInvalidArgument, "unknown session key '" + k + "'");
    }
  });
}

nkws_status nkws_session_set_log(nkws_session* session, nkws_log_fn fn, void* user) {
  return guarded([&] {
    require(session, "session");
    session->log = fn;
    session->log_user = user;
  });
}

nkws_status nkws_prepare(nkws_session* session, const char* out_manifest, size_t* rows) {
  return guarded([&] {
    require(session, "session");
    require(out_manifest, "out_manifest");
    const std::size_t n = nkws::bench::cmd_prepare(make_context(*session), out_manifest);
    if (rows) *rows = n;
  });
}

nkws_status nkws_pretrain(nkws_session* session, const char* kind, double fraction,
                          const char* out_weights) {
  return guarded([&] {
    require(session, "session");
    require(kind, "kind");
    require(out_weights, "out_weights");
    std::optional<double> f;
    if (!std::isnan(fraction)) f = fraction;
    nkws::bench::cmd_pretrain(make_context(*session), nkws::bench::parse_model_kind(kind), f,
                              out_weights);
  });
}

nkws_status nkws_adapt(nkws_session* session, const char* weights, const char* source,
                       int snr_db, int shots, int epochs, uint64_t seed,
                       const char* out_weights) {
  return guarded([&] {
    require(session, "session");
    require(weights, "weights");
    require(source, "source");
    require(out_weights, "out_weights");
    nkws::bench::AdaptRequest request;
    request.weights = weights;
    request.source = source;
    request.snr_db = snr_db;
    request.shots = shots;
    request.epochs = epochs;
    request.seed = seed;
    nkws::bench::cmd_adapt(make_context(*session), request, out_weights);
  });
}

nkws_status nkws_evaluate(nkws_session* session, const char* weights, const char* conditions,
                          const char* out_csv, size_t* rows) {
  return guarded([&] {
    require(session, "session");
    require(weights, "weights");
    require(conditions, "conditions");
    require(out_csv, "out_csv");
    const auto result = nkws::bench::cmd_evaluate(
        make_context(*session), weights, nkws::bench::parse_conditions(conditions), out_csv);
    if (rows) *rows = result.size();
  });
}

nkws_status nkws_experiment(nkws_session* session, const char* figure_id, const char* seeds,
                            const char* snrs, const char* work_dir, const char* out_csv,
                            size_t* rows) {
  return guarded([&] {
    require(session, "session");
    require(figure_id, "figure_id");
    require(out_csv, "out_csv");
    nkws::bench::ExperimentOptions options;
    options.seeds = parse_seeds(seeds);
    if (snrs) {
      for (const auto& t : nkws::split_list(snrs)) {
        options.snrs.push_back(static_cast<int>(nkws::parse_int(t, "snr")));
      }
    }
    if (work_dir) options.work_dir = work_dir;
    const auto result =
        nkws::bench::cmd_experiment(make_context(*session), figure_id, options, out_csv);
    if (rows) *rows = result.size();
  });
}

nkws_status nkws_synth_corpus(const char* root, const char* noise_dir, uint64_t seed,
                              size_t keyword_clips, size_t other_clips) {
  return guarded([&] {
    require(root, "root");
    nkws::data::SynthCorpusConfig cfg;
    cfg.seed = seed;
    if (keyword_clips) cfg.keyword_clips = keyword_clips;
    if (other_clips) cfg.other_clips = other_clips;
    nkws::bench::cmd_synth(root, noise_dir ? noise_dir : "", cfg);
  });
}

}  // extern "C"
