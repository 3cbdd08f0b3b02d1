// src/eval.cc

// Copyright 2026  The BAM Toolkit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABILITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "bam/eval.h"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <tuple>

#include "json.hpp"

#include "bam/audio_ops.h"
#include "bam/corpus.h"
#include "bam/gammatone.h"
#include "bam/ins.h"
#include "bam/rng.h"
#include "bam/stoi.h"
#include "bam/wav_io.h"

namespace bam {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

const char *const kKnownMethods[] = {"unp", "bam", "ibm", "tbm"};
const char *const kKnownMetrics[] = {"stoi", "stoi_norm", "ins"};

bool contains(const char *const *names, std::size_t n, const std::string &s) {
  for (std::size_t i = 0; i < n; ++i) {
    if (s == names[i]) return true;
  }
  return false;
}

std::uint64_t fnv1a(const std::string &s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string file_stem(const std::string &path) {
  return fs::path(path).stem().string();
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_snr(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// Minimal CSV quoting: only failure statuses ever need it.
std::string csv_field(const std::string &s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_text_file(const std::string &path, const std::string &text) {
  const fs::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

// Per-row seeds hang off the experiment seed and the row's identity, never
// off evaluation order, so any subset of the grid reproduces the full run's
// numbers.
std::uint64_t row_seed(std::uint64_t seed, const std::string &tag,
                       double snr_db) {
  return Rng::derive(seed, fnv1a(tag) ^ std::bit_cast<std::uint64_t>(snr_db));
}

std::uint64_t name_seed(std::uint64_t seed, const std::string &tag) {
  return Rng::derive(seed, fnv1a(tag));
}

template <typename T>
T get_as(const json &j, const std::string &key, const char *what) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception &e) {
    throw ArgError(std::string("config field '") + key + "' (" + what +
                   "): " + e.what());
  }
}

void check_keys(const json &j, const std::string &where,
                std::initializer_list<const char *> allowed) {
  for (const auto &item : j.items()) {
    bool ok = false;
    for (const char *k : allowed) {
      if (item.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw ArgError("unknown config key '" + item.key() + "' in " + where);
    }
  }
}

}  // namespace

ExperimentConfig load_config(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error &e) {
    throw FormatError("config is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw FormatError("config root must be a JSON object");

  check_keys(j, "config",
             {"clean_dir", "noise_files", "snrs_db", "methods", "metrics",
              "seed", "output_dir", "params", "synthesize_corpus"});

  ExperimentConfig c;
  c.clean_dir = get_as<std::string>(j, "clean_dir", "string");
  if (j.contains("noise_files")) {
    c.noise_files =
        get_as<std::vector<std::string>>(j, "noise_files", "string list");
  }
  c.snrs_db = get_as<std::vector<double>>(j, "snrs_db", "number list");
  c.methods = get_as<std::vector<std::string>>(j, "methods", "string list");
  c.metrics = get_as<std::vector<std::string>>(j, "metrics", "string list");
  if (j.contains("seed")) c.seed = get_as<std::uint64_t>(j, "seed", "integer");
  c.output_dir = get_as<std::string>(j, "output_dir", "string");

  if (j.contains("params")) {
    const json &p = j.at("params");
    if (!p.is_object()) throw FormatError("config 'params' must be an object");
    check_keys(p, "params",
               {"alpha", "beta", "frame_ms", "normalize", "rc_db", "coverage",
                "ins_surrogates", "bank_channels", "bank_f_lo_hz",
                "bank_f_hi_hz"});
    if (p.contains("alpha")) c.bam.alpha = get_as<double>(p, "alpha", "number");
    if (p.contains("beta")) c.bam.beta = get_as<double>(p, "beta", "number");
    if (p.contains("frame_ms"))
      c.bam.frame_ms = get_as<double>(p, "frame_ms", "number");
    if (p.contains("normalize"))
      c.bam.normalize = get_as<bool>(p, "normalize", "bool");
    if (p.contains("rc_db")) c.ibm_rc_db = get_as<double>(p, "rc_db", "number");
    if (p.contains("coverage"))
      c.tbm_coverage = get_as<double>(p, "coverage", "number");
    if (p.contains("ins_surrogates"))
      c.ins_surrogates = get_as<int>(p, "ins_surrogates", "integer");
    if (p.contains("bank_channels"))
      c.bank_channels = get_as<int>(p, "bank_channels", "integer");
    if (p.contains("bank_f_lo_hz"))
      c.bank_f_lo_hz = get_as<double>(p, "bank_f_lo_hz", "number");
    if (p.contains("bank_f_hi_hz"))
      c.bank_f_hi_hz = get_as<double>(p, "bank_f_hi_hz", "number");
  }

  if (j.contains("synthesize_corpus")) {
    const json &s = j.at("synthesize_corpus");
    if (!s.is_object())
      throw FormatError("config 'synthesize_corpus' must be an object");
    check_keys(s, "synthesize_corpus",
               {"utterances", "utterance_seconds", "sample_rate", "noises",
                "noise_seconds", "noise_dir"});
    if (s.contains("utterances"))
      c.synthesize.n_utterances = get_as<int>(s, "utterances", "integer");
    if (s.contains("utterance_seconds"))
      c.synthesize.utterance_seconds =
          get_as<double>(s, "utterance_seconds", "number");
    if (s.contains("sample_rate"))
      c.synthesize.sample_rate = get_as<int>(s, "sample_rate", "integer");
    if (s.contains("noises"))
      c.synthesize.noises =
          get_as<std::vector<std::string>>(s, "noises", "string list");
    if (s.contains("noise_seconds"))
      c.synthesize.noise_seconds = get_as<double>(s, "noise_seconds", "number");
    if (s.contains("noise_dir"))
      c.synthesize.noise_dir = get_as<std::string>(s, "noise_dir", "string");
  }

  validate_config(c);
  return c;
}

void validate_config(const ExperimentConfig &config) {
  if (config.clean_dir.empty()) throw ArgError("config: clean_dir required");
  if (config.output_dir.empty()) throw ArgError("config: output_dir required");
  if (config.snrs_db.empty()) throw ArgError("config: snrs_db must be non-empty");
  if (config.methods.empty()) throw ArgError("config: methods must be non-empty");
  if (config.metrics.empty()) throw ArgError("config: metrics must be non-empty");
  for (const auto &m : config.methods) {
    if (!contains(kKnownMethods, 4, m))
      throw ArgError("config: unknown method '" + m + "'");
    if (std::count(config.methods.begin(), config.methods.end(), m) > 1)
      throw ArgError("config: duplicate method '" + m + "'");
  }
  for (const auto &m : config.metrics) {
    if (!contains(kKnownMetrics, 3, m))
      throw ArgError("config: unknown metric '" + m + "'");
    if (std::count(config.metrics.begin(), config.metrics.end(), m) > 1)
      throw ArgError("config: duplicate metric '" + m + "'");
  }
  if (config.noise_files.empty() && config.synthesize.noises.empty())
    throw ArgError("config: no noise_files and nothing to synthesize");
  if (!config.synthesize.noises.empty() && config.synthesize.noise_dir.empty())
    throw ArgError("config: synthesize_corpus.noise_dir required");
  for (const auto &n : config.synthesize.noises) {
    if (n != "babble" && n != "factory")
      throw ArgError("config: unknown noise surrogate '" + n + "'");
  }
  if (config.synthesize.n_utterances < 0)
    throw ArgError("config: utterances must be >= 0");
  if (config.synthesize.enabled() &&
      (config.synthesize.utterance_seconds <= 0 ||
       config.synthesize.noise_seconds <= 0 ||
       config.synthesize.sample_rate <= 0))
    throw ArgError("config: synthesis durations and rate must be positive");
  if (config.bam.alpha < 0 || config.bam.beta < 0 || config.bam.beta > 1 ||
      config.bam.frame_ms <= 0)
    throw ArgError("config: bad bam params");
  if (config.tbm_coverage <= 0 || config.tbm_coverage > 1)
    throw ArgError("config: coverage must be in (0, 1]");
  if (config.ins_surrogates < 20)
    throw ArgError("config: ins_surrogates must be >= 20");
  if (config.bank_channels < 2 || config.bank_f_lo_hz <= 0 ||
      config.bank_f_hi_hz <= config.bank_f_lo_hz)
    throw ArgError("config: bad filterbank settings");
}

std::string config_fingerprint(const ExperimentConfig &config) {
  // Canonical field order + explicit separators; every field participates.
  std::ostringstream os;
  os << "clean_dir=" << config.clean_dir << '\n';
  os << "noise_files=";
  for (const auto &p : config.noise_files) os << p << '|';
  os << '\n';
  os << "snrs_db=";
  for (double s : config.snrs_db) os << fmt17(s) << '|';
  os << '\n';
  os << "methods=";
  for (const auto &m : config.methods) os << m << '|';
  os << '\n';
  os << "metrics=";
  for (const auto &m : config.metrics) os << m << '|';
  os << '\n';
  os << "seed=" << config.seed << '\n';
  os << "output_dir=" << config.output_dir << '\n';
  os << "alpha=" << fmt17(config.bam.alpha) << '\n';
  os << "beta=" << fmt17(config.bam.beta) << '\n';
  os << "frame_ms=" << fmt17(config.bam.frame_ms) << '\n';
  os << "normalize=" << (config.bam.normalize ? 1 : 0) << '\n';
  os << "rc_db=" << fmt17(config.ibm_rc_db) << '\n';
  os << "coverage=" << fmt17(config.tbm_coverage) << '\n';
  os << "ins_surrogates=" << config.ins_surrogates << '\n';
  os << "bank=" << config.bank_channels << ',' << fmt17(config.bank_f_lo_hz)
     << ',' << fmt17(config.bank_f_hi_hz) << '\n';
  os << "synth=" << config.synthesize.n_utterances << ','
     << fmt17(config.synthesize.utterance_seconds) << ','
     << config.synthesize.sample_rate << ','
     << fmt17(config.synthesize.noise_seconds) << ','
     << config.synthesize.noise_dir << ',';
  for (const auto &n : config.synthesize.noises) os << n << '|';
  os << '\n';

  const std::uint64_t h = fnv1a(os.str());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

ExperimentConfig synthesize_corpus(const ExperimentConfig &config) {
  ExperimentConfig out = config;
  const SynthesisSpec &sy = config.synthesize;
  if (!sy.enabled()) return out;

  if (sy.n_utterances > 0) {
    fs::create_directories(config.clean_dir);
    for (int i = 1; i <= sy.n_utterances; ++i) {
      // Seeds are small fixed offsets from the experiment seed so the
      // default config regenerates the same bundled corpus every time.
      const AudioBuffer utt = corpus::utterance(
          config.seed + static_cast<std::uint64_t>(i), sy.utterance_seconds,
          sy.sample_rate);
      char name[32];
      std::snprintf(name, sizeof(name), "utt%02d.wav", i);
      write_wav((fs::path(config.clean_dir) / name).string(), utt,
                WavFormat::kFloat32);
    }
  }
  for (const auto &n : sy.noises) {
    fs::create_directories(sy.noise_dir);
    AudioBuffer nz;
    if (n == "babble") {
      nz = corpus::babble(config.seed + 900, sy.noise_seconds, sy.sample_rate);
    } else if (n == "factory") {
      nz = corpus::factory(config.seed + 901, sy.noise_seconds, sy.sample_rate);
    } else {
      throw ArgError("unknown noise surrogate: " + n);
    }
    const std::string path = (fs::path(sy.noise_dir) / (n + ".wav")).string();
    write_wav(path, nz, WavFormat::kFloat32);
    out.noise_files.push_back(path);
  }
  return out;
}

namespace {

// Everything derivable from one clean utterance, computed lazily and reused
// across the noise x snr x method grid.
struct UtteranceState {
  std::string name;
  AudioBuffer clean;
  std::optional<ChannelSignals> clean_channels;
  std::optional<TFGrid> clean_grid;
  std::optional<BinaryMask> tbm_mask;  // clean vs SSN; snr-independent
  std::optional<StoiScore> norm_ref;   // clean corrupted by SSN at 10 dB
};

const ChannelSignals &clean_channels(UtteranceState &u,
                                     const GammatoneBank &bank) {
  if (!u.clean_channels) u.clean_channels = gammatone_analyze(u.clean, bank);
  return *u.clean_channels;
}

const TFGrid &clean_grid(UtteranceState &u, const GammatoneBank &bank) {
  if (!u.clean_grid) u.clean_grid = tf_energy(clean_channels(u, bank));
  return *u.clean_grid;
}

const BinaryMask &tbm_mask(UtteranceState &u, const GammatoneBank &bank,
                           const ExperimentConfig &config) {
  if (!u.tbm_mask) {
    const AudioBuffer ssn = generate_ssn(
        u.clean, u.clean.size(), name_seed(config.seed, u.name + "|tbm-ssn"));
    const TFGrid ssn_grid = tf_energy(gammatone_analyze(ssn, bank));
    u.tbm_mask =
        tbm_compute(clean_grid(u, bank), ssn_grid, config.tbm_coverage);
  }
  return *u.tbm_mask;
}

const StoiScore &norm_reference(UtteranceState &u,
                                const ExperimentConfig &config) {
  if (!u.norm_ref) {
    const AudioBuffer ssn = generate_ssn(
        u.clean, u.clean.size(), name_seed(config.seed, u.name + "|ssn-ref"));
    MixSpec spec;
    spec.snr_db = 10.0;
    u.norm_ref = stoi(u.clean, mix_at_snr(u.clean, ssn, spec).mixture);
  }
  return *u.norm_ref;
}

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<EvalRow> &rows) {
  using Key = std::tuple<std::string, double, std::string, std::string>;
  std::map<Key, std::pair<double, int>> acc;
  for (const auto &r : rows) {
    auto &slot = acc[Key(r.noise, r.snr_db, r.method, r.metric)];
    if (r.status == "ok") {
      slot.first += r.value;
      slot.second += 1;
    }
  }
  std::vector<SummaryRow> out;
  out.reserve(acc.size());
  for (const auto &[key, sum_count] : acc) {
    SummaryRow s;
    s.noise = std::get<0>(key);
    s.snr_db = std::get<1>(key);
    s.method = std::get<2>(key);
    s.metric = std::get<3>(key);
    s.count = sum_count.second;
    s.mean = s.count > 0 ? sum_count.first / s.count
                         : std::numeric_limits<double>::quiet_NaN();
    out.push_back(std::move(s));
  }
  return out;
}

EvalReport run_batch(const ExperimentConfig &config_in) {
  validate_config(config_in);
  const ExperimentConfig config = synthesize_corpus(config_in);

  if (!fs::is_directory(config.clean_dir))
    throw IoError("clean_dir is not a directory: " + config.clean_dir);
  std::vector<std::string> clean_paths;
  for (const auto &entry : fs::directory_iterator(config.clean_dir)) {
    if (entry.path().extension() == ".wav")
      clean_paths.push_back(entry.path().string());
  }
  std::sort(clean_paths.begin(), clean_paths.end());
  if (clean_paths.empty())
    throw ArgError("empty corpus: no .wav files in " + config.clean_dir);

  struct NoiseEntry {
    std::string name;
    AudioBuffer buf;
  };
  std::vector<NoiseEntry> noises;
  for (const auto &p : config.noise_files)
    noises.push_back({file_stem(p), read_wav(p)});

  // One bank per sample rate seen; construction is expensive (least-squares
  // gain calibration) and rate-specific.
  std::map<int, GammatoneBank> banks;
  auto bank_for = [&](int rate) -> const GammatoneBank & {
    auto it = banks.find(rate);
    if (it == banks.end()) {
      it = banks
               .emplace(std::piecewise_construct, std::forward_as_tuple(rate),
                        std::forward_as_tuple(config.bank_channels,
                                              config.bank_f_lo_hz,
                                              config.bank_f_hi_hz, rate))
               .first;
    }
    return it->second;
  };

  EvalReport report;
  report.seed = config.seed;
  report.config_hash = config_fingerprint(config_in);
  report.tool_version = kToolVersion;

  for (const auto &clean_path : clean_paths) {
    UtteranceState u;
    u.name = file_stem(clean_path);
    u.clean = read_wav(clean_path);

    for (const auto &noise : noises) {
      for (double snr : config.snrs_db) {
        auto fail_rows = [&](const std::string &method,
                             const std::string &why) {
          for (const auto &metric : config.metrics) {
            EvalRow r;
            r.utterance = u.name;
            r.noise = noise.name;
            r.snr_db = snr;
            r.method = method;
            r.metric = metric;
            r.value = std::numeric_limits<double>::quiet_NaN();
            r.status = "failed: " + why;
            report.rows.push_back(std::move(r));
          }
        };

        std::optional<MixResult> mix;
        std::string mix_error;
        try {
          MixSpec spec;
          spec.snr_db = snr;
          if (noise.buf.size() > u.clean.size()) {
            spec.noise_seek =
                name_seed(config.seed, u.name + "|" + noise.name + "|seek") %
                (noise.buf.size() - u.clean.size() + 1);
          }
          mix = mix_at_snr(u.clean, noise.buf, spec);
        } catch (const std::exception &e) {
          mix_error = e.what();
        }

        // The mixture's channel decomposition serves both binary masks.
        std::optional<ChannelSignals> mix_channels;
        auto mixture_channels = [&]() -> const ChannelSignals & {
          if (!mix_channels)
            mix_channels =
                gammatone_analyze(mix->mixture, bank_for(u.clean.sample_rate));
          return *mix_channels;
        };

        for (const auto &method : config.methods) {
          if (!mix) {
            fail_rows(method, mix_error);
            continue;
          }
          AudioBuffer processed;
          try {
            if (method == "unp") {
              processed = mix->mixture;
            } else if (method == "bam") {
              processed = bam_process(mix->mixture, config.bam).first;
            } else if (method == "ibm") {
              const GammatoneBank &bank = bank_for(u.clean.sample_rate);
              const TFGrid noise_grid =
                  tf_energy(gammatone_analyze(mix->scaled_noise, bank));
              const BinaryMask mask = ibm_compute(clean_grid(u, bank),
                                                  noise_grid, snr,
                                                  config.ibm_rc_db);
              processed = mask_resynthesize(mixture_channels(), mask, bank);
            } else {  // tbm
              const GammatoneBank &bank = bank_for(u.clean.sample_rate);
              processed = mask_resynthesize(mixture_channels(),
                                            tbm_mask(u, bank, config), bank);
            }
          } catch (const std::exception &e) {
            fail_rows(method, e.what());
            continue;
          }

          for (const auto &metric : config.metrics) {
            EvalRow r;
            r.utterance = u.name;
            r.noise = noise.name;
            r.snr_db = snr;
            r.method = method;
            r.metric = metric;
            try {
              if (metric == "stoi") {
                r.value = stoi(u.clean, processed).value;
              } else if (metric == "stoi_norm") {
                r.value = *stoi_normalized(u.clean, processed,
                                           norm_reference(u, config))
                               .normalized_value;
              } else {  // ins
                const std::uint64_t s = row_seed(
                    config.seed,
                    u.name + "|" + noise.name + "|" + method + "|ins", snr);
                r.value = ins_max(ins_compute(processed, ins_default_scales(),
                                              config.ins_surrogates, s));
              }
              r.status = "ok";
            } catch (const std::exception &e) {
              r.value = std::numeric_limits<double>::quiet_NaN();
              r.status = std::string("failed: ") + e.what();
            }
            report.rows.push_back(std::move(r));
          }
        }
      }
    }
  }

  std::sort(report.rows.begin(), report.rows.end(),
            [](const EvalRow &a, const EvalRow &b) {
              return std::tie(a.utterance, a.noise, a.snr_db, a.method,
                              a.metric) < std::tie(b.utterance, b.noise,
                                                   b.snr_db, b.method,
                                                   b.metric);
            });
  report.summary = summarize(report.rows);
  return report;
}

std::string report_csv_string(const EvalReport &report) {
  std::ostringstream os;
  os << "utterance,noise,snr_db,method,metric,value,status\n";
  for (const auto &r : report.rows) {
    os << csv_field(r.utterance) << ',' << csv_field(r.noise) << ','
       << fmt_snr(r.snr_db) << ',' << r.method << ',' << r.metric << ','
       << fmt17(r.value) << ',' << csv_field(r.status) << '\n';
  }
  return os.str();
}

void write_report_csv(const std::string &path, const EvalReport &report) {
  write_text_file(path, report_csv_string(report));
}

std::string summary_json_string(const EvalReport &report) {
  ordered_json j;
  j["tool_version"] = report.tool_version;
  j["report_schema"] = kReportSchemaVersion;
  j["config_hash"] = report.config_hash;
  j["seed"] = report.seed;
  j["row_count"] = report.rows.size();
  ordered_json rows = ordered_json::array();
  for (const auto &s : report.summary) {
    ordered_json r;
    r["noise"] = s.noise;
    r["snr_db"] = s.snr_db;
    r["method"] = s.method;
    r["metric"] = s.metric;
    if (std::isnan(s.mean)) {
      r["mean"] = nullptr;  // JSON has no NaN
    } else {
      r["mean"] = s.mean;
    }
    r["count"] = s.count;
    rows.push_back(std::move(r));
  }
  j["summary"] = std::move(rows);
  return j.dump(2) + "\n";
}

void write_summary_json(const std::string &path, const EvalReport &report) {
  write_text_file(path, summary_json_string(report));
}

BenchReport bench_methods(const ExperimentConfig &config, int frame_len,
                          int repetitions) {
  if (repetitions < 30) throw ArgError("bench: repetitions must be >= 30");
  if (frame_len <= 0) throw ArgError("bench: frame_len must be positive");

  // Fixed synthetic material: the benchmark compares methods against each
  // other, so the signal only has to be speech-plus-noise shaped.
  const int rate = 16000;
  const AudioBuffer clean =
      corpus::utterance(Rng::derive(config.seed, 0xBE0), 1.5, rate);
  const AudioBuffer noise =
      corpus::factory(Rng::derive(config.seed, 0xBE1), 2.0, rate);
  MixSpec spec;
  spec.snr_db = 3.0;
  const MixResult mr = mix_at_snr(clean, noise, spec);
  const int n_frames = static_cast<int>(mr.mixture.size()) / frame_len;
  if (n_frames < 1) throw ArgError("bench: material shorter than one frame");

  const bool want_ibm =
      std::count(config.methods.begin(), config.methods.end(), "ibm") > 0;
  const bool want_tbm =
      std::count(config.methods.begin(), config.methods.end(), "tbm") > 0;
  const GammatoneBank bank(config.bank_channels, config.bank_f_lo_hz,
                           config.bank_f_hi_hz, rate);

  // The accumulated sample keeps the optimizer from hollowing out the runs.
  volatile double sink = 0.0;

  auto run_bam = [&]() {
    const auto out = bam_process(mr.mixture, config.bam);
    sink = sink + out.first.samples[0];
  };
  auto run_ibm = [&]() {
    const ChannelSignals chc = gammatone_analyze(clean, bank);
    const ChannelSignals chn = gammatone_analyze(mr.scaled_noise, bank);
    const ChannelSignals chm = gammatone_analyze(mr.mixture, bank);
    const BinaryMask mask = ibm_compute(tf_energy(chc), tf_energy(chn),
                                        spec.snr_db, config.ibm_rc_db);
    sink = sink + mask_resynthesize(chm, mask, bank).samples[0];
  };
  auto run_tbm = [&]() {
    const AudioBuffer ssn = generate_ssn(clean, clean.size(),
                                         Rng::derive(config.seed, 0xBE2));
    const ChannelSignals chc = gammatone_analyze(clean, bank);
    const ChannelSignals chs = gammatone_analyze(ssn, bank);
    const ChannelSignals chm = gammatone_analyze(mr.mixture, bank);
    const BinaryMask mask =
        tbm_compute(tf_energy(chc), tf_energy(chs), config.tbm_coverage);
    sink = sink + mask_resynthesize(chm, mask, bank).samples[0];
  };

  struct Job {
    const char *name;
    std::function<void()> fn;
  };
  std::vector<Job> jobs;
  jobs.push_back({"bam", run_bam});
  if (want_ibm) jobs.push_back({"ibm", run_ibm});
  if (want_tbm) jobs.push_back({"tbm", run_tbm});

  BenchReport report;
  report.frame_len = frame_len;
  report.repetitions = repetitions;

  // Repetitions are interleaved round-robin so every method samples the
  // same wall-clock window; slow machine drift then cancels out of the
  // normalized ratios instead of biasing whichever method ran last. Cheap
  // methods additionally loop `inner` times per timed repetition so that
  // every timed chunk has comparable duration and scheduler blips amortize
  // instead of dominating the fastest method's total.
  constexpr int kWarmup = 3;
  std::vector<double> single(jobs.size(), 0.0);
  for (int i = 0; i < kWarmup; ++i) {
    for (std::size_t k = 0; k < jobs.size(); ++k) {
      const auto t0 = std::chrono::steady_clock::now();
      jobs[k].fn();
      const auto t1 = std::chrono::steady_clock::now();
      single[k] = std::chrono::duration<double>(t1 - t0).count();
    }
  }
  const double slowest = *std::max_element(single.begin(), single.end());
  std::vector<int> inner(jobs.size(), 1);
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    if (single[k] > 0) {
      inner[k] = static_cast<int>(
          std::clamp(std::lround(slowest / single[k]), 1L, 200L));
    }
  }

  std::vector<double> totals(jobs.size(), 0.0);
  for (int i = 0; i < repetitions; ++i) {
    for (std::size_t k = 0; k < jobs.size(); ++k) {
      const auto t0 = std::chrono::steady_clock::now();
      for (int j = 0; j < inner[k]; ++j) jobs[k].fn();
      const auto t1 = std::chrono::steady_clock::now();
      totals[k] += std::chrono::duration<double>(t1 - t0).count();
    }
  }

  double bam_per_frame = 0.0;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    BenchEntry e;
    e.method = jobs[k].name;
    e.seconds_per_frame = totals[k] / repetitions / inner[k] / n_frames;
    if (e.method == "bam") bam_per_frame = e.seconds_per_frame;
    e.normalized = e.seconds_per_frame / bam_per_frame;
    report.entries.push_back(std::move(e));
  }
  (void)sink;
  return report;
}

std::string bench_csv_string(const BenchReport &report) {
  std::ostringstream os;
  os << "method,seconds_per_frame,normalized\n";
  for (const auto &e : report.entries) {
    os << e.method << ',' << fmt17(e.seconds_per_frame) << ','
       << fmt17(e.normalized) << '\n';
  }
  return os.str();
}

void write_bench_csv(const std::string &path, const BenchReport &report) {
  write_text_file(path, bench_csv_string(report));
}

}  // namespace bam
