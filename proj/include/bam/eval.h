// bam/eval.h

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

#ifndef BAM_EVAL_H_
#define BAM_EVAL_H_

#include <cstdint>
#include <string>
#include <vector>

#include "bam/bam_mask.h"
#include "bam/masks.h"
#include "bam/types.h"

namespace bam {

inline constexpr const char kToolVersion[] = "bam-toolkit 0.1.0";
// Bumped whenever a column is added, removed or reordered in the report CSV.
inline constexpr int kReportSchemaVersion = 1;

// Optional corpus synthesis, run before a batch when n_utterances > 0 or
// noises is non-empty. Utterance files land in clean_dir as utt01.wav ...;
// each named noise surrogate ("babble" or "factory") lands in noise_dir.
// Generation seeds are fixed offsets from the experiment seed, so a config
// file fully determines the audio.
struct SynthesisSpec {
  int n_utterances = 0;
  double utterance_seconds = 2.5;
  int sample_rate = 16000;
  std::vector<std::string> noises;
  double noise_seconds = 3.2;
  std::string noise_dir;

  bool enabled() const { return n_utterances > 0 || !noises.empty(); }
};

// Everything one batch run depends on. A run is a full cross product
// clean_dir/*.wav x noise_files x snrs_db x methods x metrics.
struct ExperimentConfig {
  std::string clean_dir;
  std::vector<std::string> noise_files;
  std::vector<double> snrs_db;
  std::vector<std::string> methods;  // subset of {unp, bam, ibm, tbm}
  std::vector<std::string> metrics;  // subset of {stoi, stoi_norm, ins}
  std::uint64_t seed = 0;
  std::string output_dir;

  BamParams bam;
  double ibm_rc_db = kIbmRcDb;
  double tbm_coverage = kTbmCoverage;
  int ins_surrogates = 50;
  int bank_channels = 64;
  double bank_f_lo_hz = 50.0;
  double bank_f_hi_hz = 7600.0;

  SynthesisSpec synthesize;
};

// Parses the documented JSON schema (see README). Unknown keys are an
// error so config typos fail loudly instead of silently running defaults.
ExperimentConfig load_config(const std::string &path);

// Structural checks shared by load_config and run_batch: non-empty SNR /
// method / metric lists, only known method and metric names, sane mask and
// bank parameters. Throws ArgError.
void validate_config(const ExperimentConfig &config);

// FNV-1a over a canonical serialization of every field, as 16 hex digits.
// Identical configs hash identically across runs and platforms; the hash is
// recorded in the report so result files can be traced to their config.
std::string config_fingerprint(const ExperimentConfig &config);

// One scored cell. `value` is NaN when status != "ok".
struct EvalRow {
  std::string utterance;  // clean-file stem
  std::string noise;      // noise-file stem
  double snr_db = 0.0;
  std::string method;
  std::string metric;
  double value = 0.0;
  std::string status;  // "ok" or "failed: <reason>"
};

// Mean over the "ok" rows sharing (noise, snr, method, metric); count is
// the number of rows averaged (0 leaves mean = NaN).
struct SummaryRow {
  std::string noise;
  double snr_db = 0.0;
  std::string method;
  std::string metric;
  double mean = 0.0;
  int count = 0;
};

struct EvalReport {
  std::vector<EvalRow> rows;        // sorted by (utterance, noise, snr, method, metric)
  std::vector<SummaryRow> summary;  // sorted by (noise, snr, method, metric)
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string tool_version;
};

// Runs synthesis when requested and returns the effective config with
// noise_files pointing at the generated surrogates. Also usable standalone
// to materialize the bundled corpus.
ExperimentConfig synthesize_corpus(const ExperimentConfig &config);

// Full batch: for every (utterance, noise, snr) mix once, apply each
// requested method (unp = mixture passthrough; bam sees only the mixture;
// ibm consumes the clean signal and the exact scaled noise; tbm consumes
// the clean signal and seeded speech-shaped noise), score each metric
// against the clean reference. A failing cell is recorded with status
// "failed: <reason>" and the run continues, so the report always contains
// one row per requested cell. Deterministic given the config: per-row seeds
// are derived from the experiment seed and the row key, never from
// evaluation order.
EvalReport run_batch(const ExperimentConfig &config);

std::vector<SummaryRow> summarize(const std::vector<EvalRow> &rows);

// CSV with the fixed v1 header: utterance,noise,snr_db,method,metric,value,
// status. Values print with %.17g so a re-run can be compared byte for
// byte.
std::string report_csv_string(const EvalReport &report);
void write_report_csv(const std::string &path, const EvalReport &report);

// JSON mirror of the summary plus provenance (tool version, schema version,
// config hash, seed, row count).
std::string summary_json_string(const EvalReport &report);
void write_summary_json(const std::string &path, const EvalReport &report);

// Wall-clock cost of one method over `frame_len`-sample frames, averaged
// over `repetitions` full-buffer runs after discarding warm-up runs.
struct BenchEntry {
  std::string method;
  double seconds_per_frame = 0.0;
  double normalized = 0.0;  // relative to bam == 1.0
};

struct BenchReport {
  int frame_len = 0;
  int repetitions = 0;
  std::vector<BenchEntry> entries;
};

// Times the full per-method pipeline on a seeded synthetic mixture: bam is
// bam_process alone; ibm/tbm include their gammatone analyses, grid
// energies, mask construction (plus speech-shaped-noise generation for tbm)
// and resynthesis. Filterbank construction is one-time setup and excluded.
// Methods other than bam/ibm/tbm are ignored; bam is always timed since it
// is the normalizer. Single-threaded. Requires repetitions >= 30.
BenchReport bench_methods(const ExperimentConfig &config, int frame_len = 512,
                          int repetitions = 30);

// CSV rows: method, seconds_per_frame, normalized.
std::string bench_csv_string(const BenchReport &report);
void write_bench_csv(const std::string &path, const BenchReport &report);

}  // namespace bam

#endif  // BAM_EVAL_H_
