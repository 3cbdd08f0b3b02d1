// tools/bamtool.cc

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

// Command-line front end: one subcommand per toolkit operation plus the
// batch harness. --seed, --out and --config keep the same meaning on every
// subcommand (seeded randomness, primary output path, parameter defaults
// from an experiment config).

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>

#include "CLI11.hpp"

#include "bam/audio_ops.h"
#include "bam/bam_mask.h"
#include "bam/corpus.h"
#include "bam/eval.h"
#include "bam/gammatone.h"
#include "bam/ins.h"
#include "bam/masks.h"
#include "bam/rng.h"
#include "bam/stoi.h"
#include "bam/wav_io.h"

namespace {

struct MaskPipeline {
  bam::AudioBuffer processed;
  bam::BinaryMask mask;
};

// Shared ibm/tbm plumbing: mix, decompose, mask, resynthesize.
MaskPipeline run_mask(const std::string &kind, const bam::AudioBuffer &clean,
                      const bam::AudioBuffer &noise, double snr_db,
                      std::size_t seek, double rc_db, double coverage,
                      std::uint64_t seed, int channels, double f_lo,
                      double f_hi) {
  bam::MixSpec spec;
  spec.snr_db = snr_db;
  spec.noise_seek = seek;
  const bam::MixResult mr = bam::mix_at_snr(clean, noise, spec);

  const bam::GammatoneBank bank(channels, f_lo, f_hi, clean.sample_rate);
  const bam::ChannelSignals chm = bam::gammatone_analyze(mr.mixture, bank);
  const bam::TFGrid clean_grid =
      bam::tf_energy(bam::gammatone_analyze(clean, bank));

  MaskPipeline out;
  if (kind == "ibm") {
    const bam::TFGrid noise_grid =
        bam::tf_energy(bam::gammatone_analyze(mr.scaled_noise, bank));
    out.mask = bam::ibm_compute(clean_grid, noise_grid, snr_db, rc_db);
  } else {
    const bam::AudioBuffer ssn =
        bam::generate_ssn(clean, clean.size(), seed);
    out.mask = bam::tbm_compute(
        clean_grid, bam::tf_energy(bam::gammatone_analyze(ssn, bank)),
        coverage);
  }
  out.processed = bam::mask_resynthesize(chm, out.mask, bank);
  return out;
}

std::string default_diag_path(const std::string &out) {
  std::filesystem::path p(out);
  p.replace_extension(".diagnostics.csv");
  return p.string();
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Blind-acoustic-mask speech processing toolkit"};
  app.set_version_flag("--version", std::string(bam::kToolVersion));
  app.require_subcommand(1);

  // Values shared by several subcommands. Each subcommand binds only the
  // flags it documents; unset ones keep the library defaults.
  std::string in_path, clean_path, noise_path, out_path, config_path;
  std::string diag_path, mask_out;
  std::uint64_t seed = 0;
  double snr_db = 0.0;
  std::size_t seek = 0;
  bool pcm16 = false;

  bam::BamParams bam_params;
  double rc_db = bam::kIbmRcDb;
  double coverage = bam::kTbmCoverage;
  int channels = 64;
  double f_lo = 50.0, f_hi = 7600.0;
  int surrogates = 50;
  bool normalize_stoi = false;
  int reps = 30, frame_len = 512;

  const auto out_format = [&]() {
    return pcm16 ? bam::WavFormat::kPcm16 : bam::WavFormat::kFloat32;
  };

  // Applies --config defaults for any parameter the subcommand exposes and
  // the user did not set on the command line.
  const auto apply_config = [&](CLI::App *sub) {
    if (config_path.empty()) return;
    const bam::ExperimentConfig c = bam::load_config(config_path);
    const auto unset = [sub](const char *name) {
      const CLI::Option *opt = sub->get_option_no_throw(name);
      return opt != nullptr && opt->count() == 0;
    };
    if (unset("--alpha")) bam_params.alpha = c.bam.alpha;
    if (unset("--beta")) bam_params.beta = c.bam.beta;
    if (unset("--frame-ms")) bam_params.frame_ms = c.bam.frame_ms;
    if (unset("--no-normalize")) bam_params.normalize = c.bam.normalize;
    if (unset("--rc-db")) rc_db = c.ibm_rc_db;
    if (unset("--coverage")) coverage = c.tbm_coverage;
    if (unset("--channels")) channels = c.bank_channels;
    if (unset("--f-lo")) f_lo = c.bank_f_lo_hz;
    if (unset("--f-hi")) f_hi = c.bank_f_hi_hz;
    if (unset("--surrogates")) surrogates = c.ins_surrogates;
    if (unset("--seed")) seed = c.seed;
  };

  // ---- mix ----
  CLI::App *mix = app.add_subcommand("mix", "Mix clean speech with noise at a given SNR");
  mix->add_option("--clean", clean_path, "clean speech wav")->required();
  mix->add_option("--noise", noise_path, "noise wav")->required();
  mix->add_option("--snr", snr_db, "target SNR in dB")->required();
  mix->add_option("--out", out_path, "mixture wav to write")->required();
  mix->add_option("--seek", seek, "crop offset into the noise, samples");
  mix->add_option("--seed", seed, "unused; accepted for flag uniformity");
  mix->add_option("--config", config_path, "experiment config for parameter defaults");
  mix->add_flag("--pcm16", pcm16, "write 16-bit PCM instead of float32");
  mix->callback([&] {
    apply_config(mix);
    bam::MixSpec spec;
    spec.snr_db = snr_db;
    spec.noise_seek = seek;
    const bam::MixResult mr =
        bam::mix_at_snr(bam::read_wav(clean_path), bam::read_wav(noise_path), spec);
    bam::write_wav(out_path, mr.mixture, out_format());
    std::printf("wrote %s (%zu samples at %d Hz, snr %g dB)\n", out_path.c_str(),
                mr.mixture.size(), mr.mixture.sample_rate, snr_db);
  });

  // ---- bam ----
  CLI::App *bamc = app.add_subcommand("bam", "Enhance a noisy wav with the blind acoustic mask");
  bamc->add_option("--in", in_path, "noisy wav")->required();
  bamc->add_option("--out", out_path, "enhanced wav to write")->required();
  bamc->add_option("--alpha", bam_params.alpha, "over-subtraction factor");
  bamc->add_option("--beta", bam_params.beta, "flooring factor");
  bamc->add_option("--frame-ms", bam_params.frame_ms, "analysis frame length, ms");
  bamc->add_flag("--no-normalize", [&](std::int64_t) { bam_params.normalize = false; },
                 "skip peak normalization");
  bamc->add_option("--diag", diag_path, "per-frame diagnostics CSV (default: <out>.diagnostics.csv)");
  bamc->add_option("--seed", seed, "unused; accepted for flag uniformity");
  bamc->add_option("--config", config_path, "experiment config for parameter defaults");
  bamc->add_flag("--pcm16", pcm16, "write 16-bit PCM instead of float32");
  bamc->callback([&] {
    apply_config(bamc);
    const auto [enhanced, decisions] =
        bam::bam_process(bam::read_wav(in_path), bam_params);
    bam::write_wav(out_path, enhanced, out_format());
    const std::string diag = diag_path.empty() ? default_diag_path(out_path) : diag_path;
    bam::write_diagnostics_csv(diag, decisions);
    std::size_t kept = 0, sub = 0, flo = 0;
    for (const auto &d : decisions) {
      kept += d.kept;
      sub += d.subtracted;
      flo += d.floored;
    }
    std::printf("wrote %s; diagnostics %s; frames %zu kept %zu subtracted %zu floored %zu\n",
                out_path.c_str(), diag.c_str(), decisions.size(), kept, sub, flo);
  });

  // ---- ibm / tbm ----
  for (const std::string kind : {"ibm", "tbm"}) {
    CLI::App *sub = app.add_subcommand(
        kind, kind == "ibm" ? "Apply the ideal binary mask to a mixture"
                            : "Apply the target binary mask to a mixture");
    sub->add_option("--clean", clean_path, "clean speech wav")->required();
    sub->add_option("--noise", noise_path, "noise wav")->required();
    sub->add_option("--snr", snr_db, "mixture SNR in dB")->required();
    sub->add_option("--out", out_path, "masked wav to write")->required();
    sub->add_option("--seek", seek, "crop offset into the noise, samples");
    if (kind == "ibm") {
      sub->add_option("--rc-db", rc_db, "relative criterion offset, dB");
      sub->add_option("--seed", seed, "unused; accepted for flag uniformity");
    } else {
      sub->add_option("--coverage", coverage, "per-channel clean-energy coverage");
      sub->add_option("--seed", seed, "speech-shaped-noise seed");
    }
    sub->add_option("--channels", channels, "filterbank channels");
    sub->add_option("--f-lo", f_lo, "lowest center frequency, Hz");
    sub->add_option("--f-hi", f_hi, "highest center frequency, Hz");
    sub->add_option("--mask-out", mask_out, "also dump the binary mask as text");
    sub->add_option("--config", config_path, "experiment config for parameter defaults");
    sub->add_flag("--pcm16", pcm16, "write 16-bit PCM instead of float32");
    sub->callback([&, kind, sub] {
      apply_config(sub);
      const MaskPipeline r =
          run_mask(kind, bam::read_wav(clean_path), bam::read_wav(noise_path),
                   snr_db, seek, rc_db, coverage, seed, channels, f_lo, f_hi);
      bam::write_wav(out_path, r.processed, out_format());
      if (!mask_out.empty()) bam::write_mask(mask_out, r.mask);
      std::printf("wrote %s (%zu channels x %zu frames)\n", out_path.c_str(),
                  r.mask.n_channels(), r.mask.n_frames());
    });
  }

  // ---- stoi ----
  CLI::App *stoic = app.add_subcommand("stoi", "Score intelligibility of a processed wav");
  stoic->add_option("--clean", clean_path, "clean reference wav")->required();
  stoic->add_option("--in", in_path, "processed wav")->required();
  stoic->add_flag("--normalize", normalize_stoi,
                  "also report the score relative to SSN at 10 dB");
  stoic->add_option("--seed", seed, "speech-shaped-noise seed for --normalize");
  stoic->add_option("--out", out_path, "also write the JSON to this path");
  stoic->add_option("--config", config_path, "experiment config for parameter defaults");
  stoic->callback([&] {
    apply_config(stoic);
    const bam::AudioBuffer clean = bam::read_wav(clean_path);
    bam::StoiScore score = bam::stoi(clean, bam::read_wav(in_path));
    if (normalize_stoi) {
      const bam::AudioBuffer ssn = bam::generate_ssn(clean, clean.size(), seed);
      bam::MixSpec spec;
      spec.snr_db = 10.0;
      score = bam::normalize_score(
          score, bam::stoi(clean, bam::mix_at_snr(clean, ssn, spec).mixture));
    }
    const std::string json = bam::stoi_to_json(score);
    std::printf("%s\n", json.c_str());
    if (!out_path.empty()) {
      std::FILE *f = std::fopen(out_path.c_str(), "wb");
      if (!f) throw bam::IoError("cannot open for writing: " + out_path);
      std::fprintf(f, "%s\n", json.c_str());
      std::fclose(f);
    }
  });

  // ---- ins ----
  CLI::App *insc = app.add_subcommand("ins", "Test a wav for non-stationarity (surrogate INS)");
  insc->add_option("--in", in_path, "wav to analyze")->required();
  insc->add_option("--surrogates", surrogates, "stationary surrogate count");
  insc->add_option("--seed", seed, "surrogate generation seed");
  insc->add_option("--out", out_path, "per-scale profile CSV to write");
  insc->add_option("--config", config_path, "experiment config for parameter defaults");
  insc->callback([&] {
    apply_config(insc);
    const bam::InsProfile profile = bam::ins_compute(
        bam::read_wav(in_path), bam::ins_default_scales(), surrogates, seed);
    std::printf("%s\n", bam::ins_to_json(profile).c_str());
    if (!out_path.empty()) bam::write_ins_csv(out_path, profile);
  });

  // ---- eval-batch ----
  CLI::App *batch = app.add_subcommand("eval-batch", "Run a full mixing/method/metric grid");
  batch->add_option("--config", config_path, "experiment config JSON")->required();
  batch->add_option("--seed", seed, "override the config seed");
  batch->add_option("--out", out_path, "override the config output_dir");
  batch->callback([&] {
    bam::ExperimentConfig config = bam::load_config(config_path);
    if (batch->count("--seed")) config.seed = seed;
    if (batch->count("--out")) config.output_dir = out_path;
    const bam::EvalReport report = bam::run_batch(config);
    const auto dir = std::filesystem::path(config.output_dir);
    bam::write_report_csv((dir / "report.csv").string(), report);
    bam::write_summary_json((dir / "summary.json").string(), report);
    std::size_t failed = 0;
    for (const auto &r : report.rows)
      if (r.status != "ok") ++failed;
    std::printf("wrote %s and %s (%zu rows, %zu failed, config %s)\n",
                (dir / "report.csv").string().c_str(),
                (dir / "summary.json").string().c_str(), report.rows.size(),
                failed, report.config_hash.c_str());
  });

  // ---- bench ----
  CLI::App *benchc = app.add_subcommand("bench", "Time the methods per 512-sample frame");
  benchc->add_option("--config", config_path, "experiment config (methods + parameters)");
  benchc->add_option("--reps", reps, "timed repetitions (>= 30)");
  benchc->add_option("--frame-len", frame_len, "frame length in samples");
  benchc->add_option("--seed", seed, "material generation seed");
  benchc->add_option("--out", out_path, "timing CSV to write");
  benchc->callback([&] {
    bam::ExperimentConfig config;
    if (!config_path.empty()) {
      config = bam::load_config(config_path);
    } else {
      config.methods = {"bam", "ibm", "tbm"};
    }
    if (benchc->count("--seed")) config.seed = seed;
    const bam::BenchReport report = bam::bench_methods(config, frame_len, reps);
    std::printf("method  s/frame      normalized\n");
    for (const auto &e : report.entries)
      std::printf("%-7s %-12.3e %.2f\n", e.method.c_str(), e.seconds_per_frame,
                  e.normalized);
    if (!out_path.empty()) bam::write_bench_csv(out_path, report);
  });

  // CLI11 quietly converts an empty value to 0 for numeric options, so an
  // unset shell variable (e.g. --snr "$SNR") would mix at 0 dB.  Reject empty
  // values everywhere instead; flags are unaffected (they store "true").
  const auto reject_empty = [](const std::string &value) {
    return value.empty() ? std::string("value must not be empty") : std::string();
  };
  for (CLI::Option *opt : app.get_options()) opt->check(reject_empty);
  for (CLI::App *sub : app.get_subcommands(std::function<bool(CLI::App *)>{}))
    for (CLI::Option *opt : sub->get_options()) opt->check(reject_empty);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    std::fputs(app.help().c_str(), stderr);
    return 2;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
