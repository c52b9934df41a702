/// @file main.cpp
/// @brief `sap` command line: analyze | song | synth.

#include <cmath>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sap/cli.h"
#include "sap/errors.h"
#include "sap/version.h"

namespace {

/// Registers the shared pipeline knobs on a subcommand.
void add_analysis_flags(CLI::App* cmd, sap::AnalysisOptions& options) {
  cmd->add_option("--confidence-threshold", options.confidence_threshold,
                  "Keep frames with confidence >= this")
      ->capture_default_str();
  cmd->add_option("--bin-cents", options.bin_cents, "Histogram bin width")
      ->capture_default_str();
  cmd->add_option("--range-lo", options.range_lo_cents,
                  "Lower edge of the analysis window (cents)")
      ->capture_default_str();
  cmd->add_option("--range-hi", options.range_hi_cents,
                  "Upper edge of the analysis window (cents)")
      ->capture_default_str();
  cmd->add_option("--merge-radius", options.merge_radius_cents,
                  "Merge mixture components closer than this (cents)")
      ->capture_default_str();
  cmd->add_option("--k-min", options.fit.k_min, "Smallest component count")
      ->capture_default_str();
  cmd->add_option("--k-max", options.fit.k_max, "Largest component count")
      ->capture_default_str();
  cmd->add_option("--max-iters", options.fit.max_iters,
                  "EM iteration cap per fit")
      ->capture_default_str();
  cmd->add_option("--rel-tol", options.fit.rel_tol,
                  "Relative log-likelihood convergence tolerance")
      ->capture_default_str();
  cmd->add_option("--variance-floor", options.fit.variance_floor_cents,
                  "Smallest allowed component std (cents)")
      ->capture_default_str();
  cmd->add_option("--min-weight", options.fit.min_weight,
                  "Drop fitted components lighter than this")
      ->capture_default_str();
  cmd->add_option("--seed", options.fit.seed,
                  "Seed for the EM fallback initializer")
      ->capture_default_str();
}

/// Cross-field checks CLI11 can't express per-option. Returns an error
/// message, or empty when everything is consistent.
std::string check_options(const sap::AnalysisOptions& options) {
  if (options.confidence_threshold < 0.0 || options.confidence_threshold > 1.0)
    return "--confidence-threshold must lie in [0, 1]";
  if (options.bin_cents <= 0.0) return "--bin-cents must be positive";
  if (options.range_lo_cents >= options.range_hi_cents)
    return "--range-lo must be below --range-hi";
  if (options.range_lo_cents < -200.0 || options.range_hi_cents > 1200.0)
    return "analysis window must stay inside [-200, 1200] cents";
  const double span =
      (options.range_hi_cents - options.range_lo_cents) / options.bin_cents;
  if (std::abs(span - std::round(span)) > 1e-9)
    return "analysis window must span a whole number of bins";
  if (options.merge_radius_cents <= 0.0)
    return "--merge-radius must be positive";
  if (options.fit.k_min < 1) return "--k-min must be at least 1";
  if (options.fit.k_max < options.fit.k_min)
    return "--k-max must be at least --k-min";
  if (options.fit.max_iters < 1) return "--max-iters must be at least 1";
  if (options.fit.rel_tol <= 0.0) return "--rel-tol must be positive";
  if (options.fit.variance_floor_cents <= 0.0)
    return "--variance-floor must be positive";
  if (options.fit.min_weight < 0.0 || options.fit.min_weight >= 1.0)
    return "--min-weight must lie in [0, 1)";
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Scale approximation pipeline: estimates scales from paired "
      "seperewa/vocal F0 traces and reports tuning statistics"};
  app.set_version_flag("--version",
                       std::string(sap::kToolName) + " " + sap::kVersion);
  app.require_subcommand(1);

  sap::RunConfig run;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "Analyze a corpus manifest and write report artifacts");
  analyze->add_option("--manifest", run.manifest_path, "Corpus manifest JSON")
      ->required();
  analyze->add_option("--out", run.out_dir, "Output directory")->required();
  add_analysis_flags(analyze, run.options);
  analyze
      ->add_option("--workers", run.workers,
                   "Worker threads (0 = $SAP_WORKERS, then all cores)")
      ->check(CLI::NonNegativeNumber);

  sap::SongRecord record;
  sap::AnalysisOptions song_options;
  std::string seperewa_path;
  std::string vocals_path;
  std::string third = "major";
  std::string sixth = "major";
  CLI::App* song = app.add_subcommand(
      "song", "Analyze one song and print its JSON to stdout");
  song->add_option("--seperewa", seperewa_path, "Seperewa F0 trace CSV")
      ->required();
  song->add_option("--vocals", vocals_path, "Vocal F0 trace CSV")
      ->required();
  song->add_option("--tonic-hz", record.tuning.tonic_hz, "Tonic frequency")
      ->required()
      ->check(CLI::PositiveNumber);
  song->add_option("--third", third, "Tuning third: major|minor")
      ->required()
      ->check(CLI::IsMember({"major", "minor"}));
  song->add_option("--sixth", sixth, "Tuning sixth: major|minor")
      ->required()
      ->check(CLI::IsMember({"major", "minor"}));
  add_analysis_flags(song, song_options);

  std::string spec_path;
  std::string synth_out;
  CLI::App* synth = app.add_subcommand(
      "synth", "Generate a synthetic corpus from a spec file");
  synth->add_option("--spec", spec_path, "Corpus spec JSON")->required();
  synth->add_option("--out", synth_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);  // prints help or the error message
    return code == 0 ? sap::kExitOk : sap::kExitArgError;
  }

  try {
    if (*analyze) {
      if (const std::string problem = check_options(run.options);
          !problem.empty()) {
        std::cerr << "error: " << problem << "\n";
        return sap::kExitArgError;
      }
      return sap::run_analyze(run, std::cerr);
    }
    if (*song) {
      if (const std::string problem = check_options(song_options);
          !problem.empty()) {
        std::cerr << "error: " << problem << "\n";
        return sap::kExitArgError;
      }
      record.seperewa_trace_path = seperewa_path;
      record.vocals_trace_path = vocals_path;
      record.id = record.seperewa_trace_path.stem().string();
      record.tuning.third =
          third == "major" ? sap::Quality::kMajor : sap::Quality::kMinor;
      record.tuning.sixth =
          sixth == "major" ? sap::Quality::kMajor : sap::Quality::kMinor;
      return sap::run_song(record, song_options, std::cout, std::cerr);
    }
    return sap::run_synth(spec_path, synth_out, std::cout, std::cerr);
  } catch (const sap::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return sap::kExitArgError;
  }
}
