/// @file cli.h
/// @brief Command entry points behind the argument parser.
///
/// Each run_* function does the work of one subcommand and returns a
/// process exit code, writing human-readable progress to the given log
/// stream. Keeping them free of argv handling lets the tests drive full
/// runs in-process.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "sap/corpus.h"
#include "sap/synth.h"

namespace sap {

inline constexpr int kExitOk = 0;
inline constexpr int kExitArgError = 2;    // bad flags or flag values
inline constexpr int kExitParseError = 3;  // unreadable/malformed manifest or spec
inline constexpr int kExitAllFailed = 4;   // no song produced any result

/// Everything `analyze` needs: where the corpus lives, where results go,
/// the pipeline knobs, and how many worker threads to run (0 = all cores).
struct RunConfig {
  std::string manifest_path;
  std::string out_dir;
  AnalysisOptions options;
  int workers = 0;
};

/// Full-corpus run: per-song JSON, the five CSVs, report.json,
/// run_metadata.json, and errors.log when anything failed. Outputs are
/// byte-stable across reruns and worker counts.
int run_analyze(const RunConfig& config, std::ostream& log);

/// Single-song run; prints the song analysis JSON to `out`.
int run_song(const SongRecord& record, const AnalysisOptions& options,
             std::ostream& out, std::ostream& log);

/// Generates a synthetic corpus from a JSON spec file and prints the path
/// of the written manifest to `out`.
int run_synth(const std::string& spec_path, const std::string& out_dir,
              std::ostream& out, std::ostream& log);

}  // namespace sap
