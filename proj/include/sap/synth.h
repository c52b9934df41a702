/// @file synth.h
/// @brief Seeded synthetic trace and corpus generation. Generating
///        parameters double as ground truth for end-to-end tests.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sap/corpus.h"

namespace sap {

/// One stationary note cluster to sample from.
struct NoteSpec {
  double position_cents = 0.0;  // tonic-relative, in [-200, 1200]
  double std_cents = 1.0;
  double weight = 1.0;  // normalized before sampling
};

/// Generator parameters for a single synthetic track.
struct ScaleSpec {
  std::vector<NoteSpec> notes;
  double tonic_hz = 220.0;
  std::int64_t n_frames = 0;
  double confidence_lo = 0.85;
  double confidence_hi = 1.0;
  double unvoiced_fraction = 0.0;
  std::uint64_t seed = 0;
};

/// Per-frame draw: unvoiced with probability unvoiced_fraction, otherwise a
/// weight-picked note sampled as Normal(position, std) cents and converted
/// to Hz against the tonic. Frames sit on a fixed 10 ms hop. Fully
/// determined by the seed.
F0Trace generate_trace(const ScaleSpec& spec,
                       TrackRole role = TrackRole::kSeperewa);

/// Renders a trace back to the `time,frequency,confidence` CSV format.
std::string trace_to_csv(const F0Trace& trace);

/// A full synthetic song: paired track generators plus the tuning that the
/// analysis will be told about.
struct SongSpec {
  std::string id;
  ScaleSpec seperewa;
  ScaleSpec vocals;
  KnownTuning tuning;
};

/// Writes per-track CSVs plus a manifest into out_dir and returns the
/// manifest path. The manifest is directly consumable by load_manifest.
std::filesystem::path generate_corpus(const std::vector<SongSpec>& specs,
                                      const std::filesystem::path& out_dir);

}  // namespace sap
