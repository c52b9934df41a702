/// @file corpus.h
/// @brief Corpus-level analysis: per-song pipeline runs and the aggregate
///        result tables (retrieval counts, deviation distributions, degree
///        densities, paired track comparison).

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sap/scale.h"

namespace sap {

/// One corpus entry: paired trace files plus the expert tuning.
struct SongRecord {
  std::string id;
  std::filesystem::path seperewa_trace_path;
  std::filesystem::path vocals_trace_path;
  KnownTuning tuning;
};

/// Pipeline constants, overridable per run.
struct AnalysisOptions {
  double confidence_threshold = kDefaultConfidenceThreshold;
  double bin_cents = kDefaultBinCents;
  double range_lo_cents = kDefaultRangeLoCents;
  double range_hi_cents = kDefaultRangeHiCents;
  double merge_radius_cents = kDefaultMergeRadiusCents;
  FitConfig fit;
};

/// Outcome for one track of one song. A failed track (insufficient data or
/// a fit failure) carries the error message and empty results.
struct TrackAnalysis {
  TrackRole role = TrackRole::kSeperewa;
  bool ok = false;
  std::string error;
  ScaleEstimate estimate;
  RetrievalSets retrieval;
  std::int64_t n_frames = 0;    // frames in the input file
  std::int64_t n_retained = 0;  // frames surviving filtering + range cut
};

struct SongAnalysis {
  std::string id;
  KnownTuning tuning;
  TrackAnalysis seperewa;
  TrackAnalysis vocals;

  const TrackAnalysis& track(TrackRole role) const {
    return role == TrackRole::kSeperewa ? seperewa : vocals;
  }
};

/// Runs the full pipeline on both tracks of one song. Insufficient data or
/// fit failures mark the affected track failed; unreadable or malformed
/// trace files throw SongError naming the song.
SongAnalysis analyze_song(const SongRecord& record,
                          const AnalysisOptions& options = {});

/// Mean and population (divide-by-N) standard deviation of one column.
struct ColumnSummary {
  double mean = 0.0;
  double stddev = 0.0;
  int n = 0;
};

ColumnSummary summarize_column(const std::vector<double>& values);

/// Per-track cell counts of one retrieval row.
struct RetrievalCell {
  int retrieved = 0;
  int missing = 0;
  int unexpected = 0;
};

/// One scale degree's corpus-wide retrieval accounting. n_in_tuning == 0
/// marks a degree that was never part of any song's tuning; such rows carry
/// only "unexpected" counts.
struct RetrievalRow {
  Degree degree = Degree::kTonic;
  int n_in_tuning = 0;
  RetrievalCell seperewa;
  RetrievalCell vocals;
};

/// The retrieval table plus its summary row. Summary columns average over
/// the rows that bear numbers in that column: rows with n_in_tuning > 0 for
/// n_in_tuning / retrieved / missing, all rows for unexpected.
struct RetrievalTable {
  std::vector<RetrievalRow> rows;  // all 12 degrees, canonical order
  ColumnSummary n_in_tuning;
  ColumnSummary seperewa_retrieved, seperewa_missing, seperewa_unexpected;
  ColumnSummary vocals_retrieved, vocals_missing, vocals_unexpected;
  int n_songs = 0;
  int n_failed_seperewa = 0;  // tracks excluded from the counts
  int n_failed_vocals = 0;
};

RetrievalTable aggregate_retrieval(const std::vector<SongAnalysis>& analyses);

/// Per-song deviation scores for one track, with summary statistics.
struct EpsilonDistribution {
  struct Entry {
    std::string song_id;
    double epsilon = 0.0;
  };
  std::vector<Entry> per_song;  // successful tracks only, sorted by song id
  ColumnSummary summary;
  int n_failed = 0;
};

EpsilonDistribution epsilon_distribution(
    const std::vector<SongAnalysis>& analyses, TrackRole track);

/// One merged component occurrence for density plots. Positions are
/// unfolded tonic-relative cents, so sub-tonic components stay negative.
struct DensityPoint {
  std::string song_id;
  double position_cents = 0.0;
  double std_cents = 0.0;
  double weight = 0.0;
};

/// Every merged component across the corpus for one track. Empty when no
/// track succeeded; callers decide whether that warrants a warning.
std::vector<DensityPoint> degree_density(
    const std::vector<SongAnalysis>& analyses, TrackRole track);

/// Per-degree paired offset between the tracks: vocal component position
/// minus seperewa component position, over songs where both tracks found
/// the degree. When a track has several components on one degree the
/// heaviest one represents it.
struct ComparisonRow {
  Degree degree = Degree::kTonic;
  int n_songs = 0;
  double mean_distance_cents = 0.0;
  double std_distance_cents = 0.0;  // population std
};

std::vector<ComparisonRow> compare_tracks(
    const std::vector<SongAnalysis>& analyses);

/// Loads a corpus manifest: a JSON array of
/// {"id", "seperewa_f0", "vocals_f0", "tonic_hz", "third", "sixth"}.
/// Relative trace paths are resolved against the manifest's directory.
std::vector<SongRecord> load_manifest(const std::filesystem::path& path);

}  // namespace sap
