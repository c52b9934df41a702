/// @file f0.h
/// @brief F0 trace ingestion: CSV parsing, confidence filtering, cents
///        conversion, quantization, and pitch histograms.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sap {

/// Which isolated track a trace came from.
enum class TrackRole { kSeperewa, kVocals };

const char* track_role_name(TrackRole role);

/// One pitch-tracker frame. Frequencies <= 0 mark unvoiced frames.
struct F0Frame {
  double time_s = 0.0;
  double frequency_hz = 0.0;
  double confidence = 0.0;

  bool voiced() const { return frequency_hz > 0.0; }
};

/// Time-ordered frames for one isolated track.
struct F0Trace {
  std::vector<F0Frame> frames;
  TrackRole source_label = TrackRole::kSeperewa;
};

/// Default analysis window: a whole step below to an octave above the tonic.
inline constexpr double kDefaultRangeLoCents = -200.0;
inline constexpr double kDefaultRangeHiCents = 1200.0;
inline constexpr double kDefaultBinCents = 10.0;
inline constexpr double kDefaultConfidenceThreshold = 0.8;

/// Minimum retained frames for a track to be analyzable at all.
inline constexpr int kMinSamples = 50;

/// Parses `time,frequency,confidence` CSV content into a trace.
/// Rows are re-sorted by time if the file is out of order.
/// Throws ParseError (with line number) on malformed content.
F0Trace parse_f0_csv(std::string_view content, TrackRole source_label);

/// Keeps the voiced frames with confidence >= threshold, order preserved.
/// Frames strictly under the threshold are dropped.
F0Trace filter_confidence(const F0Trace& trace,
                          double threshold = kDefaultConfidenceThreshold);

/// 1200 * log2(frequency / tonic). Throws DomainError unless both are > 0.
double hz_to_cents(double frequency_hz, double tonic_hz);

/// Nearest integer multiple of bin_cents; half-bin ties round away from zero.
double quantize_cents(double value, double bin_cents = kDefaultBinCents);

/// Tonic-relative, quantized, range-restricted cents values for one track.
struct CentsSamples {
  std::vector<double> values;
  double tonic_hz = 0.0;
  double bin_cents = kDefaultBinCents;
};

/// Converts voiced frames to quantized tonic-relative cents and keeps the
/// values inside [lo, hi] (both ends inclusive). The trace is expected to be
/// confidence-filtered already. Throws InsufficientDataError naming the
/// track when fewer than kMinSamples values survive.
CentsSamples to_samples(const F0Trace& trace, double tonic_hz,
                        double bin_cents = kDefaultBinCents,
                        double lo = kDefaultRangeLoCents,
                        double hi = kDefaultRangeHiCents);

/// Counts per 10-cent (by default) bin center over [lo, hi].
struct PitchHistogram {
  double bin_cents = kDefaultBinCents;
  double lo = kDefaultRangeLoCents;
  double hi = kDefaultRangeHiCents;
  std::vector<std::int64_t> counts;

  std::size_t n_bins() const { return counts.size(); }
  double center(std::size_t bin) const { return lo + bin_cents * static_cast<double>(bin); }
  std::int64_t total() const;
  int non_empty_bins() const;
};

/// Bins the samples over [lo, hi], which must match the window the samples
/// were restricted to. Throws InsufficientDataError on empty input.
PitchHistogram build_histogram(const CentsSamples& samples,
                               double lo = kDefaultRangeLoCents,
                               double hi = kDefaultRangeHiCents);

}  // namespace sap
