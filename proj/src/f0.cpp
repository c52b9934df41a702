/// @file f0.cpp
/// @brief F0 trace ingestion and histogram construction.

#include "sap/f0.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "sap/errors.h"

namespace sap {

const char* track_role_name(TrackRole role) {
  return role == TrackRole::kSeperewa ? "seperewa" : "vocals";
}

namespace {

// Trims ASCII whitespace and a trailing '\r' left by CRLF files.
std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_field(std::string_view field, std::size_t line_no,
                   const char* column) {
  field = trim(field);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError("non-numeric " + std::string(column) + " field '" +
                         std::string(field) + "'",
                     line_no);
  }
  return value;
}

}  // namespace

F0Trace parse_f0_csv(std::string_view content, TrackRole source_label) {
  F0Trace trace;
  trace.source_label = source_label;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool saw_header = false;

  while (pos <= content.size()) {
    const std::size_t eol = content.find('\n', pos);
    std::string_view line = content.substr(
        pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? content.size() + 1 : eol + 1;
    ++line_no;

    line = trim(line);
    if (line.empty()) continue;

    if (!saw_header) {
      if (line != "time,frequency,confidence") {
        throw ParseError(
            "expected header 'time,frequency,confidence', got '" +
                std::string(line) + "'",
            line_no);
      }
      saw_header = true;
      continue;
    }

    const std::size_t c1 = line.find(',');
    const std::size_t c2 = c1 == std::string_view::npos
                               ? std::string_view::npos
                               : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos ||
        line.find(',', c2 + 1) != std::string_view::npos) {
      throw ParseError("expected 3 comma-separated fields", line_no);
    }

    F0Frame frame;
    frame.time_s = parse_field(line.substr(0, c1), line_no, "time");
    frame.frequency_hz =
        parse_field(line.substr(c1 + 1, c2 - c1 - 1), line_no, "frequency");
    frame.confidence = parse_field(line.substr(c2 + 1), line_no, "confidence");
    if (frame.confidence < 0.0 || frame.confidence > 1.0) {
      throw ParseError("confidence outside [0,1]", line_no);
    }
    trace.frames.push_back(frame);
  }

  if (!saw_header) {
    throw ParseError("expected header 'time,frequency,confidence', got empty file", 1);
  }

  std::stable_sort(trace.frames.begin(), trace.frames.end(),
                   [](const F0Frame& a, const F0Frame& b) { return a.time_s < b.time_s; });
  return trace;
}

F0Trace filter_confidence(const F0Trace& trace, double threshold) {
  F0Trace filtered;
  filtered.source_label = trace.source_label;
  filtered.frames.reserve(trace.frames.size());
  for (const F0Frame& frame : trace.frames) {
    if (frame.voiced() && frame.confidence >= threshold) {
      filtered.frames.push_back(frame);
    }
  }
  return filtered;
}

double hz_to_cents(double frequency_hz, double tonic_hz) {
  if (frequency_hz <= 0.0 || tonic_hz <= 0.0) {
    throw DomainError("hz_to_cents requires positive frequencies, got " +
                      std::to_string(frequency_hz) + " against tonic " +
                      std::to_string(tonic_hz));
  }
  return 1200.0 * std::log2(frequency_hz / tonic_hz);
}

double quantize_cents(double value, double bin_cents) {
  // std::round breaks half-bin ties away from zero.
  return bin_cents * std::round(value / bin_cents);
}

CentsSamples to_samples(const F0Trace& trace, double tonic_hz, double bin_cents,
                        double lo, double hi) {
  if (tonic_hz <= 0.0) {
    throw DomainError("tonic frequency must be positive, got " +
                      std::to_string(tonic_hz));
  }
  CentsSamples samples;
  samples.tonic_hz = tonic_hz;
  samples.bin_cents = bin_cents;
  samples.values.reserve(trace.frames.size());
  for (const F0Frame& frame : trace.frames) {
    if (!frame.voiced()) continue;
    const double cents =
        quantize_cents(hz_to_cents(frame.frequency_hz, tonic_hz), bin_cents);
    if (cents >= lo && cents <= hi) {
      samples.values.push_back(cents);
    }
  }
  if (samples.values.size() < static_cast<std::size_t>(kMinSamples)) {
    throw InsufficientDataError(
        std::string(track_role_name(trace.source_label)) + " track has " +
        std::to_string(samples.values.size()) + " usable frames (need " +
        std::to_string(kMinSamples) + ")");
  }
  return samples;
}

std::int64_t PitchHistogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

int PitchHistogram::non_empty_bins() const {
  return static_cast<int>(
      std::count_if(counts.begin(), counts.end(),
                    [](std::int64_t c) { return c > 0; }));
}

PitchHistogram build_histogram(const CentsSamples& samples, double lo, double hi) {
  if (samples.values.empty()) {
    throw InsufficientDataError("cannot build a histogram from zero samples");
  }
  PitchHistogram hist;
  hist.bin_cents = samples.bin_cents;
  hist.lo = lo;
  hist.hi = hi;

  const double span_bins = (hi - lo) / hist.bin_cents;
  const auto n_bins = std::llround(span_bins);
  if (n_bins < 0 || std::abs(span_bins - static_cast<double>(n_bins)) > 1e-9) {
    throw DomainError("histogram range [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "] is not a whole number of bins");
  }
  hist.counts.assign(static_cast<std::size_t>(n_bins) + 1, 0);
  for (double value : samples.values) {
    const auto bin = std::llround((value - lo) / hist.bin_cents);
    if (bin < 0 || bin >= static_cast<std::int64_t>(hist.counts.size())) {
      throw DomainError("sample " + std::to_string(value) +
                        " lies outside the histogram range");
    }
    ++hist.counts[static_cast<std::size_t>(bin)];
  }
  return hist;
}

}  // namespace sap
