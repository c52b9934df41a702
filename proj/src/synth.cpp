/// @file synth.cpp
/// @brief Synthetic F0 trace and corpus generation.

#include "sap/synth.h"

#include <cmath>
#include <string>

#include <json.hpp>

#include "sap/errors.h"
#include "sap/io.h"
#include "sap/rng.h"

namespace sap {

namespace {

constexpr double kHopSeconds = 0.01;  // common pitch-tracker cadence

void validate(const ScaleSpec& spec) {
  if (spec.notes.empty()) throw DomainError("scale spec has no notes");
  if (spec.tonic_hz <= 0.0) throw DomainError("tonic_hz must be positive");
  if (spec.n_frames <= 0) throw DomainError("n_frames must be positive");
  if (spec.confidence_lo < 0.0 || spec.confidence_hi > 1.0 ||
      spec.confidence_lo > spec.confidence_hi) {
    throw DomainError("confidence range must satisfy 0 <= lo <= hi <= 1");
  }
  if (spec.unvoiced_fraction < 0.0 || spec.unvoiced_fraction > 1.0) {
    throw DomainError("unvoiced_fraction must lie in [0, 1]");
  }
  for (const NoteSpec& note : spec.notes) {
    if (note.std_cents <= 0.0) throw DomainError("note std_cents must be positive");
    if (note.weight <= 0.0) throw DomainError("note weight must be positive");
  }
}

}  // namespace

F0Trace generate_trace(const ScaleSpec& spec, TrackRole role) {
  validate(spec);

  double total_weight = 0.0;
  for (const NoteSpec& note : spec.notes) total_weight += note.weight;
  std::vector<double> cumulative;
  cumulative.reserve(spec.notes.size());
  double acc = 0.0;
  for (const NoteSpec& note : spec.notes) {
    acc += note.weight / total_weight;
    cumulative.push_back(acc);
  }

  SeededRng rng(spec.seed);
  F0Trace trace;
  trace.source_label = role;
  trace.frames.reserve(static_cast<std::size_t>(spec.n_frames));
  for (std::int64_t i = 0; i < spec.n_frames; ++i) {
    F0Frame frame;
    frame.time_s = static_cast<double>(i) * kHopSeconds;
    if (spec.unvoiced_fraction > 0.0 && rng.uniform() < spec.unvoiced_fraction) {
      frame.frequency_hz = 0.0;
      frame.confidence = 0.0;
    } else {
      const double pick = rng.uniform();
      std::size_t note_idx = 0;
      while (note_idx + 1 < cumulative.size() && pick >= cumulative[note_idx]) {
        ++note_idx;
      }
      const NoteSpec& note = spec.notes[note_idx];
      const double cents = rng.normal(note.position_cents, note.std_cents);
      frame.frequency_hz = spec.tonic_hz * std::exp2(cents / 1200.0);
      frame.confidence = rng.uniform(spec.confidence_lo, spec.confidence_hi);
      if (frame.confidence > 1.0) frame.confidence = 1.0;
    }
    trace.frames.push_back(frame);
  }
  return trace;
}

std::string trace_to_csv(const F0Trace& trace) {
  std::string csv = "time,frequency,confidence\n";
  for (const F0Frame& frame : trace.frames) {
    csv += format_double(frame.time_s);
    csv += ',';
    csv += format_double(frame.frequency_hz);
    csv += ',';
    csv += format_double(frame.confidence);
    csv += '\n';
  }
  return csv;
}

std::filesystem::path generate_corpus(const std::vector<SongSpec>& specs,
                                      const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw IoError("cannot create directory '" + out_dir.string() + "': " +
                  ec.message());
  }

  nlohmann::ordered_json manifest = nlohmann::ordered_json::array();
  for (const SongSpec& spec : specs) {
    const std::string sep_name = spec.id + "_seperewa.csv";
    const std::string voc_name = spec.id + "_vocals.csv";
    write_file(out_dir / sep_name,
               trace_to_csv(generate_trace(spec.seperewa, TrackRole::kSeperewa)));
    write_file(out_dir / voc_name,
               trace_to_csv(generate_trace(spec.vocals, TrackRole::kVocals)));

    nlohmann::ordered_json entry;
    entry["id"] = spec.id;
    entry["seperewa_f0"] = sep_name;
    entry["vocals_f0"] = voc_name;
    entry["tonic_hz"] = spec.tuning.tonic_hz;
    entry["third"] = quality_name(spec.tuning.third);
    entry["sixth"] = quality_name(spec.tuning.sixth);
    manifest.push_back(entry);
  }

  const std::filesystem::path manifest_path = out_dir / "manifest.json";
  write_file(manifest_path, manifest.dump(2) + "\n");
  return manifest_path;
}

}  // namespace sap
