/// @file corpus.cpp
/// @brief Per-song pipeline runs and corpus-level aggregation.

#include "sap/corpus.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <json.hpp>

#include "sap/errors.h"
#include "sap/io.h"

namespace sap {

namespace {

TrackAnalysis analyze_track(const std::filesystem::path& trace_path,
                            TrackRole role, const KnownTuning& tuning,
                            const AnalysisOptions& options) {
  TrackAnalysis analysis;
  analysis.role = role;

  // File and parse problems propagate to the caller; only data-dependent
  // failures are recorded on the track.
  const std::string content = read_file(trace_path);
  const F0Trace trace = parse_f0_csv(content, role);
  analysis.n_frames = static_cast<std::int64_t>(trace.frames.size());

  try {
    const F0Trace filtered =
        filter_confidence(trace, options.confidence_threshold);
    const CentsSamples samples =
        to_samples(filtered, tuning.tonic_hz, options.bin_cents,
                   options.range_lo_cents, options.range_hi_cents);
    analysis.n_retained = static_cast<std::int64_t>(samples.values.size());
    const PitchHistogram hist =
        build_histogram(samples, options.range_lo_cents, options.range_hi_cents);
    analysis.estimate = estimate_scale(hist, tuning, options.fit,
                                       options.merge_radius_cents);
    analysis.retrieval = classify_retrieval(analysis.estimate.found_degrees(),
                                            expected_degrees(tuning));
    analysis.ok = true;
  } catch (const InsufficientDataError& err) {
    analysis.error = err.what();
  } catch (const FitError& err) {
    analysis.error = err.what();
  }
  return analysis;
}

}  // namespace

SongAnalysis analyze_song(const SongRecord& record,
                          const AnalysisOptions& options) {
  SongAnalysis analysis;
  analysis.id = record.id;
  analysis.tuning = record.tuning;
  try {
    analysis.seperewa = analyze_track(record.seperewa_trace_path,
                                      TrackRole::kSeperewa, record.tuning,
                                      options);
    analysis.vocals = analyze_track(record.vocals_trace_path,
                                    TrackRole::kVocals, record.tuning,
                                    options);
  } catch (const Error& err) {
    throw SongError(record.id, err.what());
  }
  return analysis;
}

ColumnSummary summarize_column(const std::vector<double>& values) {
  ColumnSummary summary;
  summary.n = static_cast<int>(values.size());
  if (values.empty()) return summary;
  double sum = 0.0;
  for (double v : values) sum += v;
  summary.mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) {
    const double d = v - summary.mean;
    sq += d * d;
  }
  summary.stddev = std::sqrt(sq / static_cast<double>(values.size()));
  return summary;
}

namespace {

std::vector<SongAnalysis> sorted_by_id(std::vector<SongAnalysis> analyses) {
  std::sort(analyses.begin(), analyses.end(),
            [](const SongAnalysis& a, const SongAnalysis& b) {
              return a.id < b.id;
            });
  return analyses;
}

}  // namespace

RetrievalTable aggregate_retrieval(const std::vector<SongAnalysis>& analyses) {
  const std::vector<SongAnalysis> songs = sorted_by_id(analyses);

  RetrievalTable table;
  table.n_songs = static_cast<int>(songs.size());
  for (Degree degree : all_degrees()) {
    RetrievalRow row;
    row.degree = degree;
    table.rows.push_back(row);
  }

  for (const SongAnalysis& song : songs) {
    const std::set<Degree> expected = expected_degrees(song.tuning);
    if (!song.seperewa.ok) ++table.n_failed_seperewa;
    if (!song.vocals.ok) ++table.n_failed_vocals;

    for (RetrievalRow& row : table.rows) {
      if (expected.contains(row.degree)) ++row.n_in_tuning;
      for (TrackRole role : {TrackRole::kSeperewa, TrackRole::kVocals}) {
        const TrackAnalysis& track = song.track(role);
        if (!track.ok) continue;
        RetrievalCell& cell =
            role == TrackRole::kSeperewa ? row.seperewa : row.vocals;
        if (track.retrieval.retrieved.contains(row.degree)) ++cell.retrieved;
        if (track.retrieval.missing.contains(row.degree)) ++cell.missing;
        if (track.retrieval.unexpected.contains(row.degree)) ++cell.unexpected;
      }
    }
  }

  // Summary row: columns average over the rows bearing numbers in that
  // column, i.e. in-tuning rows for the first six columns and every row for
  // the unexpected columns.
  std::vector<double> in_tuning, sep_r, sep_m, sep_u, voc_r, voc_m, voc_u;
  for (const RetrievalRow& row : table.rows) {
    if (row.n_in_tuning > 0) {
      in_tuning.push_back(row.n_in_tuning);
      sep_r.push_back(row.seperewa.retrieved);
      sep_m.push_back(row.seperewa.missing);
      voc_r.push_back(row.vocals.retrieved);
      voc_m.push_back(row.vocals.missing);
    }
    sep_u.push_back(row.seperewa.unexpected);
    voc_u.push_back(row.vocals.unexpected);
  }
  table.n_in_tuning = summarize_column(in_tuning);
  table.seperewa_retrieved = summarize_column(sep_r);
  table.seperewa_missing = summarize_column(sep_m);
  table.seperewa_unexpected = summarize_column(sep_u);
  table.vocals_retrieved = summarize_column(voc_r);
  table.vocals_missing = summarize_column(voc_m);
  table.vocals_unexpected = summarize_column(voc_u);
  return table;
}

EpsilonDistribution epsilon_distribution(
    const std::vector<SongAnalysis>& analyses, TrackRole track) {
  const std::vector<SongAnalysis> songs = sorted_by_id(analyses);
  EpsilonDistribution dist;
  std::vector<double> values;
  for (const SongAnalysis& song : songs) {
    const TrackAnalysis& analysis = song.track(track);
    if (!analysis.ok) {
      ++dist.n_failed;
      continue;
    }
    dist.per_song.push_back({song.id, analysis.estimate.epsilon});
    values.push_back(analysis.estimate.epsilon);
  }
  dist.summary = summarize_column(values);
  return dist;
}

std::vector<DensityPoint> degree_density(
    const std::vector<SongAnalysis>& analyses, TrackRole track) {
  const std::vector<SongAnalysis> songs = sorted_by_id(analyses);
  std::vector<DensityPoint> points;
  for (const SongAnalysis& song : songs) {
    const TrackAnalysis& analysis = song.track(track);
    if (!analysis.ok) continue;
    for (const GaussianComponent& comp : analysis.estimate.components) {
      points.push_back(
          {song.id, comp.mean_cents, comp.std_cents, comp.weight});
    }
  }
  return points;
}

std::vector<ComparisonRow> compare_tracks(
    const std::vector<SongAnalysis>& analyses) {
  const std::vector<SongAnalysis> songs = sorted_by_id(analyses);

  // Heaviest component per degree represents the track; ties go to the
  // lower mean for determinism.
  const auto representative = [](const TrackAnalysis& track) {
    std::map<Degree, GaussianComponent> best;
    for (std::size_t i = 0; i < track.estimate.components.size(); ++i) {
      const GaussianComponent& comp = track.estimate.components[i];
      const Degree degree = track.estimate.labels[i].degree;
      const auto it = best.find(degree);
      if (it == best.end() || comp.weight > it->second.weight ||
          (comp.weight == it->second.weight &&
           comp.mean_cents < it->second.mean_cents)) {
        best[degree] = comp;
      }
    }
    return best;
  };

  std::map<Degree, std::vector<double>> distances;
  for (const SongAnalysis& song : songs) {
    if (!song.seperewa.ok || !song.vocals.ok) continue;
    const auto sep = representative(song.seperewa);
    const auto voc = representative(song.vocals);
    for (const auto& [degree, sep_comp] : sep) {
      const auto it = voc.find(degree);
      if (it == voc.end()) continue;
      distances[degree].push_back(it->second.mean_cents - sep_comp.mean_cents);
    }
  }

  std::vector<ComparisonRow> rows;
  for (Degree degree : all_degrees()) {
    const auto it = distances.find(degree);
    if (it == distances.end()) continue;
    const ColumnSummary summary = summarize_column(it->second);
    rows.push_back({degree, summary.n, summary.mean, summary.stddev});
  }
  return rows;
}

std::vector<SongRecord> load_manifest(const std::filesystem::path& path) {
  const std::string content = read_file(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(content);
  } catch (const nlohmann::json::parse_error& err) {
    throw ParseError("manifest '" + path.string() + "' is not valid JSON: " +
                         err.what());
  }
  if (!doc.is_array()) {
    throw ParseError("manifest '" + path.string() + "' must be a JSON array");
  }

  const std::filesystem::path base = path.parent_path();
  const auto resolve = [&base](const std::string& p) {
    const std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : base / fp;
  };

  std::vector<SongRecord> records;
  std::set<std::string> seen_ids;
  for (const auto& entry : doc) {
    try {
      SongRecord record;
      record.id = entry.at("id").get<std::string>();
      record.seperewa_trace_path =
          resolve(entry.at("seperewa_f0").get<std::string>());
      record.vocals_trace_path =
          resolve(entry.at("vocals_f0").get<std::string>());
      record.tuning.tonic_hz = entry.at("tonic_hz").get<double>();

      const auto quality = [](const std::string& name) {
        if (name == "major") return Quality::kMajor;
        if (name == "minor") return Quality::kMinor;
        throw DomainError("quality must be 'major' or 'minor', got '" + name +
                          "'");
      };
      record.tuning.third = quality(entry.at("third").get<std::string>());
      record.tuning.sixth = quality(entry.at("sixth").get<std::string>());

      if (record.tuning.tonic_hz <= 0.0) {
        throw DomainError("tonic_hz must be positive");
      }
      // Ids become output filenames, so keep them path-safe.
      if (record.id.empty() || record.id == "." || record.id == ".." ||
          record.id.find('/') != std::string::npos ||
          record.id.find('\\') != std::string::npos) {
        throw DomainError("song id '" + record.id +
                          "' is empty or contains path separators");
      }
      if (!seen_ids.insert(record.id).second) {
        throw DomainError("duplicate song id '" + record.id + "'");
      }
      records.push_back(std::move(record));
    } catch (const nlohmann::json::exception& err) {
      throw ParseError("manifest entry " + std::to_string(records.size()) +
                           ": " + err.what());
    } catch (const DomainError& err) {
      throw ParseError("manifest entry " + std::to_string(records.size()) +
                           ": " + err.what());
    }
  }
  return records;
}

}  // namespace sap
