/// @file report.cpp
/// @brief CSV and JSON report emitters.

#include "sap/report.h"

#include "sap/io.h"

namespace sap {

namespace {

/// Human label for the deviation score as reported everywhere.
constexpr const char* kEpsilonDefinition =
    "epsilon_s (SAP definition): mean absolute distance of merged component "
    "means to the nearest 100-cent gridline anchored on the tonic; "
    "0 = aligned with equal temperament, 50 = complete deviation";

std::string cell(double value) { return format_double(value); }
std::string cell(int value) { return std::to_string(value); }

}  // namespace

CorpusReport build_report(const std::vector<SongAnalysis>& analyses) {
  CorpusReport report;
  report.retrieval = aggregate_retrieval(analyses);
  report.epsilon_seperewa = epsilon_distribution(analyses, TrackRole::kSeperewa);
  report.epsilon_vocals = epsilon_distribution(analyses, TrackRole::kVocals);
  report.density_seperewa = degree_density(analyses, TrackRole::kSeperewa);
  report.density_vocals = degree_density(analyses, TrackRole::kVocals);
  report.comparison = compare_tracks(analyses);
  return report;
}

std::string retrieval_csv(const RetrievalTable& table) {
  std::string csv =
      "degree,quality,n_in_tuning,seperewa_retrieved,seperewa_missing,"
      "seperewa_unexpected,vocals_retrieved,vocals_missing,"
      "vocals_unexpected\n";
  for (const RetrievalRow& row : table.rows) {
    const DegreeRowName name = degree_row_name(row.degree);
    csv += name.degree;
    csv += ',';
    csv += name.quality;
    csv += ',';
    if (row.n_in_tuning > 0) {
      csv += cell(row.n_in_tuning) + ',' + cell(row.seperewa.retrieved) + ',' +
             cell(row.seperewa.missing) + ',' + cell(row.seperewa.unexpected) +
             ',' + cell(row.vocals.retrieved) + ',' + cell(row.vocals.missing) +
             ',' + cell(row.vocals.unexpected);
    } else {
      // Degree was never part of any tuning; only unexpected finds apply.
      csv += ",,," + cell(row.seperewa.unexpected) + ",,," +
             cell(row.vocals.unexpected);
    }
    csv += '\n';
  }
  csv += "avg,," + cell(table.n_in_tuning.mean) + ',' +
         cell(table.seperewa_retrieved.mean) + ',' +
         cell(table.seperewa_missing.mean) + ',' +
         cell(table.seperewa_unexpected.mean) + ',' +
         cell(table.vocals_retrieved.mean) + ',' +
         cell(table.vocals_missing.mean) + ',' +
         cell(table.vocals_unexpected.mean) + '\n';
  csv += "std,," + cell(table.n_in_tuning.stddev) + ',' +
         cell(table.seperewa_retrieved.stddev) + ',' +
         cell(table.seperewa_missing.stddev) + ',' +
         cell(table.seperewa_unexpected.stddev) + ',' +
         cell(table.vocals_retrieved.stddev) + ',' +
         cell(table.vocals_missing.stddev) + ',' +
         cell(table.vocals_unexpected.stddev) + '\n';
  return csv;
}

std::string epsilon_csv(const EpsilonDistribution& seperewa,
                        const EpsilonDistribution& vocals) {
  std::string csv = "song_id,track,epsilon_s\n";
  for (const auto& entry : seperewa.per_song) {
    csv += entry.song_id + ",seperewa," + cell(entry.epsilon) + '\n';
  }
  for (const auto& entry : vocals.per_song) {
    csv += entry.song_id + ",vocals," + cell(entry.epsilon) + '\n';
  }
  return csv;
}

std::string density_csv(const std::vector<DensityPoint>& points) {
  std::string csv = "song_id,position_cents,std_cents,weight\n";
  for (const DensityPoint& point : points) {
    csv += point.song_id + ',' + cell(point.position_cents) + ',' +
           cell(point.std_cents) + ',' + cell(point.weight) + '\n';
  }
  return csv;
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::string csv = "degree,quality,n_songs,mean_distance_cents,std_distance_cents\n";
  for (const ComparisonRow& row : rows) {
    const DegreeRowName name = degree_row_name(row.degree);
    csv += std::string(name.degree) + ',' + name.quality + ',' +
           cell(row.n_songs) + ',' + cell(row.mean_distance_cents) + ',' +
           cell(row.std_distance_cents) + '\n';
  }
  return csv;
}

namespace {

nlohmann::ordered_json degrees_to_json(const std::set<Degree>& degrees) {
  auto arr = nlohmann::ordered_json::array();
  for (Degree degree : all_degrees()) {
    if (degrees.contains(degree)) arr.push_back(degree_name(degree));
  }
  return arr;
}

nlohmann::ordered_json track_to_json(const TrackAnalysis& track) {
  nlohmann::ordered_json json;
  json["status"] = track.ok ? "ok" : "failed";
  json["n_frames"] = track.n_frames;
  json["n_retained"] = track.n_retained;
  if (!track.ok) {
    json["error"] = track.error;
    return json;
  }
  json["k_selected"] = track.estimate.k_selected;
  json["bic"] = track.estimate.bic;
  json["log_likelihood"] = track.estimate.log_likelihood;
  json["epsilon_s"] = track.estimate.epsilon;
  auto components = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < track.estimate.components.size(); ++i) {
    const GaussianComponent& comp = track.estimate.components[i];
    const DegreeLabel& label = track.estimate.labels[i];
    nlohmann::ordered_json cj;
    cj["mean_cents"] = comp.mean_cents;
    cj["std_cents"] = comp.std_cents;
    cj["weight"] = comp.weight;
    cj["degree"] = degree_name(label.degree);
    cj["offset_cents"] = label.offset_cents;
    components.push_back(cj);
  }
  json["components"] = components;
  json["retrieval"] = {
      {"retrieved", degrees_to_json(track.retrieval.retrieved)},
      {"missing", degrees_to_json(track.retrieval.missing)},
      {"unexpected", degrees_to_json(track.retrieval.unexpected)},
  };
  return json;
}

nlohmann::ordered_json summary_to_json(const ColumnSummary& summary) {
  return {{"mean", summary.mean}, {"std", summary.stddev}, {"n", summary.n}};
}

nlohmann::ordered_json epsilon_to_json(const EpsilonDistribution& dist) {
  nlohmann::ordered_json json;
  auto per_song = nlohmann::ordered_json::array();
  for (const auto& entry : dist.per_song) {
    per_song.push_back({{"song_id", entry.song_id}, {"epsilon_s", entry.epsilon}});
  }
  json["per_song"] = per_song;
  json["summary"] = summary_to_json(dist.summary);
  json["n_failed"] = dist.n_failed;
  return json;
}

nlohmann::ordered_json density_to_json(const std::vector<DensityPoint>& points) {
  auto arr = nlohmann::ordered_json::array();
  for (const DensityPoint& point : points) {
    arr.push_back({{"song_id", point.song_id},
                   {"position_cents", point.position_cents},
                   {"std_cents", point.std_cents},
                   {"weight", point.weight}});
  }
  return arr;
}

}  // namespace

nlohmann::ordered_json song_to_json(const SongAnalysis& analysis) {
  nlohmann::ordered_json json;
  json["id"] = analysis.id;
  json["tuning"] = {
      {"tonic_hz", analysis.tuning.tonic_hz},
      {"third", quality_name(analysis.tuning.third)},
      {"sixth", quality_name(analysis.tuning.sixth)},
  };
  json["tracks"] = {
      {"seperewa", track_to_json(analysis.seperewa)},
      {"vocals", track_to_json(analysis.vocals)},
  };
  return json;
}

nlohmann::ordered_json report_to_json(
    const CorpusReport& report,
    const std::vector<std::pair<std::string, std::string>>& failed_songs) {
  nlohmann::ordered_json json;
  json["score_definition"] = kEpsilonDefinition;
  json["n_songs"] = report.retrieval.n_songs;

  auto rows = nlohmann::ordered_json::array();
  for (const RetrievalRow& row : report.retrieval.rows) {
    const DegreeRowName name = degree_row_name(row.degree);
    nlohmann::ordered_json rj;
    rj["degree"] = name.degree;
    rj["quality"] = name.quality;
    rj["in_any_tuning"] = row.n_in_tuning > 0;
    rj["n_in_tuning"] = row.n_in_tuning;
    rj["seperewa"] = {{"retrieved", row.seperewa.retrieved},
                      {"missing", row.seperewa.missing},
                      {"unexpected", row.seperewa.unexpected}};
    rj["vocals"] = {{"retrieved", row.vocals.retrieved},
                    {"missing", row.vocals.missing},
                    {"unexpected", row.vocals.unexpected}};
    rows.push_back(rj);
  }
  json["retrieval"] = {
      {"rows", rows},
      {"summary",
       {{"n_in_tuning", summary_to_json(report.retrieval.n_in_tuning)},
        {"seperewa_retrieved", summary_to_json(report.retrieval.seperewa_retrieved)},
        {"seperewa_missing", summary_to_json(report.retrieval.seperewa_missing)},
        {"seperewa_unexpected", summary_to_json(report.retrieval.seperewa_unexpected)},
        {"vocals_retrieved", summary_to_json(report.retrieval.vocals_retrieved)},
        {"vocals_missing", summary_to_json(report.retrieval.vocals_missing)},
        {"vocals_unexpected", summary_to_json(report.retrieval.vocals_unexpected)}}},
      {"n_failed_seperewa", report.retrieval.n_failed_seperewa},
      {"n_failed_vocals", report.retrieval.n_failed_vocals},
  };
  json["epsilon_s"] = {
      {"seperewa", epsilon_to_json(report.epsilon_seperewa)},
      {"vocals", epsilon_to_json(report.epsilon_vocals)},
  };
  json["degree_density"] = {
      {"seperewa", density_to_json(report.density_seperewa)},
      {"vocals", density_to_json(report.density_vocals)},
  };
  auto comparison = nlohmann::ordered_json::array();
  for (const ComparisonRow& row : report.comparison) {
    const DegreeRowName name = degree_row_name(row.degree);
    comparison.push_back({{"degree", name.degree},
                          {"quality", name.quality},
                          {"n_songs", row.n_songs},
                          {"mean_distance_cents", row.mean_distance_cents},
                          {"std_distance_cents", row.std_distance_cents}});
  }
  json["comparison"] = comparison;

  auto failures = nlohmann::ordered_json::array();
  for (const auto& [id, error] : failed_songs) {
    failures.push_back({{"id", id}, {"error", error}});
  }
  json["failed_songs"] = failures;
  return json;
}

}  // namespace sap
