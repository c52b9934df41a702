/// @file report.h
/// @brief Plot-ready report artifacts: CSV tables and structured JSON.
///
/// Column layouts are fixed. CSV cells hold full-precision shortest
/// round-trip decimals so the files parse back into the exact values held
/// in the per-song JSON output.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sap/corpus.h"

namespace sap {

/// All four corpus-level result artifacts.
struct CorpusReport {
  RetrievalTable retrieval;
  EpsilonDistribution epsilon_seperewa;
  EpsilonDistribution epsilon_vocals;
  std::vector<DensityPoint> density_seperewa;
  std::vector<DensityPoint> density_vocals;
  std::vector<ComparisonRow> comparison;
};

CorpusReport build_report(const std::vector<SongAnalysis>& analyses);

/// degree,quality,n_in_tuning,seperewa_retrieved,seperewa_missing,
/// seperewa_unexpected,vocals_retrieved,vocals_missing,vocals_unexpected.
/// Degrees absent from every tuning leave the in-tuning cells empty.
/// Two trailing rows (avg, std) summarize each column over its numeric rows.
std::string retrieval_csv(const RetrievalTable& table);

/// song_id,track,epsilon_s — seperewa block first, then vocals, each sorted
/// by song id.
std::string epsilon_csv(const EpsilonDistribution& seperewa,
                        const EpsilonDistribution& vocals);

/// song_id,position_cents,std_cents,weight.
std::string density_csv(const std::vector<DensityPoint>& points);

/// degree,quality,n_songs,mean_distance_cents,std_distance_cents.
std::string comparison_csv(const std::vector<ComparisonRow>& rows);

nlohmann::ordered_json song_to_json(const SongAnalysis& analysis);

/// Failed songs are (id, error) pairs for songs that never produced an
/// analysis (unreadable or malformed inputs).
nlohmann::ordered_json report_to_json(
    const CorpusReport& report,
    const std::vector<std::pair<std::string, std::string>>& failed_songs);

}  // namespace sap
