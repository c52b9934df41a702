/// @file test_report.cpp
/// @brief Report emitters: CSV layouts and JSON structure.

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <string>
#include <vector>

#include "sap/io.h"
#include "sap/report.h"

using namespace sap;

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t eol = text.find('\n', pos);
    lines.push_back(text.substr(pos, eol - pos));
    if (eol == std::string::npos) break;
    pos = eol + 1;
  }
  return lines;
}

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    cells.push_back(line.substr(pos, comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return cells;
}

TrackAnalysis made_track(TrackRole role, const std::vector<double>& positions,
                         const KnownTuning& tuning) {
  TrackAnalysis track;
  track.role = role;
  track.ok = true;
  track.n_frames = 1000;
  track.n_retained = 900;
  for (double position : positions) {
    track.estimate.components.push_back(
        {position, 12.0, 1.0 / static_cast<double>(positions.size())});
    track.estimate.labels.push_back(label_degree(position));
  }
  track.estimate.epsilon = epsilon_s(track.estimate.components);
  track.estimate.k_selected = static_cast<int>(positions.size());
  track.retrieval = classify_retrieval(track.estimate.found_degrees(),
                                       expected_degrees(tuning));
  return track;
}

SongAnalysis made_song(const std::string& id,
                       const std::vector<double>& seperewa_positions,
                       const std::vector<double>& vocals_positions) {
  SongAnalysis song;
  song.id = id;
  song.tuning = {220.0, Quality::kMajor, Quality::kMajor};
  song.seperewa =
      made_track(TrackRole::kSeperewa, seperewa_positions, song.tuning);
  song.vocals = made_track(TrackRole::kVocals, vocals_positions, song.tuning);
  return song;
}

std::vector<SongAnalysis> sample_corpus() {
  return {
      made_song("one", {0.0, 200.0, 400.0, 500.0, 700.0, 900.0},
                {0.0, 410.0, 700.0}),
      made_song("two", {30.0, 230.0, 1000.0}, {950.0}),
  };
}

}  // namespace

TEST_CASE("format_double round-trips through strtod") {
  for (double v : {0.0, 1.0, -17.25, 53.25, 29.040000000000001, 1e-9,
                   123456.789, -0.3333333333333333}) {
    const std::string text = format_double(v);
    CHECK(std::strtod(text.c_str(), nullptr) == v);
  }
}

TEST_CASE("retrieval_csv lays out 12 degree rows plus summary rows") {
  const CorpusReport report = build_report(sample_corpus());
  const auto lines = split_lines(retrieval_csv(report.retrieval));
  REQUIRE(lines.size() == 15);  // header + 12 degrees + avg + std
  CHECK(lines[0] ==
        "degree,quality,n_in_tuning,seperewa_retrieved,seperewa_missing,"
        "seperewa_unexpected,vocals_retrieved,vocals_missing,"
        "vocals_unexpected");

  const auto tonic = split_cells(lines[1]);
  REQUIRE(tonic.size() == 9);
  CHECK(tonic[0] == "tonic");
  CHECK(tonic[1] == "");
  CHECK(tonic[2] == "2");  // both songs have a tonic in tuning
  CHECK(tonic[3] == "2");  // both seperewa tracks found it

  // The minor second was never in any tuning: in-tuning cells are empty,
  // unexpected cells still carry numbers.
  const auto minor2 = split_cells(lines[2]);
  CHECK(minor2[0] == "2nd");
  CHECK(minor2[1] == "minor");
  CHECK(minor2[2] == "");
  CHECK(minor2[3] == "");
  CHECK(minor2[5] != "");

  CHECK(split_cells(lines[13])[0] == "avg");
  CHECK(split_cells(lines[14])[0] == "std");
}

TEST_CASE("retrieval_csv parses back into the aggregated counts") {
  const CorpusReport report = build_report(sample_corpus());
  const auto lines = split_lines(retrieval_csv(report.retrieval));
  for (int i = 0; i < 12; ++i) {
    const RetrievalRow& row = report.retrieval.rows[static_cast<std::size_t>(i)];
    const auto cells = split_cells(lines[static_cast<std::size_t>(i) + 1]);
    if (row.n_in_tuning > 0) {
      CHECK(std::atoi(cells[2].c_str()) == row.n_in_tuning);
      CHECK(std::atoi(cells[3].c_str()) == row.seperewa.retrieved);
      CHECK(std::atoi(cells[4].c_str()) == row.seperewa.missing);
      CHECK(std::atoi(cells[6].c_str()) == row.vocals.retrieved);
      CHECK(std::atoi(cells[7].c_str()) == row.vocals.missing);
    }
    CHECK(std::atoi(cells[5].c_str()) == row.seperewa.unexpected);
    CHECK(std::atoi(cells[8].c_str()) == row.vocals.unexpected);
  }
  const auto avg = split_cells(lines[13]);
  CHECK(std::strtod(avg[3].c_str(), nullptr) ==
        report.retrieval.seperewa_retrieved.mean);
  const auto std_row = split_cells(lines[14]);
  CHECK(std::strtod(std_row[4].c_str(), nullptr) ==
        report.retrieval.seperewa_missing.stddev);
}

TEST_CASE("epsilon_csv lists the seperewa block before the vocals block") {
  const CorpusReport report = build_report(sample_corpus());
  const auto lines =
      split_lines(epsilon_csv(report.epsilon_seperewa, report.epsilon_vocals));
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "song_id,track,epsilon_s");
  CHECK(split_cells(lines[1])[0] == "one");
  CHECK(split_cells(lines[1])[1] == "seperewa");
  CHECK(split_cells(lines[2])[0] == "two");
  CHECK(split_cells(lines[3])[1] == "vocals");
  CHECK(std::strtod(split_cells(lines[4])[2].c_str(), nullptr) == 50.0);
}

TEST_CASE("density_csv carries one row per component") {
  const CorpusReport report = build_report(sample_corpus());
  const auto lines = split_lines(density_csv(report.density_seperewa));
  CHECK(lines[0] == "song_id,position_cents,std_cents,weight");
  CHECK(lines.size() == 1 + 6 + 3);  // header + song one + song two
  const auto first = split_cells(lines[1]);
  CHECK(first[0] == "one");
  CHECK(std::strtod(first[1].c_str(), nullptr) == 0.0);
}

TEST_CASE("comparison_csv lists shared degrees in canonical order") {
  const CorpusReport report = build_report(sample_corpus());
  const auto lines = split_lines(comparison_csv(report.comparison));
  CHECK(lines[0] == "degree,quality,n_songs,mean_distance_cents,std_distance_cents");
  // Song one shares tonic, major 3rd (400 vs 410) and 5th between the
  // tracks; song two shares only the minor 7th (950 labels as -50 off 1000).
  REQUIRE(lines.size() == 5);
  CHECK(split_cells(lines[1])[0] == "tonic");
  const auto third = split_cells(lines[2]);
  CHECK(third[0] == "3rd");
  CHECK(third[1] == "major");
  CHECK(std::strtod(third[3].c_str(), nullptr) == 10.0);
  const auto seventh = split_cells(lines[4]);
  CHECK(seventh[0] == "7th");
  CHECK(seventh[1] == "minor");
  CHECK(std::strtod(seventh[3].c_str(), nullptr) == -50.0);
}

TEST_CASE("song_to_json reports tracks with labels and retrieval sets") {
  const SongAnalysis song = made_song("solo", {0.0, 930.0}, {0.0});
  const nlohmann::ordered_json json = song_to_json(song);

  CHECK(json["id"] == "solo");
  CHECK(json["tuning"]["tonic_hz"] == 220.0);
  CHECK(json["tuning"]["third"] == "major");

  const auto& sep = json["tracks"]["seperewa"];
  CHECK(sep["status"] == "ok");
  CHECK(sep["n_frames"] == 1000);
  REQUIRE(sep["components"].size() == 2);
  CHECK(sep["components"][1]["degree"] == "major_6th");
  CHECK(sep["components"][1]["offset_cents"].get<double>() == 30.0);
  CHECK(sep["retrieval"]["retrieved"].size() == 2);
  CHECK(sep["retrieval"]["missing"].size() == 4);

  SongAnalysis broken = song;
  broken.vocals.ok = false;
  broken.vocals.error = "vocals track has 7 usable frames (need 50)";
  const nlohmann::ordered_json failed = song_to_json(broken);
  CHECK(failed["tracks"]["vocals"]["status"] == "failed");
  CHECK(failed["tracks"]["vocals"].contains("error"));
  CHECK_FALSE(failed["tracks"]["vocals"].contains("components"));
}

TEST_CASE("report_to_json labels the score definition and failures") {
  const CorpusReport report = build_report(sample_corpus());
  const nlohmann::ordered_json json =
      report_to_json(report, {{"lost", "song 'lost': cannot open trace"}});

  const std::string definition = json["score_definition"].get<std::string>();
  CHECK(definition.find("SAP definition") != std::string::npos);
  CHECK(json["n_songs"] == 2);
  CHECK(json["retrieval"]["rows"].size() == 12);
  CHECK(json["retrieval"]["rows"][0]["degree"] == "tonic");
  CHECK(json["epsilon_s"]["seperewa"]["per_song"].size() == 2);
  REQUIRE(json["failed_songs"].size() == 1);
  CHECK(json["failed_songs"][0]["id"] == "lost");

  // Deterministic serialization.
  CHECK(json.dump(2) == report_to_json(report, {{"lost", "song 'lost': cannot open trace"}}).dump(2));
}
