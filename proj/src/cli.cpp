/// @file cli.cpp
/// @brief Subcommand drivers: corpus analysis, single-song analysis,
///        synthetic corpus generation.

#include "sap/cli.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sap/errors.h"
#include "sap/io.h"
#include "sap/report.h"
#include "sap/version.h"

namespace sap {

namespace {

/// Worker count actually used: explicit flag first, then SAP_WORKERS, then
/// the hardware default; always at least one, never more than jobs.
int resolve_workers(int requested, std::size_t n_jobs) {
  int workers = requested;
  if (workers <= 0) {
    if (const char* env = std::getenv("SAP_WORKERS")) {
      int parsed = 0;
      const auto [ptr, ec] =
          std::from_chars(env, env + std::char_traits<char>::length(env), parsed);
      if (ec == std::errc{} && *ptr == '\0' && parsed > 0) workers = parsed;
    }
  }
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
  }
  if (workers <= 0) workers = 1;
  return static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(workers),
                            std::max<std::size_t>(n_jobs, 1)));
}

struct SongOutcome {
  std::optional<SongAnalysis> analysis;
  std::string error;  // set iff the whole song failed
};

/// Runs analyze_song over all records on a small worker pool. Slot i of the
/// result belongs to records[i], so scheduling never reorders anything.
std::vector<SongOutcome> analyze_all(const std::vector<SongRecord>& records,
                                     const AnalysisOptions& options,
                                     int workers) {
  std::vector<SongOutcome> outcomes(records.size());
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= records.size()) break;
      try {
        outcomes[i].analysis = analyze_song(records[i], options);
      } catch (const Error& err) {
        outcomes[i].error = err.what();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return outcomes;
}

nlohmann::ordered_json options_to_json(const AnalysisOptions& options) {
  return {
      {"confidence_threshold", options.confidence_threshold},
      {"bin_cents", options.bin_cents},
      {"range_lo_cents", options.range_lo_cents},
      {"range_hi_cents", options.range_hi_cents},
      {"merge_radius_cents", options.merge_radius_cents},
      {"fit",
       {{"k_min", options.fit.k_min},
        {"k_max", options.fit.k_max},
        {"max_iters", options.fit.max_iters},
        {"rel_tol", options.fit.rel_tol},
        {"variance_floor_cents", options.fit.variance_floor_cents},
        {"min_weight", options.fit.min_weight},
        {"seed", options.fit.seed}}},
  };
}

std::string dump(const nlohmann::ordered_json& json) {
  return json.dump(2) + "\n";
}

}  // namespace

int run_analyze(const RunConfig& config, std::ostream& log) {
  std::vector<SongRecord> records;
  try {
    records = load_manifest(config.manifest_path);
  } catch (const Error& err) {
    log << "error: " << err.what() << "\n";
    return kExitParseError;
  }

  const int workers = resolve_workers(config.workers, records.size());
  log << "analyzing " << records.size() << " song(s) with " << workers
      << " worker(s)\n";
  const std::vector<SongOutcome> outcomes =
      analyze_all(records, config.options, workers);

  std::vector<SongAnalysis> analyses;
  std::vector<std::pair<std::string, std::string>> failed_songs;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].analysis) {
      analyses.push_back(*outcomes[i].analysis);
    } else {
      failed_songs.emplace_back(records[i].id, outcomes[i].error);
    }
  }
  std::sort(failed_songs.begin(), failed_songs.end());

  const std::filesystem::path out_dir(config.out_dir);
  for (const SongAnalysis& analysis : analyses) {
    write_file(out_dir / "songs" / (analysis.id + ".json"),
               dump(song_to_json(analysis)));
  }

  const CorpusReport report = build_report(analyses);
  write_file(out_dir / "retrieval.csv", retrieval_csv(report.retrieval));
  write_file(out_dir / "epsilon.csv",
             epsilon_csv(report.epsilon_seperewa, report.epsilon_vocals));
  write_file(out_dir / "density_seperewa.csv",
             density_csv(report.density_seperewa));
  write_file(out_dir / "density_vocals.csv", density_csv(report.density_vocals));
  write_file(out_dir / "comparison.csv", comparison_csv(report.comparison));
  write_file(out_dir / "report.json", dump(report_to_json(report, failed_songs)));

  nlohmann::ordered_json metadata;
  metadata["tool"] = kToolName;
  metadata["version"] = kVersion;
  metadata["command"] = "analyze";
  metadata["manifest"] = config.manifest_path;
  metadata["out_dir"] = config.out_dir;
  metadata["options"] = options_to_json(config.options);
  metadata["workers_requested"] = config.workers;
  metadata["n_songs"] = records.size();
  metadata["n_failed_songs"] = failed_songs.size();
  write_file(out_dir / "run_metadata.json", dump(metadata));

  // One line per problem, song-level first, everything ordered by song id.
  // Song-level messages already name their song.
  std::vector<std::string> error_lines;
  for (const auto& failure : failed_songs) {
    error_lines.push_back(failure.second);
  }
  std::vector<const SongAnalysis*> sorted;
  for (const SongAnalysis& analysis : analyses) sorted.push_back(&analysis);
  std::sort(sorted.begin(), sorted.end(),
            [](const SongAnalysis* a, const SongAnalysis* b) {
              return a->id < b->id;
            });
  int fully_failed = static_cast<int>(failed_songs.size());
  for (const SongAnalysis* analysis : sorted) {
    for (TrackRole role : {TrackRole::kSeperewa, TrackRole::kVocals}) {
      const TrackAnalysis& track = analysis->track(role);
      if (!track.ok) {
        error_lines.push_back("song '" + analysis->id + "': " +
                              track_role_name(role) +
                              " track failed: " + track.error);
      }
    }
    if (!analysis->seperewa.ok && !analysis->vocals.ok) ++fully_failed;
  }
  if (!error_lines.empty()) {
    std::string joined;
    for (const std::string& line : error_lines) joined += line + "\n";
    write_file(out_dir / "errors.log", joined);
    log << error_lines.size() << " problem(s) logged to "
        << (out_dir / "errors.log").string() << "\n";
  }

  log << "wrote report to " << out_dir.string() << "\n";
  if (!records.empty() && fully_failed == static_cast<int>(records.size())) {
    log << "error: no song produced any analysis\n";
    return kExitAllFailed;
  }
  return kExitOk;
}

int run_song(const SongRecord& record, const AnalysisOptions& options,
             std::ostream& out, std::ostream& log) {
  try {
    const SongAnalysis analysis = analyze_song(record, options);
    out << dump(song_to_json(analysis));
  } catch (const Error& err) {
    log << "error: " << err.what() << "\n";
    return kExitParseError;
  }
  return kExitOk;
}

namespace {

/// Context-carrying accessor so every spec diagnostic names the offending
/// field, e.g. "songs[2].vocals.notes[0].std_cents".
class SpecReader {
 public:
  SpecReader(const nlohmann::json& node, std::string path)
      : node_(node), path_(std::move(path)) {}

  const nlohmann::json& raw() const { return node_; }
  const std::string& path() const { return path_; }

  SpecReader field(const std::string& name) const {
    if (!node_.is_object() || !node_.contains(name)) {
      throw ParseError(path_ + ": missing field '" + name + "'");
    }
    return SpecReader(node_.at(name), path_ + "." + name);
  }

  bool has(const std::string& name) const {
    return node_.is_object() && node_.contains(name);
  }

  SpecReader at(std::size_t index) const {
    return SpecReader(node_.at(index),
                      path_ + "[" + std::to_string(index) + "]");
  }

  std::size_t size() const {
    if (!node_.is_array()) {
      throw ParseError(path_ + ": expected an array");
    }
    return node_.size();
  }

  double number() const {
    if (!node_.is_number()) {
      throw ParseError(path_ + ": expected a number");
    }
    return node_.get<double>();
  }

  std::int64_t integer() const {
    if (!node_.is_number_integer()) {
      throw ParseError(path_ + ": expected an integer");
    }
    return node_.get<std::int64_t>();
  }

  std::uint64_t unsigned_integer() const {
    if (!node_.is_number_unsigned()) {
      throw ParseError(path_ + ": expected a non-negative integer");
    }
    return node_.get<std::uint64_t>();
  }

  std::string text() const {
    if (!node_.is_string()) {
      throw ParseError(path_ + ": expected a string");
    }
    return node_.get<std::string>();
  }

 private:
  const nlohmann::json& node_;
  std::string path_;
};

Quality parse_quality(const SpecReader& reader) {
  const std::string value = reader.text();
  if (value == "major") return Quality::kMajor;
  if (value == "minor") return Quality::kMinor;
  throw ParseError(reader.path() + ": must be 'major' or 'minor', got '" +
                       value + "'");
}

ScaleSpec parse_track_spec(const SpecReader& reader, double tonic_hz) {
  ScaleSpec spec;
  spec.tonic_hz = tonic_hz;

  const SpecReader notes = reader.field("notes");
  const std::size_t n_notes = notes.size();
  if (n_notes == 0) {
    throw ParseError(notes.path() + ": at least one note required");
  }
  for (std::size_t i = 0; i < n_notes; ++i) {
    const SpecReader note = notes.at(i);
    NoteSpec parsed;
    parsed.position_cents = note.field("position_cents").number();
    parsed.std_cents = note.field("std_cents").number();
    if (parsed.std_cents <= 0.0) {
      throw ParseError(note.path() + ".std_cents: must be positive");
    }
    parsed.weight = note.field("weight").number();
    if (parsed.weight <= 0.0) {
      throw ParseError(note.path() + ".weight: must be positive");
    }
    spec.notes.push_back(parsed);
  }

  spec.n_frames = reader.field("n_frames").integer();
  if (spec.n_frames <= 0) {
    throw ParseError(reader.path() + ".n_frames: must be positive");
  }
  if (reader.has("confidence")) {
    const SpecReader confidence = reader.field("confidence");
    if (confidence.size() != 2) {
      throw ParseError(confidence.path() + ": expected [lo, hi]");
    }
    spec.confidence_lo = confidence.at(0).number();
    spec.confidence_hi = confidence.at(1).number();
    if (spec.confidence_lo < 0.0 || spec.confidence_hi > 1.0 ||
        spec.confidence_lo > spec.confidence_hi) {
      throw ParseError(confidence.path() + ": must satisfy 0 <= lo <= hi <= 1");
    }
  }
  if (reader.has("unvoiced_fraction")) {
    spec.unvoiced_fraction = reader.field("unvoiced_fraction").number();
    if (spec.unvoiced_fraction < 0.0 || spec.unvoiced_fraction > 1.0) {
      throw ParseError(reader.path() + ".unvoiced_fraction: must lie in [0, 1]");
    }
  }
  if (!reader.has("seed")) {
    // Generation must be reproducible; a silent default would hide that.
    throw ParseError(reader.path() +
                         ".seed: explicit seed required for reproducibility");
  }
  spec.seed = reader.field("seed").unsigned_integer();
  return spec;
}

std::vector<SongSpec> parse_synth_spec(const std::string& content,
                                       const std::string& origin) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(content);
  } catch (const nlohmann::json::parse_error& err) {
    throw ParseError("spec '" + origin + "' is not valid JSON: " + err.what());
  }

  const SpecReader root(doc, "spec");
  const SpecReader songs = root.field("songs");
  std::vector<SongSpec> specs;
  std::set<std::string> seen_ids;
  for (std::size_t i = 0; i < songs.size(); ++i) {
    const SpecReader song = songs.at(i);
    SongSpec spec;
    spec.id = song.field("id").text();
    if (spec.id.empty() || spec.id.find('/') != std::string::npos ||
        spec.id.find('\\') != std::string::npos) {
      throw ParseError(song.path() + ".id: must be a path-safe name");
    }
    if (!seen_ids.insert(spec.id).second) {
      throw ParseError(song.path() + ".id: duplicate id '" + spec.id + "'");
    }
    spec.tuning.tonic_hz = song.field("tonic_hz").number();
    if (spec.tuning.tonic_hz <= 0.0) {
      throw ParseError(song.path() + ".tonic_hz: must be positive");
    }
    spec.tuning.third = parse_quality(song.field("third"));
    spec.tuning.sixth = parse_quality(song.field("sixth"));
    spec.seperewa = parse_track_spec(song.field("seperewa"), spec.tuning.tonic_hz);
    spec.vocals = parse_track_spec(song.field("vocals"), spec.tuning.tonic_hz);
    specs.push_back(std::move(spec));
  }
  return specs;
}

}  // namespace

int run_synth(const std::string& spec_path, const std::string& out_dir,
              std::ostream& out, std::ostream& log) {
  try {
    const std::string content = read_file(spec_path);
    const std::vector<SongSpec> specs = parse_synth_spec(content, spec_path);
    if (specs.empty()) {
      log << "warning: spec lists no songs; writing an empty manifest\n";
    }
    const std::filesystem::path manifest = generate_corpus(specs, out_dir);
    log << "generated " << specs.size() << " song(s)\n";
    out << manifest.string() << "\n";
  } catch (const Error& err) {
    log << "error: " << err.what() << "\n";
    return kExitParseError;
  }
  return kExitOk;
}

}  // namespace sap
