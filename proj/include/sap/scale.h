/// @file scale.h
/// @brief Scale estimation on top of a fitted mixture: component merging,
///        equal-temperament deviation, and scale-degree labeling.

#pragma once

#include <array>
#include <set>
#include <string>
#include <vector>

#include "sap/mixture.h"

namespace sap {

/// Octave-folded scale degrees, one per 100-cent equal-tempered position.
enum class Degree {
  kTonic = 0,
  kMinorSecond,
  kMajorSecond,
  kMinorThird,
  kMajorThird,
  kFourth,
  kTritone,
  kFifth,
  kMinorSixth,
  kMajorSixth,
  kMinorSeventh,
  kMajorSeventh,
};

inline constexpr int kNumDegrees = 12;

/// All degrees in canonical (ascending cents) order.
const std::array<Degree, kNumDegrees>& all_degrees();

/// Canonical equal-tempered position: kTonic -> 0, kMinorSecond -> 100, ...
double canonical_cents(Degree degree);

/// Compact identifier, e.g. "major_6th".
const char* degree_name(Degree degree);

/// Row labels as a (degree, quality) pair, e.g. {"6th", "major"};
/// quality is empty for tonic, 4th, 5th and tritone.
struct DegreeRowName {
  const char* degree;
  const char* quality;
};
DegreeRowName degree_row_name(Degree degree);

/// A component's nearest degree plus its microtonal offset in [-50, +50).
struct DegreeLabel {
  Degree degree = Degree::kTonic;
  double offset_cents = 0.0;
};

enum class Quality { kMajor, kMinor };

const char* quality_name(Quality quality);

/// Expert-supplied tuning for one song: the tonic anchor and whether the
/// third and sixth degrees are major or minor. The second is always major,
/// the fourth and fifth always perfect, and the seventh always absent.
struct KnownTuning {
  double tonic_hz = 0.0;
  Quality third = Quality::kMajor;
  Quality sixth = Quality::kMajor;
};

inline constexpr double kDefaultMergeRadiusCents = 50.0;

/// Recursively merges the closest pair of components while any pair is
/// closer than `radius`. A merged component takes the weight-weighted mean
/// and std of the pair and the summed weight. Distance ties merge the pair
/// with the lower minimum mean first. Output is sorted by mean.
std::vector<GaussianComponent> merge_components(
    std::vector<GaussianComponent> components,
    double radius = kDefaultMergeRadiusCents);

/// Mean absolute distance of component means to the nearest 100-cent
/// gridline, in [0, 50]. Zero is perfect equal-temperament alignment.
/// Throws DomainError on empty input.
double epsilon_s(const std::vector<GaussianComponent>& components);

/// Labels a tonic-relative position in [-200, 1200]: fold into [0, 1200)
/// (negative values up one octave, exactly 1200 to 0), take the nearest
/// 100-cent degree, and report the residual offset in [-50, +50). An exact
/// +50 offset goes to the upper degree.
DegreeLabel label_degree(double mean_cents);

/// The six degrees implied by a known tuning.
std::set<Degree> expected_degrees(const KnownTuning& tuning);

struct RetrievalSets {
  std::set<Degree> retrieved;   // found && expected
  std::set<Degree> missing;     // expected && !found
  std::set<Degree> unexpected;  // found && !expected
};

RetrievalSets classify_retrieval(const std::set<Degree>& found,
                                 const std::set<Degree>& expected);

/// Final per-track scale: merged components, one label each, and the
/// equal-temperament deviation score.
struct ScaleEstimate {
  std::vector<GaussianComponent> components;  // pairwise >= merge radius apart
  std::vector<DegreeLabel> labels;
  double epsilon = 0.0;

  // Diagnostics from the underlying fit.
  int k_selected = 0;
  double bic = 0.0;
  double log_likelihood = 0.0;

  std::set<Degree> found_degrees() const;
};

/// Full post-fit pipeline: select_model, merge, label, score.
ScaleEstimate estimate_scale(const PitchHistogram& hist,
                             const KnownTuning& tuning,
                             const FitConfig& config = {},
                             double merge_radius = kDefaultMergeRadiusCents);

}  // namespace sap
