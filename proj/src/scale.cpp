/// @file scale.cpp
/// @brief Component merging, equal-temperament deviation, degree labeling.

#include "sap/scale.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "sap/errors.h"

namespace sap {

const std::array<Degree, kNumDegrees>& all_degrees() {
  static const std::array<Degree, kNumDegrees> degrees = {
      Degree::kTonic,      Degree::kMinorSecond,  Degree::kMajorSecond,
      Degree::kMinorThird, Degree::kMajorThird,   Degree::kFourth,
      Degree::kTritone,    Degree::kFifth,        Degree::kMinorSixth,
      Degree::kMajorSixth, Degree::kMinorSeventh, Degree::kMajorSeventh,
  };
  return degrees;
}

double canonical_cents(Degree degree) {
  return 100.0 * static_cast<double>(degree);
}

const char* degree_name(Degree degree) {
  switch (degree) {
    case Degree::kTonic:        return "tonic";
    case Degree::kMinorSecond:  return "minor_2nd";
    case Degree::kMajorSecond:  return "major_2nd";
    case Degree::kMinorThird:   return "minor_3rd";
    case Degree::kMajorThird:   return "major_3rd";
    case Degree::kFourth:       return "4th";
    case Degree::kTritone:      return "tritone";
    case Degree::kFifth:        return "5th";
    case Degree::kMinorSixth:   return "minor_6th";
    case Degree::kMajorSixth:   return "major_6th";
    case Degree::kMinorSeventh: return "minor_7th";
    case Degree::kMajorSeventh: return "major_7th";
  }
  return "?";
}

DegreeRowName degree_row_name(Degree degree) {
  switch (degree) {
    case Degree::kTonic:        return {"tonic", ""};
    case Degree::kMinorSecond:  return {"2nd", "minor"};
    case Degree::kMajorSecond:  return {"2nd", "major"};
    case Degree::kMinorThird:   return {"3rd", "minor"};
    case Degree::kMajorThird:   return {"3rd", "major"};
    case Degree::kFourth:       return {"4th", ""};
    case Degree::kTritone:      return {"tritone", ""};
    case Degree::kFifth:        return {"5th", ""};
    case Degree::kMinorSixth:   return {"6th", "minor"};
    case Degree::kMajorSixth:   return {"6th", "major"};
    case Degree::kMinorSeventh: return {"7th", "minor"};
    case Degree::kMajorSeventh: return {"7th", "major"};
  }
  return {"?", ""};
}

const char* quality_name(Quality quality) {
  return quality == Quality::kMajor ? "major" : "minor";
}

std::vector<GaussianComponent> merge_components(
    std::vector<GaussianComponent> components, double radius) {
  std::sort(components.begin(), components.end(),
            [](const GaussianComponent& a, const GaussianComponent& b) {
              return a.mean_cents < b.mean_cents;
            });

  while (components.size() > 1) {
    // Sorted by mean, so the closest pair is adjacent. A tie on distance
    // goes to the pair with the lower minimum mean, i.e. the first found.
    std::size_t best = 0;
    double best_dist = components[1].mean_cents - components[0].mean_cents;
    for (std::size_t i = 1; i + 1 < components.size(); ++i) {
      const double dist =
          components[i + 1].mean_cents - components[i].mean_cents;
      if (dist < best_dist) {
        best_dist = dist;
        best = i;
      }
    }
    if (best_dist >= radius) break;

    const GaussianComponent& a = components[best];
    const GaussianComponent& b = components[best + 1];
    const double weight = a.weight + b.weight;
    GaussianComponent merged;
    merged.mean_cents =
        (a.mean_cents * a.weight + b.mean_cents * b.weight) / weight;
    merged.std_cents =
        (a.std_cents * a.weight + b.std_cents * b.weight) / weight;
    merged.weight = weight;
    components[best] = merged;
    components.erase(components.begin() + static_cast<std::ptrdiff_t>(best) + 1);
    // The merged mean lies between the two inputs, so order is preserved.
  }
  return components;
}

double epsilon_s(const std::vector<GaussianComponent>& components) {
  if (components.empty()) {
    throw DomainError("epsilon_s requires at least one component");
  }
  double sum = 0.0;
  for (const GaussianComponent& comp : components) {
    // remainder() gives the signed distance to the nearest multiple of 100,
    // in [-50, +50].
    sum += std::abs(std::remainder(comp.mean_cents, 100.0));
  }
  return sum / static_cast<double>(components.size());
}

DegreeLabel label_degree(double mean_cents) {
  if (mean_cents < kDefaultRangeLoCents || mean_cents > kDefaultRangeHiCents) {
    throw DomainError("degree position " + std::to_string(mean_cents) +
                      " outside [" + std::to_string(kDefaultRangeLoCents) +
                      ", " + std::to_string(kDefaultRangeHiCents) + "]");
  }
  double folded = mean_cents;
  if (folded < 0.0) folded += 1200.0;
  if (folded >= 1200.0) folded -= 1200.0;

  // Nearest 100-cent position, with an exact half going up.
  auto slot = static_cast<int>(std::floor(folded / 100.0 + 0.5));
  DegreeLabel label;
  label.offset_cents = folded - 100.0 * slot;
  if (slot == kNumDegrees) slot = 0;  // 1150..1200 wraps to the tonic
  label.degree = static_cast<Degree>(slot);
  return label;
}

std::set<Degree> expected_degrees(const KnownTuning& tuning) {
  return {
      Degree::kTonic,
      Degree::kMajorSecond,
      tuning.third == Quality::kMajor ? Degree::kMajorThird
                                      : Degree::kMinorThird,
      Degree::kFourth,
      Degree::kFifth,
      tuning.sixth == Quality::kMajor ? Degree::kMajorSixth
                                      : Degree::kMinorSixth,
  };
}

RetrievalSets classify_retrieval(const std::set<Degree>& found,
                                 const std::set<Degree>& expected) {
  RetrievalSets sets;
  for (Degree degree : found) {
    if (expected.contains(degree)) {
      sets.retrieved.insert(degree);
    } else {
      sets.unexpected.insert(degree);
    }
  }
  for (Degree degree : expected) {
    if (!found.contains(degree)) sets.missing.insert(degree);
  }
  return sets;
}

std::set<Degree> ScaleEstimate::found_degrees() const {
  std::set<Degree> found;
  for (const DegreeLabel& label : labels) found.insert(label.degree);
  return found;
}

ScaleEstimate estimate_scale(const PitchHistogram& hist,
                             const KnownTuning& tuning,
                             const FitConfig& config, double merge_radius) {
  if (tuning.tonic_hz <= 0.0) {
    throw DomainError("tuning tonic must be positive, got " +
                      std::to_string(tuning.tonic_hz));
  }
  const MixtureModel model = select_model(hist, config);

  ScaleEstimate estimate;
  estimate.components = merge_components(model.components, merge_radius);
  estimate.labels.reserve(estimate.components.size());
  for (const GaussianComponent& comp : estimate.components) {
    estimate.labels.push_back(label_degree(comp.mean_cents));
  }
  estimate.epsilon = epsilon_s(estimate.components);
  estimate.k_selected = model.k;
  estimate.bic = model.bic;
  estimate.log_likelihood = model.log_likelihood;
  return estimate;
}

}  // namespace sap
