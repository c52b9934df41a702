/// @file mixture.h
/// @brief 1-D Gaussian mixture fitting on pitch histograms.
///
/// EM runs on histogram bin centers weighted by bin counts, which is
/// equivalent to raw-sample EM after the quantization step and keeps the
/// fit deterministic. Model order is chosen by BIC.

#pragma once

#include <cstdint>
#include <vector>

#include "sap/f0.h"

namespace sap {

/// One fitted note candidate.
struct GaussianComponent {
  double mean_cents = 0.0;
  double std_cents = 0.0;
  double weight = 0.0;
};

struct FitConfig {
  int k_min = 2;
  int k_max = 14;
  int max_iters = 200;
  double rel_tol = 1e-6;
  /// Lower bound on component std; one bin width keeps quantized data from
  /// producing singular components.
  double variance_floor_cents = 10.0;
  /// Components below this weight are dropped after convergence.
  double min_weight = 0.01;
  /// Drives the stochastic init fallback when the histogram has fewer
  /// usable peaks than requested components.
  std::uint64_t seed = 0;
};

struct MixtureModel {
  std::vector<GaussianComponent> components;  // sorted by mean_cents
  double log_likelihood = 0.0;
  std::int64_t n_samples = 0;
  int k = 0;
  double bic = 0.0;

  // Fit diagnostics.
  std::vector<double> ll_history;  // log-likelihood after init and per EM step
  int n_iters = 0;
  bool converged = false;
};

/// Fits a k-component mixture with weighted EM.
/// Throws InfeasibleKError when k is outside [1, non-empty bins] and
/// FitDivergedError when the log-likelihood becomes non-finite.
MixtureModel fit_em(const PitchHistogram& hist, int k,
                    const FitConfig& config = {});

/// Fits every feasible k in [k_min, k_max] and returns the lowest-BIC model;
/// ties go to the smaller k. k bounds are clamped to the number of non-empty
/// bins. Rethrows the first fit error only if every k fails.
MixtureModel select_model(const PitchHistogram& hist,
                          const FitConfig& config = {});

}  // namespace sap
