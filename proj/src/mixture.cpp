/// @file mixture.cpp
/// @brief Weighted EM and BIC model selection for 1-D Gaussian mixtures.

#include "sap/mixture.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "sap/errors.h"
#include "sap/rng.h"

namespace sap {

namespace {

constexpr double kHalfLog2Pi = 0.9189385332046727;  // 0.5 * ln(2*pi)
constexpr double kInitStdCents = 30.0;
constexpr double kInitMinPeakSpacingCents = 60.0;

struct WeightedData {
  std::vector<double> x;  // bin centers with non-zero counts
  std::vector<double> c;  // corresponding counts
  double total = 0.0;
};

WeightedData collect(const PitchHistogram& hist) {
  WeightedData data;
  for (std::size_t b = 0; b < hist.n_bins(); ++b) {
    if (hist.counts[b] > 0) {
      data.x.push_back(hist.center(b));
      data.c.push_back(static_cast<double>(hist.counts[b]));
      data.total += static_cast<double>(hist.counts[b]);
    }
  }
  return data;
}

/// Greedy peak-picking: highest count first, ties to the lower cents value,
/// subject to a minimum mutual spacing. Missing means are drawn uniformly
/// over the histogram range with the seeded generator.
std::vector<double> initial_means(const PitchHistogram& hist, int k,
                                  std::uint64_t seed) {
  struct Peak {
    double center;
    std::int64_t count;
  };
  std::vector<Peak> peaks;
  for (std::size_t b = 0; b < hist.n_bins(); ++b) {
    if (hist.counts[b] > 0) peaks.push_back({hist.center(b), hist.counts[b]});
  }
  std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.center < b.center;
  });

  std::vector<double> means;
  means.reserve(static_cast<std::size_t>(k));
  for (const Peak& peak : peaks) {
    if (means.size() == static_cast<std::size_t>(k)) break;
    const bool spaced =
        std::all_of(means.begin(), means.end(), [&](double m) {
          return std::abs(m - peak.center) >= kInitMinPeakSpacingCents;
        });
    if (spaced) means.push_back(peak.center);
  }

  SeededRng rng(seed);
  while (means.size() < static_cast<std::size_t>(k)) {
    means.push_back(rng.uniform(hist.lo, hist.hi));
  }
  return means;
}

struct EmState {
  std::vector<double> mean, stddev, weight;
  // Responsibilities, row-major [point][component].
  std::vector<double> resp;
};

/// One likelihood evaluation; fills responsibilities as a side effect.
double e_step(const WeightedData& data, EmState& state) {
  const std::size_t n = data.x.size();
  const std::size_t k = state.mean.size();
  state.resp.assign(n * k, 0.0);

  std::vector<double> log_w(k);
  for (std::size_t j = 0; j < k; ++j) log_w[j] = std::log(state.weight[j]);

  double ll = 0.0;
  std::vector<double> logp(k);
  for (std::size_t i = 0; i < n; ++i) {
    double max_logp = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < k; ++j) {
      const double z = (data.x[i] - state.mean[j]) / state.stddev[j];
      logp[j] = log_w[j] - kHalfLog2Pi - std::log(state.stddev[j]) - 0.5 * z * z;
      max_logp = std::max(max_logp, logp[j]);
    }
    double sum_exp = 0.0;
    for (std::size_t j = 0; j < k; ++j) sum_exp += std::exp(logp[j] - max_logp);
    const double lse = max_logp + std::log(sum_exp);
    for (std::size_t j = 0; j < k; ++j) {
      state.resp[i * k + j] = std::exp(logp[j] - lse);
    }
    ll += data.c[i] * lse;
  }
  return ll;
}

void m_step(const WeightedData& data, EmState& state, double variance_floor) {
  const std::size_t n = data.x.size();
  const std::size_t k = state.mean.size();
  for (std::size_t j = 0; j < k; ++j) {
    double nj = 0.0;
    double sum_x = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double w = data.c[i] * state.resp[i * k + j];
      nj += w;
      sum_x += w * data.x[i];
    }
    if (nj <= 0.0) {
      // Component lost all responsibility; keep its shape and let the
      // zero weight be pruned after convergence.
      state.weight[j] = 0.0;
      continue;
    }
    const double mu = sum_x / nj;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = data.x[i] - mu;
      sum_sq += data.c[i] * state.resp[i * k + j] * d * d;
    }
    state.mean[j] = mu;
    state.stddev[j] = std::max(std::sqrt(sum_sq / nj), variance_floor);
    state.weight[j] = nj / data.total;
  }
}

}  // namespace

MixtureModel fit_em(const PitchHistogram& hist, int k, const FitConfig& config) {
  const WeightedData data = collect(hist);
  const int n_support = static_cast<int>(data.x.size());
  if (k < 1 || k > n_support) {
    throw InfeasibleKError("k=" + std::to_string(k) +
                           " infeasible for a histogram with " +
                           std::to_string(n_support) + " non-empty bins");
  }

  EmState state;
  state.mean = initial_means(hist, k, config.seed);
  state.stddev.assign(static_cast<std::size_t>(k), kInitStdCents);
  state.weight.assign(static_cast<std::size_t>(k), 1.0 / static_cast<double>(k));

  MixtureModel model;
  model.n_samples = static_cast<std::int64_t>(std::llround(data.total));

  double ll = e_step(data, state);
  model.ll_history.push_back(ll);
  for (int iter = 0; iter < config.max_iters; ++iter) {
    m_step(data, state, config.variance_floor_cents);
    const double next_ll = e_step(data, state);
    if (!std::isfinite(next_ll)) {
      throw FitDivergedError("log-likelihood became non-finite at iteration " +
                             std::to_string(iter + 1) + " (k=" +
                             std::to_string(k) + ")");
    }
    model.ll_history.push_back(next_ll);
    model.n_iters = iter + 1;
    const double rel =
        std::abs(next_ll - ll) / std::max(std::abs(ll), 1.0);
    ll = next_ll;
    if (rel < config.rel_tol) {
      model.converged = true;
      break;
    }
  }

  // Drop negligible components and renormalize.
  std::vector<GaussianComponent> kept;
  for (std::size_t j = 0; j < state.mean.size(); ++j) {
    if (state.weight[j] >= config.min_weight) {
      kept.push_back({state.mean[j], state.stddev[j], state.weight[j]});
    }
  }
  if (kept.empty()) {
    const auto top = static_cast<std::size_t>(std::distance(
        state.weight.begin(),
        std::max_element(state.weight.begin(), state.weight.end())));
    kept.push_back({state.mean[top], state.stddev[top], state.weight[top]});
  }
  double weight_sum = 0.0;
  for (const GaussianComponent& comp : kept) weight_sum += comp.weight;
  for (GaussianComponent& comp : kept) comp.weight /= weight_sum;
  std::sort(kept.begin(), kept.end(),
            [](const GaussianComponent& a, const GaussianComponent& b) {
              return a.mean_cents < b.mean_cents;
            });

  // Score the model that is actually returned: pruning may have changed it.
  EmState final_state;
  for (const GaussianComponent& comp : kept) {
    final_state.mean.push_back(comp.mean_cents);
    final_state.stddev.push_back(comp.std_cents);
    final_state.weight.push_back(comp.weight);
  }
  model.log_likelihood = e_step(data, final_state);
  model.components = std::move(kept);
  model.k = static_cast<int>(model.components.size());
  model.bic = static_cast<double>(model.k) * 3.0 *
                  std::log(static_cast<double>(model.n_samples)) -
              2.0 * model.log_likelihood;
  return model;
}

MixtureModel select_model(const PitchHistogram& hist, const FitConfig& config) {
  const int n_support = hist.non_empty_bins();
  if (n_support < 1) {
    throw InsufficientDataError("histogram is empty");
  }
  if (config.k_min < 1 || config.k_min > config.k_max) {
    throw DomainError("invalid k range [" + std::to_string(config.k_min) +
                      ", " + std::to_string(config.k_max) + "]");
  }
  const int k_lo = std::min(config.k_min, n_support);
  const int k_hi = std::min(config.k_max, n_support);

  std::optional<MixtureModel> best;
  std::optional<FitError> first_error;
  for (int k = k_lo; k <= k_hi; ++k) {
    try {
      MixtureModel model = fit_em(hist, k, config);
      if (!best || model.bic < best->bic) {
        best = std::move(model);
      }
    } catch (const FitError& err) {
      if (!first_error) first_error = FitError(err.what());
    }
  }
  if (!best) {
    throw first_error.value_or(FitError("all component counts failed"));
  }
  return *best;
}

}  // namespace sap
