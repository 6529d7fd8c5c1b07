#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "rician/batch.hpp"
#include "rician/model.hpp"

namespace rician {

enum class BoundKind { dt, converse, pilot_dt, normal_approx };

std::string_view to_string(BoundKind kind);
/// Accepts "dt", "converse", "pilot-dt", "normal-approx"; throws UsageError otherwise.
BoundKind parse_bound_kind(std::string_view name);

/// One-sided 95% normal quantile used for the confidence adjustments.
inline constexpr double kConfidenceZ = 1.6448536269514722;

struct BoundResult {
  BoundKind kind = BoundKind::dt;
  double rate_bpcu = 0.0;
  double epsilon = 0.0;
  double stderr_rate = 0.0;
  std::optional<double> lambda_star;   // converse, nats
  std::optional<double> log2_m_star;   // achievability
  std::optional<int> n_p;
  bool infeasible = false;             // achievability: even M = 2 misses epsilon
  bool vacuous = false;                // converse: empirical CDF never clears epsilon
};

struct ErrorEstimate {
  double value = 0.0;
  double stderr_value = 0.0;
  bool degenerate_threshold = false;  // M <= 1

  double upper(double z = kConfidenceZ) const { return value + z * stderr_value; }
};

/// Threshold log((M-1)/2) in nats for M = 2^log2_m; -inf when M <= 1.
double dt_threshold(double log2_m);

/// Sample mean (and standard error) of exp(-[T - log((M-1)/2)]^+), M = 2^log2_m.
ErrorEstimate dt_error(const SampleBatch& batch, double log2_m);

/// Largest log2 M whose upper confidence bound on the DT error stays below epsilon.
BoundResult dt_max_rate(const SampleBatch& batch, double epsilon, const ChannelParams& params);

/// Pilot-assisted variant: same search, rate still divided by n_c * ell.
BoundResult pilot_dt_max_rate(const SampleBatch& batch, double epsilon, const ChannelParams& params,
                              const PilotConfig& pilots);

/// min over lambda >= 0 of (lambda - log(P[T <= lambda] - epsilon)) / (n ln 2), with the
/// empirical CDF replaced by its lower confidence bound. rate_bpcu is +inf if vacuous.
BoundResult converse_rate(const SampleBatch& batch, double epsilon, const ChannelParams& params);

/// (log(1+rho) - sqrt(V/n) Q^{-1}(epsilon)) / ln 2, floored at zero.
BoundResult normal_approx(double rho, int n, double epsilon);

}  // namespace rician
