#include "rician/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "rician/errors.hpp"
#include "rician/numerics.hpp"

namespace rician {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBisectionWidth = 1e-3;

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw UsageError("epsilon must lie in (0, 1), got " + std::to_string(epsilon));
  }
}

double search_log2_m(const SampleBatch& batch, double epsilon, double hi_start, double z,
                     bool& infeasible) {
  auto ok = [&](double log2_m) { return dt_error(batch, log2_m).upper(z) <= epsilon; };
  infeasible = false;
  if (!ok(1.0)) {
    infeasible = true;
    return 0.0;
  }
  double lo = 1.0;
  double hi = hi_start;
  while (ok(hi)) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > kBisectionWidth) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

BoundResult achievability(BoundKind kind, const SampleBatch& batch, double epsilon,
                          const ChannelParams& params) {
  check_epsilon(epsilon);
  batch.validate();
  const int n = params.blocklength();
  const double hi = n * std::log2(1.0 + params.rho) + 64.0;

  BoundResult r;
  r.kind = kind;
  r.epsilon = epsilon;
  bool infeasible = false;
  const double log2_m = search_log2_m(batch, epsilon, hi, kConfidenceZ, infeasible);
  r.infeasible = infeasible;
  r.log2_m_star = log2_m;
  r.rate_bpcu = log2_m / n;

  // Spread of the answer when the confidence level moves by one standard error.
  bool flag = false;
  const double looser = search_log2_m(batch, epsilon, hi, kConfidenceZ - 1.0, flag);
  const double tighter = search_log2_m(batch, epsilon, hi, kConfidenceZ + 1.0, flag);
  r.stderr_rate = std::max(0.0, 0.5 * (looser - tighter) / n);
  return r;
}

}  // namespace

std::string_view to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::dt: return "dt";
    case BoundKind::converse: return "converse";
    case BoundKind::pilot_dt: return "pilot-dt";
    case BoundKind::normal_approx: return "normal-approx";
  }
  return "unknown";
}

BoundKind parse_bound_kind(std::string_view name) {
  for (auto k : {BoundKind::dt, BoundKind::converse, BoundKind::pilot_dt, BoundKind::normal_approx}) {
    if (to_string(k) == name) return k;
  }
  throw UsageError("unknown bound '" + std::string(name) +
                   "' (expected dt, converse, pilot-dt or normal-approx)");
}

double dt_threshold(double log2_m) {
  if (!(log2_m > 0.0)) return -kInf;
  // log(M - 1) = L + log(1 - e^{-L}) with L = log M.
  const double log_m = log2_m * std::numbers::ln2;
  return log_m + std::log(-std::expm1(-log_m)) - std::numbers::ln2;
}

ErrorEstimate dt_error(const SampleBatch& batch, double log2_m) {
  batch.validate();
  ErrorEstimate e;
  const double tau = dt_threshold(log2_m);
  if (std::isinf(tau)) {
    e.degenerate_threshold = true;
    return e;
  }
  double sum = 0.0;
  double sum2 = 0.0;
  for (double t : batch.sums) {
    const double v = std::exp(-std::max(0.0, t - tau));
    sum += v;
    sum2 += v * v;
  }
  const double n = static_cast<double>(batch.count());
  e.value = sum / n;
  const double var = std::max(0.0, (sum2 - n * e.value * e.value) / (n - 1.0));
  e.stderr_value = std::sqrt(var / n);
  return e;
}

BoundResult dt_max_rate(const SampleBatch& batch, double epsilon, const ChannelParams& params) {
  return achievability(BoundKind::dt, batch, epsilon, params);
}

BoundResult pilot_dt_max_rate(const SampleBatch& batch, double epsilon, const ChannelParams& params,
                              const PilotConfig& pilots) {
  pilots.validate(params);
  BoundResult r = achievability(BoundKind::pilot_dt, batch, epsilon, params);
  r.n_p = pilots.n_p;
  return r;
}

BoundResult converse_rate(const SampleBatch& batch, double epsilon, const ChannelParams& params) {
  check_epsilon(epsilon);
  batch.validate();
  std::vector<double> sorted = batch.sums;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());

  double best = kInf;
  double best_lambda = 0.0;
  auto consider = [&](double lambda, std::size_t below_or_equal) {
    const double f = below_or_equal / n;
    const double f_lcb = f - kConfidenceZ * std::sqrt(f * (1.0 - f) / n);
    if (f_lcb <= epsilon) return;
    const double objective = lambda - std::log(f_lcb - epsilon);
    if (objective < best) {
      best = objective;
      best_lambda = lambda;
    }
  };

  consider(0.0, static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), 0.0) - sorted.begin()));
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] < 0.0) continue;
    // Count ties so the CDF is evaluated at the top of each jump.
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    consider(sorted[i], i + 1);
  }

  BoundResult r;
  r.kind = BoundKind::converse;
  r.epsilon = epsilon;
  const double scale = params.blocklength() * std::numbers::ln2;
  if (std::isinf(best)) {
    r.vacuous = true;
    r.rate_bpcu = kInf;
    return r;
  }
  r.lambda_star = best_lambda;
  r.rate_bpcu = std::max(0.0, best / scale);

  // Delta-method error from the CDF estimate at the optimum.
  const double f = static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), best_lambda) -
                                       sorted.begin()) / n;
  const double f_lcb = f - kConfidenceZ * std::sqrt(f * (1.0 - f) / n);
  r.stderr_rate = std::sqrt(f * (1.0 - f) / n) / (f_lcb - epsilon) / scale;
  return r;
}

BoundResult normal_approx(double rho, int n, double epsilon) {
  check_epsilon(epsilon);
  if (!(rho > 0.0 && std::isfinite(rho))) throw UsageError("normal_approx: rho must be > 0");
  if (n < 1) throw UsageError("normal_approx: n must be >= 1");
  const double c = std::log1p(rho);
  const double v = rho * (2.0 + rho) / ((1.0 + rho) * (1.0 + rho));
  BoundResult r;
  r.kind = BoundKind::normal_approx;
  r.epsilon = epsilon;
  r.rate_bpcu = std::max(0.0, (c - std::sqrt(v / n) * q_inv(epsilon)) / std::numbers::ln2);
  return r;
}

}  // namespace rician
