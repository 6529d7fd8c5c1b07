#include "rician/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <tuple>

#include "rician/batch.hpp"
#include "rician/errors.hpp"
#include "rician/rng.hpp"

namespace rician {

void SweepSpec::validate() const {
  if (n_total < 2) throw UsageError("n must be >= 2");
  if (kappa_values.empty()) throw UsageError("at least one kappa value is required");
  for (double k : kappa_values) {
    if (!(k >= 0.0) || std::isnan(k)) throw UsageError("kappa must be >= 0");
  }
  if (!std::isfinite(rho_db)) throw UsageError("rho (dB) must be finite");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw UsageError("epsilon must lie in (0, 1)");
  if (np_values.empty()) throw UsageError("at least one n_p value is required");
  for (int np : np_values) {
    if (np < 0) throw UsageError("n_p must be >= 0");
  }
  if (bounds.empty()) throw UsageError("at least one bound is required");
  const bool sampled = std::any_of(bounds.begin(), bounds.end(),
                                   [](BoundKind k) { return k != BoundKind::normal_approx; });
  if (sampled && samples < 2) throw UsageError("samples must be >= 2");
  if (!(tolerance > 0.0 && tolerance < 1.0)) throw UsageError("tolerance must lie in (0, 1)");
  const bool has_pilot = std::find(bounds.begin(), bounds.end(), BoundKind::pilot_dt) != bounds.end();
  const bool pilots_requested = std::any_of(np_values.begin(), np_values.end(), [](int v) { return v > 0; });
  if (pilots_requested && !has_pilot) {
    throw UsageError("n_p > 0 requires the pilot-dt bound");
  }
}

Expansion expand(const SweepSpec& spec) {
  spec.validate();
  std::vector<int> ells = spec.ell_values;
  if (ells.empty()) {
    for (int d : divisors(spec.n_total)) {
      if (spec.n_total / d >= 2) ells.push_back(d);
    }
  }
  for (int ell : ells) derive_params(0.0, spec.rho_db, spec.n_total, ell);  // divisibility check
  std::sort(ells.begin(), ells.end());
  ells.erase(std::unique(ells.begin(), ells.end()), ells.end());

  std::vector<double> kappas = spec.kappa_values;
  std::sort(kappas.begin(), kappas.end());
  kappas.erase(std::unique(kappas.begin(), kappas.end()), kappas.end());
  std::vector<int> nps = spec.np_values;
  std::sort(nps.begin(), nps.end());
  nps.erase(std::unique(nps.begin(), nps.end()), nps.end());

  Expansion out;
  for (int ell : ells) {
    const int n_c = spec.n_total / ell;
    for (double kappa : kappas) {
      for (int np : nps) {
        if (np > 0 && np > n_c - 2) {
          std::ostringstream os;
          os << "skipping ell=" << ell << " kappa=" << kappa << " n_p=" << np << ": n_p > n_c - 2 = "
             << n_c - 2;
          out.warnings.push_back(os.str());
          continue;
        }
        out.points.push_back({ell, n_c, kappa, np});
      }
    }
  }
  if (out.points.empty()) throw UsageError("sweep expands to no parameter points");
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

ResultRow error_row(const ParameterPoint& point, BoundKind kind, std::size_t samples,
                    std::uint64_t seed, const std::string& message) {
  ResultRow row;
  row.point = point;
  row.kind = kind;
  row.rate_bpcu = std::numeric_limits<double>::quiet_NaN();
  row.stderr_rate = std::numeric_limits<double>::quiet_NaN();
  row.samples = samples;
  row.seed = seed;
  row.error = message;
  return row;
}

}  // namespace

RunResult run(const SweepSpec& spec, const RunOptions& options) {
  const auto start = Clock::now();
  const Expansion expansion = expand(spec);

  RunResult result;
  result.summary.skipped = expansion.warnings.size();
  result.summary.warnings = expansion.warnings;

  BatchOptions batch_options;
  batch_options.workers = options.workers;
  batch_options.chunk_size = options.chunk_size;
  batch_options.quadrature.relative_tolerance = spec.tolerance;

  // Cache keyed by sampler identity; entries are released once the last point using them is done.
  using Key = std::tuple<int, double, int>;  // ell, kappa, effective n_p
  std::map<Key, std::shared_ptr<const SampleBatch>> cache;

  for (std::size_t index = 0; index < expansion.points.size(); ++index) {
    const ParameterPoint& point = expansion.points[index];
    const auto point_start = Clock::now();

    ChannelParams params;
    try {
      params = derive_params(point.kappa, spec.rho_db, spec.n_total, point.ell);
    } catch (const std::exception& e) {
      for (BoundKind kind : spec.bounds) {
        result.rows.push_back(error_row(point, kind, 0, 0, e.what()));
        ++result.summary.failures;
      }
      continue;
    }

    for (BoundKind kind : spec.bounds) {
      const bool sampled = kind != BoundKind::normal_approx;
      const int sampler_np = kind == BoundKind::pilot_dt ? point.n_p : 0;
      const std::uint64_t key = batch_key(spec.master_seed, point.ell, point.n_c, params.kappa, params.rho, sampler_np);
      try {
        BoundResult bound;
        if (kind == BoundKind::normal_approx) {
          bound = normal_approx(params.rho, spec.n_total, spec.epsilon);
        } else {
          const Key cache_key{point.ell, params.kappa, sampler_np};
          auto it = cache.find(cache_key);
          if (it == cache.end()) {
            auto batch = std::make_shared<const SampleBatch>(generate_batch(
                params, PilotConfig{sampler_np}, spec.samples, key, batch_options));
            it = cache.emplace(cache_key, std::move(batch)).first;
          }
          const SampleBatch& batch = *it->second;
          switch (kind) {
            case BoundKind::dt: bound = dt_max_rate(batch, spec.epsilon, params); break;
            case BoundKind::converse: bound = converse_rate(batch, spec.epsilon, params); break;
            case BoundKind::pilot_dt:
              bound = pilot_dt_max_rate(batch, spec.epsilon, params, PilotConfig{point.n_p});
              break;
            case BoundKind::normal_approx: break;
          }
        }
        ResultRow row;
        row.point = point;
        row.kind = kind;
        row.rate_bpcu = bound.rate_bpcu;
        row.stderr_rate = bound.stderr_rate;
        row.aux = kind == BoundKind::converse ? bound.lambda_star : bound.log2_m_star;
        row.samples = sampled ? spec.samples : 0;
        row.seed = sampled ? key : 0;
        row.flagged = bound.infeasible || bound.vacuous || params.kappa_clamped;
        if (row.flagged) ++result.summary.flagged;
        result.rows.push_back(row);
      } catch (const std::exception& e) {
        result.rows.push_back(error_row(point, kind, sampled ? spec.samples : 0, sampled ? key : 0, e.what()));
        ++result.summary.failures;
      }
    }

    // Drop cached batches that no later point can use.
    const bool last_for_ell_kappa = index + 1 == expansion.points.size() ||
                                    expansion.points[index + 1].ell != point.ell ||
                                    expansion.points[index + 1].kappa != point.kappa;
    if (last_for_ell_kappa) cache.clear();
    result.summary.timings.push_back({point, seconds_since(point_start)});
  }
  result.summary.wall_seconds = seconds_since(start);
  return result;
}

}  // namespace rician
