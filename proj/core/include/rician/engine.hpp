#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rician/bounds.hpp"
#include "rician/model.hpp"

namespace rician {

struct SweepSpec {
  int n_total = 168;
  std::vector<int> ell_values;  // empty means every divisor with n_c >= 2
  std::vector<double> kappa_values{0.0};
  double rho_db = 6.0;
  double epsilon = 1e-3;
  std::vector<int> np_values{0};
  std::vector<BoundKind> bounds{BoundKind::dt, BoundKind::converse};
  std::size_t samples = 100000;
  std::uint64_t master_seed = 1;
  double tolerance = 1e-9;  // relative tolerance of the G-integral quadrature

  /// Throws UsageError on an invalid field.
  void validate() const;
};

struct ParameterPoint {
  int ell = 0;
  int n_c = 0;
  double kappa = 0.0;
  int n_p = 0;
};

struct Expansion {
  std::vector<ParameterPoint> points;
  std::vector<std::string> warnings;  // one per skipped point
};

/// Points ordered by ell, then kappa, then n_p. Points with n_p > n_c - 2 are
/// skipped with a warning. Throws UsageError if nothing is left.
Expansion expand(const SweepSpec& spec);

struct ResultRow {
  ParameterPoint point;
  BoundKind kind = BoundKind::dt;
  double rate_bpcu = 0.0;
  double stderr_rate = 0.0;
  std::optional<double> aux;  // lambda* for converse, log2 M* for achievability
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::optional<std::string> error;
  bool flagged = false;  // infeasible / vacuous / kappa clamped
};

struct PointTiming {
  ParameterPoint point;
  double seconds = 0.0;
};

struct RunSummary {
  std::size_t skipped = 0;
  std::size_t failures = 0;
  std::size_t flagged = 0;
  double wall_seconds = 0.0;
  std::vector<std::string> warnings;
  std::vector<PointTiming> timings;
};

struct RunOptions {
  int workers = 0;  // <= 0: hardware concurrency
  std::size_t chunk_size = 256;
};

struct RunResult {
  std::vector<ResultRow> rows;
  RunSummary summary;
};

/// Evaluates every requested bound at every expanded point. Batches are keyed
/// by (seed, ell, n_c, kappa, rho, n_p) and shared between bounds at a point,
/// and the pilot path with n_p = 0 reuses the noncoherent batch. Failures at a
/// point become error rows; the sweep carries on.
RunResult run(const SweepSpec& spec, const RunOptions& options = {});

}  // namespace rician
