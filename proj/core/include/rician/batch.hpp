#pragma once

#include <cstdint>
#include <vector>

#include "rician/model.hpp"
#include "rician/quadrature.hpp"

namespace rician {

/// i.i.d. realizations of T = sum over the ell blocks of the per-block information density (nats).
struct SampleBatch {
  std::vector<double> sums;
  std::uint64_t seed = 0;

  std::size_t count() const { return sums.size(); }
  /// Throws UsageError unless count >= 2 and every entry is finite.
  void validate() const;
};

struct BatchOptions {
  int workers = 1;            // <= 0 selects std::thread::hardware_concurrency()
  std::size_t chunk_size = 256;
  QuadratureSpec quadrature{};
};

/// Draws `samples` sums at the given point. Sample i uses its own generator
/// seeded from (key, i), so the result does not depend on workers or chunk size.
/// With pilots.n_p == 0 this is the noncoherent sampler.
SampleBatch generate_batch(const ChannelParams& params, const PilotConfig& pilots,
                           std::size_t samples, std::uint64_t key, const BatchOptions& options = {});

/// One sum T for global sample `index`; the building block of generate_batch.
double draw_sum(const ChannelParams& params, const PilotConfig& pilots, std::uint64_t key,
                std::uint64_t index, const QuadratureSpec& quadrature = {});

}  // namespace rician
