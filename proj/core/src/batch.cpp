#include "rician/batch.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "rician/density.hpp"
#include "rician/errors.hpp"
#include "rician/rng.hpp"

namespace rician {

void SampleBatch::validate() const {
  if (sums.size() < 2) throw UsageError("SampleBatch: at least two samples are required");
  for (double s : sums) {
    if (!std::isfinite(s)) throw UsageError("SampleBatch: non-finite sum");
  }
}

namespace {

struct Normals {
  std::mt19937_64 engine;
  std::normal_distribution<double> gauss{0.0, std::sqrt(0.5)};

  explicit Normals(std::uint64_t seed) : engine(seed) {}
  cdouble next() {
    const double re = gauss(engine);
    const double im = gauss(engine);
    return {re, im};
  }
};

}  // namespace

double draw_sum(const ChannelParams& params, const PilotConfig& pilots, std::uint64_t key,
                std::uint64_t index, const QuadratureSpec& quadrature) {
  Normals rng(sample_seed(key, index));
  const bool pilot_mode = pilots.n_p > 0;
  const int dims = pilot_mode ? pilots.n_d(params) : params.n_c;
  std::vector<cdouble> noise(static_cast<std::size_t>(dims));
  double total = 0.0;
  for (int k = 0; k < params.ell; ++k) {
    if (pilot_mode) {
      const cdouble estimate = rng.next();
      for (auto& w : noise) w = rng.next();
      total += sample_pilot_info_density(params, pilots, estimate, noise, quadrature).value;
    } else {
      for (auto& w : noise) w = rng.next();
      total += sample_info_density(params, noise, quadrature).value;
    }
  }
  return total;
}

SampleBatch generate_batch(const ChannelParams& params, const PilotConfig& pilots,
                           std::size_t samples, std::uint64_t key, const BatchOptions& options) {
  pilots.validate(params);
  options.quadrature.validate();
  if (options.chunk_size == 0) throw UsageError("generate_batch: chunk size must be > 0");

  SampleBatch batch;
  batch.seed = key;
  batch.sums.assign(samples, 0.0);

  const std::size_t chunks = (samples + options.chunk_size - 1) / options.chunk_size;
  int workers = options.workers > 0 ? options.workers
                                    : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), std::max<std::size_t>(chunks, 1)));

  std::atomic<std::size_t> next_chunk{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto work = [&] {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::size_t c = next_chunk.fetch_add(1);
      if (c >= chunks) return;
      const std::size_t begin = c * options.chunk_size;
      const std::size_t end = std::min(samples, begin + options.chunk_size);
      try {
        for (std::size_t i = begin; i < end; ++i) {
          batch.sums[i] = draw_sum(params, pilots, key, i, options.quadrature);
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
        return;
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
  if (error) std::rethrow_exception(error);
  return batch;
}

}  // namespace rician
