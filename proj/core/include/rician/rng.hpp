#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>

namespace rician {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) {
  return mix64(seed ^ mix64(value));
}

constexpr std::uint64_t hash_values(std::uint64_t seed, std::initializer_list<std::uint64_t> values) {
  for (auto v : values) seed = hash_combine(seed, v);
  return seed;
}

/// Key of the sample stream for one parameter point. Bounds that need the
/// same batch (dt, converse, and the pilot path with n_p = 0) share it.
inline std::uint64_t batch_key(std::uint64_t master_seed, int ell, int n_c, double kappa,
                               double rho, int n_p) {
  return hash_values(master_seed,
                     {static_cast<std::uint64_t>(ell), static_cast<std::uint64_t>(n_c),
                      std::bit_cast<std::uint64_t>(kappa), std::bit_cast<std::uint64_t>(rho),
                      static_cast<std::uint64_t>(n_p)});
}

/// Seed of the generator for global sample `index` of a batch.
constexpr std::uint64_t sample_seed(std::uint64_t key, std::uint64_t index) {
  return hash_combine(key, index);
}

}  // namespace rician
