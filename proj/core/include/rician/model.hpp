#pragma once

#include <optional>
#include <string>
#include <vector>

namespace rician {

/// Largest Rician factor accepted; larger values are clamped (with a flag set).
inline constexpr double kMaxKappa = 1e6;

/// SISO Rician block-fading channel: H_k ~ CN(mu_h, sigma_h2) per coherence block.
struct ChannelParams {
  double kappa = 0.0;  // Rician factor (after clamping)
  double rho = 1.0;    // SNR, linear
  int n_c = 2;         // channel uses per coherence block
  int ell = 1;         // diversity branches (coherence blocks per codeword)
  double mu_h = 0.0;     // sqrt(kappa / (1 + kappa))
  double sigma_h2 = 1.0; // 1 / (1 + kappa)
  bool kappa_clamped = false;

  int blocklength() const { return n_c * ell; }
};

/// Pilot symbols per coherence block. n_p == 0 selects noncoherent transmission.
struct PilotConfig {
  int n_p = 0;

  int n_d(const ChannelParams& params) const { return params.n_c - n_p; }
  /// Channel-estimation error variance 1/(n_p rho); requires n_p >= 1.
  double sigma_e2(const ChannelParams& params) const;
  /// Throws UsageError unless n_p == 0 or 1 <= n_p <= n_c - 2.
  void validate(const ChannelParams& params) const;
};

/// Codebook size and target average error probability.
struct CodeSpec {
  double log2_m = 0.0;
  double epsilon = 1e-3;

  double rate_bpcu(const ChannelParams& params) const { return log2_m / params.blocklength(); }
};

/// Divisors of n in ascending order.
std::vector<int> divisors(int n);

/// Builds channel parameters for a packet of n_total channel uses split into
/// ell coherence blocks. Throws UsageError when ell does not divide n_total
/// (the message lists the valid choices) or when n_c = n_total / ell < 2.
/// kappa above kMaxKappa is clamped and `kappa_clamped` is set.
ChannelParams derive_params(double kappa, double rho_db, int n_total, int ell);

double db_to_linear(double db);

}  // namespace rician
