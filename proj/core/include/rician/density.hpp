#pragma once

#include <complex>
#include <span>

#include "rician/log_value.hpp"
#include "rician/model.hpp"
#include "rician/quadrature.hpp"

namespace rician {

using cdouble = std::complex<double>;

/// Arguments of G(p, a, b, nu) = int_0^inf e^{-pz} (az)^{-nu/2} I_0(2 sqrt(bz)) I_nu(2 sqrt(az)) dz.
struct GIntegralArgs {
  double p = 1.0;  // exponential rate, rho n_c + 1/sigma^2
  double a = 0.0;  // ||y||^2 rho n_c
  double b = 0.0;  // |mu|^2 / sigma^4
  int nu = 1;      // n_c - 1

  void validate() const;
};

/// log G(p, a, b, nu) by log-domain quadrature. The integral is taken in
/// t = sqrt(z), where the peak is close to Gaussian; the bracket handed to
/// the quadrature starts at the Laplace point t = (sqrt(a) + sqrt(b)) / p.
/// Only the tolerance and subdivision limit of `spec` are used.
LogValue log_G(const GIntegralArgs& args, const QuadratureSpec& spec = {},
               QuadratureStats* stats = nullptr);

/// Law of one coherence block as seen by the information density:
/// y = h x + w with h ~ CN(mean, variance), ||x||^2 = dims * rho, w ~ CN(0, I_dims).
struct BlockLaw {
  cdouble mean{0.0, 0.0};
  double variance = 1.0;
  int dims = 2;
  double rho = 1.0;
};

BlockLaw noncoherent_law(const ChannelParams& params);

/// log f_Y(y) of the shell-code-induced output density. Depends on y only
/// through ||y||^2, so it is invariant under unitary rotations of y.
LogValue log_output_pdf(double y_norm2, const ChannelParams& params, const QuadratureSpec& spec = {});
LogValue log_output_pdf(double y_norm2, const BlockLaw& law, const QuadratureSpec& spec = {});

struct InfoDensitySample {
  double value = 0.0;  // nats
};

/// One realization of the per-block information density log f(y|u)/f_Y(y),
/// with y drawn from the channel law given u = e_1 and the noise injected
/// by the caller (`noise` holds law.dims complex standard normals).
InfoDensitySample info_density(const BlockLaw& law, std::span<const cdouble> noise,
                               const QuadratureSpec& spec = {});

/// Noncoherent sampler; `noise` must hold exactly params.n_c entries.
InfoDensitySample sample_info_density(const ChannelParams& params, std::span<const cdouble> noise,
                                      const QuadratureSpec& spec = {});

/// Posterior of the fading coefficient given a pilot-based estimate.
struct PilotPosterior {
  cdouble mu_p{0.0, 0.0};
  double sigma_p2 = 1.0;
  int n_d = 0;
};

/// Throws UsageError when pilots.n_p == 0 (use the noncoherent path instead).
PilotPosterior pilot_effective_params(cdouble h_hat, const ChannelParams& params,
                                      const PilotConfig& pilots);

/// Pilot-assisted sampler. `estimate_draw` is a complex standard normal that
/// is mapped to the estimate H_hat ~ CN(mu_h, sigma_h2 + sigma_e2); `noise`
/// holds n_d complex standard normals. With n_p == 0 this is exactly the
/// noncoherent sampler (the estimate draw is ignored and `noise` holds n_c entries).
InfoDensitySample sample_pilot_info_density(const ChannelParams& params, const PilotConfig& pilots,
                                            cdouble estimate_draw, std::span<const cdouble> noise,
                                            const QuadratureSpec& spec = {});

}  // namespace rician
