#include "rician/density.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "rician/errors.hpp"
#include "rician/numerics.hpp"

namespace rician {

void GIntegralArgs::validate() const {
  if (!(std::isfinite(p) && p > 0.0)) throw UsageError("G integral: p must be finite and > 0");
  if (!(std::isfinite(a) && a >= 0.0)) throw UsageError("G integral: a must be finite and >= 0");
  if (!(std::isfinite(b) && b >= 0.0)) throw UsageError("G integral: b must be finite and >= 0");
  if (nu < 1) throw UsageError("G integral: nu must be >= 1");
}

LogValue log_G(const GIntegralArgs& args, const QuadratureSpec& spec, QuadratureStats* stats) {
  args.validate();
  const double sqrt_a = std::sqrt(args.a);
  const double sqrt_b = std::sqrt(args.b);
  const double p = args.p;
  const int nu = args.nu;

  // z = t^2: integrand 2t e^{-p t^2} (sqrt(a) t)^{-nu} I_nu(2 sqrt(a) t) I_0(2 sqrt(b) t).
  auto log_integrand = [=](double t) {
    double v = std::log(2.0 * t) - p * t * t + log_bessel_i_ratio(nu, sqrt_a * t);
    if (sqrt_b > 0.0) v += log_bessel_i(0, 2.0 * sqrt_b * t).log();
    return v;
  };

  const double t_laplace = (sqrt_a + sqrt_b) / p;
  const double width = 6.0 / std::sqrt(2.0 * p);
  QuadratureSpec local = spec;
  local.bracket_lo = std::max(0.0, t_laplace - width);
  local.bracket_hi = t_laplace + width;
  try {
    return integrate_halfline_log(log_integrand, local, stats);
  } catch (const ConvergenceError& e) {
    std::ostringstream os;
    os << e.what() << " [log_G p=" << p << " a=" << args.a << " b=" << args.b << " nu=" << nu
       << "]";
    throw ConvergenceError(os.str());
  }
}

BlockLaw noncoherent_law(const ChannelParams& params) {
  return BlockLaw{cdouble(params.mu_h, 0.0), params.sigma_h2, params.n_c, params.rho};
}

namespace {

GIntegralArgs g_args(double y_norm2, const BlockLaw& law) {
  const double block_snr = law.dims * law.rho;
  const double mean2 = std::norm(law.mean);
  return GIntegralArgs{block_snr + 1.0 / law.variance, y_norm2 * block_snr,
                       mean2 / (law.variance * law.variance), law.dims - 1};
}

}  // namespace

LogValue log_output_pdf(double y_norm2, const BlockLaw& law, const QuadratureSpec& spec) {
  if (!(y_norm2 >= 0.0)) throw UsageError("log_output_pdf: ||y||^2 must be >= 0");
  const double mean2 = std::norm(law.mean);
  const double log_norm = log_factorial(law.dims - 1) - std::log(law.variance) -
                          law.dims * std::log(std::numbers::pi) - y_norm2 - mean2 / law.variance;
  return LogValue::from_log(log_norm) * log_G(g_args(y_norm2, law), spec);
}

LogValue log_output_pdf(double y_norm2, const ChannelParams& params, const QuadratureSpec& spec) {
  return log_output_pdf(y_norm2, noncoherent_law(params), spec);
}

InfoDensitySample info_density(const BlockLaw& law, std::span<const cdouble> noise,
                               const QuadratureSpec& spec) {
  if (static_cast<int>(noise.size()) != law.dims) {
    throw UsageError("info_density: expected " + std::to_string(law.dims) + " noise entries, got " +
                     std::to_string(noise.size()));
  }
  const double block_snr = law.dims * law.rho;
  const double spread = law.variance * block_snr + 1.0;

  // y = W~: first entry carries the line-of-sight term and the fading spread.
  const cdouble first = law.mean * std::sqrt(block_snr) + std::sqrt(spread) * noise[0];
  double tail2 = 0.0;
  for (std::size_t i = 1; i < noise.size(); ++i) tail2 += std::norm(noise[i]);
  const double y_norm2 = std::norm(first) + tail2;

  // log f(y|u) = -dims log pi - log(spread) - ||W||^2 ; the ||W_{2..}||^2 terms cancel
  // against the same terms in ||y||^2 from log f_Y.
  const double mean2 = std::norm(law.mean);
  const double s = mean2 / law.variance + (std::norm(first) - std::norm(noise[0])) -
                   std::log(spread) + std::log(law.variance) - log_factorial(law.dims - 1) -
                   log_G(g_args(y_norm2, law), spec).log();
  return {s};
}

InfoDensitySample sample_info_density(const ChannelParams& params, std::span<const cdouble> noise,
                                      const QuadratureSpec& spec) {
  return info_density(noncoherent_law(params), noise, spec);
}

PilotPosterior pilot_effective_params(cdouble h_hat, const ChannelParams& params,
                                      const PilotConfig& pilots) {
  if (pilots.n_p < 1) {
    throw UsageError("pilot_effective_params: n_p = 0, use the noncoherent sampler");
  }
  const double se2 = pilots.sigma_e2(params);
  const double sh2 = params.sigma_h2;
  const double denom = sh2 + se2;
  return PilotPosterior{(sh2 * h_hat + se2 * params.mu_h) / denom, sh2 * se2 / denom,
                        pilots.n_d(params)};
}

InfoDensitySample sample_pilot_info_density(const ChannelParams& params, const PilotConfig& pilots,
                                            cdouble estimate_draw, std::span<const cdouble> noise,
                                            const QuadratureSpec& spec) {
  if (pilots.n_p == 0) return sample_info_density(params, noise, spec);
  pilots.validate(params);
  const double spread = std::sqrt(params.sigma_h2 + pilots.sigma_e2(params));
  const cdouble h_hat = params.mu_h + spread * estimate_draw;
  const PilotPosterior post = pilot_effective_params(h_hat, params, pilots);
  return info_density(BlockLaw{post.mu_p, post.sigma_p2, post.n_d, params.rho}, noise, spec);
}

}  // namespace rician
