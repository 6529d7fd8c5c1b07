#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "rician/density.hpp"
#include "rician/errors.hpp"
#include "support/oracles.hpp"

namespace rician {
namespace {

std::vector<cdouble> normals(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  std::vector<cdouble> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = {g(rng), g(rng)};
  return v;
}

TEST(LogG, FrozenReferenceValues) {
  // 60-digit mpmath quadrature (tests/oracles/generate.py).
  EXPECT_NEAR(log_G({1.0, 1.0, 0.0, 1}).log(), 0.5413248546129181, 1e-12);
  EXPECT_NEAR(log_G({2.0, 3.0, 1.5, 4}).log(), -2.520297077867228, 1e-12);
  EXPECT_NEAR(log_G({3.0, 0.0, 0.0, 1}).log(), -std::log(3.0), 1e-12);
}

TEST(LogG, ClosedFormWithoutLineOfSight) {
  EXPECT_NEAR(log_G({1.0, 1.0, 0.0, 1}).log(), std::log(std::numbers::e - 1.0), 1e-12);
  for (int nu : {1, 3, 11, 83}) {
    for (double a : {1e-3, 0.7, 25.0, 900.0, 4e4}) {
      const double p = 5.0;
      EXPECT_NEAR(log_G({p, a, 0.0, nu}).log(), oracle::log_G_rayleigh(p, a, nu),
                  1e-10 * std::max(1.0, std::abs(oracle::log_G_rayleigh(p, a, nu))))
          << nu << " " << a;
    }
  }
}

TEST(LogG, SmallArgumentLimit) {
  // (az)^{-nu/2} I_nu(2 sqrt(az)) -> 1 / Gamma(nu + 1) as a -> 0, so G -> 1 / (p nu!).
  EXPECT_NEAR(log_G({1.0, 1e-200, 0.0, 2}).log(), -std::log(2.0), 1e-12);
  EXPECT_NEAR(log_G({1.0, 0.0, 0.0, 2}).log(), -std::log(2.0), 1e-12);
}

TEST(LogG, MatchesDoubleSeries) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 40; ++i) {
    const int nu = 1 + static_cast<int>(u(rng) * 12);
    const double p = 0.5 + 30.0 * u(rng);
    const double a = std::pow(10.0, -2.0 + 5.0 * u(rng));
    const double b = i % 4 == 0 ? 0.0 : std::pow(10.0, -2.0 + 4.0 * u(rng));
    const double ref = oracle::log_G_double_series(p, a, b, nu);
    EXPECT_NEAR(log_G({p, a, b, nu}).log(), ref, 1e-9 * std::max(1.0, std::abs(ref)))
        << p << " " << a << " " << b << " " << nu;
  }
}

TEST(LogG, RejectsInvalidArguments) {
  EXPECT_THROW(log_G({0.0, 1.0, 0.0, 1}), UsageError);
  EXPECT_THROW(log_G({1.0, -1.0, 0.0, 1}), UsageError);
  EXPECT_THROW(log_G({1.0, 1.0, -1.0, 1}), UsageError);
  EXPECT_THROW(log_G({1.0, 1.0, 0.0, 0}), UsageError);
  EXPECT_THROW(log_G({INFINITY, 1.0, 0.0, 1}), UsageError);
}

TEST(OutputPdf, RayleighClosedForm) {
  // kappa = 0, n_c = 2, rho = 1, ||y||^2 = 2.
  const auto params = derive_params(0.0, 0.0, 4, 2);
  const double got = log_output_pdf(2.0, params).log();
  const double expected = -2.0 * std::log(std::numbers::pi) - 2.0 + oracle::log_G_rayleigh(3.0, 4.0, 1);
  EXPECT_NEAR(got, expected, 1e-12);
}

TEST(OutputPdf, DependsOnlyOnNorm) {
  const auto params = derive_params(10.0, 6.0, 168, 42);
  std::mt19937_64 rng(2);
  auto y = normals(rng, params.n_c);
  double norm2 = 0.0;
  for (auto& v : y) norm2 += std::norm(v);
  // A unitary rotation leaves the norm, hence the density, unchanged.
  const cdouble phase = std::polar(1.0, 0.7);
  double rotated = 0.0;
  for (auto& v : y) rotated += std::norm(phase * v);
  EXPECT_NEAR(log_output_pdf(norm2, params).log(), log_output_pdf(rotated, params).log(), 1e-12);
  EXPECT_THROW(log_output_pdf(-1.0, params), UsageError);
}

// log of the total mass of f_Y, reduced to a radial integral in t = log ||y||^2.
double log_output_mass(const ChannelParams& params) {
  const int n = params.n_c;
  const double lo = std::log(static_cast<double>(n)) - 50.0 / n - 3.0;
  const double hi = std::log(n * (1.0 + params.rho * n)) + 4.0;
  const double h = 0.01;
  std::vector<double> terms;
  for (double t = lo; t <= hi; t += h) {
    terms.push_back(n * t + log_output_pdf(std::exp(t), params).log());
  }
  const double peak = *std::max_element(terms.begin(), terms.end());
  double sum = 0.0;
  for (double v : terms) sum += std::exp(v - peak);
  return peak + std::log(sum * h) + n * std::log(std::numbers::pi) - std::lgamma(n);
}

TEST(OutputPdf, IntegratesToOne) {
  for (double kappa : {0.0, 1.0, 10.0, 1000.0}) {
    for (int n_c : {2, 12, 84}) {
      for (double rho_db : {0.0, 6.0}) {
        const auto params = derive_params(kappa, rho_db, 168, 168 / n_c);
        EXPECT_NEAR(log_output_mass(params), 0.0, 1e-8) << "kappa=" << kappa << " n_c=" << n_c << " rho=" << rho_db;
      }
    }
  }
}

TEST(InfoDensity, RayleighMatchesIncompleteGammaOracle) {
  std::mt19937_64 rng(5);
  for (int n_c : {2, 12, 84}) {
    for (double rho_db : {0.0, 6.0}) {
      const auto params = derive_params(0.0, rho_db, 168, 168 / n_c);
      for (int i = 0; i < 50; ++i) {
        const auto w = normals(rng, n_c);
        const double got = sample_info_density(params, w).value;
        const double ref = oracle::rayleigh_info_density(n_c, params.rho, w);
        EXPECT_NEAR(got, ref, 1e-8 * std::max(1.0, std::abs(ref))) << n_c << " " << rho_db;
      }
    }
  }
}

TEST(InfoDensity, MatchesDirectExpressionWithLineOfSight) {
  std::mt19937_64 rng(6);
  for (double kappa : {1.0, 10.0, 1000.0}) {
    for (int n_c : {2, 12}) {
      const auto params = derive_params(kappa, 6.0, 168, 168 / n_c);
      const auto w = normals(rng, n_c);
      // Same computation, written out with the double-series G and the full norms.
      const double snr = n_c * params.rho;
      const cdouble first = params.mu_h * std::sqrt(snr) + std::sqrt(params.sigma_h2 * snr + 1.0) * w[0];
      double w2 = 0.0, y2 = std::norm(first);
      for (int i = 0; i < n_c; ++i) w2 += std::norm(w[static_cast<std::size_t>(i)]);
      for (int i = 1; i < n_c; ++i) y2 += std::norm(w[static_cast<std::size_t>(i)]);
      const double s2 = params.sigma_h2;
      const double mu2 = params.mu_h * params.mu_h;
      const double ref = mu2 / s2 - w2 + y2 - std::log(s2 * snr + 1.0) + std::log(s2) -
                         std::lgamma(static_cast<double>(n_c)) -
                         oracle::log_G_double_series(snr + 1.0 / s2, y2 * snr, mu2 / (s2 * s2), n_c - 1);
      EXPECT_NEAR(sample_info_density(params, w).value, ref, 1e-8 * std::max(1.0, std::abs(ref)))
          << kappa << " " << n_c;
    }
  }
}

TEST(InfoDensity, ZeroNoise) {
  // W = 0: y = 0, so f(y|u) = f_Y(y) = pi^{-2} / 3 and S = 0.
  const auto params = derive_params(0.0, 0.0, 4, 2);
  const std::vector<cdouble> w(2, cdouble{});
  EXPECT_NEAR(sample_info_density(params, w).value, 0.0, 1e-12);
}

TEST(InfoDensity, WrongNoiseLength) {
  const auto params = derive_params(0.0, 0.0, 168, 14);
  const std::vector<cdouble> w(3);
  EXPECT_THROW(sample_info_density(params, w), UsageError);
}

TEST(PilotPosterior, DirectSubstitution) {
  const auto params = derive_params(0.0, 0.0, 168, 42);  // rho = 1
  const auto post = pilot_effective_params({1.0, 0.0}, params, PilotConfig{1});
  EXPECT_NEAR(post.mu_p.real(), 0.5, 1e-15);
  EXPECT_NEAR(post.mu_p.imag(), 0.0, 1e-15);
  EXPECT_NEAR(post.sigma_p2, 0.5, 1e-15);
  EXPECT_EQ(post.n_d, 3);
  EXPECT_THROW(pilot_effective_params({1.0, 0.0}, params, PilotConfig{0}), UsageError);
}

TEST(PilotPosterior, EstimationLimits) {
  const cdouble h_hat{0.3, -0.8};
  const auto sharp = pilot_effective_params(h_hat, derive_params(1.0, 80.0, 168, 14), PilotConfig{10});
  EXPECT_NEAR(std::abs(sharp.mu_p - h_hat), 0.0, 1e-7);
  EXPECT_LT(sharp.sigma_p2, 1e-8);
  const auto params = derive_params(1.0, -80.0, 168, 14);
  const auto vague = pilot_effective_params(h_hat, params, PilotConfig{1});
  EXPECT_NEAR(vague.mu_p.real(), params.mu_h, 1e-7);
  EXPECT_NEAR(vague.sigma_p2, params.sigma_h2, 1e-7);
  EXPECT_LT(vague.sigma_p2, params.sigma_h2);
}

TEST(PilotDensity, MatchesStraightLineOracle) {
  std::mt19937_64 rng(8);
  const auto params = derive_params(0.0, 0.0, 168, 42);  // n_c = 4, rho = 1
  const oracle::PilotOracle ref{0.0, params.rho, 4, 1};
  for (int i = 0; i < 20; ++i) {
    const auto draw = normals(rng, 1)[0];
    const auto w = normals(rng, 3);
    const double got = sample_pilot_info_density(params, PilotConfig{1}, draw, w).value;
    const double want = ref(draw, w);
    EXPECT_NEAR(got, want, 1e-8 * std::max(1.0, std::abs(want)));
  }
  const auto rician = derive_params(10.0, 6.0, 168, 14);
  const oracle::PilotOracle ref10{10.0, rician.rho, 12, 4};
  const auto draw = normals(rng, 1)[0];
  const auto w = normals(rng, 8);
  EXPECT_NEAR(sample_pilot_info_density(rician, PilotConfig{4}, draw, w).value, ref10(draw, w), 1e-7);
}

TEST(PilotDensity, NoPilotsIsNoncoherent) {
  std::mt19937_64 rng(9);
  const auto params = derive_params(10.0, 6.0, 168, 14);
  const auto w = normals(rng, params.n_c);
  const double a = sample_pilot_info_density(params, PilotConfig{0}, {0.4, 0.1}, w).value;
  const double b = sample_info_density(params, w).value;
  EXPECT_EQ(a, b);
}

TEST(PilotDensity, RejectsTooManyPilots) {
  const auto params = derive_params(0.0, 6.0, 168, 42);
  const std::vector<cdouble> w(1);
  EXPECT_THROW(sample_pilot_info_density(params, PilotConfig{3}, {}, w), UsageError);
}

}  // namespace
}  // namespace rician
