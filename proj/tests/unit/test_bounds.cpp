#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rician/bounds.hpp"
#include "rician/errors.hpp"

namespace rician {
namespace {

SampleBatch batch_of(std::vector<double> sums) { return SampleBatch{std::move(sums), 0}; }

SampleBatch normal_batch(double mean, double sd, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(mean, sd);
  SampleBatch b;
  b.sums.resize(n);
  for (auto& s : b.sums) s = g(rng);
  return b;
}

const ChannelParams kParams = derive_params(0.0, 6.0, 168, 14);

TEST(DtError, WorkedExamples) {
  // M = 3 gives a zero threshold.
  const double log2_3 = std::log2(3.0);
  EXPECT_NEAR(dt_threshold(log2_3), 0.0, 1e-15);
  EXPECT_NEAR(dt_error(batch_of({0.0, 0.0}), log2_3).value, 1.0, 1e-15);
  EXPECT_NEAR(dt_error(batch_of({std::log(4.0), std::log(4.0)}), log2_3).value, 0.25, 1e-15);
  const auto one = dt_error(batch_of({1.0, 2.0}), 0.0);
  EXPECT_EQ(one.value, 0.0);
  EXPECT_TRUE(one.degenerate_threshold);
}

TEST(DtError, ThresholdForLargeM) {
  EXPECT_NEAR(dt_threshold(1000.0), 999.0 * std::numbers::ln2, 1e-10);
  EXPECT_NEAR(dt_threshold(1.0), std::log(0.5), 1e-15);
}

TEST(DtError, MonotoneInM) {
  const auto b = normal_batch(100.0, 10.0, 5000, 1);
  double prev = 0.0;
  for (double l = 1.0; l < 300.0; l += 0.37) {
    const double e = dt_error(b, l).value;
    EXPECT_GE(e, prev);
    prev = e;
  }
}

TEST(DtError, StandardError) {
  const auto e = dt_error(batch_of({0.0, std::log(4.0)}), std::log2(3.0));
  EXPECT_NEAR(e.value, 0.625, 1e-15);
  EXPECT_NEAR(e.stderr_value, 0.375, 1e-15);  // sample sd 0.53033 / sqrt(2)
}

TEST(DtMaxRate, FindsLargestFeasibleM) {
  // All sums equal t: error = min(1, (M-1)/2 e^{-t}), so the boundary is M - 1 = 2 eps e^t.
  const double t = 60.0;
  const auto b = batch_of(std::vector<double>(1000, t));
  const auto r = dt_max_rate(b, 1e-3, kParams);
  const double expected = std::log2(2e-3 * std::exp(t) + 1.0);
  ASSERT_TRUE(r.log2_m_star.has_value());
  EXPECT_NEAR(*r.log2_m_star, expected, 1e-3);
  EXPECT_LE(*r.log2_m_star, expected);
  EXPECT_NEAR(r.rate_bpcu, *r.log2_m_star / 168.0, 1e-15);
  EXPECT_FALSE(r.infeasible);
  EXPECT_EQ(r.stderr_rate, 0.0);
}

TEST(DtMaxRate, InfeasibleWhenEvenTwoCodewordsFail) {
  const auto r = dt_max_rate(batch_of({0.0, 0.1, -2.0}), 1e-3, kParams);
  EXPECT_TRUE(r.infeasible);
  EXPECT_EQ(r.rate_bpcu, 0.0);
}

TEST(DtMaxRate, MonotoneInEpsilon) {
  // Tightening epsilon never raises the achievable rate.
  const auto b = normal_batch(200.0, 15.0, 20000, 2);
  double prev = 1e9;
  for (double eps : {0.3, 0.1, 1e-2, 1e-3}) {
    const double r = dt_max_rate(b, eps, kParams).rate_bpcu;
    EXPECT_LE(r, prev);
    prev = r;
  }
}

TEST(DtMaxRate, BelowCapacityForHighInformationDensity) {
  // Sums concentrated at n C nats cannot give a rate above C.
  const double c_nats = std::log1p(kParams.rho);
  const auto b = normal_batch(168.0 * c_nats, 1.0, 10000, 3);
  EXPECT_LE(dt_max_rate(b, 1e-3, kParams).rate_bpcu, std::log2(1.0 + kParams.rho));
}

TEST(PilotDtMaxRate, SameSearchAsDt) {
  const auto b = normal_batch(150.0, 12.0, 5000, 4);
  const auto p = derive_params(0.0, 6.0, 168, 14);
  const auto a = dt_max_rate(b, 1e-3, p);
  const auto c = pilot_dt_max_rate(b, 1e-3, p, PilotConfig{2});
  EXPECT_EQ(a.rate_bpcu, c.rate_bpcu);
  EXPECT_EQ(c.kind, BoundKind::pilot_dt);
  EXPECT_EQ(c.n_p, 2);
  EXPECT_THROW(pilot_dt_max_rate(b, 1e-3, p, PilotConfig{11}), UsageError);
}

TEST(ConverseRate, DegenerateBatch) {
  const double t0 = 250.0;
  const auto r = converse_rate(batch_of(std::vector<double>(100, t0)), 1e-3, kParams);
  ASSERT_TRUE(r.lambda_star.has_value());
  EXPECT_EQ(*r.lambda_star, t0);
  EXPECT_NEAR(r.rate_bpcu, (t0 - std::log(1.0 - 1e-3)) / (168.0 * std::numbers::ln2), 1e-12);
}

TEST(ConverseRate, LambdaZeroCandidate) {
  // All sums negative: lambda = 0 already sees the whole batch.
  const auto r = converse_rate(batch_of(std::vector<double>(10, -5.0)), 0.2, kParams);
  EXPECT_EQ(*r.lambda_star, 0.0);
  EXPECT_NEAR(r.rate_bpcu, -std::log(0.8) / (168.0 * std::numbers::ln2), 1e-14);
}

TEST(ConverseRate, MonotoneInEpsilon) {
  // A looser error target can only raise the upper bound.
  const auto b = normal_batch(200.0, 15.0, 20000, 5);
  double prev = 0.0;
  for (double eps : {1e-3, 1e-2, 0.1, 0.3, 0.6}) {
    const double r = converse_rate(b, eps, kParams).rate_bpcu;
    EXPECT_GE(r, prev) << eps;
    prev = r;
  }
}

TEST(ConverseRate, AboveAchievability) {
  const auto b = normal_batch(220.0, 18.0, 20000, 6);
  EXPECT_LE(dt_max_rate(b, 1e-3, kParams).rate_bpcu, converse_rate(b, 1e-3, kParams).rate_bpcu);
}

TEST(ConverseRate, TinyBatchStaysFinite) {
  // The empirical CDF reaches one at the largest sample, so some lambda is always admissible.
  const auto r = converse_rate(batch_of({1.0, 2.0}), 0.9, kParams);
  EXPECT_FALSE(r.vacuous);
  EXPECT_EQ(*r.lambda_star, 2.0);
  EXPECT_NEAR(r.rate_bpcu, (2.0 - std::log(0.1)) / (168.0 * std::numbers::ln2), 1e-14);
}

TEST(NormalApprox, FrozenValue) {
  const double rho = std::pow(10.0, 0.6);
  const auto r = normal_approx(rho, 168, 1e-3);
  EXPECT_NEAR(r.rate_bpcu, 1.9794966545614538, 1e-12);
  EXPECT_NEAR(std::log2(1.0 + rho), 2.316456179626260, 1e-12);
}

TEST(NormalApprox, Limits) {
  EXPECT_NEAR(normal_approx(3.0, 100, 0.5).rate_bpcu, 2.0, 1e-15);
  EXPECT_EQ(normal_approx(1e-9, 10, 1e-3).rate_bpcu, 0.0);
  EXPECT_THROW(normal_approx(0.0, 10, 1e-3), UsageError);
  EXPECT_THROW(normal_approx(1.0, 0, 1e-3), UsageError);
  EXPECT_THROW(normal_approx(1.0, 10, 1.0), UsageError);
}

TEST(BoundKindNames, RoundTrip) {
  for (auto k : {BoundKind::dt, BoundKind::converse, BoundKind::pilot_dt, BoundKind::normal_approx}) {
    EXPECT_EQ(parse_bound_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_bound_kind("kappa-beta"), UsageError);
}

TEST(SampleBatchValidation, RejectsBadBatches) {
  EXPECT_THROW(dt_error(batch_of({1.0}), 2.0), UsageError);
  EXPECT_THROW(dt_error(batch_of({1.0, NAN}), 2.0), UsageError);
  EXPECT_THROW(converse_rate(batch_of({1.0, 2.0}), 0.0, kParams), UsageError);
}

}  // namespace
}  // namespace rician
