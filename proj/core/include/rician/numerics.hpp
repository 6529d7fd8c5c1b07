#pragma once

#include <span>

#include "rician/log_value.hpp"

namespace rician {

/// log I_order(x) for integer order >= 0 and x >= 0, never overflowing.
///
/// Three regimes: the power series for small arguments (and for every
/// x <= 40 when order < 20), the uniform (Debye) asymptotic expansion for
/// order >= 20, and the large-argument Hankel expansion for low orders.
/// Throws DomainError for negative order or x.
LogValue log_bessel_i(int order, double x);

/// log( w^{-order} I_order(2w) ), finite for every w >= 0 (equals
/// -log(order!) at w = 0). This is the combination that appears in the
/// shell-code output density, where the raw pieces overflow or underflow.
double log_bessel_i_ratio(int order, double w);

/// log(n!) for n >= 0; tabulated for small n.
double log_factorial(int n);

/// Gaussian Q function, Q(x) = P[N(0,1) > x].
double q_function(double x);

/// Inverse of the Gaussian Q function. Throws DomainError unless 0 < epsilon < 1.
double q_inv(double epsilon);

/// log sum_i exp(v_i), shifted by the maximum. Throws UsageError on an empty input.
LogValue log_sum_exp(std::span<const LogValue> values);
double log_sum_exp(std::span<const double> log_values);

}  // namespace rician
