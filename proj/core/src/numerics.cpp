#include "rician/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "rician/errors.hpp"

namespace rician {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Orders at or above this use the uniform asymptotic expansion.
constexpr int kDebyeMinOrder = 20;
// Low orders switch from the power series to the Hankel expansion here.
constexpr double kHankelMinArgument = 40.0;
// Below this argument the series needs only a handful of terms at any order.
constexpr double kSeriesAlwaysBelow = 2.0;

// Debye polynomials u_k(t) = t^k * sum_j c_{k,j} t^{2j}, k = 1..10.
constexpr std::array<std::array<double, 11>, 10> kDebye = {{
    {{0.125, -0.20833333333333334}},
    {{0.0703125, -0.40104166666666669, 0.3342013888888889}},
    {{0.0732421875, -0.89121093750000002, 1.8464626736111112, -1.0258125964506173}},
    {{0.112152099609375, -2.3640869140624998, 8.78912353515625, -11.207002616222994,
      4.6695844234262474}},
    {{0.22710800170898438, -7.3687943594796321, 42.534998745388457, -91.818241543240021,
      84.636217674600729, -28.212072558200244}},
    {{0.57250142097473145, -26.491430486951554, 218.19051174421159, -699.57962737613252,
      1059.9904525279999, -765.25246814118168, 212.57013003921713}},
    {{1.7277275025844574, -108.09091978839466, 1200.9029132163525, -5305.646978613403,
      11655.393336864534, -13586.550006434138, 8061.7221817373093, -1919.4576623184071}},
    {{6.074042001273483, -493.915304773088, 7109.5143024893641, -41192.65496889755,
      122200.46498301746, -203400.17728041555, 192547.00123253153, -96980.598388637518,
      20204.291330966149}},
    {{24.380529699556064, -2499.8304818112097, 45218.768981362729, -331645.17248456361,
      1268365.2733216248, -2813563.2265865342, 3763271.2976564039, -2998015.9185381066,
      1311763.6146629772, -242919.18790055133}},
    {{110.01714026924674, -13886.08975371704, 308186.40461266239, -2785618.1280864547,
      13288767.166421818, -37567176.660763353, 66344512.274729028, -74105148.211532652,
      50952602.492664643, -19706819.118432228, 3284469.8530720379}},
}};

// max_{t in [0,1]} |u_k(t)|, k = 1..11 (the last entry is a conservative guess
// used only to bound the truncation error of the k = 10 partial sum).
constexpr std::array<double, 11> kDebyeBound = {0.0834, 0.0327, 0.0164, 0.0202, 0.0208, 0.0404,
                                                0.0654, 0.171,  0.382,  1.24,   5.0};

constexpr int kLogFactorialTable = 1024;

const std::array<double, kLogFactorialTable>& log_factorial_table() {
  static const std::array<double, kLogFactorialTable> table = [] {
    std::array<double, kLogFactorialTable> t{};
    t[0] = 0.0;
    for (int n = 1; n < kLogFactorialTable; ++n) {
      t[n] = std::lgamma(static_cast<double>(n) + 1.0);
    }
    return t;
  }();
  return table;
}

bool use_series(int order, double x) {
  return x <= kSeriesAlwaysBelow || (order < kDebyeMinOrder && x <= kHankelMinArgument);
}

// log[(x/2)^{-order} I_order(x)] from the power series. All terms are positive.
double series_core(int order, double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  double rest = 0.0;
  for (int m = 1; m < 10000; ++m) {
    term *= q / (static_cast<double>(m) * static_cast<double>(m + order));
    rest += term;
    if (term <= 1e-17 * (1.0 + rest)) break;
  }
  return std::log1p(rest) - log_factorial(order);
}

int debye_terms(int order) {
  const double v = order;
  for (int k = 1; k <= 10; ++k) {
    if (kDebyeBound[k] / std::pow(v, k + 1) < 1e-17) return k;
  }
  return 10;
}

double log_i_debye(int order, double x) {
  const double v = order;
  const double z = x / v;
  const double s = std::hypot(1.0, z);
  const double t = 1.0 / s;
  const double t2 = t * t;
  // eta = sqrt(1+z^2) + log(z / (1 + sqrt(1+z^2)))
  const double eta = s - std::asinh(1.0 / z);

  const int terms = debye_terms(order);
  double sum = 1.0;
  double tk = 1.0;
  double inv_vk = 1.0;
  for (int k = 1; k <= terms; ++k) {
    tk *= t;
    inv_vk /= v;
    const auto& c = kDebye[k - 1];
    double poly = c[k];
    for (int j = k - 1; j >= 0; --j) poly = poly * t2 + c[j];
    sum += tk * poly * inv_vk;
  }
  return v * eta - 0.5 * std::log(2.0 * std::numbers::pi * v) - 0.5 * std::log(s) + std::log(sum);
}

double log_i_hankel(int order, double x) {
  const double mu = 4.0 * order * order;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double factor = (mu - odd * odd) / (8.0 * k * x);
    if (k > order && std::abs(factor) >= 1.0) break;
    term *= -factor;
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return x - 0.5 * std::log(2.0 * std::numbers::pi * x) + std::log(sum);
}

double log_bessel_i_raw(int order, double x) {
  if (x == 0.0) return order == 0 ? 0.0 : -kInf;
  if (use_series(order, x)) {
    return order * std::log(0.5 * x) + series_core(order, x);
  }
  if (order >= kDebyeMinOrder) return log_i_debye(order, x);
  return log_i_hankel(order, x);
}

void check_bessel_args(int order, double x) {
  if (order < 0) throw DomainError("log_bessel_i: negative order " + std::to_string(order));
  if (!(x >= 0.0)) throw DomainError("log_bessel_i: argument must be >= 0, got " + std::to_string(x));
}

}  // namespace

double log_factorial(int n) {
  if (n < 0) throw DomainError("log_factorial: negative argument");
  if (n < kLogFactorialTable) return log_factorial_table()[n];
  return std::lgamma(static_cast<double>(n) + 1.0);
}

LogValue log_bessel_i(int order, double x) {
  check_bessel_args(order, x);
  if (std::isinf(x)) return LogValue::from_log(kInf);
  return LogValue::from_log(log_bessel_i_raw(order, x));
}

double log_bessel_i_ratio(int order, double w) {
  check_bessel_args(order, w);
  const double x = 2.0 * w;
  if (x == 0.0 || use_series(order, x)) return series_core(order, x);
  const double log_i = order >= kDebyeMinOrder ? log_i_debye(order, x) : log_i_hankel(order, x);
  return log_i - order * std::log(w);
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double q_inv(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError("q_inv: probability must lie in (0, 1), got " + std::to_string(epsilon));
  }
  // Starting point: Abramowitz & Stegun 26.2.23 (|error| < 4.5e-4), then Halley on Q itself.
  const double tail = std::min(epsilon, 1.0 - epsilon);
  const double t = std::sqrt(-2.0 * std::log(tail));
  double x = t - (2.515517 + t * (0.802853 + t * 0.010328)) /
                     (1.0 + t * (1.432788 + t * (0.189269 + t * 0.001308)));
  if (epsilon > 0.5) x = -x;

  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  for (int iter = 0; iter < 8; ++iter) {
    const double density = inv_sqrt_2pi * std::exp(-0.5 * x * x);
    const double u = (q_function(x) - epsilon) / density;
    const double step = u / (1.0 - 0.5 * x * u);
    x += step;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

double log_sum_exp(std::span<const double> log_values) {
  if (log_values.empty()) throw UsageError("log_sum_exp: empty input");
  const double hi = *std::max_element(log_values.begin(), log_values.end());
  if (std::isinf(hi)) return hi;
  double acc = 0.0;
  for (double v : log_values) acc += std::exp(v - hi);
  return hi + std::log(acc);
}

LogValue log_sum_exp(std::span<const LogValue> values) {
  if (values.empty()) throw UsageError("log_sum_exp: empty input");
  double hi = -kInf;
  for (const auto& v : values) hi = std::max(hi, v.log());
  if (std::isinf(hi)) return LogValue::from_log(hi);
  double acc = 0.0;
  for (const auto& v : values) acc += std::exp(v.log() - hi);
  return LogValue::from_log(hi + std::log(acc));
}

}  // namespace rician
