#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include "rician/errors.hpp"
#include "rician/log_value.hpp"

namespace rician {

struct QuadratureSpec {
  double relative_tolerance = 1e-9;
  int max_subdivisions = 1 << 15;
  // Initial guess for an interval containing the peak of the integrand.
  double bracket_lo = 0.0;
  double bracket_hi = 1.0;

  void validate() const {
    if (!(relative_tolerance > 0.0 && relative_tolerance < 1.0)) {
      throw UsageError("QuadratureSpec: relative tolerance must lie in (0, 1)");
    }
    if (max_subdivisions <= 0) throw UsageError("QuadratureSpec: max_subdivisions must be > 0");
    if (!(bracket_lo >= 0.0 && bracket_hi > bracket_lo) || !std::isfinite(bracket_hi)) {
      throw UsageError("QuadratureSpec: mode bracket must satisfy 0 <= lo < hi < inf");
    }
  }
};

struct QuadratureStats {
  double mode = 0.0;
  double log_peak = 0.0;
  double scale = 0.0;
  int panels = 0;
  int evaluations = 0;
  double error_estimate = 0.0;  // relative to the integral
};

namespace detail {

// Gauss-Kronrod 30/61 rule (QUADPACK qk61): positive Kronrod nodes in
// descending order ending at 0; Gauss nodes are the odd-indexed ones.
inline constexpr std::array<double, 31> kKronrodNodes = {
    0.999484410050490637571325895705810819, 0.996893484074649540271630050918695283,
    0.991630996870404594858628366109485725, 0.983668123279747209970032581605662802,
    0.973116322501126268374693868423706885, 0.960021864968307512216871025581797663,
    0.944374444748559979415831324037439122, 0.926200047429274325879324277080474004,
    0.90557330769990779854652255892595832, 0.88256053579205268154311646253022559,
    0.857205233546061098958658510658943857, 0.829565762382768397442898119732501916,
    0.799727835821839083013668942322683241, 0.767777432104826194917977340974503132,
    0.733790062453226804726171131369527646, 0.697850494793315796932292388026640068,
    0.660061064126626961370053668149270753, 0.620526182989242861140477556431189299,
    0.579345235826361691756024932172540496, 0.536624148142019899264169793311072794,
    0.492480467861778574993693061207708796, 0.447033769538089176780609900322854,
    0.400401254830394392535476211542660634, 0.352704725530878113471037207089373861,
    0.304073202273625077372677107199256554, 0.254636926167889846439805129817805108,
    0.20452511668230989143895767100202471, 0.15386991360858354696379467274325592,
    0.102806937966737030147096751318000592, 0.0514718425553176958330252131667225737,
    0.0,
};
inline constexpr std::array<double, 31> kKronrodWeights = {
    0.00138901369867700762455159122675969968, 0.00389046112709988405126720184451550328,
    0.00663070391593129217331982636975016813, 0.00927327965951776342844114689202436042,
    0.0118230152534963417422328988532505929, 0.0143697295070458048124514324435800102,
    0.0169208891890532726275722894203220924, 0.0194141411939423811734089510501284559,
    0.0218280358216091922971674857383389934, 0.0241911620780806013656863707252320268,
    0.0265099548823331016106017093350754144, 0.0287540487650412928439787853543342111,
    0.0309072575623877624728842529430922726, 0.0329814470574837260318141910168539275,
    0.0349793380280600241374996707314678751, 0.0368823646518212292239110656171359677,
    0.0386789456247275929503486515322810503, 0.0403745389515359591119952797524681142,
    0.0419698102151642461471475412859697578, 0.0434525397013560693168317281170732581,
    0.0448148001331626631923555516167232438, 0.0460592382710069881162717355593735806,
    0.0471855465692991539452614781810994865, 0.0481858617570871291407794922983045926,
    0.0490554345550297788875281653672381736, 0.0497956834270742063578115693799423285,
    0.0504059214027823468408930856535850289, 0.0508817958987496064922974730498046919,
    0.0512215478492587721706562826049442083, 0.0514261285374590259338628792157812598,
    0.0514947294294515675583404336470993075,
};
inline constexpr std::array<double, 15> kGaussWeights = {
    0.00796819249616660561546588347467362245, 0.0184664683110909591423021319120472691,
    0.0287847078833233693497191796112920436, 0.038799192569627049596801936446347692,
    0.0484026728305940529029381404228075178, 0.0574931562176190664817216894020561288,
    0.0659742298821804951281285151159623612, 0.0737559747377052062682438500221907342,
    0.0807558952294202153546949384605297309, 0.0868997872010829798023875307151257026,
    0.0921225222377861287176327070876187672, 0.0963687371746442596394686263518098651,
    0.0995934205867952670627802821035694765, 0.101762389748405504596428952168554045,
    0.102852652893558840341285636705415044,
};

struct Panel {
  double value = 0.0;  // integral of exp(f - shift) over the panel
  double error = 0.0;
};

// Evaluates the log-integrand, mapping NaN to a convergence failure.
template <class F>
double eval_log(F& log_f, double x, int& evaluations) {
  ++evaluations;
  const double v = log_f(x);
  if (std::isnan(v)) {
    std::ostringstream os;
    os << "integrate_halfline_log: log-integrand is NaN at x = " << x;
    throw ConvergenceError(os.str());
  }
  return v;
}

template <class F>
Panel kronrod(F& log_f, double shift, double a, double b, int& evaluations) {
  constexpr std::size_t kHalf = kKronrodNodes.size() - 1;  // index of the centre node
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, kHalf> lower{}, upper{};
  const double fc = std::exp(eval_log(log_f, center, evaluations) - shift);
  double gauss = 0.0;
  double kronrod = fc * kKronrodWeights[kHalf];
  for (std::size_t j = 0; j < kHalf; ++j) {
    const double dx = half * kKronrodNodes[j];
    lower[j] = std::exp(eval_log(log_f, center - dx, evaluations) - shift);
    upper[j] = std::exp(eval_log(log_f, center + dx, evaluations) - shift);
    const double pair = lower[j] + upper[j];
    kronrod += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[kHalf] * std::abs(fc - mean);
  for (std::size_t j = 0; j < kHalf; ++j) {
    asc += kKronrodWeights[j] * (std::abs(lower[j] - mean) + std::abs(upper[j] - mean));
  }
  kronrod *= half;
  gauss *= half;
  asc *= half;
  double err = std::abs(kronrod - gauss);
  if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  return {kronrod, err};
}

struct ModeSearch {
  double x = 0.0;
  double fx = 0.0;
  double lo = 0.0;  // final bracket
  double hi = 0.0;
};

// Golden-section search for the maximum of a unimodal function on [lo, hi],
// stopping once the bracket shrinks below `target_width`.
template <class F>
ModeSearch golden_max(F& log_f, double lo, double hi, double target_width, int& evaluations) {
  constexpr double kInvPhi = 0.6180339887498949;
  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double fc = eval_log(log_f, c, evaluations);
  double fd = eval_log(log_f, d, evaluations);
  while (hi - lo > target_width) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvPhi * (hi - lo);
      fc = eval_log(log_f, c, evaluations);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvPhi * (hi - lo);
      fd = eval_log(log_f, d, evaluations);
    }
  }
  return fc >= fd ? ModeSearch{c, fc, lo, hi} : ModeSearch{d, fd, lo, hi};
}

}  // namespace detail

/// log of the integral over (0, inf) of exp(log_f(x)).
///
/// log_f must be continuous and unimodal on (0, inf) and decay at least
/// exponentially. The mode is located by golden-section search starting from
/// the bracket in `spec` (doubled outward when the peak lies beyond it).
/// Gauss-Kronrod panels are then laid out from the mode towards both ends,
/// with widths growing geometrically, bisecting any panel whose error
/// estimate is too large, until a panel's contribution is below
/// tolerance * running total. Integrand values are taken relative to the
/// peak, so nothing overflows whatever the magnitude of log_f.
template <class F>
LogValue integrate_halfline_log(F&& log_f, const QuadratureSpec& spec,
                                QuadratureStats* stats = nullptr) {
  spec.validate();
  const double tol = spec.relative_tolerance;
  int evaluations = 0;

  // Mode search, expanding the bracket until the peak is interior (or at 0).
  double lo = spec.bracket_lo;
  double hi = spec.bracket_hi;
  detail::ModeSearch mode;
  constexpr int kMaxExpansions = 200;
  int expansion = 0;
  for (;; ++expansion) {
    if (expansion == kMaxExpansions || !std::isfinite(hi)) {
      std::ostringstream os;
      os << "integrate_halfline_log: mode not bracketed after " << expansion
         << " expansions (last bracket [" << lo << ", " << hi << "])";
      throw ConvergenceError(os.str());
    }
    mode = detail::golden_max(log_f, lo, hi, 0.03 * (hi - lo), evaluations);
    if (mode.hi == hi && mode.lo > lo) {
      lo = mode.lo;
      hi *= 2.0;
    } else if (mode.lo == lo && lo > 0.0 && mode.hi < hi) {
      hi = mode.hi;
      lo = lo < 1e-300 ? 0.0 : 0.5 * lo;
    } else {
      break;
    }
  }
  if (!std::isfinite(mode.fx)) {
    std::ostringstream os;
    os << "integrate_halfline_log: log-integrand at the mode is " << mode.fx << " (x = " << mode.x
       << ")";
    throw ConvergenceError(os.str());
  }

  const double m = mode.x;
  const double shift = mode.fx;

  // Length scale of the peak from the local curvature, falling back to the slope.
  const double delta = std::max(mode.hi - mode.lo, 1e-9 * std::max(1.0, m));
  const double f_right = detail::eval_log(log_f, m + delta, evaluations);
  double scale = 0.0;
  if (m - delta > 0.0) {
    const double f_left = detail::eval_log(log_f, m - delta, evaluations);
    const double curvature = (f_right - 2.0 * shift + f_left) / (delta * delta);
    if (curvature < 0.0 && std::isfinite(curvature)) scale = 1.0 / std::sqrt(-curvature);
  }
  if (scale == 0.0) {
    const double slope = (f_right - shift) / delta;
    scale = slope < 0.0 && std::isfinite(slope) ? 1.0 / -slope : hi - lo;
  }
  scale = std::clamp(scale, delta, 4.0 * (hi - lo) + delta);

  double total = 0.0;
  double error = 0.0;
  int panels = 0;

  auto integrate_panel = [&](double a, double b) {
    std::vector<std::pair<double, double>> stack{{a, b}};
    double sum = 0.0;
    while (!stack.empty()) {
      const auto [pa, pb] = stack.back();
      stack.pop_back();
      if (++panels > spec.max_subdivisions) {
        std::ostringstream os;
        os << "integrate_halfline_log: tolerance " << tol << " not met within "
           << spec.max_subdivisions << " panels (mode " << m << ", scale " << scale
           << ", running error " << error / std::max(total, 1e-300) << ")";
        throw ConvergenceError(os.str());
      }
      const auto p = detail::kronrod(log_f, shift, pa, pb, evaluations);
      const double reference = std::max(total + sum + p.value, 1e-300);
      if (p.error <= 0.25 * tol * reference || pb - pa <= 1e-12 * std::max(1.0, pb)) {
        sum += p.value;
        error += p.error;
      } else {
        const double mid = 0.5 * (pa + pb);
        stack.emplace_back(mid, pb);
        stack.emplace_back(pa, mid);
      }
    }
    total += sum;
    return sum;
  };

  // Central panel of +-kCore scales, then tail panels of kTail scales growing by kGrowth.
  constexpr double kCore = 8.0;
  constexpr double kTail = 6.0;
  constexpr double kGrowth = 2.0;
  const double stop_fraction = 0.1 * tol;
  const double left_edge = std::max(0.0, m - kCore * scale);
  const double right_edge = m + kCore * scale;
  integrate_panel(left_edge, right_edge);

  // March right. A panel is skipped once width * (integrand at its start),
  // an upper bound for a decreasing tail, is below the stopping threshold.
  double start = right_edge;
  double width = kTail * scale;
  for (;;) {
    const double f_start = detail::eval_log(log_f, start, evaluations);
    if (width * std::exp(f_start - shift) < stop_fraction * total) break;
    const double c = integrate_panel(start, start + width);
    if (c < stop_fraction * total) break;
    start += width;
    width *= kGrowth;
  }

  // March left towards zero.
  double end = left_edge;
  width = kTail * scale;
  while (end > 0.0) {
    const double a = std::max(0.0, end - width);
    const double f_end = detail::eval_log(log_f, end, evaluations);
    if ((end - a) * std::exp(f_end - shift) < stop_fraction * total) break;
    const double c = integrate_panel(a, end);
    if (c < stop_fraction * total) break;
    end = a;
    width *= kGrowth;
  }

  if (stats) {
    stats->mode = m;
    stats->log_peak = shift;
    stats->scale = scale;
    stats->panels = panels;
    stats->evaluations = evaluations;
    stats->error_estimate = error / total;
  }
  return LogValue::from_log(shift + std::log(total));
}

}  // namespace rician
