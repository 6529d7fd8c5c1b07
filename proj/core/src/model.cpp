#include "rician/model.hpp"

#include <cmath>
#include <sstream>

#include "rician/errors.hpp"

namespace rician {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::vector<int> divisors(int n) {
  std::vector<int> out;
  for (int d = 1; d <= n; ++d) {
    if (n % d == 0) out.push_back(d);
  }
  return out;
}

double PilotConfig::sigma_e2(const ChannelParams& params) const {
  if (n_p < 1) throw UsageError("sigma_e2 is undefined without pilots (n_p = 0)");
  return 1.0 / (n_p * params.rho);
}

void PilotConfig::validate(const ChannelParams& params) const {
  if (n_p < 0) throw UsageError("pilot count must be >= 0");
  if (n_p > 0 && n_p > params.n_c - 2) {
    std::ostringstream os;
    os << "n_p = " << n_p << " leaves fewer than two data symbols in a block of n_c = "
       << params.n_c;
    throw UsageError(os.str());
  }
}

ChannelParams derive_params(double kappa, double rho_db, int n_total, int ell) {
  if (!(kappa >= 0.0)) throw UsageError("kappa must be >= 0");
  if (!std::isfinite(rho_db)) throw UsageError("rho_db must be finite");
  if (n_total < 1) throw UsageError("blocklength must be >= 1");
  if (ell < 1 || n_total % ell != 0) {
    std::ostringstream os;
    os << "ell = " << ell << " does not divide n = " << n_total << "; valid choices:";
    for (int d : divisors(n_total)) {
      if (n_total / d >= 2) os << ' ' << d;
    }
    throw UsageError(os.str());
  }
  ChannelParams p;
  p.n_c = n_total / ell;
  p.ell = ell;
  if (p.n_c < 2) {
    throw UsageError("coherence block n_c = n / ell must be >= 2 (got ell = " +
                     std::to_string(ell) + ")");
  }
  p.rho = db_to_linear(rho_db);
  p.kappa_clamped = kappa > kMaxKappa;
  p.kappa = p.kappa_clamped ? kMaxKappa : kappa;
  p.mu_h = std::sqrt(p.kappa / (1.0 + p.kappa));
  p.sigma_h2 = 1.0 / (1.0 + p.kappa);
  return p;
}

}  // namespace rician
