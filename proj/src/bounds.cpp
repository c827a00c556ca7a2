#include "chaincert/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace chaincert {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

ProperVector ProperVector::from(std::vector<double> f, const StationaryDistribution& pi) {
  if (f.size() != pi.size())
    throw ChainError(Errc::dimension_mismatch, "vector length does not match pi");
  ProperVector out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] < 0.0)
      throw ChainError(Errc::out_of_range,
                       "proper vector has negative entry f[" + std::to_string(i) + "]");
    if (f[i] > 0.0) {
      out.support.push_back(static_cast<int>(i));
      out.support_mass += pi[i];
    }
  }
  if (out.support.empty())
    throw ChainError(Errc::zero_proper_vector, "vector has no strictly positive entry");
  if (out.support_mass > 0.5 + kMassSlack)
    throw ChainError(Errc::mass_exceeds_half,
                     "support mass " + fmt(out.support_mass) + " exceeds 1/2");
  out.f = std::move(f);
  return out;
}

ProperVector make_proper_from_eigvec(std::span<const double> g,
                                     const StationaryDistribution& pi) {
  if (g.size() != pi.size())
    throw ChainError(Errc::dimension_mismatch, "vector length does not match pi");
  double positive_mass = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g[i] > 0.0) positive_mass += pi[i];
  const double sign = positive_mass > 0.5 + kMassSlack ? -1.0 : 1.0;
  std::vector<double> f(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) f[i] = std::max(sign * g[i], 0.0);
  return ProperVector::from(std::move(f), pi);
}

double telescoping_quantity_raw(const Matrix& P, std::span<const double> pi,
                                std::span<const double> f) {
  const std::size_t n = P.size();
  // Relabel so f is descending with zeros last, ties by original index, then
  // sum P_ij pi_j (f_i^2 - f_j^2) over pairs i < j in the new labels.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return f[x] > f[y]; });
  double acc = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t i = order[a];
    const double fi2 = f[i] * f[i];
    if (fi2 == 0.0) break;  // remaining pairs have f_i = f_j = 0
    for (std::size_t b = a + 1; b < n; ++b) {
      const std::size_t j = order[b];
      acc += P(i, j) * pi[j] * (fi2 - f[j] * f[j]);
    }
  }
  return acc;
}

double telescoping_quantity(const ReversibleChain& chain, const ProperVector& f) {
  return telescoping_quantity_raw(chain.transition().matrix(), chain.pi().values(), f.f);
}

namespace {

struct NormalizedClaims {
  std::vector<double> fhat;  // f / ||f||_pi
  double norm2 = 0.0;        // ||f||_pi^2
};

NormalizedClaims normalize(const ProperVector& f, const StationaryDistribution& pi) {
  NormalizedClaims out;
  out.norm2 = weighted_inner_product(f.f, f.f, pi);
  const double norm = std::sqrt(out.norm2);
  out.fhat = f.f;
  for (double& x : out.fhat) x /= norm;
  return out;
}

}  // namespace

Claim1Diagnostic compute_claim1(const ReversibleChain& chain, const ProperVector& f,
                                double phi) {
  // Evaluate on the unit-pi-norm copy for stable tolerances, then report on
  // the caller's scale: every quantity is homogeneous of degree 4 in f.
  const auto nc = normalize(f, chain.pi());
  const double t = telescoping_quantity_raw(chain.transition().matrix(), chain.pi().values(),
                                            nc.fhat);
  const auto ptf = mat_transpose_vec(chain.transition().matrix(), nc.fhat);
  const double q = weighted_inner_product(nc.fhat, ptf, chain.pi());

  Claim1Diagnostic diag;
  diag.scale = nc.norm2 * nc.norm2;
  diag.phi_norm4 = phi * phi * diag.scale;
  diag.middle = t * t * diag.scale;
  diag.rhs = (1.0 - q * q) * diag.scale;
  diag.lower_gap = t - phi;
  diag.upper_gap = (1.0 - q * q) - t * t;
  return diag;
}

Claim1Diagnostic check_claim1(const ReversibleChain& chain, const ProperVector& f, double phi,
                              double floor) {
  auto diag = compute_claim1(chain, f, phi);
  if (!diag.lower_ok(floor))
    throw ChainError(Errc::sandwich_violation,
                     "lower side: phi exceeds the telescoping sum by " + fmt(-diag.lower_gap));
  if (!diag.upper_ok(floor))
    throw ChainError(Errc::sandwich_violation,
                     "upper side: squared sum exceeds ||f||^4 - <f,PTf>^2 by " +
                         fmt(-diag.upper_gap));
  return diag;
}

namespace {

double claim2_slack_for(const ReversibleChain& chain, double lambda, const ProperVector& f) {
  const auto nc = normalize(f, chain.pi());
  const auto ptf = mat_transpose_vec(chain.transition().matrix(), nc.fhat);
  const double q = weighted_inner_product(nc.fhat, ptf, chain.pi());
  return (q - lambda) * nc.norm2;
}

}  // namespace

double check_claim2(const ReversibleChain& chain, double lambda, std::span<const double> g,
                    double tol_eig) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw ChainError(Errc::out_of_range, "lambda = " + fmt(lambda) + " not in (0,1)");
  const auto pg = mat_transpose_vec(chain.transition().matrix(), g);
  double residual = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    residual = std::max(residual, std::abs(pg[i] - lambda * g[i]));
  const double scale = std::max(max_abs(g), 1e-300);
  if (residual > tol_eig * scale)
    throw ChainError(Errc::not_an_eigenvector,
                     "||PT g - lambda g||_inf = " + fmt(residual) + " exceeds tolerance");
  const auto f = make_proper_from_eigvec(g, chain.pi());
  return claim2_slack_for(chain, lambda, f);
}

BoundComparison compare_bounds(double phi) {
  if (phi < -1e-12 || phi > 1.0 + 1e-12)
    throw ChainError(Errc::out_of_range, "phi = " + fmt(phi) + " not in [0,1]");
  const double p = std::clamp(phi, 0.0, 1.0);
  return BoundComparison{1.0 - p * p / 2.0, std::sqrt(1.0 - p * p)};
}

bool BoundCertificate::has_violation(double floor) const {
  for (const auto& e : eigen) {
    if (!e.constructed()) continue;  // recorded, not a violation
    if (e.claim2_slack < -floor * e.f_norm2) return true;
    if (!e.claim1.upper_ok(floor)) return true;
    if (rigorous) {
      if (e.classical_slack < -floor || e.new_slack < -floor) return true;
      if (!e.claim1.lower_ok(floor)) return true;
    }
  }
  return false;
}

BoundCertificate certify(const ReversibleChain& chain, const SpectrumReport& spectrum,
                         const ConductanceResult& cond, const Tolerances& tol) {
  BoundCertificate cert;
  cert.phi = cond.phi;
  cert.rigorous = cond.method == ConductanceMethod::exact;
  cert.vacuous = spectrum.positive_nontrivial.empty();

  for (std::size_t idx : spectrum.positive_nontrivial) {
    EigenCertificate e;
    e.lambda = spectrum.eigenvalues[idx];
    e.classical_slack = (1.0 - cert.phi * cert.phi / 2.0) - e.lambda;
    e.new_slack = 1.0 - cert.phi * cert.phi - e.lambda * e.lambda;
    try {
      const auto& g = spectrum.eigvecs_pt[idx];
      e.claim2_slack = check_claim2(chain, e.lambda, g, tol.eig);
      const auto f = make_proper_from_eigvec(g, chain.pi());
      e.f_norm2 = weighted_inner_product(f.f, f.f, chain.pi());
      e.claim1 = compute_claim1(chain, f, cert.phi);
    } catch (const ChainError& err) {
      e.construction_error = err.what();
    }
    cert.eigen.push_back(std::move(e));
  }
  return cert;
}

}  // namespace chaincert
