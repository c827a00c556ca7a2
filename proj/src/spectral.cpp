#include "chaincert/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace chaincert {

SymmetrizedOperator symmetrize(const ReversibleChain& chain) {
  const std::size_t n = chain.size();
  const auto& P = chain.transition();
  const auto& pi = chain.pi();
  std::vector<double> sqrt_pi(n);
  for (std::size_t i = 0; i < n; ++i) sqrt_pi[i] = std::sqrt(pi[i]);
  Matrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = P(i, j) * sqrt_pi[j] / sqrt_pi[i];
  // Detailed balance makes A symmetric up to tolerance; averaging removes the
  // residue so Jacobi sees an exactly symmetric operator.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = avg;
      a(j, i) = avg;
    }
  return SymmetrizedOperator(std::move(a));
}

namespace {

double offdiag_frobenius(const Matrix& a) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (i != j) acc += a(i, j) * a(i, j);
  return std::sqrt(acc);
}

// Cyclic Jacobi: sweep all (p, q) pairs, rotating each off-diagonal entry to
// zero. Quadratically convergent once the off-diagonal mass is small.
void jacobi_eigensystem(Matrix& a, Matrix& v, int max_sweeps) {
  const std::size_t n = a.size();
  v = Matrix::identity(n);
  if (n < 2) return;
  const double target = 1e-12 * frobenius_norm(a);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (offdiag_frobenius(a) < target) return;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        const double app = a(p, p), aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r != p && r != q) {
            const double arp = a(r, p), arq = a(r, q);
            a(r, p) = arp - s * (arq + tau * arp);
            a(p, r) = a(r, p);
            a(r, q) = arq + s * (arp - tau * arq);
            a(q, r) = a(r, q);
          }
          const double vrp = v(r, p), vrq = v(r, q);
          v(r, p) = vrp - s * (vrq + tau * vrp);
          v(r, q) = vrq + s * (vrp - tau * vrq);
        }
      }
    }
  }
  if (offdiag_frobenius(a) >= target)
    throw ChainError(Errc::no_convergence,
                     "Jacobi did not converge in " + std::to_string(max_sweeps) + " sweeps");
}

}  // namespace

std::vector<double> SpectrumReport::positive_nontrivial_values() const {
  std::vector<double> out;
  out.reserve(positive_nontrivial.size());
  for (std::size_t idx : positive_nontrivial) out.push_back(eigenvalues[idx]);
  return out;
}

SpectrumReport eigendecompose(const SymmetrizedOperator& A, const StationaryDistribution& pi,
                              int max_sweeps) {
  const std::size_t n = A.size();
  if (pi.size() != n)
    throw ChainError(Errc::dimension_mismatch, "pi length does not match operator");
  Matrix a = A.matrix();
  Matrix v;
  jacobi_eigensystem(a, v, max_sweeps);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

  SpectrumReport report;
  report.eigenvalues.resize(n);
  report.eigvecs_pt.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t col = order[k];
    report.eigenvalues[k] = a(col, col);
    auto& g = report.eigvecs_pt[k];
    // Columns of V are A-eigenvectors; dividing by sqrt(pi) turns them into
    // Pᵀ-eigenvectors, already pi-normalized since ||v||_2 = 1.
    for (std::size_t i = 0; i < n; ++i) g[i] = v(i, col) / std::sqrt(pi[i]);
    const double norm = pi_norm(g, pi);
    for (double& x : g) x /= norm;
    // Deterministic sign: largest-magnitude entry positive, lowest index wins.
    std::size_t big = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(g[i]) > std::abs(g[big])) big = i;
    if (g[big] < 0.0)
      for (double& x : g) x = -x;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double ev = report.eigenvalues[k];
    if (ev > kEigenvalueMargin && ev < 1.0 - kEigenvalueMargin)
      report.positive_nontrivial.push_back(k);
  }
  return report;
}

SpectrumReport spectrum_of(const ReversibleChain& chain, int max_sweeps) {
  auto report = eigendecompose(symmetrize(chain), chain.pi(), max_sweeps);
  const auto& P = chain.transition().matrix();
  double worst = 0.0;
  for (std::size_t k = 0; k < report.eigenvalues.size(); ++k) {
    const auto& g = report.eigvecs_pt[k];
    const auto pg = mat_transpose_vec(P, g);
    double res = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      res = std::max(res, std::abs(pg[i] - report.eigenvalues[k] * g[i]));
    worst = std::max(worst, res / std::max(max_abs(g), 1e-300));
  }
  report.max_residual = worst;
  return report;
}

}  // namespace chaincert
