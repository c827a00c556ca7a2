#include "chaincert/chain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

namespace chaincert {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Reachability along transitions: from j we can step to i iff P(i, j) > 0.
// `reversed` walks the edges backwards.
std::vector<bool> reachable_from(const TransitionMatrix& P, std::size_t start, bool reversed) {
  const std::size_t n = P.size();
  std::vector<bool> seen(n, false);
  std::queue<std::size_t> work;
  seen[start] = true;
  work.push(start);
  while (!work.empty()) {
    std::size_t u = work.front();
    work.pop();
    for (std::size_t v = 0; v < n; ++v) {
      const double p = reversed ? P(u, v) : P(v, u);
      if (p > 0.0 && !seen[v]) {
        seen[v] = true;
        work.push(v);
      }
    }
  }
  return seen;
}

}  // namespace

TransitionMatrix TransitionMatrix::validate(Matrix raw, double tol_stochastic) {
  const std::size_t n = raw.size();
  if (n == 0) throw ChainError(Errc::non_square, "empty matrix");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (raw(i, j) < 0.0)
        throw ChainError(Errc::negative_entry, "entry (" + std::to_string(i) + "," +
                                                   std::to_string(j) + ") = " + fmt(raw(i, j)));
  for (std::size_t j = 0; j < n; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += raw(i, j);
    if (std::abs(sum - 1.0) > tol_stochastic)
      throw ChainError(Errc::column_sum_off,
                       "column " + std::to_string(j) + " sums to " + fmt(sum));
    // Rescale, then push the leftover rounding onto the largest entry so the
    // column sums to exactly 1.0 and downstream accumulations see no drift.
    std::size_t argmax = 0;
    for (std::size_t i = 0; i < n; ++i) {
      raw(i, j) /= sum;
      if (raw(i, j) > raw(argmax, j)) argmax = i;
    }
    double post = 0.0;
    for (std::size_t i = 0; i < n; ++i) post += raw(i, j);
    raw(argmax, j) -= post - 1.0;
  }
  return TransitionMatrix(std::move(raw));
}

TransitionMatrix TransitionMatrix::validate(const std::vector<std::vector<double>>& rows,
                                            double tol_stochastic) {
  return validate(Matrix::from_rows(rows), tol_stochastic);
}

ErgodicityReport check_ergodicity(const TransitionMatrix& P) {
  const std::size_t n = P.size();
  ErgodicityReport report;

  const auto fwd = reachable_from(P, 0, false);
  const auto bwd = reachable_from(P, 0, true);
  report.irreducible = std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; }) &&
                       std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
  if (!report.irreducible) {
    report.aperiodic = false;
    report.period = 0;
    return report;
  }

  // Period = gcd over all support edges u -> v of (level(u) + 1 - level(v)),
  // with levels from a BFS rooted at state 0.
  std::vector<long> level(n, -1);
  std::queue<std::size_t> work;
  level[0] = 0;
  work.push(0);
  while (!work.empty()) {
    std::size_t u = work.front();
    work.pop();
    for (std::size_t v = 0; v < n; ++v) {
      if (P(v, u) > 0.0 && level[v] < 0) {
        level[v] = level[u] + 1;
        work.push(v);
      }
    }
  }
  long g = 0;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (P(v, u) > 0.0) g = std::gcd(g, std::abs(level[u] + 1 - level[v]));
  report.period = static_cast<int>(g);
  report.aperiodic = report.period == 1;
  return report;
}

StationaryDistribution::StationaryDistribution(std::vector<double> pi, double tol_stochastic)
    : pi_(std::move(pi)) {
  double sum = 0.0;
  for (std::size_t i = 0; i < pi_.size(); ++i) {
    if (pi_[i] <= 0.0)
      throw ChainError(Errc::out_of_range,
                       "pi[" + std::to_string(i) + "] = " + fmt(pi_[i]) + " must be positive");
    sum += pi_[i];
  }
  if (pi_.empty() || std::abs(sum - 1.0) > tol_stochastic)
    throw ChainError(Errc::out_of_range, "pi sums to " + fmt(sum));
}

double StationaryDistribution::min_entry() const {
  return *std::min_element(pi_.begin(), pi_.end());
}

namespace {

// Direct solve of (P - I) pi = 0 with the last row swapped for sum(pi) = 1.
// Requires irreducibility only; uniqueness of pi does not need aperiodicity.
std::vector<double> solve_stationary(const TransitionMatrix& P) {
  const std::size_t n = P.size();
  Matrix m(n);
  std::vector<double> rhs(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = P(i, j) - (i == j ? 1.0 : 0.0);
  for (std::size_t j = 0; j < n; ++j) m(n - 1, j) = 1.0;
  rhs[n - 1] = 1.0;

  // Gaussian elimination, partial pivoting.
  std::vector<std::size_t> row(n);
  std::iota(row.begin(), row.end(), 0);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(m(row[i], k)) > std::abs(m(row[pivot], k))) pivot = i;
    std::swap(row[k], row[pivot]);
    const double diag = m(row[k], k);
    if (std::abs(diag) < 1e-300)
      throw ChainError(Errc::singular_system, "zero pivot at column " + std::to_string(k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double factor = m(row[i], k) / diag;
      if (factor == 0.0) continue;
      m(row[i], k) = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) m(row[i], j) -= factor * m(row[k], j);
      rhs[row[i]] -= factor * rhs[row[k]];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    double acc = rhs[row[k]];
    for (std::size_t j = k + 1; j < n; ++j) acc -= m(row[k], j) * x[j];
    x[k] = acc / m(row[k], k);
  }

  double sum = 0.0;
  for (double v : x) sum += v;
  if (!(sum > 0.0)) throw ChainError(Errc::singular_system, "stationary solve lost normalization");
  for (double& v : x) v /= sum;
  return x;
}

}  // namespace

StationaryDistribution stationary_distribution(const TransitionMatrix& P,
                                               const ErgodicityReport& ergo,
                                               double tol_stationary) {
  if (!ergo.irreducible || !ergo.aperiodic)
    throw ChainError(Errc::not_ergodic, ergo.irreducible
                                            ? "chain is periodic (period " +
                                                  std::to_string(ergo.period) + ")"
                                            : "chain is not irreducible");
  auto x = solve_stationary(P);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] <= 0.0)
      throw ChainError(Errc::singular_system,
                       "solved pi[" + std::to_string(i) + "] = " + fmt(x[i]) + " not positive");
  const auto residual = mat_vec(P.matrix(), x);
  double err = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) err = std::max(err, std::abs(residual[i] - x[i]));
  if (err > tol_stationary)
    throw ChainError(Errc::singular_system, "||P pi - pi||_inf = " + fmt(err));
  return StationaryDistribution(std::move(x));
}

double check_detailed_balance(const TransitionMatrix& P, const StationaryDistribution& pi) {
  if (pi.size() != P.size())
    throw ChainError(Errc::dimension_mismatch,
                     "pi has length " + std::to_string(pi.size()) + ", P is " +
                         std::to_string(P.size()) + "x" + std::to_string(P.size()));
  double worst = 0.0;
  for (std::size_t i = 0; i < P.size(); ++i)
    for (std::size_t j = i + 1; j < P.size(); ++j)
      worst = std::max(worst, std::abs(P(i, j) * pi[j] - P(j, i) * pi[i]));
  return worst;
}

double weighted_inner_product(std::span<const double> f, std::span<const double> g,
                              const StationaryDistribution& pi) {
  if (f.size() != pi.size() || g.size() != pi.size())
    throw ChainError(Errc::dimension_mismatch,
                     "vector lengths " + std::to_string(f.size()) + ", " +
                         std::to_string(g.size()) + " vs n = " + std::to_string(pi.size()));
  double acc = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) acc += f[i] * pi[i] * g[i];
  return acc;
}

double pi_norm(std::span<const double> f, const StationaryDistribution& pi) {
  return std::sqrt(weighted_inner_product(f, f, pi));
}

namespace {

// Residual + balance gate shared by both admit paths; returns the worst
// detailed-balance violation and throws if any admission invariant fails.
double admission_checks(const TransitionMatrix& P, const StationaryDistribution& pi,
                        const ErgodicityReport& ergo, const Tolerances& tol) {
  const auto px = mat_vec(P.matrix(), pi.values());
  double residual = 0.0;
  for (std::size_t i = 0; i < P.size(); ++i)
    residual = std::max(residual, std::abs(px[i] - pi[i]));
  if (residual > tol.stationary)
    throw ChainError(Errc::singular_system, "||P pi - pi||_inf = " + fmt(residual));

  double worst = 0.0;
  std::size_t wi = 0, wj = 0;
  for (std::size_t i = 0; i < P.size(); ++i)
    for (std::size_t j = i + 1; j < P.size(); ++j) {
      const double v = std::abs(P(i, j) * pi[j] - P(j, i) * pi[i]);
      if (v > worst) {
        worst = v;
        wi = i;
        wj = j;
      }
    }
  if (worst > tol.balance)
    throw ChainError(Errc::not_reversible,
                     "detailed balance violated at (" + std::to_string(wi) + "," +
                         std::to_string(wj) + "): |P_ij pi_j - P_ji pi_i| = " + fmt(worst));

  if (!ergo.aperiodic)
    throw ChainError(Errc::not_ergodic, "chain is periodic (period " +
                                            std::to_string(ergo.period) + ")");
  return worst;
}

}  // namespace

ReversibleChain ReversibleChain::admit(TransitionMatrix P, const Tolerances& tol) {
  const auto ergo = check_ergodicity(P);
  if (!ergo.irreducible) throw ChainError(Errc::not_ergodic, "chain is not irreducible");
  auto x = solve_stationary(P);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] <= 0.0)
      throw ChainError(Errc::singular_system,
                       "solved pi[" + std::to_string(i) + "] = " + fmt(x[i]) + " not positive");
  StationaryDistribution pi(std::move(x), tol.stochastic);
  const double worst = admission_checks(P, pi, ergo, tol);
  return ReversibleChain(std::move(P), std::move(pi), ergo, worst);
}

ReversibleChain ReversibleChain::admit_with_pi(TransitionMatrix P, StationaryDistribution pi,
                                               const Tolerances& tol) {
  if (pi.size() != P.size())
    throw ChainError(Errc::dimension_mismatch, "pi length does not match P");
  const auto ergo = check_ergodicity(P);
  if (!ergo.irreducible) throw ChainError(Errc::not_ergodic, "chain is not irreducible");
  const double worst = admission_checks(P, pi, ergo, tol);
  return ReversibleChain(std::move(P), std::move(pi), ergo, worst);
}

}  // namespace chaincert
