#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "chaincert/errors.hpp"
#include "chaincert/matrix.hpp"

namespace chaincert {

// Numerical admission thresholds. Double-precision solves at the sizes this
// library targets (n <= a few hundred) stay far inside these.
struct Tolerances {
  double stochastic = 1e-9;   // column sums of P, sum of pi
  double stationary = 1e-9;   // ||P pi - pi||_inf
  double balance = 1e-8;      // max |P_ij pi_j - P_ji pi_i|
  double eig = 1e-8;          // eigenvector residual, relative to ||g||_inf
  double slack_floor = 1e-9;  // certified inequalities may undershoot by this
};

// Subsets used as conductance candidates may carry mass up to 1/2 + this.
inline constexpr double kMassSlack = 1e-12;

// An eigenvalue counts as "in (0,1)" iff margin < lambda < 1 - margin, which
// keeps the trivial eigenvalue 1 and nonpositive eigenvalues out under
// floating-point noise.
inline constexpr double kEigenvalueMargin = 1e-9;

// Column-stochastic transition matrix: entries(i,j) = Pr[next = i | current = j],
// so every column is a probability distribution and P pi = pi at stationarity.
class TransitionMatrix {
 public:
  // Checks entries >= 0 and |column sum - 1| <= tol_stochastic, then rescales
  // each column to sum exactly 1 (the largest entry absorbs the rounding
  // residual). Throws NegativeEntry / ColumnSumOff / NonSquare.
  static TransitionMatrix validate(Matrix raw, double tol_stochastic = Tolerances{}.stochastic);
  static TransitionMatrix validate(const std::vector<std::vector<double>>& rows,
                                   double tol_stochastic = Tolerances{}.stochastic);

  std::size_t size() const { return entries_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }
  const Matrix& matrix() const { return entries_; }

 private:
  explicit TransitionMatrix(Matrix m) : entries_(std::move(m)) {}
  Matrix entries_;
};

struct ErgodicityReport {
  bool irreducible = false;
  bool aperiodic = false;
  int period = 0;  // gcd of cycle lengths; 0 when not irreducible (undefined)
};

// irreducible <=> the support digraph (edge j -> i iff P_ij > 0) is strongly
// connected; period via BFS level differences on that digraph.
ErgodicityReport check_ergodicity(const TransitionMatrix& P);

class StationaryDistribution {
 public:
  // Requires strictly positive entries summing to 1 within tol_stochastic.
  explicit StationaryDistribution(std::vector<double> pi,
                                  double tol_stochastic = Tolerances{}.stochastic);

  std::size_t size() const { return pi_.size(); }
  double operator[](std::size_t i) const { return pi_[i]; }
  std::span<const double> values() const { return pi_; }
  double min_entry() const;

 private:
  std::vector<double> pi_;
};

// Solves (P - I) pi = 0, sum pi = 1 by Gaussian elimination with partial
// pivoting (the last row is replaced by the normalization constraint).
// Throws NotErgodic unless the report says irreducible and aperiodic;
// SingularSystem if the solve degenerates or the residual exceeds tolerance.
StationaryDistribution stationary_distribution(const TransitionMatrix& P,
                                               const ErgodicityReport& ergo,
                                               double tol_stationary = Tolerances{}.stationary);

// max over (i,j) of |P_ij pi_j - P_ji pi_i|; zero exactly when the chain is
// time-reversible.
double check_detailed_balance(const TransitionMatrix& P, const StationaryDistribution& pi);

// <f, g> = sum_i f_i pi_i g_i
double weighted_inner_product(std::span<const double> f, std::span<const double> g,
                              const StationaryDistribution& pi);
double pi_norm(std::span<const double> f, const StationaryDistribution& pi);

// A validated ergodic time-reversible chain bundled with its stationary
// distribution. Immutable once admitted; everything downstream assumes the
// invariants enforced here.
class ReversibleChain {
 public:
  // Admission order: irreducibility, stationary solve, detailed balance,
  // aperiodicity. Detailed balance is checked before aperiodicity because pi
  // exists (and is unique) for any irreducible chain, so a periodic but
  // irreversible input reports NotReversible rather than NotErgodic.
  static ReversibleChain admit(TransitionMatrix P, const Tolerances& tol = {});

  // Same validation, but trusts the caller's pi instead of re-solving
  // (the residual check still applies). Used where pi is known exactly,
  // e.g. lazification, which preserves pi bit-for-bit.
  static ReversibleChain admit_with_pi(TransitionMatrix P, StationaryDistribution pi,
                                       const Tolerances& tol = {});

  std::size_t size() const { return P_.size(); }
  const TransitionMatrix& transition() const { return P_; }
  const StationaryDistribution& pi() const { return pi_; }
  const ErgodicityReport& ergodicity() const { return ergo_; }
  double balance_violation() const { return balance_violation_; }

 private:
  ReversibleChain(TransitionMatrix P, StationaryDistribution pi, ErgodicityReport ergo,
                  double violation)
      : P_(std::move(P)), pi_(std::move(pi)), ergo_(ergo), balance_violation_(violation) {}

  TransitionMatrix P_;
  StationaryDistribution pi_;
  ErgodicityReport ergo_;
  double balance_violation_;
};

}  // namespace chaincert
