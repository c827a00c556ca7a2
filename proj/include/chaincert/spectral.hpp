#pragma once

#include <cstddef>
#include <vector>

#include "chaincert/chain.hpp"
#include "chaincert/matrix.hpp"

namespace chaincert {

// A = D^{-1/2} P D^{1/2} with D = diag(pi): A_ij = pi_i^{-1/2} P_ij pi_j^{1/2}.
// Symmetric exactly when detailed balance holds, and similar to P, so its
// (real) eigenvalues are the chain's spectrum.
class SymmetrizedOperator {
 public:
  const Matrix& matrix() const { return A_; }
  std::size_t size() const { return A_.size(); }

 private:
  friend SymmetrizedOperator symmetrize(const ReversibleChain&);
  explicit SymmetrizedOperator(Matrix a) : A_(std::move(a)) {}
  Matrix A_;
};

// Residual asymmetry from the finite balance tolerance is averaged away:
// A <- (A + Aᵀ)/2 after construction.
SymmetrizedOperator symmetrize(const ReversibleChain& chain);

struct SpectrumReport {
  // Sorted descending; eigenvalues[0] = 1 for any ergodic chain.
  std::vector<double> eigenvalues;
  // eigvecs_pt[k] is g with Pᵀ g = eigenvalues[k] g, normalized to
  // ||g||_pi = 1, sign fixed so the largest-magnitude entry is positive
  // (lowest index wins ties).
  std::vector<std::vector<double>> eigvecs_pt;
  // Indices into eigenvalues with margin < lambda < 1 - margin.
  std::vector<std::size_t> positive_nontrivial;
  // max_k ||Pᵀ g - lambda g||_inf / ||g||_inf; filled by spectrum_of.
  double max_residual = -1.0;

  std::vector<double> positive_nontrivial_values() const;
};

// Full eigensystem by the cyclic Jacobi rotation method, iterated until the
// off-diagonal Frobenius mass drops below 1e-12 * ||A||_F. Eigenvectors v of
// A become Pᵀ-eigenvectors via g_i = v_i / sqrt(pi_i). Throws
// NoConvergence(max_sweeps) on pathological input.
SpectrumReport eigendecompose(const SymmetrizedOperator& A, const StationaryDistribution& pi,
                              int max_sweeps = 100);

// symmetrize + eigendecompose + residual bookkeeping.
SpectrumReport spectrum_of(const ReversibleChain& chain, int max_sweeps = 100);

}  // namespace chaincert
