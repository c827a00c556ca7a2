#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chaincert/chain.hpp"
#include "chaincert/conductance.hpp"
#include "chaincert/spectral.hpp"

namespace chaincert {

// Nonzero, entrywise nonnegative vector whose strictly positive support has
// stationary mass at most 1/2. The shape the conductance inequality works on.
struct ProperVector {
  std::vector<double> f;
  std::vector<int> support;  // {i : f_i > 0}, ascending
  double support_mass = 0.0;

  // Validates all three conditions; throws ZeroProperVector / OutOfRange /
  // MassExceedsHalf.
  static ProperVector from(std::vector<double> f, const StationaryDistribution& pi);
};

// Thresholds an eigenvector of Pᵀ into a proper vector: negate g first if
// pi({g_i > 0}) > 1/2, then keep the positive part. Entries equal to zero
// stay out of the support. Throws ZeroProperVector when no strictly positive
// entry survives (e.g. g <= 0 after the sign choice) and MassExceedsHalf if
// the support is still too heavy.
ProperVector make_proper_from_eigvec(std::span<const double> g, const StationaryDistribution& pi);

// sum_{i<j} P_ij pi_j (f_i^2 - f_j^2) after relabeling states so that
// f_1 >= ... >= f_r > 0 = f_{r+1} = ... = f_n (ties by original index).
double telescoping_quantity(const ReversibleChain& chain, const ProperVector& f);
// Same computation on raw pieces; lets tests probe matrices that are not
// admissible as chains (block-diagonal supports and the like).
double telescoping_quantity_raw(const Matrix& P, std::span<const double> pi,
                                std::span<const double> f);

// The two-sided sandwich phi ||f||^2 <= T(f) and T(f)^2 <= ||f||^4 - <f,Pᵀf>^2,
// reported on the scale of the input f. Evaluation happens on f/||f||_pi
// internally and is scaled back, so the three quantities are exactly
// homogeneous of degree 4 in f.
struct Claim1Diagnostic {
  double phi_norm4 = 0.0;  // phi^2 ||f||^4
  double middle = 0.0;     // T(f)^2
  double rhs = 0.0;        // ||f||^4 - <f, Pᵀ f>^2
  double scale = 0.0;      // ||f||^4

  // Gaps on the unit scale (f normalized): lower = T - phi, upper = rhs - T^2.
  double lower_gap = 0.0;
  double upper_gap = 0.0;

  bool lower_ok(double floor = Tolerances{}.slack_floor) const { return lower_gap >= -floor; }
  bool upper_ok(double floor = Tolerances{}.slack_floor) const { return upper_gap >= -floor; }
};

Claim1Diagnostic compute_claim1(const ReversibleChain& chain, const ProperVector& f, double phi);

// compute_claim1 + throws SandwichViolation("lower"|"upper", magnitude) when a
// side undershoots the slack floor. Requires an exact phi to be meaningful:
// an overestimated (sweep) phi can legitimately break the lower side.
Claim1Diagnostic check_claim1(const ReversibleChain& chain, const ProperVector& f, double phi,
                              double floor = Tolerances{}.slack_floor);

// <f, Pᵀ f> - lambda ||f||^2 for f = make_proper_from_eigvec(g, pi), on the
// scale of the thresholded f. Verifies Pᵀ g = lambda g within tol_eig first
// (NotAnEigenvector) and that lambda lies in (0,1) (OutOfRange).
double check_claim2(const ReversibleChain& chain, double lambda, std::span<const double> g,
                    double tol_eig = Tolerances{}.eig);

struct BoundComparison {
  double classical = 1.0;     // 1 - phi^2/2
  double strengthened = 1.0;  // sqrt(1 - phi^2), always <= classical
};

// Throws OutOfRange unless 0 <= phi <= 1 (up to 1e-12 grace).
BoundComparison compare_bounds(double phi);

// Per-eigenvalue certification record.
struct EigenCertificate {
  double lambda = 0.0;
  double classical_slack = 0.0;  // (1 - phi^2/2) - lambda
  double new_slack = 0.0;        // 1 - phi^2 - lambda^2
  double claim2_slack = 0.0;     // on the scale of the constructed f
  Claim1Diagnostic claim1;
  double f_norm2 = 0.0;  // ||f||_pi^2 of the constructed proper vector

  // Set when the proper-vector construction failed (ZeroProperVector, ...);
  // the eigenvalue is recorded as uncertifiable, not treated as a violation.
  std::optional<std::string> construction_error;

  bool constructed() const { return !construction_error.has_value(); }
};

struct BoundCertificate {
  double phi = 0.0;
  bool vacuous = false;   // no eigenvalue in (0,1)
  bool rigorous = false;  // phi came from exact enumeration
  std::vector<EigenCertificate> eigen;

  // True when some certified inequality undershoots the slack floor. For
  // non-rigorous (sweep) certificates only the phi-independent checks count:
  // sweep phi overestimates, which can legitimately break the phi sides
  // without contradicting anything.
  bool has_violation(double floor = Tolerances{}.slack_floor) const;
};

// Runs both theorem slacks plus the claim-1 and claim-2 checks for every
// eigenvalue in (0,1). Per-eigenvalue construction failures are recorded,
// not fatal.
BoundCertificate certify(const ReversibleChain& chain, const SpectrumReport& spectrum,
                         const ConductanceResult& cond, const Tolerances& tol = {});

}  // namespace chaincert
