#pragma once

#include <optional>
#include <string>

#include "chaincert/bounds.hpp"
#include "chaincert/chain.hpp"
#include "chaincert/conductance.hpp"
#include "chaincert/spectral.hpp"

namespace chaincert {

struct AnalyzeOptions {
  Tolerances tol;
  int max_exact_n = 20;
  bool sweep_only = false;
  bool full = false;  // include eigenvectors in the report
  std::string source = "stdin";
  std::string convention = "column";
};

struct MixingEstimate {
  double t_est = 0.0;
  double epsilon = 0.25;
};

// Everything cmd_analyze reports. Conductance, certificate and bound
// comparison are absent for n = 1 (no nonempty proper subset exists).
struct AnalysisReport {
  std::size_t n = 0;
  std::string source;
  std::string convention;
  ErgodicityReport ergodicity;
  std::vector<double> pi;
  double balance_violation = 0.0;
  SpectrumReport spectrum;
  std::optional<ConductanceResult> conductance;
  std::optional<BoundCertificate> certificate;
  std::optional<BoundComparison> bounds;
  // t_est = ln(1/(eps min_i pi_i)) / (1 - mu_max_abs); heuristic only.
  std::optional<MixingEstimate> mixing;
  bool full = false;
  double seconds = 0.0;
};

// Full pipeline: validate -> ergodicity -> stationary distribution ->
// detailed balance -> spectrum -> conductance -> certificate. Throws
// ChainError on rejection (ParseError handled by the caller).
AnalysisReport analyze_matrix(Matrix P_column, const AnalyzeOptions& opts);
AnalysisReport analyze_chain(const ReversibleChain& chain, const AnalyzeOptions& opts);

// Single JSON document, schema_version "1". Byte-identical for identical
// inputs and flags except for the timing block.
std::string report_to_json(const AnalysisReport& report);

}  // namespace chaincert
