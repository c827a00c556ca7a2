#include "chaincert/analyze.hpp"

#include <chrono>
#include <cmath>

#include <json.hpp>

namespace chaincert {

using nlohmann::ordered_json;

AnalysisReport analyze_chain(const ReversibleChain& chain, const AnalyzeOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  AnalysisReport report;
  report.n = chain.size();
  report.source = opts.source;
  report.convention = opts.convention;
  report.full = opts.full;
  report.ergodicity = chain.ergodicity();
  report.pi.assign(chain.pi().values().begin(), chain.pi().values().end());
  report.balance_violation = chain.balance_violation();
  report.spectrum = spectrum_of(chain);

  if (chain.size() >= 2) {
    if (!opts.sweep_only && static_cast<int>(chain.size()) <= opts.max_exact_n) {
      report.conductance = exact_conductance(chain, opts.max_exact_n);
    } else {
      // Sweep along the second eigenvector, the classical spectral ordering.
      report.conductance =
          sweep_conductance_or_fallback(chain, report.spectrum.eigvecs_pt[1]);
    }
    report.certificate = certify(chain, report.spectrum, *report.conductance, opts.tol);
    report.bounds = compare_bounds(report.conductance->phi);

    double mu_max_abs = 0.0;
    for (std::size_t k = 1; k < report.spectrum.eigenvalues.size(); ++k)
      mu_max_abs = std::max(mu_max_abs, std::abs(report.spectrum.eigenvalues[k]));
    const double gap = 1.0 - mu_max_abs;
    if (gap > 1e-15) {
      MixingEstimate est;
      est.epsilon = 0.25;
      est.t_est = std::log(1.0 / (est.epsilon * chain.pi().min_entry())) / gap;
      if (std::isfinite(est.t_est)) report.mixing = est;
    }
  }

  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

AnalysisReport analyze_matrix(Matrix P_column, const AnalyzeOptions& opts) {
  auto P = TransitionMatrix::validate(std::move(P_column), opts.tol.stochastic);
  return analyze_chain(ReversibleChain::admit(std::move(P), opts.tol), opts);
}

namespace {

ordered_json conductance_json(const ConductanceResult& c) {
  ordered_json out;
  out["phi"] = c.phi;
  out["subset"] = c.argmin.members;
  out["mass"] = c.argmin.mass;
  out["method"] = method_name(c.method);
  return out;
}

ordered_json certificate_json(const BoundCertificate& cert) {
  ordered_json out;
  out["phi"] = cert.phi;
  out["vacuous"] = cert.vacuous;
  ordered_json eigen = ordered_json::array();
  for (const auto& e : cert.eigen) {
    ordered_json entry;
    entry["lambda"] = e.lambda;
    if (e.constructed()) {
      entry["classical_slack"] = e.classical_slack;
      entry["new_slack"] = e.new_slack;
      entry["claim2_slack"] = e.claim2_slack;
      entry["claim1"] = {{"lhs", e.claim1.phi_norm4},
                         {"middle", e.claim1.middle},
                         {"rhs", e.claim1.rhs}};
    } else {
      entry["classical_slack"] = e.classical_slack;
      entry["new_slack"] = e.new_slack;
      entry["error"] = *e.construction_error;
    }
    eigen.push_back(std::move(entry));
  }
  out["eigen"] = std::move(eigen);
  out["rigorous"] = cert.rigorous;
  return out;
}

}  // namespace

std::string report_to_json(const AnalysisReport& report) {
  ordered_json doc;
  doc["schema_version"] = "1";
  doc["chain"] = {{"n", report.n}, {"source", report.source}, {"convention", report.convention}};
  doc["ergodicity"] = {{"irreducible", report.ergodicity.irreducible},
                       {"aperiodic", report.ergodicity.aperiodic},
                       {"period", report.ergodicity.period}};
  doc["stationary_pi"] = report.pi;
  doc["detailed_balance_violation"] = report.balance_violation;

  ordered_json spectrum;
  spectrum["eigenvalues"] = report.spectrum.eigenvalues;
  spectrum["positive_nontrivial"] = report.spectrum.positive_nontrivial_values();
  if (report.full) spectrum["eigenvectors"] = report.spectrum.eigvecs_pt;
  doc["spectrum"] = std::move(spectrum);

  if (report.conductance) {
    doc["conductance"] = conductance_json(*report.conductance);
    doc["certificate"] = certificate_json(*report.certificate);
    doc["bounds"] = {{"classical", report.bounds->classical},
                     {"strengthened", report.bounds->strengthened}};
  } else {
    doc["conductance"] = "undefined (n=1)";
    doc["certificate"] = "undefined (n=1)";
    doc["bounds"] = "undefined (n=1)";
  }
  if (report.mixing)
    doc["mixing_time_estimate"] = {{"t_est", report.mixing->t_est},
                                   {"epsilon", report.mixing->epsilon},
                                   {"note", "heuristic, not a certified quantity"}};
  doc["timing"] = {{"seconds", report.seconds}};
  return doc.dump(2) + "\n";
}

}  // namespace chaincert
