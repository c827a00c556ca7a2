#include "chaincert/conductance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace chaincert {

const char* method_name(ConductanceMethod m) {
  return m == ConductanceMethod::exact ? "exact" : "sweep";
}

StateSubset make_subset(std::vector<int> members, const StationaryDistribution& pi) {
  const int n = static_cast<int>(pi.size());
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (members.empty() || static_cast<int>(members.size()) >= n)
    throw ChainError(Errc::out_of_range, "subset must be nonempty and proper");
  if (members.front() < 0 || members.back() >= n)
    throw ChainError(Errc::out_of_range, "state index out of range");
  double mass = 0.0;
  for (int i : members) mass += pi[static_cast<std::size_t>(i)];
  return StateSubset{std::move(members), mass};
}

double edge_flow(const ReversibleChain& chain, const StateSubset& s) {
  const std::size_t n = chain.size();
  const auto& P = chain.transition();
  const auto& pi = chain.pi();
  std::vector<bool> in(n, false);
  for (int i : s.members) in[static_cast<std::size_t>(i)] = true;
  double flow = 0.0;
  for (int im : s.members) {
    const auto i = static_cast<std::size_t>(im);
    for (std::size_t j = 0; j < n; ++j)
      if (!in[j]) flow += P(j, i) * pi[i];
  }
  return flow;
}

namespace {

std::vector<int> mask_members(std::uint32_t mask, int n) {
  std::vector<int> members;
  for (int i = 0; i < n; ++i)
    if (mask & (1u << i)) members.push_back(i);
  return members;
}

ConductanceResult result_for(const ReversibleChain& chain, std::vector<int> members,
                             ConductanceMethod method) {
  StateSubset s = make_subset(std::move(members), chain.pi());
  const double flow = edge_flow(chain, s);
  const double phi = flow / s.mass;
  return ConductanceResult{phi, std::move(s), method, flow};
}

}  // namespace

ConductanceResult exact_conductance(const ReversibleChain& chain, int max_n) {
  const int n = static_cast<int>(chain.size());
  if (n < 2) throw ChainError(Errc::too_small, "conductance needs n >= 2, got n = 1");
  if (n > max_n)
    throw ChainError(Errc::too_large, "n = " + std::to_string(n) +
                                          " exceeds the exact enumeration cap " +
                                          std::to_string(max_n));
  if (n > 31) throw ChainError(Errc::too_large, "bitmask enumeration caps at n = 31");
  const auto& P = chain.transition();
  const auto& pi = chain.pi();

  // W(j,i) = P_ji pi_i is the stationary flow i -> j; Q(S) sums it over the
  // cut. out[i] collects the whole off-diagonal column so the inner loop only
  // has to subtract the part that stays inside S.
  Matrix w(static_cast<std::size_t>(n));
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j)
      if (i != j) {
        w(j, i) = P(j, i) * pi[i];
        out[i] += w(j, i);
      }

  double best_phi = 2.0;
  std::uint32_t best_mask = 0;
  std::vector<int> best_members;
  const std::uint32_t full = (n >= 32) ? 0 : (1u << n);
  for (std::uint32_t mask = 1; mask + 1 < full; ++mask) {
    double mass = 0.0;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) mass += pi[static_cast<std::size_t>(i)];
    if (mass > 0.5 + kMassSlack) continue;

    double flow = 0.0;
    for (int i = 0; i < n; ++i) {
      if (!(mask & (1u << i))) continue;
      double inside = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != i && (mask & (1u << j)))
          inside += w(static_cast<std::size_t>(j), static_cast<std::size_t>(i));
      flow += out[static_cast<std::size_t>(i)] - inside;
    }
    const double phi = flow / mass;
    if (phi < best_phi) {
      best_phi = phi;
      best_mask = mask;
      best_members = mask_members(mask, n);
    } else if (phi == best_phi && best_mask != 0) {
      auto members = mask_members(mask, n);
      if (std::lexicographical_compare(members.begin(), members.end(), best_members.begin(),
                                       best_members.end())) {
        best_mask = mask;
        best_members = std::move(members);
      }
    }
  }
  if (best_mask == 0)
    throw ChainError(Errc::no_valid_prefix, "no subset satisfies the mass constraint");
  return result_for(chain, std::move(best_members), ConductanceMethod::exact);
}

ConductanceResult sweep_conductance(const ReversibleChain& chain,
                                    std::span<const double> ordering) {
  const std::size_t n = chain.size();
  if (ordering.size() != n)
    throw ChainError(Errc::dimension_mismatch, "ordering length does not match chain");
  if (n < 2) throw ChainError(Errc::too_small, "conductance needs n >= 2, got n = 1");
  const auto& P = chain.transition();
  const auto& pi = chain.pi();

  bool found = false;
  double best_phi = 2.0;
  std::vector<int> best_prefix;

  for (int direction = 0; direction < 2; ++direction) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
      const double fx = direction ? -ordering[static_cast<std::size_t>(x)]
                                  : ordering[static_cast<std::size_t>(x)];
      const double fy = direction ? -ordering[static_cast<std::size_t>(y)]
                                  : ordering[static_cast<std::size_t>(y)];
      if (fx != fy) return fx > fy;
      return x < y;
    });

    // Incremental cut update: adding state s turns its outgoing column into
    // boundary and retires both directions of flow between s and the prefix.
    std::vector<bool> in(n, false);
    double mass = 0.0;
    double flow = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const auto s = static_cast<std::size_t>(order[k]);
      double to_prefix = 0.0, from_prefix = 0.0, out_s = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == s) continue;
        out_s += P(j, s) * pi[s];
        if (in[j]) {
          to_prefix += P(j, s) * pi[s];
          from_prefix += P(s, j) * pi[j];
        }
      }
      flow += out_s - to_prefix - from_prefix;
      mass += pi[s];
      in[s] = true;
      if (mass > 0.5 + kMassSlack) break;  // prefixes only grow heavier
      const double phi = flow / mass;
      if (phi < best_phi) {
        best_phi = phi;
        best_prefix.assign(order.begin(), order.begin() + static_cast<long>(k) + 1);
        found = true;
      }
    }
  }
  if (!found)
    throw ChainError(Errc::no_valid_prefix,
                     "every sweep prefix exceeds stationary mass 1/2");
  // Recompute the cut directly so phi = flow/mass holds without the
  // incremental rounding.
  return result_for(chain, std::move(best_prefix), ConductanceMethod::sweep);
}

ConductanceResult singleton_conductance(const ReversibleChain& chain) {
  const int n = static_cast<int>(chain.size());
  if (n < 2) throw ChainError(Errc::too_small, "conductance needs n >= 2, got n = 1");
  const auto& pi = chain.pi();

  bool found = false;
  ConductanceResult best;
  auto consider = [&](std::vector<int> members) {
    auto r = result_for(chain, std::move(members), ConductanceMethod::sweep);
    if (!found || r.phi < best.phi ||
        (r.phi == best.phi &&
         std::lexicographical_compare(r.argmin.members.begin(), r.argmin.members.end(),
                                      best.argmin.members.begin(), best.argmin.members.end()))) {
      best = std::move(r);
      found = true;
    }
  };
  for (int i = 0; i < n; ++i) {
    if (pi[static_cast<std::size_t>(i)] <= 0.5 + kMassSlack) consider({i});
    if (1.0 - pi[static_cast<std::size_t>(i)] <= 0.5 + kMassSlack) {
      std::vector<int> complement;
      for (int j = 0; j < n; ++j)
        if (j != i) complement.push_back(j);
      consider(std::move(complement));
    }
  }
  if (!found)
    throw ChainError(Errc::no_valid_prefix, "no singleton or co-singleton fits mass 1/2");
  return best;
}

ConductanceResult sweep_conductance_or_fallback(const ReversibleChain& chain,
                                                std::span<const double> ordering) {
  try {
    return sweep_conductance(chain, ordering);
  } catch (const ChainError& e) {
    if (e.code() != Errc::no_valid_prefix) throw;
    return singleton_conductance(chain);
  }
}

}  // namespace chaincert
