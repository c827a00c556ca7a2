#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "chaincert/chain.hpp"

namespace chaincert {

// Nonempty proper subset of the state space, as a conductance candidate.
struct StateSubset {
  std::vector<int> members;  // sorted ascending
  double mass = 0.0;         // pi(S)
};

StateSubset make_subset(std::vector<int> members, const StationaryDistribution& pi);

// Q(S) = sum_{i in S, j not in S} P_ji pi_i  (probability flow out of S per step)
double edge_flow(const ReversibleChain& chain, const StateSubset& s);

enum class ConductanceMethod { exact, sweep };
const char* method_name(ConductanceMethod m);

struct ConductanceResult {
  double phi = 0.0;
  StateSubset argmin;
  ConductanceMethod method = ConductanceMethod::exact;
  double flow = 0.0;  // Q(argmin); phi == flow / argmin.mass
};

// Minimizes Q(S)/pi(S) over every nonempty S with pi(S) <= 1/2 + kMassSlack
// by bitmask enumeration. Ties go to the lexicographically smallest member
// set. Throws TooSmall when n = 1 (no nonempty proper subset can satisfy the
// mass constraint meaningfully) and TooLarge(n, max_n) above the cap.
ConductanceResult exact_conductance(const ReversibleChain& chain, int max_n = 20);

// Evaluates phi on the prefix sets of the states sorted descending by
// `ordering` (ties by index ascending), then again for the negated ordering,
// and returns the best feasible prefix. Always an upper bound on the exact
// conductance. Throws NoValidPrefix when every prefix in both directions
// exceeds mass 1/2 (possible when some pi_i > 1/2); callers should fall back
// to singleton_conductance.
ConductanceResult sweep_conductance(const ReversibleChain& chain,
                                    std::span<const double> ordering);

// Fallback for the NoValidPrefix case: best of all singletons {i} with
// pi_i <= 1/2 + slack and all complements of singletons meeting the mass
// constraint. Nonvacuous for every n >= 2 since min_i pi_i <= 1/2.
ConductanceResult singleton_conductance(const ReversibleChain& chain);

// sweep_conductance with the singleton fallback applied.
ConductanceResult sweep_conductance_or_fallback(const ReversibleChain& chain,
                                                std::span<const double> ordering);

}  // namespace chaincert
