#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "chaincert/chain.hpp"

namespace chaincert {

struct WeightedEdge {
  int u = 0;
  int v = 0;
  double w = 1.0;
};

enum class Family {
  two_state,
  complete,
  cycle,
  path,
  hypercube,
  walk_on_graph,
  metropolis,
  random_reversible,
};

const char* family_name(Family f);
Family family_from_name(const std::string& name);  // throws ParseError

// Everything needed to rebuild a chain deterministically: identical
// (family, parameters, seed) produce bit-identical chains.
struct ChainSpec {
  Family family = Family::two_state;
  double a = 0.1;      // two_state: leave probability of state 0 (in (0,1])
  double b = 0.1;      // two_state: leave probability of state 1
  int n = 2;           // complete / cycle / path / metropolis / random_reversible
  int d = 3;           // hypercube dimension
  double density = 1.0;                   // random support density in (0,1]
  std::uint64_t seed = 0;                 // metropolis / random_reversible
  std::vector<WeightedEdge> edges;        // walk_on_graph
  std::vector<double> target_pi;          // metropolis (empty: sampled from seed)
  std::vector<std::pair<int, int>> proposal_edges;  // metropolis (empty: sampled)
  double alpha = 0.0;  // laziness, applied last: P' = alpha I + (1-alpha) P
};

// Builds and admits the chain. Throws OutOfRange for bad parameters,
// Disconnected when a walk/proposal graph is not connected, and Periodic
// when the result fails aperiodicity with alpha = 0 (callers should add
// laziness; periodic families are never silently fixed).
ReversibleChain build(const ChainSpec& spec);

// P' = alpha I + (1-alpha) P. Preserves pi exactly (the chain keeps its pi
// bytes) and maps each eigenvalue mu to alpha + (1-alpha) mu.
// alpha = 0 returns the chain unchanged. Throws OutOfRange outside [0,1).
ReversibleChain lazify(const ReversibleChain& chain, double alpha);

// Random-walk transition matrix of a weighted undirected graph:
// P_ij = w_ij / deg(j), column convention, pi_j proportional to deg(j).
// Shared by the TSV ingestion path so file input goes through the same
// admission pipeline as everything else. Throws Disconnected.
Matrix walk_matrix(int n, const std::vector<WeightedEdge>& edges);

// One chain of the shared fuzz corpus: n uniform in [n_min, n_max], random
// support density, random_reversible recipe. Pure in (master_seed, index).
ReversibleChain fuzz_chain(std::uint64_t master_seed, std::uint64_t index, int n_min, int n_max);
ChainSpec fuzz_chain_spec(std::uint64_t master_seed, std::uint64_t index, int n_min, int n_max);

}  // namespace chaincert
