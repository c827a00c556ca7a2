#include "chaincert/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "chaincert/rng.hpp"

namespace chaincert {

const char* family_name(Family f) {
  switch (f) {
    case Family::two_state: return "two_state";
    case Family::complete: return "complete";
    case Family::cycle: return "cycle";
    case Family::path: return "path";
    case Family::hypercube: return "hypercube";
    case Family::walk_on_graph: return "walk_on_graph";
    case Family::metropolis: return "metropolis";
    case Family::random_reversible: return "random_reversible";
  }
  return "unknown";
}

Family family_from_name(const std::string& name) {
  for (Family f : {Family::two_state, Family::complete, Family::cycle, Family::path,
                   Family::hypercube, Family::walk_on_graph, Family::metropolis,
                   Family::random_reversible})
    if (name == family_name(f)) return f;
  throw ChainError(Errc::parse_error, "unknown chain family '" + name + "'");
}

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ChainError(Errc::out_of_range, msg);
}

bool connected(int n, const std::vector<std::vector<int>>& adj) {
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::queue<int> work;
  seen[0] = true;
  work.push(0);
  int count = 1;
  while (!work.empty()) {
    int u = work.front();
    work.pop();
    for (int v : adj[static_cast<std::size_t>(u)])
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = true;
        ++count;
        work.push(v);
      }
  }
  return count == n;
}

Matrix two_state_matrix(double a, double b) {
  require(a > 0.0 && a <= 1.0 && b > 0.0 && b <= 1.0, "two_state needs a, b in (0,1]");
  Matrix m(2);
  m(0, 0) = 1.0 - a;
  m(1, 0) = a;
  m(0, 1) = b;
  m(1, 1) = 1.0 - b;
  return m;
}

Matrix complete_matrix(int n) {
  require(n >= 2, "complete graph walk needs n >= 2");
  Matrix m(static_cast<std::size_t>(n));
  const double p = 1.0 / (n - 1);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      if (i != j) m(i, j) = p;
  return m;
}

Matrix cycle_matrix(int n) {
  require(n >= 2, "cycle walk needs n >= 2");
  Matrix m(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    m(static_cast<std::size_t>((j + 1) % n), static_cast<std::size_t>(j)) += 0.5;
    m(static_cast<std::size_t>((j + n - 1) % n), static_cast<std::size_t>(j)) += 0.5;
  }
  return m;
}

Matrix path_matrix(int n) {
  require(n >= 2, "path walk needs n >= 2");
  Matrix m(static_cast<std::size_t>(n));
  m(1, 0) = 1.0;
  m(static_cast<std::size_t>(n - 2), static_cast<std::size_t>(n - 1)) = 1.0;
  for (int j = 1; j + 1 < n; ++j) {
    m(static_cast<std::size_t>(j - 1), static_cast<std::size_t>(j)) = 0.5;
    m(static_cast<std::size_t>(j + 1), static_cast<std::size_t>(j)) = 0.5;
  }
  return m;
}

Matrix hypercube_matrix(int d) {
  require(d >= 1 && d <= 11, "hypercube dimension must be in [1, 11]");
  const int n = 1 << d;
  Matrix m(static_cast<std::size_t>(n));
  const double p = 1.0 / d;
  for (int j = 0; j < n; ++j)
    for (int bit = 0; bit < d; ++bit)
      m(static_cast<std::size_t>(j ^ (1 << bit)), static_cast<std::size_t>(j)) = p;
  return m;
}

Matrix metropolis_matrix(const std::vector<double>& raw_target,
                         const std::vector<std::pair<int, int>>& proposal) {
  const int n = static_cast<int>(raw_target.size());
  require(n >= 2, "metropolis needs n >= 2");
  double sum = 0.0;
  for (double t : raw_target) {
    require(t > 0.0, "metropolis target must be strictly positive");
    sum += t;
  }
  std::vector<double> target(raw_target);
  for (double& t : target) t /= sum;

  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  int max_deg = 0;
  for (auto [u, v] : proposal) {
    require(u >= 0 && u < n && v >= 0 && v < n && u != v, "bad proposal edge");
    adj[static_cast<std::size_t>(u)].push_back(v);
    adj[static_cast<std::size_t>(v)].push_back(u);
  }
  for (auto& nbrs : adj) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    max_deg = std::max(max_deg, static_cast<int>(nbrs.size()));
  }
  if (!connected(n, adj))
    throw ChainError(Errc::disconnected, "metropolis proposal graph is not connected");

  // Uniform proposal over max_deg slots keeps the proposal symmetric on
  // irregular graphs; acceptance min(1, pi_i/pi_j) makes the walk reversible
  // with respect to the target.
  Matrix m(static_cast<std::size_t>(n));
  const double q = 1.0 / max_deg;
  for (int j = 0; j < n; ++j) {
    double off = 0.0;
    for (int i : adj[static_cast<std::size_t>(j)]) {
      const double accept = std::min(1.0, target[static_cast<std::size_t>(i)] /
                                              target[static_cast<std::size_t>(j)]);
      m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = q * accept;
      off += q * accept;
    }
    m(static_cast<std::size_t>(j), static_cast<std::size_t>(j)) = 1.0 - off;
  }
  return m;
}

// pi from normalized exponentials, symmetric flows on a random connected
// support, remainder on the diagonal. The diagonal stays strictly positive,
// so the result is always aperiodic.
Matrix random_reversible_matrix(int n, double density, std::uint64_t seed) {
  require(n >= 1, "random_reversible needs n >= 1");
  require(density > 0.0 && density <= 1.0, "density must be in (0,1]");
  Matrix m(static_cast<std::size_t>(n));
  if (n == 1) {
    m(0, 0) = 1.0;
    return m;
  }
  SplitMix64 rng(seed);

  std::vector<double> pi(static_cast<std::size_t>(n));
  double total = 0.0;
  for (double& p : pi) {
    p = -std::log(rng.u01());
    total += p;
  }
  for (double& p : pi) p /= total;

  // Random recursive tree guarantees connectivity; extra pairs join with
  // probability `density`.
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i)
    std::swap(perm[static_cast<std::size_t>(i)],
              perm[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(i + 1)))]);
  Matrix flow(static_cast<std::size_t>(n));
  for (int k = 1; k < n; ++k) {
    const int u = perm[static_cast<std::size_t>(k)];
    const int v = perm[rng.below(static_cast<std::uint64_t>(k))];
    const double w = rng.u01();
    flow(static_cast<std::size_t>(u), static_cast<std::size_t>(v)) = w;
    flow(static_cast<std::size_t>(v), static_cast<std::size_t>(u)) = w;
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      auto& fij = flow(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      const double coin = rng.u01();
      if (fij == 0.0 && coin < density) {
        const double w = rng.u01();
        fij = w;
        flow(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = w;
      }
    }

  // Rescale each flow by the symmetric factor u * min(pi_i/r_i, pi_j/r_j),
  // where r_j is column j's raw flow sum. Every column then carries
  // off-diagonal mass at most u < 1 (the diagonal absorbs the rest), and the
  // binding columns sit near u, which keeps the spectrum spread out instead
  // of collapsing toward 1.
  const double headroom = 0.5 + 0.45 * rng.u01();
  std::vector<double> ratio(static_cast<std::size_t>(n), 1e300);
  for (int j = 0; j < n; ++j) {
    double col = 0.0;
    for (int i = 0; i < n; ++i)
      if (i != j) col += flow(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    if (col > 0.0) ratio[static_cast<std::size_t>(j)] = pi[static_cast<std::size_t>(j)] / col;
  }
  for (int j = 0; j < n; ++j) {
    double off = 0.0;
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      const double scale =
          headroom * std::min(ratio[static_cast<std::size_t>(i)], ratio[static_cast<std::size_t>(j)]);
      const double p =
          scale * flow(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) /
          pi[static_cast<std::size_t>(j)];
      m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = p;
      off += p;
    }
    m(static_cast<std::size_t>(j), static_cast<std::size_t>(j)) = 1.0 - off;
  }
  return m;
}

Matrix lazy_matrix(const Matrix& p, double alpha) {
  Matrix m(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j)
      m(i, j) = (1.0 - alpha) * p(i, j) + (i == j ? alpha : 0.0);
  return m;
}

}  // namespace

Matrix walk_matrix(int n, const std::vector<WeightedEdge>& edges) {
  require(n >= 1, "walk graph needs n >= 1");
  Matrix weight(static_cast<std::size_t>(n));
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (const auto& e : edges) {
    require(e.u >= 0 && e.u < n && e.v >= 0 && e.v < n, "edge endpoint out of range");
    require(e.w > 0.0, "edge weights must be positive");
    weight(static_cast<std::size_t>(e.u), static_cast<std::size_t>(e.v)) += e.w;
    if (e.u != e.v) {
      weight(static_cast<std::size_t>(e.v), static_cast<std::size_t>(e.u)) += e.w;
      adj[static_cast<std::size_t>(e.u)].push_back(e.v);
      adj[static_cast<std::size_t>(e.v)].push_back(e.u);
    }
  }
  if (n > 1 && !connected(n, adj))
    throw ChainError(Errc::disconnected, "walk graph is not connected");
  Matrix m(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    double deg = 0.0;
    for (int i = 0; i < n; ++i) deg += weight(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    if (deg <= 0.0)
      throw ChainError(Errc::disconnected, "vertex " + std::to_string(j) + " has no edges");
    for (int i = 0; i < n; ++i)
      m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
          weight(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) / deg;
  }
  return m;
}

ReversibleChain build(const ChainSpec& spec) {
  require(spec.alpha >= 0.0 && spec.alpha < 1.0, "laziness alpha must be in [0,1)");
  Matrix base;
  switch (spec.family) {
    case Family::two_state:
      base = two_state_matrix(spec.a, spec.b);
      break;
    case Family::complete:
      base = complete_matrix(spec.n);
      break;
    case Family::cycle:
      base = cycle_matrix(spec.n);
      break;
    case Family::path:
      base = path_matrix(spec.n);
      break;
    case Family::hypercube:
      base = hypercube_matrix(spec.d);
      break;
    case Family::walk_on_graph:
      base = walk_matrix(spec.n, spec.edges);
      break;
    case Family::metropolis: {
      std::vector<double> target = spec.target_pi;
      std::vector<std::pair<int, int>> proposal = spec.proposal_edges;
      if (target.empty() || proposal.empty()) {
        // Sampled variant: random positive target on a random connected
        // support drawn from the seed, reusing the random_reversible recipe's
        // tree-plus-density construction.
        require(spec.n >= 2, "metropolis needs n >= 2");
        SplitMix64 rng(derive_stream(spec.seed, 0x6d6574726fULL));
        if (target.empty()) {
          target.resize(static_cast<std::size_t>(spec.n));
          for (double& t : target) t = -std::log(rng.u01());
        }
        if (proposal.empty()) {
          std::vector<int> perm(static_cast<std::size_t>(spec.n));
          std::iota(perm.begin(), perm.end(), 0);
          for (int i = spec.n - 1; i > 0; --i)
            std::swap(perm[static_cast<std::size_t>(i)],
                      perm[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(i + 1)))]);
          for (int k = 1; k < spec.n; ++k)
            proposal.emplace_back(perm[static_cast<std::size_t>(k)],
                                  perm[rng.below(static_cast<std::uint64_t>(k))]);
          for (int i = 0; i < spec.n; ++i)
            for (int j = i + 1; j < spec.n; ++j)
              if (rng.u01() < spec.density) proposal.emplace_back(i, j);
        }
      }
      base = metropolis_matrix(target, proposal);
      break;
    }
    case Family::random_reversible:
      base = random_reversible_matrix(spec.n, spec.density, spec.seed);
      break;
  }
  if (spec.alpha > 0.0) base = lazy_matrix(base, spec.alpha);

  auto P = TransitionMatrix::validate(std::move(base));
  const auto ergo = check_ergodicity(P);
  if (!ergo.irreducible)
    throw ChainError(Errc::disconnected, "generated chain is not irreducible");
  if (!ergo.aperiodic)
    throw ChainError(Errc::periodic, "generated chain has period " + std::to_string(ergo.period) +
                                         "; add laziness (alpha > 0)");
  return ReversibleChain::admit(std::move(P));
}

ReversibleChain lazify(const ReversibleChain& chain, double alpha) {
  if (alpha < 0.0 || alpha >= 1.0)
    throw ChainError(Errc::out_of_range, "laziness alpha must be in [0,1)");
  if (alpha == 0.0) return chain;
  auto P = TransitionMatrix::validate(lazy_matrix(chain.transition().matrix(), alpha));
  // pi is untouched by P -> alpha I + (1-alpha) P, so reuse it bit for bit.
  return ReversibleChain::admit_with_pi(std::move(P), chain.pi());
}

ChainSpec fuzz_chain_spec(std::uint64_t master_seed, std::uint64_t index, int n_min, int n_max) {
  require(n_min >= 2 && n_max >= n_min, "fuzz n range must satisfy 2 <= n_min <= n_max");
  SplitMix64 rng(derive_stream(master_seed, index));
  ChainSpec spec;
  spec.family = Family::random_reversible;
  spec.n = n_min + static_cast<int>(rng.below(static_cast<std::uint64_t>(n_max - n_min + 1)));
  spec.density = 0.3 + 0.7 * rng.u01();
  spec.seed = rng.next();
  return spec;
}

ReversibleChain fuzz_chain(std::uint64_t master_seed, std::uint64_t index, int n_min, int n_max) {
  return build(fuzz_chain_spec(master_seed, index, n_min, n_max));
}

}  // namespace chaincert
