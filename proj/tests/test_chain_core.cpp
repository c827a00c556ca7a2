#include <doctest.h>

#include <cmath>
#include <functional>

#include "chaincert/chain.hpp"
#include "chaincert/generators.hpp"
#include "chaincert/rng.hpp"
#include "oracles.hpp"

using namespace chaincert;

namespace {

ChainSpec spec_two_state(double a, double b) {
  ChainSpec s;
  s.family = Family::two_state;
  s.a = a;
  s.b = b;
  return s;
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ChainError& e) {
    return e.code();
  }
  FAIL("expected a ChainError");
  return Errc::parse_error;
}

}  // namespace

TEST_SUITE("chain_core") {

TEST_CASE("validate accepts exact column-stochastic input") {
  auto P = TransitionMatrix::validate({{1.0, 0.5}, {0.0, 0.5}});
  CHECK(P.size() == 2);
  CHECK(P(0, 0) == 1.0);
  CHECK(P(0, 1) == 0.5);
  CHECK(P(1, 1) == 0.5);
}

TEST_CASE("validate rejects off column sums and negative entries") {
  CHECK(code_of([] { TransitionMatrix::validate({{0.9, 0.2}, {0.2, 0.8}}); }) ==
        Errc::column_sum_off);
  CHECK(code_of([] { TransitionMatrix::validate({{1.1, 0.0}, {-0.1, 1.0}}); }) ==
        Errc::negative_entry);
  CHECK(code_of([] { TransitionMatrix::validate({{1.0, 0.0}}); }) == Errc::non_square);
}

TEST_CASE("validate renormalizes columns to exactly one") {
  const double third = 1.0 / 3.0;
  auto P = TransitionMatrix::validate({{third, 0.25}, {2 * third, 0.75}}, 1e-9);
  for (std::size_t j = 0; j < 2; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < 2; ++i) sum += P(i, j);
    CHECK(sum == 1.0);
  }
}

TEST_CASE("ergodicity: isolated self-loops are reducible") {
  auto P = TransitionMatrix::validate({{1.0, 0.0}, {0.0, 1.0}});
  auto ergo = check_ergodicity(P);
  CHECK_FALSE(ergo.irreducible);
}

TEST_CASE("ergodicity: 2-cycle is irreducible with period 2") {
  auto P = TransitionMatrix::validate({{0.0, 1.0}, {1.0, 0.0}});
  auto ergo = check_ergodicity(P);
  CHECK(ergo.irreducible);
  CHECK(ergo.period == 2);
  CHECK_FALSE(ergo.aperiodic);
}

TEST_CASE("ergodicity: self-loops force aperiodicity") {
  auto P = TransitionMatrix::validate({{0.9, 0.1}, {0.1, 0.9}});
  auto ergo = check_ergodicity(P);
  CHECK(ergo.irreducible);
  CHECK(ergo.aperiodic);
  CHECK(ergo.period == 1);
}

TEST_CASE("ergodicity: n=1 chain is ergodic") {
  auto P = TransitionMatrix::validate(Matrix::from_rows({{1.0}}));
  auto ergo = check_ergodicity(P);
  CHECK(ergo.irreducible);
  CHECK(ergo.aperiodic);
}

TEST_CASE("stationary distribution closed form for two states") {
  // leave probabilities a = 0.2, b = 0.1 give pi = (b, a)/(a+b)
  auto P = TransitionMatrix::validate({{0.8, 0.1}, {0.2, 0.9}});
  auto pi = stationary_distribution(P, check_ergodicity(P));
  CHECK(pi[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(pi[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("stationary distribution is uniform for doubly stochastic chains") {
  const double q = 0.25;
  auto P = TransitionMatrix::validate(Matrix::from_rows({{q, q, q, q},
                                                         {q, q, q, q},
                                                         {q, q, q, q},
                                                         {q, q, q, q}}));
  auto pi = stationary_distribution(P, check_ergodicity(P));
  for (std::size_t i = 0; i < 4; ++i) CHECK(pi[i] == doctest::Approx(0.25).epsilon(1e-12));

  ChainSpec k4;
  k4.family = Family::complete;
  k4.n = 4;
  k4.alpha = 0.5;
  auto lazy = build(k4);
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(lazy.pi()[i] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("stationary distribution rejects non-ergodic input") {
  auto P = TransitionMatrix::validate({{1.0, 0.0}, {0.0, 1.0}});
  CHECK(code_of([&] { stationary_distribution(P, check_ergodicity(P)); }) == Errc::not_ergodic);
}

TEST_CASE("detailed balance: symmetric matrix with uniform pi is exactly balanced") {
  auto P = TransitionMatrix::validate({{0.9, 0.1}, {0.1, 0.9}});
  StationaryDistribution uniform({0.5, 0.5});
  CHECK(check_detailed_balance(P, uniform) == 0.0);
}

TEST_CASE("detailed balance: 3-cycle rotation violates by 1/3") {
  auto P = TransitionMatrix::validate({{0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}});
  StationaryDistribution pi({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  CHECK(check_detailed_balance(P, pi) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("detailed balance: generator chains are balanced to 1e-12") {
  for (std::uint64_t k = 0; k < 20; ++k) {
    auto chain = fuzz_chain(123, k, 2, 12);
    CHECK(chain.balance_violation() <= 1e-12);
  }
}

TEST_CASE("weighted inner product examples") {
  StationaryDistribution pi({1.0 / 3.0, 2.0 / 3.0});
  std::vector<double> ones{1.0, 1.0};
  CHECK(weighted_inner_product(ones, ones, pi) == doctest::Approx(1.0).epsilon(1e-15));
  std::vector<double> e0{1.0, 0.0}, e1{0.0, 1.0};
  CHECK(weighted_inner_product(e0, e1, pi) == 0.0);
  std::vector<double> f{2.0, 0.0}, g{3.0, 0.0};
  CHECK(weighted_inner_product(f, g, pi) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(code_of([&] {
          std::vector<double> bad{1.0};
          weighted_inner_product(bad, g, pi);
        }) == Errc::dimension_mismatch);
}

TEST_CASE("weighted inner product is symmetric and bilinear") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.below(8);
    std::vector<double> raw(n);
    double sum = 0.0;
    for (double& v : raw) {
      v = rng.u01();
      sum += v;
    }
    for (double& v : raw) v /= sum;
    StationaryDistribution pi(raw);
    std::vector<double> f(n), g(n), h(n);
    for (std::size_t i = 0; i < n; ++i) {
      f[i] = 2.0 * rng.u01() - 1.0;
      g[i] = 2.0 * rng.u01() - 1.0;
      h[i] = 2.0 * rng.u01() - 1.0;
    }
    const double alpha = 2.0 * rng.u01() - 1.0;
    CHECK(weighted_inner_product(f, g, pi) ==
          doctest::Approx(weighted_inner_product(g, f, pi)).epsilon(1e-12));
    std::vector<double> af_h(n);
    for (std::size_t i = 0; i < n; ++i) af_h[i] = alpha * f[i] + h[i];
    const double lhs = weighted_inner_product(af_h, g, pi);
    const double rhs =
        alpha * weighted_inner_product(f, g, pi) + weighted_inner_product(h, g, pi);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("column stochasticity: ones vector is a left fixed point") {
  for (std::uint64_t k = 0; k < 10; ++k) {
    auto chain = fuzz_chain(55, k, 2, 10);
    std::vector<double> ones(chain.size(), 1.0);
    auto pt1 = mat_transpose_vec(chain.transition().matrix(), ones);
    for (double v : pt1) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("stationary solve agrees with power iteration on generator chains") {
  std::vector<ReversibleChain> chains;
  chains.push_back(build(spec_two_state(0.2, 0.1)));
  for (std::uint64_t k = 0; k < 15; ++k) chains.push_back(fuzz_chain(7, k, 2, 12));
  ChainSpec cube;
  cube.family = Family::hypercube;
  cube.d = 3;
  cube.alpha = 0.5;
  chains.push_back(build(cube));
  for (const auto& chain : chains) {
    auto oracle = oracles::power_iteration_pi(chain.transition().matrix());
    for (std::size_t i = 0; i < chain.size(); ++i)
      CHECK(chain.pi()[i] == doctest::Approx(oracle[i]).epsilon(1e-9));
  }
}

TEST_CASE("admission rejects irreversible and periodic chains in that order") {
  // 3-cycle rotation: periodic AND irreversible; balance is checked first.
  auto rotation = TransitionMatrix::validate({{0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}});
  CHECK(code_of([&] { ReversibleChain::admit(rotation); }) == Errc::not_reversible);

  // 2-cycle: periodic but perfectly reversible; ergodicity is the failure.
  auto flip = TransitionMatrix::validate({{0.0, 1.0}, {1.0, 0.0}});
  CHECK(code_of([&] { ReversibleChain::admit(flip); }) == Errc::not_ergodic);
}

TEST_CASE("admitted chains satisfy the residual invariants") {
  for (std::uint64_t k = 0; k < 10; ++k) {
    auto chain = fuzz_chain(99, k, 2, 10);
    auto px = mat_vec(chain.transition().matrix(), chain.pi().values());
    for (std::size_t i = 0; i < chain.size(); ++i)
      CHECK(std::abs(px[i] - chain.pi()[i]) <= 1e-9);
    CHECK(chain.balance_violation() <= 1e-8);
  }
}

}  // TEST_SUITE
