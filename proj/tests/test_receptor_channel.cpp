#include <doctest.h>

#include <cmath>
#include <vector>

#include "molcap/errors.hpp"
#include "molcap/input_dist.hpp"
#include "molcap/receptor_channel.hpp"
#include "molcap/rng.hpp"
#include "oracles/full_state_chain.hpp"
#include "oracles/generators.hpp"

using namespace molcap;

namespace {

ReceptorParams unit_params(int n, double beta, double m_max = 10.0) {
  ReceptorParams p;
  p.k_plus = 1.0;
  p.k_minus = 1.0;
  p.beta = beta;
  p.n_receptors = n;
  p.m_max = m_max;
  return p;
}

// With k₊ = k₋ = 1, α(x) = x / (1 + x), so α = a at x = a / (1 − a).
double x_for_alpha(double a) { return a / (1.0 - a); }

// The N=1 mixture {0 w.p. 1/2, x₁ w.p. 1/2} with α(x₁) = 1/2.
DiscreteDist half_mixture() { return DiscreteDist({0.0, 1.0}, {0.5, 0.5}); }

double h2_quarter() { return 0.25 * 2.0 + 0.75 * std::log2(4.0 / 3.0); }

}  // namespace

TEST_CASE("alpha follows the binding-probability formula") {
  ReceptorParams p = unit_params(1, 0.5);
  CHECK(alpha(0.0, p) == 0.0);
  CHECK(alpha(1.0, p) == doctest::Approx(0.5).epsilon(1e-15));
  p.k_plus = 2.0;
  CHECK(alpha(3.0, p) == doctest::Approx(6.0 / 7.0).epsilon(1e-15));
  CHECK_THROWS_AS(alpha(-1e-9, p), DomainError);
  CHECK_THROWS_AS(alpha(10.0 + 1e-9, p), DomainError);

  double prev = -1.0;
  for (int i = 0; i <= 100; ++i) {
    const double a = alpha(0.1 * i, p);
    CHECK(a > prev);
    CHECK(a < 1.0);
    prev = a;
  }
}

TEST_CASE("FullState encodes and decodes") {
  RandomStream rng(7, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(20));
    const std::uint64_t bits = rng.next_u64() & ((std::uint64_t{1} << n) - 1);
    const FullState s(bits, n);
    const auto states = s.decode();
    CHECK(FullState::encode(states) == s);
  }
  CHECK_THROWS(FullState(4, 2));
}

TEST_CASE("full_transition_prob multiplies per-receptor factors") {
  const ReceptorParams p = unit_params(2, 0.25);
  // receptor 0 is bit 0: y0 = (U, B), y1 = (B, B)
  CHECK(full_transition_prob(FullState(0b10, 2), FullState(0b11, 2), 1.0, p) ==
        doctest::Approx(0.375).epsilon(1e-15));

  for (int n = 1; n <= 5; ++n) {
    const double a = 0.3;
    CHECK(full_transition_prob_alpha(FullState(0, n), FullState(0, n), a, 0.4) ==
          doctest::Approx(std::pow(1.0 - a, n)).epsilon(1e-15));
  }
  CHECK(full_transition_prob_alpha(FullState(0b11, 2), FullState(0b00, 2), 0.7, 0.3) ==
        doctest::Approx(0.09).epsilon(1e-15));
}

TEST_CASE("lumped kernel matches hand-computed and brute-force chains") {
  SUBCASE("N=1 symmetric chain") {
    const auto k = lumped_kernel(DiscreteDist::point_mass(1.0), unit_params(1, 0.5));
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) CHECK(k.matrix(i, j) == doctest::Approx(0.5).epsilon(1e-15));
    }
  }
  SUBCASE("N=2 binomial rows") {
    const auto k = lumped_kernel(DiscreteDist::point_mass(1.0), unit_params(2, 0.5));
    for (int i = 0; i < 3; ++i) {
      CHECK(k.matrix(i, 0) == doctest::Approx(0.25).epsilon(1e-15));
      CHECK(k.matrix(i, 1) == doctest::Approx(0.5).epsilon(1e-15));
      CHECK(k.matrix(i, 2) == doctest::Approx(0.25).epsilon(1e-15));
    }
  }
  SUBCASE("N=2 mixture against the 4-state construction") {
    const ReceptorParams p = unit_params(2, 0.3);
    const DiscreteDist d({0.0, x_for_alpha(0.8)}, {0.5, 0.5});
    const auto k = lumped_kernel(d, p);
    const auto ref = oracle::lumped_full_kernel(oracle::build_full_chain(d, p));
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) CHECK(std::abs(k.matrix(i, j) - ref[i][j]) < 1e-14);
    }
  }
}

TEST_CASE("stationary distribution") {
  SUBCASE("N=1 balance equation") {
    const ReceptorParams p = unit_params(1, 0.2);
    const double a = 0.35;
    const auto pi = stationary_distribution(lumped_kernel(DiscreteDist::point_mass(x_for_alpha(a)), p));
    CHECK(pi.pi_count[0] == doctest::Approx(0.2 / (a + 0.2)).epsilon(1e-13));
    CHECK(pi.pi_count[1] == doctest::Approx(a / (a + 0.2)).epsilon(1e-13));
    CHECK(pi.residual <= 1e-10);
  }
  SUBCASE("alpha equal to beta gives one half") {
    const auto pi = stationary_distribution(lumped_kernel(DiscreteDist::point_mass(1.0), unit_params(1, 0.5)));
    CHECK(pi.pi_count[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(pi.pi_count[1] == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("N=3 extended mixture against power iteration") {
    const ReceptorParams p = unit_params(3, 0.3);
    const DiscreteDist d({0.0, x_for_alpha(0.8)}, {0.5, 0.5});
    const auto pi = stationary_distribution(lumped_kernel(d, p));
    const auto ref = oracle::lumped_pi(oracle::build_full_chain(d, p));
    for (int b = 0; b <= 3; ++b) CHECK(std::abs(pi.pi_count[b] - ref[b]) < 1e-10);
  }
  SUBCASE("all mass at zero is reducible") {
    const ReceptorParams p = unit_params(2, 0.3);
    CHECK_THROWS_AS(stationary_distribution(lumped_kernel(DiscreteDist::point_mass(0.0), p)),
                    DegenerateInputError);
    CHECK_THROWS_AS(entropy_output_given_past(DiscreteDist::point_mass(0.0), p), DegenerateInputError);
    CHECK(iid_rate(DiscreteDist::point_mass(0.0), p) == 0.0);
  }
}

TEST_CASE("conditional entropies and the iid rate on the N=1 mixture") {
  const ReceptorParams p = unit_params(1, 0.5);
  const DiscreteDist d = half_mixture();
  // E[α] = 1/4 so π(B) = (1/4) / (1/4 + 1/2) = 1/3.
  const double h_past = (2.0 / 3.0) * h2_quarter() + (1.0 / 3.0) * 1.0;
  const double h_input = (1.0 / 3.0) * 1.0 + (2.0 / 3.0) * 0.5;
  CHECK(entropy_output_given_past(d, p) == doctest::Approx(h_past).epsilon(1e-13));
  CHECK(entropy_output_given_input_and_past(d, p) == doctest::Approx(h_input).epsilon(1e-13));
  CHECK(std::abs(entropy_output_given_past(d, p) - 0.874185) < 1e-6);
  CHECK(std::abs(h_input - 2.0 / 3.0) < 1e-15);
  CHECK(std::abs(iid_rate(d, p) - 0.207519) < 1e-6);

  SUBCASE("point mass") {
    const DiscreteDist pm = DiscreteDist::point_mass(1.0);
    CHECK(entropy_output_given_past(pm, p) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(entropy_output_given_input_and_past(pm, p) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(iid_rate(pm, p) == 0.0);
  }
}

TEST_CASE("boundary configuration {0, M} approaches half a bit as alpha(M) -> 1") {
  // Two-state balance: π(B) = a/(1+a) with a = α(M), so the rate is
  // (H₂(a/2) − H₂(a)/2) / (1 + a), which tends to 1/2 as a → 1.
  ReceptorParams p = unit_params(1, 0.5, 1.0);
  const DiscreteDist d({0.0, 1.0}, {0.5, 0.5});
  for (double a_max : {0.3, 0.9, 1.0 - 1e-4, 1.0 - 1e-8}) {
    p.k_plus = a_max / (1.0 - a_max);
    const double a = alpha(1.0, p);
    const double expected = (binary_entropy(a / 2.0) - binary_entropy(a) / 2.0) / (1.0 + a);
    CHECK(iid_rate(d, p) == doctest::Approx(expected).epsilon(1e-12));
  }
  p.k_plus = 1e12;
  CHECK(std::abs(iid_rate(d, p) - 0.5) < 1e-9);
}

TEST_CASE("any point mass has equal entropy terms") {
  RandomStream rng(11, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const ReceptorParams p = testing::random_params(rng, 1 + static_cast<int>(rng.below(6)));
    const DiscreteDist d = DiscreteDist::point_mass(p.m_max * (0.01 + 0.99 * rng.uniform()));
    CHECK(std::abs(entropy_output_given_past(d, p) - entropy_output_given_input_and_past(d, p)) < 1e-12);
  }
}

TEST_CASE("kernel rows are stochastic") {
  RandomStream rng(12, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const ReceptorParams p = testing::random_params(rng, 1 + static_cast<int>(rng.below(12)));
    const DiscreteDist d = testing::random_dist(rng, 1 + static_cast<int>(rng.below(8)), p.m_max);
    const auto k = lumped_kernel(d, p);
    CHECK(k.max_row_defect() <= 1e-12);
    CHECK(k.matrix.minCoeff() >= 0.0);
    CHECK(k.matrix.maxCoeff() <= 1.0);
  }
}

TEST_CASE("lumped quantities equal the full-state brute force") {
  RandomStream rng(13, 0);
  for (int trial = 0; trial < 60; ++trial) {
    const ReceptorParams p = testing::random_params(rng, 1 + static_cast<int>(rng.below(4)));
    const DiscreteDist d = testing::random_dist(rng, 1 + static_cast<int>(rng.below(6)), p.m_max);
    const auto full = oracle::build_full_chain(d, p);
    const auto pi = stationary_distribution(lumped_kernel(d, p));
    const auto pi_ref = oracle::lumped_pi(full);
    for (int b = 0; b <= p.n_receptors; ++b) CHECK(std::abs(pi.pi_count[b] - pi_ref[b]) < 1e-9);
    const double hp = oracle::h_output_given_past(full);
    const double hi = oracle::h_output_given_input_and_past(full, d, p);
    CHECK(std::abs(entropy_output_given_past(d, p) - hp) < 1e-9);
    CHECK(std::abs(entropy_output_given_input_and_past(d, p) - hi) < 1e-9);
    if (!d.is_point_mass()) CHECK(std::abs(iid_rate(d, p) - (hp - hi)) < 1e-9);
  }
}

TEST_CASE("equal moment vectors give equal kernels") {
  RandomStream rng(14, 0);
  for (int trial = 0; trial < 40; ++trial) {
    const ReceptorParams p = testing::random_params(rng, 1 + static_cast<int>(rng.below(5)));
    const DiscreteDist d = testing::random_dist(rng, p.n_receptors + 4, p.m_max);
    const auto funcs = moment_functions(p, p.n_receptors, false);
    const DiscreteDist twin = reduce_support(d, funcs);
    REQUIRE(twin.size() <= static_cast<std::size_t>(p.n_receptors + 1));
    const auto k1 = lumped_kernel(d, p), k2 = lumped_kernel(twin, p);
    CHECK((k1.matrix - k2.matrix).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(std::abs(entropy_output_given_past(d, p) - entropy_output_given_past(twin, p)) <= 1e-10);
  }
}

TEST_CASE("iid rate is nonnegative") {
  RandomStream rng(15, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const ReceptorParams p = testing::random_params(rng, 1 + static_cast<int>(rng.below(8)));
    const DiscreteDist d = testing::random_dist(rng, 1 + static_cast<int>(rng.below(6)), p.m_max);
    const double r = iid_rate(d, p);
    CHECK(r >= -1e-12);
    if (d.is_point_mass()) CHECK(std::abs(r) <= 1e-12);
  }
}

TEST_CASE("iterating the kernel converges to the stationary law") {
  RandomStream rng(16, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const ReceptorParams p = testing::random_params(rng, 1 + static_cast<int>(rng.below(6)));
    const DiscreteDist d = testing::random_dist(rng, 1 + static_cast<int>(rng.below(4)), p.m_max);
    const auto k = lumped_kernel(d, p);
    const auto pi = stationary_distribution(k);
    CHECK(pi.residual <= 1e-10);
    const int s = p.n_receptors + 1;
    Eigen::RowVectorXd target(s), q = Eigen::RowVectorXd::Zero(s);
    for (int b = 0; b < s; ++b) target(b) = pi.pi_count[b];
    q(static_cast<int>(rng.below(s))) = 1.0;
    double prev = (q - target).cwiseAbs().maxCoeff();
    bool monotone_after_burn_in = true;
    for (int it = 1; it <= 10000; ++it) {
      q = q * k.matrix;
      const double dist_now = (q - target).cwiseAbs().maxCoeff();
      if (it > 100 && dist_now > prev + 1e-15) monotone_after_burn_in = false;
      prev = dist_now;
    }
    CHECK(monotone_after_burn_in);
    CHECK(prev <= 1e-8);
  }
}

TEST_CASE("finite-horizon rate from non-stationary starts") {
  const ReceptorParams p = unit_params(3, 0.4);
  const DiscreteDist d({0.0, 0.7, 3.0}, {0.3, 0.3, 0.4});
  const double stationary_rate = iid_rate(d, p);
  const auto pi = stationary_distribution(lumped_kernel(d, p));
  CHECK(finite_horizon_rate(d, p, 1, pi.pi_count) == doctest::Approx(stationary_rate).epsilon(1e-12));
  CHECK(finite_horizon_rate(d, p, 50, pi.pi_count) == doctest::Approx(stationary_rate).epsilon(1e-12));

  const std::vector<double> unbound{1.0, 0.0, 0.0, 0.0};
  const double gap100 = std::abs(finite_horizon_rate(d, p, 100, unbound) - stationary_rate);
  const double gap1000 = std::abs(finite_horizon_rate(d, p, 1000, unbound) - stationary_rate);
  CHECK(gap1000 < gap100);
  CHECK(gap1000 * 1000 == doctest::Approx(gap100 * 100).epsilon(1e-3));
}
