#include <random>

#include "doctest.h"
#include "momineq/chain.hpp"
#include "momineq/finite_space.hpp"

using namespace momineq;

namespace {

FiniteSpace equal_space(std::size_t n) {
  return FiniteSpace(std::vector<double>(n, 1.0 / n));
}

// Independent oracle for conditional expectation: explicit double loop over
// blocks, no reuse of the implementation.
Rv cond_expect_oracle(const FiniteSpace& s, const Rv& x,
                      const PartitionSigma& g) {
  Rv out(s.size(), 0.0);
  for (const auto& block : g.blocks()) {
    double num = 0.0, den = 0.0;
    for (auto a : block) {
      num += s.weight(a) * x[a];
      den += s.weight(a);
    }
    for (auto a : block) out[a] = den > 0 ? num / den : 0.0;
  }
  return out;
}

PartitionSigma pair_blocks_4() {
  return PartitionSigma(4, {{0, 1}, {2, 3}});
}

}  // namespace

TEST_CASE("space validation") {
  CHECK_THROWS_AS(FiniteSpace({0.5, 0.6}), DomainError);
  CHECK_THROWS_AS(FiniteSpace({1.2, -0.2}), DomainError);
  CHECK_THROWS_AS(FiniteSpace(std::vector<double>{}), ArgumentError);
  CHECK_NOTHROW(FiniteSpace({0.25, 0.25, 0.25, 0.25}));
}

TEST_CASE("cond_expect identity and block average") {
  const FiniteSpace s = equal_space(4);
  const PartitionSigma g = pair_blocks_4();
  SUBCASE("constant rv stays constant") {
    const Rv c(4, 3.25);
    const Rv out = cond_expect(s, c, g);
    for (std::size_t i = 0; i < 4; ++i) CHECK(out[i] == doctest::Approx(3.25));
  }
  SUBCASE("block averages") {
    const Rv x({1.0, 3.0, 2.0, 6.0});
    const Rv out = cond_expect(s, x, g);
    CHECK(out[0] == doctest::Approx(2.0));
    CHECK(out[1] == doctest::Approx(2.0));
    CHECK(out[2] == doctest::Approx(4.0));
    CHECK(out[3] == doctest::Approx(4.0));
  }
  SUBCASE("length mismatch") {
    CHECK_THROWS_AS(cond_expect(s, Rv({1.0, 2.0}), g), DimensionError);
  }
  SUBCASE("zero-mass block gives 0") {
    const FiniteSpace s2({0.5, 0.5, 0.0, 0.0});
    const Rv x({1.0, 2.0, 7.0, 9.0});
    const Rv out = cond_expect(s2, x, pair_blocks_4());
    CHECK(out[2] == 0.0);
    CHECK(out[3] == 0.0);
    CHECK(expect(s2, out) == doctest::Approx(expect(s2, x)));
  }
}

TEST_CASE("tower property on random triples") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> w(8);
    double tot = 0.0;
    for (double& v : w) {
      v = 0.01 + uniform01(rng);
      tot += v;
    }
    for (double& v : w) v /= tot;
    const FiniteSpace s(w);
    // coarse: 2 blocks; fine: 4 blocks refining it.
    const PartitionSigma coarse(8, {{0, 1, 2, 3}, {4, 5, 6, 7}});
    const PartitionSigma fine(8, {{0, 1}, {2, 3}, {4, 5}, {6, 7}});
    Rv x(8, 0.0);
    for (auto& v : x.values) v = -2.0 + 4.0 * uniform01(rng);
    const Rv lhs = cond_expect(s, cond_expect(s, x, fine), coarse);
    const Rv rhs = cond_expect_oracle(s, x, coarse);
    for (std::size_t i = 0; i < 8; ++i)
      CHECK(lhs[i] == doctest::Approx(rhs[i]).epsilon(1e-12));
    // linearity
    Rv y(8, 0.0);
    for (auto& v : y.values) v = -1.0 + 2.0 * uniform01(rng);
    const Rv lin = cond_expect(s, 2.0 * x + (-3.0) * y, fine);
    const Rv lin2 =
        2.0 * cond_expect(s, x, fine) + (-3.0) * cond_expect(s, y, fine);
    for (std::size_t i = 0; i < 8; ++i)
      CHECK(lin[i] == doctest::Approx(lin2[i]).epsilon(1e-12));
    // contraction for a few p
    for (double p : {1.0, 2.0, 3.5, 8.0})
      CHECK(lp_norm(s, cond_expect(s, x, fine), p) <=
            lp_norm(s, x, p) + 1e-12);
  }
}

TEST_CASE("lp_norm basics") {
  const FiniteSpace s = equal_space(2);
  CHECK(lp_norm(s, Rv({1.0, -1.0}), 3.0) == doctest::Approx(1.0));
  CHECK(lp_norm(s, Rv({2.0, 0.0}), 2.0) ==
        doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(lp_norm(s, Rv({1.0, 1.0}), 0.5), DomainError);
  // two-state chain observable at p = 4: by-hand pi-weighted moment
  const FiniteChain chain = eigen_chain();
  Eigen::VectorXd f = chain.f();
  CHECK(chain.pi_lp_norm(f, 4.0) ==
        doctest::Approx(std::pow(6.0, 0.25)).epsilon(1e-12));
}

TEST_CASE("partial sums and running max moment") {
  const FiniteSpace s = equal_space(2);
  const Rv x({1.0, -1.0});
  SUBCASE("single and cancelling") {
    auto one = partial_sum_process(std::vector<Rv>{x});
    CHECK(one.size() == 1);
    auto two = partial_sum_process(std::vector<Rv>{x, -1.0 * x});
    CHECK(two[1][0] == doctest::Approx(0.0));
    CHECK_THROWS_AS(partial_sum_process(std::vector<Rv>{}), ArgumentError);
  }
  SUBCASE("coin n=2 p=4 from enumeration") {
    const UnrolledChain un = coin_chain().unroll(2);
    CHECK(max_abs_partial_sum_moment(un.space, un.xs, 4.0) ==
          doctest::Approx(8.5).epsilon(1e-12));
  }
  SUBCASE("coin n=3 p=2 equals the 8-path oracle") {
    const UnrolledChain un = coin_chain().unroll(3);
    // enumerate the 8 sign paths by hand
    double acc = 0.0;
    for (int mask = 0; mask < 8; ++mask) {
      double run = 0.0, peak = 0.0;
      for (int t = 0; t < 3; ++t) {
        run += (mask >> t) & 1 ? 1.0 : -1.0;
        peak = std::max(peak, std::fabs(run));
      }
      acc += peak * peak / 8.0;
    }
    CHECK(max_abs_partial_sum_moment(un.space, un.xs, 2.0) ==
          doctest::Approx(acc).epsilon(1e-12));
    // max moment dominates the endpoint moment
    const auto sums = partial_sum_process(un.xs);
    CHECK(max_abs_partial_sum_moment(un.space, un.xs, 2.0) + 1e-15 >=
          std::pow(lp_norm(un.space, sums.back(), 2.0), 2.0));
  }
}

TEST_CASE("filtration checks") {
  const PartitionSigma trivial(4, {{0, 1, 2, 3}});
  const PartitionSigma atoms(4, {{0}, {1}, {2}, {3}});
  SUBCASE("single sigma") {
    Filtration f{{trivial}, FiltrationDirection::nondecreasing};
    CHECK(check_filtration(f));
  }
  SUBCASE("trivial then atoms is nondecreasing") {
    Filtration f{{trivial, atoms}, FiltrationDirection::nondecreasing};
    CHECK(check_filtration(f));
  }
  SUBCASE("atoms then trivial fails nondecreasing") {
    Filtration f{{atoms, trivial}, FiltrationDirection::nondecreasing};
    CHECK_FALSE(check_filtration(f));
    f.direction = FiltrationDirection::nonincreasing;
    CHECK(check_filtration(f));
  }
}

TEST_CASE("Doob inequality holds exactly for MDS inputs") {
  // iid centered coin is a martingale difference sequence.
  for (int n : {2, 3, 5, 8}) {
    const UnrolledChain un = coin_chain().unroll(n);
    for (double p : {2.0, 3.0, 4.0}) {
      // verify the MDS property against the filtration
      const auto sums = partial_sum_process(un.xs);
      for (int k = 1; k < n; ++k) {
        const Rv ce = cond_expect(un.space, un.xs[k], un.filtration.sigmas[k]);
        for (double v : ce.values) CHECK(std::fabs(v) < 1e-12);
      }
      const double q = p / (p - 1.0);
      const double lhs =
          std::pow(max_abs_partial_sum_moment(un.space, un.xs, p), 1.0 / p);
      const double rhs = q * lp_norm(un.space, sums.back(), p);
      CHECK(lhs <= rhs + 1e-9 * rhs);
    }
  }
}

TEST_CASE("atom cap enforced") {
  CHECK_THROWS_AS(coin_chain().unroll(25), SizeError);
}
