#include <random>

#include "doctest.h"
#include "momineq/chain.hpp"
#include "momineq/max_moment.hpp"

using namespace momineq;

TEST_CASE("chain validation and named models") {
  const FiniteChain ec = eigen_chain();
  CHECK(ec.pi()(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(ec.pi()(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(ec.reversible());
  CHECK(coin_chain().reversible());

  Eigen::MatrixXd bad(2, 2);
  bad << 0.9, 0.2, 0.2, 0.8;
  Eigen::VectorXd f(2);
  f << 1.0, -1.0;
  CHECK_THROWS_AS(FiniteChain(bad, f), DomainError);

  Eigen::MatrixXd ok(2, 2);
  ok << 0.5, 0.5, 0.5, 0.5;
  Eigen::VectorXd notcentered(2);
  notcentered << 1.0, 0.5;
  CHECK_THROWS_AS(FiniteChain(ok, notcentered), DomainError);
}

TEST_CASE("apply_q powers") {
  const FiniteChain ec = eigen_chain();
  Eigen::VectorXd g(2);
  g << 0.3, -0.7;
  SUBCASE("k = 0 is identity") {
    const Eigen::VectorXd out = ec.apply_q(g, 0);
    CHECK(out(0) == 0.3);
    CHECK(out(1) == -0.7);
  }
  SUBCASE("swap chain squares to identity") {
    const FiniteChain sw = swap_chain();
    Eigen::VectorXd v(2);
    v << 1.0, -1.0;
    const Eigen::VectorXd out = sw.apply_q(v, 2);
    CHECK(out(0) == doctest::Approx(1.0));
    CHECK(out(1) == doctest::Approx(-1.0));
  }
  SUBCASE("observable is an eigenvector with value 0.7") {
    const Eigen::VectorXd out = ec.apply_q(ec.f(), 1);
    CHECK(out(0) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(out(1) == doctest::Approx(-1.4).epsilon(1e-12));
  }
  SUBCASE("semigroup property") {
    std::mt19937_64 rng(3);
    const FiniteChain rc = random_chain(rng, 4);
    Eigen::VectorXd v(4);
    v << 0.4, -1.0, 2.0, 0.1;
    const Eigen::VectorXd a = rc.apply_q(v, 5);
    const Eigen::VectorXd b = rc.apply_q(rc.apply_q(v, 2), 3);
    for (int i = 0; i < 4; ++i) CHECK(a(i) == doctest::Approx(b(i)));
  }
}

TEST_CASE("cond_sum and cond_sum_square") {
  const FiniteChain ec = eigen_chain();
  SUBCASE("iid chain has zero conditional sums") {
    const FiniteChain c = coin_chain();
    const Eigen::VectorXd cs = c.cond_sum(5);
    CHECK(std::fabs(cs(0)) < 1e-14);
    CHECK(std::fabs(cs(1)) < 1e-14);
    // cond_sum_square is the constant k E f^2 = k
    const Eigen::VectorXd v = c.cond_sum_square(5);
    CHECK(v(0) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(v(1) == doctest::Approx(5.0).epsilon(1e-12));
  }
  SUBCASE("geometric sum on the eigen chain") {
    const Eigen::VectorXd c2 = ec.cond_sum(2);
    CHECK(c2(0) == doctest::Approx(1.19).epsilon(1e-12));
    CHECK(c2(1) == doctest::Approx(-2.38).epsilon(1e-12));
    const Eigen::VectorXd c1 = ec.cond_sum(1);
    CHECK(c1(0) == doctest::Approx(0.7).epsilon(1e-12));
  }
  SUBCASE("k = 1 squares") {
    const Eigen::VectorXd v = ec.cond_sum_square(1);
    const Eigen::VectorXd f2 = ec.f().cwiseProduct(ec.f());
    const Eigen::VectorXd expect = ec.Q() * f2;
    CHECK(v(0) == doctest::Approx(expect(0)));
    CHECK(v(1) == doctest::Approx(expect(1)));
  }
  SUBCASE("k = 2 squares against brute-force path sum") {
    // E(S_2^2 | s0) = sum over 2-step paths of Q products
    const Eigen::MatrixXd& Q = ec.Q();
    for (int s0 = 0; s0 < 2; ++s0) {
      double acc = 0.0;
      for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2) {
          const double s = ec.f()(s1) + ec.f()(s2);
          acc += Q(s0, s1) * Q(s1, s2) * s * s;
        }
      CHECK(ec.cond_sum_square(2)(s0) == doctest::Approx(acc).epsilon(1e-12));
    }
  }
  SUBCASE("matches the explicit kernel-power formula") {
    // sum_i Q^i f^2 + 2 sum_{i<j} Q^i (f .* Q^{j-i} f), k = 3
    const Eigen::VectorXd f2 = ec.f().cwiseProduct(ec.f());
    Eigen::VectorXd direct = Eigen::VectorXd::Zero(2);
    for (int i = 1; i <= 3; ++i) direct += ec.apply_q(f2, i);
    for (int i = 1; i < 3; ++i)
      for (int j = i + 1; j <= 3; ++j)
        direct += 2.0 * ec.apply_q(
                            ec.f().cwiseProduct(ec.apply_q(ec.f(), j - i)), i);
    const Eigen::VectorXd rec = ec.cond_sum_square(3);
    CHECK(rec(0) == doctest::Approx(direct(0)).epsilon(1e-12));
    CHECK(rec(1) == doctest::Approx(direct(1)).epsilon(1e-12));
  }
}

TEST_CASE("reversed kernel conditioning") {
  SUBCASE("symmetric two-state chain reverses to itself, zero sums") {
    Eigen::MatrixXd Q(2, 2);
    Q << 0.5, 0.5, 0.5, 0.5;
    Eigen::VectorXd f(2);
    f << 1.0, -1.0;
    const FiniteChain c(Q, f, "sym");
    const Eigen::VectorXd r = c.reversed_cond(FiniteChain::CondQuantity::sum, 3);
    CHECK(std::fabs(r(0)) < 1e-14);
    CHECK(std::fabs(r(1)) < 1e-14);
  }
  SUBCASE("one-step reversal is Q* f") {
    const FiniteChain ec = eigen_chain();
    const FiniteChain rev = ec.reversed();
    const Eigen::VectorXd direct = rev.apply_q(ec.f(), 1);
    const Eigen::VectorXd viaop =
        ec.reversed_cond(FiniteChain::CondQuantity::sum, 1);
    CHECK(viaop(0) == doctest::Approx(direct(0)));
    CHECK(viaop(1) == doctest::Approx(direct(1)));
  }
  SUBCASE("Bayes inversion over two-step paths") {
    const FiniteChain ec = eigen_chain();
    // E(S_2 | state_3 = x) by brute force over trajectories of length 3.
    const Eigen::MatrixXd& Q = ec.Q();
    for (int x = 0; x < 2; ++x) {
      double num = 0.0, den = 0.0;
      for (int s0 = 0; s0 < 2; ++s0)
        for (int s1 = 0; s1 < 2; ++s1)
          for (int s2 = 0; s2 < 2; ++s2) {
            const double w =
                ec.pi()(s0) * Q(s0, s1) * Q(s1, s2) * Q(s2, x);
            num += w * (ec.f()(s1) + ec.f()(s2));
            den += w;
          }
      const Eigen::VectorXd r =
          ec.reversed_cond(FiniteChain::CondQuantity::sum, 2);
      CHECK(r(x) == doctest::Approx(num / den).epsilon(1e-10));
    }
    // reversible chain: Q* equals Q entrywise
    const FiniteChain rev = ec.reversed();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        CHECK(rev.Q()(i, j) == doctest::Approx(ec.Q()(i, j)).epsilon(1e-12));
  }
  SUBCASE("zero-mass state is rejected") {
    Eigen::MatrixXd Q(2, 2);
    Q << 1.0, 0.0, 1.0, 0.0;
    Eigen::VectorXd pi(2), f(2);
    pi << 1.0, 0.0;
    f << 0.0, 1.0;
    const FiniteChain c(Q, pi, f, "absorbing");
    CHECK_THROWS_AS(c.reversed(), DomainError);
  }
}

TEST_CASE("unroll bridges to the exact engine") {
  const FiniteChain ec = eigen_chain();
  SUBCASE("n=1 weights are pi(i) Q(i,j)") {
    const UnrolledChain un = ec.unroll(1);
    REQUIRE(un.space.size() == 4);
    int a = 0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j, ++a)
        CHECK(un.space.weight(a) ==
              doctest::Approx(ec.pi()(i) * ec.Q()(i, j)).epsilon(1e-12));
    CHECK(check_filtration(un.filtration));
  }
  SUBCASE("conditional sums agree with kernel powers") {
    const int n = 6;
    const UnrolledChain un = ec.unroll(n);
    const auto sums = partial_sum_process(un.xs);
    for (int k = 1; k <= n; ++k) {
      const Rv ce = cond_expect(un.space, sums[k - 1], un.filtration.sigmas[0]);
      for (double p : {3.0, 4.0}) {
        const double via_space = lp_norm(un.space, ce, p);
        const double via_chain = ec.pi_lp_norm(ec.cond_sum(k), p);
        CHECK(via_space == doctest::Approx(via_chain).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("sampling reproducibility and stationarity") {
  const FiniteChain ec = eigen_chain();
  SUBCASE("same seed, same path") {
    auto r1 = path_rng(42, 3), r2 = path_rng(42, 3);
    std::vector<double> a(32), b(32);
    ec.sample_path(r1, 32, a.data());
    ec.sample_path(r2, 32, b.data());
    CHECK(a == b);
  }
  SUBCASE("empirical mean near zero") {
    auto rng = path_rng(1234, 0);
    const int N = 20000;
    double acc = 0.0;
    std::vector<double> x(1);
    for (int i = 0; i < N; ++i) {
      ec.sample_path(rng, 1, x.data());
      acc += x[0];
    }
    const double mean = acc / N;
    const double se = std::sqrt(2.0 / N);  // E f^2 = 2
    CHECK(std::fabs(mean) < 3.0 * se);
  }
}

TEST_CASE("mds and coboundary builders") {
  const FiniteChain ec = eigen_chain();
  SUBCASE("pair MDS has vanishing conditional sums") {
    const FiniteChain mds = mds_pair_chain(ec);
    const Eigen::VectorXd cs = mds.cond_sum(4);
    for (int i = 0; i < cs.size(); ++i) CHECK(std::fabs(cs(i)) < 1e-12);
  }
  SUBCASE("sign MDS is conditionally symmetric and centered") {
    const FiniteChain smds = sign_randomized_mds_chain(ec);
    const Eigen::VectorXd cs = smds.cond_sum(3);
    for (int i = 0; i < cs.size(); ++i) CHECK(std::fabs(cs(i)) < 1e-12);
  }
  SUBCASE("coboundary partial sums stay bounded") {
    Eigen::VectorXd g(2);
    g << 1.0, -1.0;
    const FiniteChain cb = coboundary_chain(ec, g);
    const UnrolledChain un = cb.unroll(8);
    const auto sums = partial_sum_process(un.xs);
    double peak = 0.0;
    for (const Rv& s : sums)
      for (double v : s.values) peak = std::max(peak, std::fabs(v));
    CHECK(peak <= 2.0 + 1e-12);  // g spread
  }
}

TEST_CASE("lattice detection") {
  Eigen::VectorXd f(3);
  f << 0.25, -0.5, 0.25;
  auto res = detect_lattice(f);
  REQUIRE(res.has_value());
  CHECK(*res == doctest::Approx(0.25));
  Eigen::VectorXd bad(2);
  bad << 1.0, M_PI;
  CHECK_FALSE(detect_lattice(bad).has_value());
}

TEST_CASE("max moment methods agree") {
  SUBCASE("n = 1 is the plain moment") {
    const FiniteChain ec = eigen_chain();
    const double direct = ec.pi_expect(
        ec.f().cwiseAbs().array().pow(3.0).matrix());
    const MaxMomentResult r = max_moment(ec, 3.0, 1, MaxMethod::enumerate);
    CHECK(r.value == doctest::Approx(direct).epsilon(1e-12));
  }
  SUBCASE("coin n=2 p=4 gives 8.5 via both exact methods") {
    const FiniteChain c = coin_chain();
    CHECK(max_moment(c, 4.0, 2, MaxMethod::enumerate).value ==
          doctest::Approx(8.5));
    CHECK(max_moment(c, 4.0, 2, MaxMethod::exact_dp).value ==
          doctest::Approx(8.5));
  }
  SUBCASE("dp equals enumerate on random lattice chains") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 10; ++rep) {
      const FiniteChain rc = random_lattice_chain(rng, 3);
      for (int n : {4, 7}) {
        const double a = max_moment(rc, 3.0, n, MaxMethod::enumerate).value;
        const double b = max_moment(rc, 3.0, n, MaxMethod::exact_dp).value;
        CHECK(a == doctest::Approx(b).epsilon(1e-9));
      }
    }
  }
  SUBCASE("mc agrees with enumerate on the coin at n = 10") {
    const FiniteChain c = coin_chain();
    const double exact = max_moment(c, 4.0, 10, MaxMethod::enumerate).value;
    MaxMomentOptions opts;
    opts.mc_paths = 40000;
    const MaxMomentResult mc = max_moment(c, 4.0, 10, MaxMethod::mc, opts);
    CHECK(std::fabs(mc.value - exact) <= 3.0 * mc.se);
  }
  SUBCASE("non-lattice observable rejects exact_dp") {
    Eigen::MatrixXd Q(2, 2);
    Q << 0.5, 0.5, 0.5, 0.5;
    Eigen::VectorXd f(2);
    f << M_PI, -M_PI;
    const FiniteChain c(Q, f, "pi_coin");
    CHECK_THROWS_AS(max_moment(c, 3.0, 4, MaxMethod::exact_dp), MethodError);
  }
}
