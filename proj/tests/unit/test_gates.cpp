#include "dusff/gates.hpp"

#include "doctest.h"
#include "dusff/algebra.hpp"

using namespace dusff;

TEST_CASE("build_dual_gate") {
  SUBCASE("trivial parameters give SWAP") {
    const Matrix g = build_dual_gate(DualGateParams::plain(0.0, 2), 2);
    CHECK(max_abs(g - swap_gate(2)) < 1e-15);
  }
  SUBCASE("J = pi/4 with trivial dressings is unitary and dual-unitary") {
    const Matrix g = build_dual_gate(DualGateParams::plain(M_PI / 4, 2), 2);
    const auto c = check_dual_unitary(g, 1e-10);
    CHECK(c.ok);
    CHECK(c.unitarity_residual < 1e-12);
    CHECK(c.dual_residual < 1e-12);
  }
  SUBCASE("random dressed gates stay dual-unitary") {
    RngStream rng(42, 0);
    for (int trial = 0; trial < 100; ++trial) {
      DualGateParams p;
      p.u1 = haar_unitary(2, rng);
      p.u2 = haar_unitary(2, rng);
      p.u3 = haar_unitary(2, rng);
      p.u4 = haar_unitary(2, rng);
      p.coupling = rng.uniform(0.0, M_PI);
      CHECK(check_dual_unitary(build_dual_gate(p, 2), 1e-10).ok);
    }
    // the family also produces dual-unitary gates for d > 2
    for (int trial = 0; trial < 10; ++trial) {
      DualGateParams p;
      p.u1 = haar_unitary(3, rng);
      p.u2 = haar_unitary(3, rng);
      p.u3 = haar_unitary(3, rng);
      p.u4 = haar_unitary(3, rng);
      p.coupling = rng.uniform(0.1, M_PI - 0.1);
      CHECK(check_dual_unitary(build_dual_gate(p, 3), 1e-10).ok);
    }
  }
  SUBCASE("non-unitary local factor is rejected") {
    DualGateParams p = DualGateParams::plain(0.3, 2);
    p.u2(0, 0) = 2.0;
    CHECK_THROWS_AS(build_dual_gate(p, 2), std::invalid_argument);
  }
}

TEST_CASE("dual_reshuffle") {
  SUBCASE("reshuffled identity is the stated rank-deficient map, not unitary") {
    const int d = 2;
    const Matrix r = dual_reshuffle(Matrix::Identity(d * d, d * d));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l) {
            const Cplx expect = (i == k && j == l) ? 1.0 : 0.0;
            CHECK(r(j * d + l, i * d + k) == expect);
          }
    CHECK(!is_unitary(r, 1e-10));
    // d |Phi><Phi| structure: r r^dag has rank 1 with norm d^2
    Eigen::JacobiSVD<Matrix> svd(r);
    CHECK(svd.singularValues()(0) == doctest::Approx(2.0));
    CHECK(svd.singularValues()(1) < 1e-14);
  }
  SUBCASE("reshuffled SWAP is unitary") {
    CHECK(is_unitary(dual_reshuffle(swap_gate(2)), 1e-14));
    CHECK(is_unitary(dual_reshuffle(swap_gate(3)), 1e-14));
  }
  SUBCASE("entry permutation: invertible and Frobenius-preserving") {
    RngStream rng(1, 2);
    Matrix o(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) o(i, j) = Cplx(rng.normal(), rng.normal());
    const Matrix r = dual_reshuffle(o);
    CHECK(max_abs(dual_reshuffle_inverse(r) - o) == 0.0);
    CHECK(r.norm() == doctest::Approx(o.norm()).epsilon(1e-14));
  }
  CHECK_THROWS_AS(dual_reshuffle(Matrix::Identity(3, 3)), std::invalid_argument);
}

TEST_CASE("check_dual_unitary on known gates") {
  CHECK(is_dual_unitary(swap_gate(2)));
  CHECK(!is_dual_unitary(Matrix::Identity(4, 4)));
  // controlled-phase times SWAP, the trivial-dressing member at J != 0
  const Matrix g = interaction_core(0.9, 2);
  CHECK(is_dual_unitary(g));
}

TEST_CASE("haar_unitary") {
  RngStream rng(123, 0);
  SUBCASE("unitary to 1e-12") {
    for (int d : {2, 3, 5}) {
      for (int k = 0; k < 5; ++k) {
        CHECK(is_unitary(haar_unitary(d, rng), 1e-12));
      }
    }
  }
  SUBCASE("first moment vanishes") {
    const int n = 10000;
    Matrix mean = Matrix::Zero(2, 2);
    for (int k = 0; k < n; ++k) mean += haar_unitary(2, rng);
    mean /= double(n);
    CHECK(max_abs(mean) < 5.0 / std::sqrt(double(n)));
  }
  SUBCASE("|tr U|^2 averages to 1") {
    const int n = 10000;
    double sum = 0.0, sumsq = 0.0;
    for (int k = 0; k < n; ++k) {
      const double v = std::norm(haar_unitary(2, rng).trace());
      sum += v;
      sumsq += v * v;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sumsq / n - mean * mean) / n);
    CHECK(std::abs(mean - 1.0) < 5.0 * se);
  }
}

TEST_CASE("build_time_reversal_gate") {
  RngStream rng(7, 0);
  SUBCASE("trivial dressings, any J: symmetric and dual-unitary") {
    const Matrix id = Matrix::Identity(2, 2);
    for (double j : {0.0, 0.4, 1.3}) {
      const Matrix g = build_time_reversal_gate(id, id, j, 2);
      CHECK(max_abs(g - g.transpose()) < 1e-12);
      CHECK(is_dual_unitary(g));
    }
  }
  SUBCASE("random dressings stay symmetric") {
    for (int k = 0; k < 20; ++k) {
      const Matrix g = build_time_reversal_gate(haar_unitary(2, rng),
                                                haar_unitary(2, rng),
                                                rng.uniform(0, M_PI), 2);
      CHECK(max_abs(g - g.transpose()) < 1e-12);
      CHECK(is_dual_unitary(g));
    }
  }
}
