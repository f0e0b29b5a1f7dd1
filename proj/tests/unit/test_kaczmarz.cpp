#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "altproj/errors.hpp"
#include "altproj/kaczmarz.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace altproj;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Index>(v.size()));
  Index i = 0;
  for (double e : v) x(i++) = e;
  return x;
}

}  // namespace

TEST(HyperplaneProject, Examples) {
  EXPECT_TRUE(hyperplane_project({vec({1, 0}), 2.0}, vec({0, 0})).isApprox(vec({2, 0})));
  const Vector on = vec({0.5, 1.5});
  EXPECT_EQ(hyperplane_project({vec({1, 1}), 2.0}, on), on);
  const Vector p = hyperplane_project({vec({1, 1}), 0.0}, vec({1, 0}));
  EXPECT_NEAR(p(0), 0.5, 1e-15);
  EXPECT_NEAR(p(1), -0.5, 1e-15);
}

TEST(HyperplaneProject, ZeroNormalThrows) {
  EXPECT_THROW(hyperplane_project({vec({0, 0}), 1.0}, vec({1, 1})), DomainError);
  EXPECT_THROW(LinearSystem(2, {{vec({0, 0}), 1.0}}), DomainError);
}

TEST(HyperplaneProject, Properties) {
  testgen::SplitMix64 g(151);
  for (int trial = 0; trial < 500; ++trial) {
    const Index n = g.integer(1, 10);
    const Hyperplane h{g.vector(n), g.normal() * 5.0};
    const Vector z = g.vector(n) * 3.0;
    const Vector p = hyperplane_project(h, z);
    EXPECT_NEAR(p.dot(h.normal), h.offset, 1e-10 * (1.0 + std::abs(h.offset)));
    EXPECT_LT((hyperplane_project(h, p) - p).norm(), 1e-12 * (1.0 + p.norm()));
    // z - p is parallel to the normal.
    const Vector d = z - p;
    EXPECT_LT((d - h.normal * (d.dot(h.normal) / h.normal.squaredNorm())).norm(), 1e-12 * (1.0 + d.norm()));
  }
}

TEST(Solve, OrthogonalRowsNeedOneSweep) {
  const LinearSystem sys(2, {{vec({1, 0}), 2.0}, {vec({0, 1}), 3.0}});
  const KaczmarzResult r = solve(sys, Vector::Zero(2), 100, 1e-12);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.sweeps, 1u);
  EXPECT_TRUE(r.solution.isApprox(vec({2, 3})));
}

TEST(Solve, StartingAtSolution) {
  const LinearSystem sys(2, {{vec({1, 1}), 2.0}, {vec({1, -1}), 0.0}});
  const KaczmarzResult r = solve(sys, vec({1, 1}), 100, 1e-12);
  EXPECT_TRUE(r.converged);
  ASSERT_FALSE(r.residual_history.empty());
  EXPECT_LE(r.residual_history.front(), 1e-12);
  EXPECT_EQ(r.solution, vec({1, 1}));
}

TEST(Solve, SparseRowsAreStoredSparse) {
  std::vector<Hyperplane> rows;
  Vector y = Vector::Zero(20);
  y(3) = 1.0;
  rows.push_back({y, 1.0});
  rows.push_back({Vector::Ones(20), 1.0});
  const LinearSystem sys(20, rows);
  EXPECT_TRUE(sys.row_is_sparse(0));
  EXPECT_FALSE(sys.row_is_sparse(1));
  EXPECT_EQ(sys.row(0).normal, y);
}

TEST(Solve, MinimalNormMatchesPseudoinverse) {
  Rng rng(7);
  const RandomSystem rs = random_consistent_system(rng, 20, 30, 0.2);
  const KaczmarzResult r = solve(rs.system, Vector::Zero(30), 100000, 1e-13);
  EXPECT_TRUE(r.converged);
  const Vector want = oracle::pinv_solve(rs.system.matrix(), rs.system.rhs());
  EXPECT_LT((r.solution - want).norm(), 1e-6);
  for (std::size_t k = 0; k + 1 < r.residual_history.size(); ++k) {
    EXPECT_LE(r.residual_history[k + 1], r.residual_history[k]);
  }
}

TEST(Solve, InconsistentSystemIsFlagged) {
  Rng rng(9);
  const RandomSystem rs = random_consistent_system(rng, 8, 4, 1.0);
  Vector c = rs.system.rhs();
  c(0) += 1.0;
  const LinearSystem bad = LinearSystem::from_matrix(rs.system.matrix(), c);
  const KaczmarzResult r = solve(bad, Vector::Zero(4), 5000, 1e-12);
  EXPECT_FALSE(r.converged);
  EXPECT_TRUE(r.suspected_inconsistent);
}

TEST(KaczmarzProperties, FejerMonotoneAndMinimalNorm) {
  testgen::SplitMix64 g(157);
  for (int trial = 0; trial < 30; ++trial) {
    const Index rows = g.integer(2, 12);
    const Index cols = g.integer(rows, 16);
    const Matrix a = g.matrix(rows, cols);
    const Vector xstar = g.vector(cols);
    const LinearSystem sys = LinearSystem::from_matrix(a, a * xstar);
    Vector x = g.vector(cols);
    double dist = (x - xstar).norm();
    for (int sweep = 0; sweep < 20; ++sweep) {
      for (std::size_t i = 0; i < sys.rows(); ++i) sys.project_row(i, x);
      const double next = (x - xstar).norm();
      EXPECT_LE(next, dist + 1e-12);
      dist = next;
    }
    const KaczmarzResult r = solve(sys, Vector::Zero(cols), 200000, 1e-12);
    // Orthogonal to the null space of A, i.e. in the row space.
    Eigen::FullPivLU<Matrix> lu(a);
    const Matrix null = lu.kernel();
    if (lu.rank() < cols) {
      EXPECT_LT((null.transpose() * r.solution).norm() / null.norm(), 1e-8) << "trial " << trial;
    }
  }
}

TEST(Thirds, Matrices) {
  const Vector e1 = vec({1, 0, 0});
  EXPECT_EQ(thirds_p1() * e1, e1);
  EXPECT_TRUE((thirds_p2() * e1).isApprox(vec({0.5, 0.5, 0})));
}

TEST(Thirds, ThreeIterationsWithinCentimetre) {
  const ThirdsResult r = thirds_demo(0.5, 0.3, 0.2, 3);
  ASSERT_EQ(r.positions.size(), 4u);
  EXPECT_LT(r.positions[3].left_dev, 0.011);
  EXPECT_TRUE(r.bound_ok);
}

TEST(Thirds, EqualThirdsAreFixed) {
  const ThirdsResult r = thirds_demo(1.0 / 3, 1.0 / 3, 1.0 / 3, 5);
  for (const auto& s : r.positions) {
    EXPECT_LT(s.left_dev, 1e-15);
    EXPECT_LT(s.right_dev, 1e-15);
  }
}

TEST(Thirds, ZeroIterationsEchoInput) {
  const ThirdsResult r = thirds_demo(0.2, 0.3, 0.5, 0);
  ASSERT_EQ(r.positions.size(), 1u);
  EXPECT_EQ(r.positions[0].lengths, vec({0.2, 0.3, 0.5}));
}

TEST(Thirds, RejectsNonPositive) {
  EXPECT_THROW(thirds_demo(0.0, 0.5, 0.5, 3), DomainError);
  EXPECT_THROW(thirds_demo(0.3, -0.1, 0.5, 3), DomainError);
}

TEST(Thirds, LimitWithinTwentySteps) {
  testgen::SplitMix64 g(163);
  for (int trial = 0; trial < 50; ++trial) {
    const double x = 0.01 + g.uniform(), y = 0.01 + g.uniform(), z = 0.01 + g.uniform();
    const ThirdsResult r = thirds_demo(x, y, z, 20);
    const double c = x + y + z;
    EXPECT_TRUE(r.bound_ok);
    EXPECT_NEAR(r.positions.back().left, c / 3, 1e-10);
    EXPECT_NEAR(r.positions.back().right, 2 * c / 3, 1e-10);
  }
}
