#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "isork/errors.hpp"
#include "isork/tableaus.hpp"

namespace isork {
namespace {

// Lagrange basis polynomial l_i at x for nodes c.
double lagrange(const Eigen::VectorXd& c, int i, double x) {
  double v = 1.0;
  for (int k = 0; k < c.size(); ++k)
    if (k != i) v *= (x - c(k)) / (c(i) - c(k));
  return v;
}

// Composite Simpson on [0, upper]; the basis has degree <= 2 and Simpson is
// exact up to degree 3, so a single panel already gives the exact integral.
double simpson(const Eigen::VectorXd& c, int i, double upper) {
  return upper / 6.0 * (lagrange(c, i, 0.0) + 4.0 * lagrange(c, i, upper / 2.0) + lagrange(c, i, upper));
}

TEST(GaussTableau, Examples) {
  const auto t1 = gauss_tableau(1);
  EXPECT_EQ(t1.a(0, 0), 0.5);
  EXPECT_EQ(t1.b(0), 1.0);
  EXPECT_EQ(t1.c(0), 0.5);

  const auto t2 = gauss_tableau(2);
  EXPECT_NEAR(t2.c(0), 0.5 - std::sqrt(3.0) / 6.0, 1e-15);
  EXPECT_NEAR(t2.c(1), 0.5 + std::sqrt(3.0) / 6.0, 1e-15);
  EXPECT_NEAR(t2.a(0, 0), 0.25, 1e-15);
  EXPECT_NEAR(t2.a(0, 1), 0.25 - std::sqrt(3.0) / 6.0, 1e-15);
  EXPECT_NEAR(t2.b(0), 0.5, 1e-15);

  const auto t3 = gauss_tableau(3);
  EXPECT_NEAR(t3.b(0), 5.0 / 18.0, 1e-15);
  EXPECT_NEAR(t3.b(1), 4.0 / 9.0, 1e-15);
  EXPECT_NEAR(t3.b(2), 5.0 / 18.0, 1e-15);
  EXPECT_NEAR(t3.c(0), 0.5 - std::sqrt(15.0) / 10.0, 1e-15);
  EXPECT_NEAR(t3.a(1, 1), 2.0 / 9.0, 1e-15);
}

TEST(GaussTableau, UnsupportedStageCountThrows) {
  EXPECT_THROW(gauss_tableau(0), InvalidArgument);
  EXPECT_THROW(gauss_tableau(4), InvalidArgument);
}

TEST(GaussTableau, WeightsAndCoefficientsMatchQuadratureOracle) {
  for (int s = 1; s <= 3; ++s) {
    const auto t = gauss_tableau(s);
    ASSERT_EQ(t.a.rows(), s);
    ASSERT_EQ(t.a.cols(), s);
    for (int i = 0; i < s; ++i) {
      EXPECT_NEAR(t.b(i), simpson(t.c, i, 1.0), 1e-14) << "s=" << s;
      for (int j = 0; j < s; ++j) EXPECT_NEAR(t.a(i, j), simpson(t.c, j, t.c(i)), 1e-14) << "s=" << s;
    }
  }
}

TEST(GaussTableau, OrderConditions) {
  for (int s = 1; s <= 3; ++s) {
    const auto t = gauss_tableau(s);
    EXPECT_NEAR(t.b.sum(), 1.0, 1e-15);
    for (int i = 0; i < s; ++i) EXPECT_NEAR(t.a.row(i).sum(), t.c(i), 1e-15);
    // B(2s): sum_i b_i c_i^(k-1) = 1/k.
    for (int k = 1; k <= 2 * s; ++k) {
      double q = 0.0;
      for (int i = 0; i < s; ++i) q += t.b(i) * std::pow(t.c(i), k - 1);
      EXPECT_NEAR(q, 1.0 / k, 1e-14) << "s=" << s << " k=" << k;
    }
  }
}

TEST(GaussTableau, SymplecticityDefectAtRoundoff) {
  for (int s = 1; s <= 3; ++s) EXPECT_LE(symplecticity_defect(gauss_tableau(s)), 1e-15);
}

TEST(SymplecticityDefect, ExplicitEulerIsOne) {
  ButcherTableau euler{1, Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Ones(1), Eigen::VectorXd::Zero(1)};
  EXPECT_EQ(symplecticity_defect(euler), 1.0);
}

TEST(CompositionWeights, SumPalindromeAndOddMoments) {
  const auto w = composition_weights_6th().gammas;
  ASSERT_EQ(w.size(), 7u);
  EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-15);
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_EQ(w[i], w[w.size() - 1 - i]);
  EXPECT_LT(*std::min_element(w.begin(), w.end()), 0.0);
  double m3 = 0.0;
  double m5 = 0.0;
  for (double g : w) {
    m3 += g * g * g;
    m5 += std::pow(g, 5);
  }
  EXPECT_LE(std::abs(m3), 1e-14);
  EXPECT_LE(std::abs(m5), 1e-14);
}

}  // namespace
}  // namespace isork
