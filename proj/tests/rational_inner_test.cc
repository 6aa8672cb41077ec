#include "agler/rational_inner.h"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

namespace agler {
namespace {

Poly P2(std::vector<std::pair<Exponent, Complex>> terms) { return Poly::FromTerms(2, terms); }

const Poly kOne = Poly::Constant(2, 1.0);

TEST(MakeRationalInner, CoordinateFunction) {
  const RationalInner phi = MakeRationalInner(Poly::Monomial({1, 0}), kOne);
  EXPECT_EQ(phi.k1, 1);
  EXPECT_EQ(phi.k2, 0);
  EXPECT_EQ(phi({Complex(0.3, 0.1), 0.7}), Complex(0.3, 0.1));
}

TEST(MakeRationalInner, FamilyMemberOneOne) {
  const Poly p = P2({{{0, 0}, 3.0}, {{1, 0}, -1.0}, {{0, 1}, -1.0}, {{1, 1}, -1.0}});
  const RationalInner phi = MakeRationalInner(kOne, p, DegreeProfile{{1, 1}});
  EXPECT_EQ(phi.k1, 1);
  EXPECT_EQ(phi.k2, 1);
  EXPECT_EQ(phi.numerator,
            P2({{{1, 1}, 3.0}, {{1, 0}, -1.0}, {{0, 1}, -1.0}, {{0, 0}, -1.0}}));
  // (1, 1) is on the torus grid and p vanishes there.
  EXPECT_GE(phi.boundary_singular, 1);
  const Complex z1(0.2, -0.4);
  const Complex z2(-0.5, 0.1);
  const Complex expect = (3.0 * z1 * z2 - z1 - z2 - 1.0) / (3.0 - z1 - z2 - z1 * z2);
  EXPECT_NEAR(std::abs(phi({z1, z2}) - expect), 0.0, 1e-15);
}

TEST(MakeRationalInner, StableDenominatorIsInnerOnTorus) {
  const Poly p = P2({{{0, 0}, 4.0}, {{1, 0}, -1.0}, {{0, 1}, -1.0}});
  const RationalInner phi = MakeRationalInner(kOne, p, DegreeProfile{{1, 1}});
  EXPECT_EQ(phi.boundary_singular, 0);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  for (int t = 0; t < 100; ++t) {
    const Point tau = {std::polar(1.0, ang(rng)), std::polar(1.0, ang(rng))};
    EXPECT_NEAR(std::abs(phi(tau)), 1.0, 1e-12);
  }
}

TEST(MakeRationalInner, UnimodularConstant) {
  const RationalInner phi = MakeRationalInner(Poly::Constant(2, Complex(0.6, 0.8)), kOne);
  EXPECT_EQ(phi.k1, 0);
  EXPECT_EQ(phi.k2, 0);
}

TEST(MakeRationalInner, RejectsBadNumerator) {
  EXPECT_THROW(MakeRationalInner(P2({{{0, 0}, 1.0}, {{1, 0}, 1.0}}), kOne), std::invalid_argument);
  EXPECT_THROW(MakeRationalInner(Poly::Constant(2, 2.0), kOne), std::invalid_argument);
  EXPECT_THROW(MakeRationalInner(Poly(2), kOne), std::invalid_argument);
}

TEST(MakeRationalInner, RejectsBadDenominator) {
  EXPECT_THROW(MakeRationalInner(kOne, Poly::Monomial({1, 0})), std::invalid_argument);
  // Zero at z1 = 1/2.
  EXPECT_THROW(MakeRationalInner(kOne, P2({{{0, 0}, 1.0}, {{1, 0}, -2.0}})), std::domain_error);
  EXPECT_THROW(MakeRationalInner(kOne, Poly::Constant(3, 1.0)), std::invalid_argument);
  EXPECT_THROW(MakeRationalInner(kOne, P2({{{0, 0}, 4.0}, {{1, 0}, -1.0}}), DegreeProfile{{0, 0}}),
               std::invalid_argument);
}

TEST(GramKernel, EvaluatesQuadraticForm) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2);
  a(0, 0) = 4.0;
  a(1, 1) = 1.0;
  const GramKernel g{{{0, 0}, {1, 0}}, HermMatrix(a), kOne};
  const Point z = {Complex(0.3, 0.2), 0.5};
  const Point w = {Complex(-0.1, 0.6), 0.2};
  EXPECT_NEAR(std::abs(g(z, w) - (4.0 + z[0] * std::conj(w[0]))), 0.0, 1e-15);

  const Poly p = P2({{{0, 0}, 2.0}, {{0, 1}, 1.0}});
  const GramKernel gp{{{0, 0}, {1, 0}}, HermMatrix(a), p};
  EXPECT_NEAR(std::abs(gp(z, w) - (4.0 + z[0] * std::conj(w[0])) / (p(z) * std::conj(p(w)))), 0.0,
              1e-15);
}

}  // namespace
}  // namespace agler
