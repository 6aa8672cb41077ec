#include "agler/poly.h"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

namespace agler {
namespace {

Poly P2(std::vector<std::pair<Exponent, Complex>> terms) { return Poly::FromTerms(2, terms); }

Poly Prop11() { return P2({{{0, 0}, 3.0}, {{1, 0}, -1.0}, {{0, 1}, -1.0}, {{1, 1}, -1.0}}); }

Poly RandomPoly(std::mt19937_64& rng, std::vector<int> degrees) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::size_t n = 1;
  for (int d : degrees) n *= static_cast<std::size_t>(d) + 1;
  std::vector<Complex> c(n);
  for (Complex& x : c) x = Complex(g(rng), g(rng));
  return Poly(std::move(degrees), std::move(c));
}

// Sum of c_a z^a without Horner.
Complex NaiveEval(const Poly& p, const Point& z) {
  Complex acc = 0.0;
  for (std::size_t k = 0; k < p.coeffs().size(); ++k) {
    Complex term = p.coeffs()[k];
    const Exponent e = p.ExponentAt(k);
    for (int i = 0; i < p.nvars(); ++i)
      for (int j = 0; j < e[i]; ++j) term *= z[i];
    acc += term;
  }
  return acc;
}

TEST(PolyEval, Examples) {
  EXPECT_EQ(Prop11()({1.0, 1.0}), Complex(0.0));
  EXPECT_EQ(Prop11()({0.0, 0.0}), Complex(3.0));
  EXPECT_EQ(Poly::Constant(2, 1.0)({Complex(0.3, 2.0), Complex(-7.0, 1.0)}), Complex(1.0));
}

TEST(PolyEval, MatchesNaiveSum) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int t = 0; t < 50; ++t) {
    const Poly p = RandomPoly(rng, {static_cast<int>(rng() % 4), static_cast<int>(rng() % 4),
                                    static_cast<int>(rng() % 3)});
    const Point z = {Complex(u(rng), u(rng)), Complex(u(rng), u(rng)), Complex(u(rng), u(rng))};
    EXPECT_NEAR(std::abs(p(z) - NaiveEval(p, z)), 0.0, 1e-12 * (1.0 + std::abs(p(z))));
  }
}

TEST(PolyEval, DimensionMismatchThrows) {
  EXPECT_THROW(Prop11()({1.0}), std::invalid_argument);
}

TEST(Reflect, FamilyMember) {
  const Poly r = Reflect(Prop11(), DegreeProfile{{1, 1}});
  EXPECT_EQ(r, P2({{{1, 1}, 3.0}, {{1, 0}, -1.0}, {{0, 1}, -1.0}, {{0, 0}, -1.0}}));
}

TEST(Reflect, Constant) {
  EXPECT_EQ(Reflect(Poly::Constant(2, 1.0), DegreeProfile{{0, 0}}), Poly::Constant(2, 1.0));
}

TEST(Reflect, MatchesInversionFormula) {
  const Poly p = P2({{{0, 0}, 4.0}, {{1, 0}, -1.0}, {{0, 1}, -1.0}});
  const Poly r = Reflect(p, DegreeProfile{{1, 1}});
  EXPECT_EQ(r, P2({{{1, 1}, 4.0}, {{0, 1}, -1.0}, {{1, 0}, -1.0}}));
  // z1 z2 conj(p(1/conj(z1), 1/conj(z2))) at random points.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  for (int t = 0; t < 10; ++t) {
    const Complex z1(u(rng), u(rng));
    const Complex z2(u(rng), u(rng));
    if (std::abs(z1) < 0.1 || std::abs(z2) < 0.1) continue;
    const Complex expect =
        z1 * z2 * std::conj(p({1.0 / std::conj(z1), 1.0 / std::conj(z2)}));
    EXPECT_NEAR(std::abs(r({z1, z2}) - expect), 0.0, 1e-12 * std::abs(expect) + 1e-13);
  }
}

TEST(Reflect, ProfileTooSmallThrows) {
  EXPECT_THROW(Reflect(Prop11(), DegreeProfile{{1, 0}}), std::invalid_argument);
  EXPECT_THROW(Reflect(Prop11(), DegreeProfile{{1}}), std::invalid_argument);
}

TEST(Reflect, InvolutionProperty) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const int d = 1 + static_cast<int>(rng() % 3);
    std::vector<int> deg(d);
    std::vector<int> prof(d);
    for (int i = 0; i < d; ++i) {
      deg[i] = static_cast<int>(rng() % 3);
      prof[i] = deg[i] + static_cast<int>(rng() % 2);
    }
    const Poly p = RandomPoly(rng, deg);
    const Poly back = Reflect(Reflect(p, DegreeProfile{prof}), DegreeProfile{prof});
    EXPECT_EQ(back.Trim(), p.Trim());
  }
}

TEST(Reflect, TorusModulusProperty) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  const Poly p = RandomPoly(rng, {2, 3});
  const Poly r = Reflect(p, DegreeProfile{{3, 3}});
  for (int t = 0; t < 100; ++t) {
    const Point tau = {std::polar(1.0, ang(rng)), std::polar(1.0, ang(rng))};
    EXPECT_NEAR(std::abs(r(tau)), std::abs(p(tau)), 1e-10);
  }
}

TEST(PolyArith, Examples) {
  const Poly z1 = Poly::Monomial({1, 0});
  const Poly z2 = Poly::Monomial({0, 1});
  EXPECT_EQ(z1 * z2, Poly::Monomial({1, 1}));
  EXPECT_EQ(Prop11() + P2({{{0, 0}, 1.0}, {{1, 0}, 1.0}, {{0, 1}, 1.0}}),
            P2({{{0, 0}, 4.0}, {{1, 1}, -1.0}}));
  EXPECT_EQ(P2({{{0, 0}, 2.0}, {{1, 0}, -1.0}}) * P2({{{0, 0}, 2.0}, {{1, 0}, 1.0}}),
            P2({{{0, 0}, 4.0}, {{2, 0}, -1.0}}));
}

TEST(PolyArith, ResultsAreTrimmed) {
  const Poly a = P2({{{0, 0}, 1.0}, {{2, 2}, 1.0}});
  const Poly b = P2({{{2, 2}, 1.0}});
  const Poly diff = a - b;
  EXPECT_EQ(diff.degrees(), (std::vector<int>{0, 0}));
  const Poly zero = a - a;
  EXPECT_TRUE(zero.IsZero());
  EXPECT_EQ(zero.coeffs().size(), 1u);
}

TEST(PolyArith, NvarsMismatchThrows) {
  EXPECT_THROW(Poly::Constant(2, 1.0) + Poly::Constant(3, 1.0), std::invalid_argument);
  EXPECT_THROW(Poly::Constant(2, 1.0) * Poly::Constant(1, 1.0), std::invalid_argument);
}

TEST(PolyArith, ProductEvaluatesAsProduct) {
  std::mt19937_64 rng(9);
  const Poly a = RandomPoly(rng, {2, 1});
  const Poly b = RandomPoly(rng, {1, 3});
  const Point z = {Complex(0.3, -0.2), Complex(-0.5, 0.7)};
  EXPECT_NEAR(std::abs((a * b)(z) - a(z) * b(z)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(Scale(a, Complex(0, 2))(z) - Complex(0, 2) * a(z)), 0.0, 1e-12);
}

TEST(PolyTrim, TightDegrees) {
  Poly p({2, 3}, std::vector<Complex>(12, 0.0));
  p.set_coeff({1, 1}, 2.0);
  const Poly t = p.Trim();
  EXPECT_EQ(t.degrees(), (std::vector<int>{1, 1}));
  EXPECT_EQ(t.coeff({1, 1}), Complex(2.0));
  EXPECT_THROW(Poly({1, 1}, std::vector<Complex>(3)), std::invalid_argument);
}

// Taylor coefficients of 1/p by summing the geometric series in
// u = 1 - p / p(0), independent of the recursion under test.
CoeffGrid GeometricInverse(const Poly& p, const std::vector<int>& trunc) {
  const Complex p0 = p.coeffs()[0];
  const Poly u = Poly::Constant(p.nvars(), 1.0) - Scale(p, 1.0 / p0);
  int max_total = 0;
  for (int n : trunc) max_total += n;
  CoeffGrid acc(trunc);
  Poly power = Poly::Constant(p.nvars(), 1.0);
  for (int k = 0; k <= max_total; ++k) {
    const CoeffGrid term = CoeffGrid::FromPoly(power, trunc);
    for (std::size_t i = 0; i < acc.size(); ++i) {
      acc.at(acc.ExponentAt(i)) += term.coeffs()[i] / p0;
    }
    power = power * u;
  }
  return acc;
}

TEST(SeriesInverse, GeometricSeries) {
  const Poly p = P2({{{0, 0}, 1.0}, {{1, 0}, -1.0}});
  const CoeffGrid c = SeriesInverse(p, {5, 1});
  for (int n = 0; n < 5; ++n) EXPECT_EQ(c.at({n, 0}), Complex(1.0));
}

TEST(SeriesInverse, BinomialCoefficients) {
  const Poly p = P2({{{0, 0}, 2.0}, {{1, 0}, -1.0}, {{0, 1}, -1.0}});
  const CoeffGrid c = SeriesInverse(p, {3, 3});
  for (int m = 0; m < 3; ++m) {
    for (int n = 0; n < 3; ++n) {
      const double binom = std::tgamma(m + n + 1) / (std::tgamma(m + 1) * std::tgamma(n + 1));
      EXPECT_NEAR(std::abs(c.at({m, n}) - binom / std::pow(2.0, m + n + 1)), 0.0, 1e-15);
    }
  }
  EXPECT_EQ(c.at({0, 0}), Complex(0.5));
  EXPECT_EQ(c.at({1, 0}), Complex(0.25));
  EXPECT_EQ(c.at({1, 1}), Complex(0.25));
}

TEST(SeriesInverse, FamilyMemberAgainstGeometricOracle) {
  const CoeffGrid c = SeriesInverse(Prop11(), {2, 2});
  const CoeffGrid oracle = GeometricInverse(Prop11(), {2, 2});
  EXPECT_LE(c.MaxAbsDiff(oracle), 1e-15);
  EXPECT_NEAR(c.at({0, 0}).real(), 1.0 / 3.0, 1e-16);
  EXPECT_NEAR(c.at({1, 0}).real(), 1.0 / 9.0, 1e-16);
  // (1/3)(1/3 + 2/9): the z1 z2 term of u and of u^2, u = (z1 + z2 + z1 z2) / 3.
  EXPECT_NEAR(c.at({1, 1}).real(), 5.0 / 27.0, 1e-16);
}

TEST(SeriesInverse, ConvolutionIdentityProperty) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 20; ++t) {
    Poly p = RandomPoly(rng, {2, 2});
    p.set_coeff({0, 0}, p.coeff({0, 0}) + 5.0);
    const std::vector<int> trunc = {6, 5};
    const CoeffGrid prod = SeriesInverse(p, trunc).MulPoly(p);
    CoeffGrid one(trunc);
    one.at({0, 0}) = 1.0;
    EXPECT_LE(prod.MaxAbsDiff(one), 1e-12);
    EXPECT_LE(SeriesInverse(p, trunc).MaxAbsDiff(GeometricInverse(p, trunc)), 1e-12);
  }
}

TEST(SeriesInverse, ZeroConstantTermThrows) {
  EXPECT_THROW(SeriesInverse(Poly::Monomial({1, 0}), {3, 3}), std::domain_error);
}

TEST(BackwardShift, Examples) {
  const Poly g = P2({{{0, 0}, 1.0}, {{1, 0}, 1.0}, {{2, 0}, 1.0}});
  const CoeffGrid s = BackwardShift(CoeffGrid::FromPoly(g, {3, 1}), 0);
  EXPECT_EQ(s.truncation(), (std::vector<int>{2, 1}));
  EXPECT_EQ(s.at({0, 0}), Complex(1.0));
  EXPECT_EQ(s.at({1, 0}), Complex(1.0));

  const CoeffGrid z2 = BackwardShift(CoeffGrid::FromPoly(Poly::Monomial({0, 1}), {3, 3}), 0);
  for (const Complex& c : z2.coeffs()) EXPECT_EQ(c, Complex(0.0));

  const CoeffGrid geo = SeriesInverse(P2({{{0, 0}, 1.0}, {{1, 0}, -1.0}}), {5, 1});
  const CoeffGrid shifted = BackwardShift(geo, 0);
  EXPECT_EQ(shifted.truncation(), (std::vector<int>{4, 1}));
  EXPECT_EQ(shifted.MaxAbsDiff(SeriesInverse(P2({{{0, 0}, 1.0}, {{1, 0}, -1.0}}), {4, 1})), 0.0);
}

TEST(BackwardShift, TruncationOneThrows) {
  EXPECT_THROW(BackwardShift(CoeffGrid({1, 3}), 0), std::domain_error);
}

TEST(BackwardShift, SliceDecompositionProperty) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int axis = 0; axis < 2; ++axis) {
    std::vector<Complex> c(5 * 4);
    for (Complex& x : c) x = Complex(g(rng), g(rng));
    const CoeffGrid grid({5, 4}, c);
    const CoeffGrid up = BackwardShift(grid, axis).ShiftUp(axis);
    ASSERT_EQ(up.truncation(), grid.truncation());
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const Exponent e = grid.ExponentAt(k);
      const Complex slice = e[axis] == 0 ? grid.coeffs()[k] : Complex(0.0);
      EXPECT_EQ(grid.coeffs()[k], slice + up.at(e));
    }
    // Linearity.
    std::vector<Complex> c2(c.size());
    for (Complex& x : c2) x = Complex(g(rng), g(rng));
    const CoeffGrid other({5, 4}, c2);
    std::vector<Complex> sum(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) sum[k] = 2.0 * c[k] + c2[k];
    const CoeffGrid lhs = BackwardShift(CoeffGrid({5, 4}, sum), axis);
    const CoeffGrid a = BackwardShift(grid, axis);
    const CoeffGrid b = BackwardShift(other, axis);
    for (std::size_t k = 0; k < lhs.size(); ++k) {
      EXPECT_NEAR(std::abs(lhs.coeffs()[k] - (2.0 * a.coeffs()[k] + b.coeffs()[k])), 0.0, 1e-14);
    }
  }
}

TEST(PolyDerivative, Basic) {
  const Poly p = P2({{{2, 1}, 3.0}, {{0, 1}, 1.0}});
  EXPECT_EQ(p.Derivative(0), P2({{{1, 1}, 6.0}}));
  EXPECT_EQ(p.Derivative(1), P2({{{2, 0}, 3.0}, {{0, 0}, 1.0}}));
}

}  // namespace
}  // namespace agler
