#include "agler/kernels.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "agler/decompose.h"

namespace agler {
namespace {

Poly P2(std::vector<std::pair<Exponent, Complex>> terms) { return Poly::FromTerms(2, terms); }

const Poly kZ1 = Poly::Monomial({1, 0});
const Poly kZ2 = Poly::Monomial({0, 1});
const Poly kZ1Z2 = Poly::Monomial({1, 1});
const Poly kMean = P2({{{1, 0}, 0.5}, {{0, 1}, 0.5}});

RationalInner StableExample() {
  return MakeRationalInner(Poly::Constant(2, 1.0),
                           P2({{{0, 0}, 4.0}, {{1, 0}, -1.0}, {{0, 1}, -1.0}}),
                           DegreeProfile{{1, 1}});
}

TEST(KphiEval, Examples) {
  EXPECT_NEAR(std::abs(KphiEval(kZ1Z2, Point{0.0, 0.0}, Point{0.0, 0.0}) - 1.0), 0.0, 1e-15);
  for (double r : {0.1, 0.5, 0.9}) {
    EXPECT_NEAR(std::abs(KphiEval(kZ1, Point{r, 0.0}, Point{r, 0.0}) - 1.0), 0.0, 1e-12);
  }
  const Complex v = KphiEval(kZ1Z2, Point{0.5, 0.5}, Point{0.5, 0.5});
  EXPECT_NEAR(v.real(), (1.0 - 0.0625) / (0.75 * 0.75), 1e-14);
  EXPECT_NEAR(v.imag(), 0.0, 1e-15);
}

TEST(KphiEval, RejectsBoundaryPoints) {
  EXPECT_THROW(KphiEval(kZ1, Point{1.0, 0.0}, Point{0.0, 0.0}), std::domain_error);
  EXPECT_THROW(KphiEval(kZ1, Point{0.0, 0.0}, Point{0.0, Complex(0.0, -1.2)}), std::domain_error);
}

TEST(AglerResidual, Examples) {
  const std::vector<Point> pts = RandomPolydiskPoints(10, 2, 3);
  EXPECT_LE(AglerResidual(kZ1, KernelExpr::Constant(0.0), KernelExpr::Constant(1.0), pts), 1e-15);
  EXPECT_LE(AglerResidual(kZ1Z2, KernelExpr::RankOne(kZ1), KernelExpr::Constant(1.0), pts), 1e-15);
  EXPECT_NEAR(AglerResidual(kZ1Z2, KernelExpr::Constant(0.0), KernelExpr::Constant(1.0),
                            {Point{0.5, 0.5}}),
              0.1875, 1e-15);
  EXPECT_THROW(AglerResidual(kZ1, KernelExpr::Constant(0.0), KernelExpr::Constant(1.0),
                             {Point{0.5, 1.0}}),
               std::domain_error);
}

TEST(SamplePsdCheck, Examples) {
  EXPECT_TRUE(SamplePsdCheck(KernelExpr::Szego(0), RandomPolydiskPoints(5, 2, 1), 1e-12).psd);
  const PsdCheck neg =
      SamplePsdCheck(KernelExpr::Constant(-1.0), RandomPolydiskPoints(2, 2, 1), 1e-12);
  EXPECT_FALSE(neg.psd);
  EXPECT_NEAR(neg.min_eig, -2.0, 1e-14);
  EXPECT_TRUE(SamplePsdCheck(KernelExpr::Kphi(kMean), RandomPolydiskPoints(20, 2, 1), 1e-9).psd);
}

TEST(SampleKernel, HermitianGram) {
  const SampledKernel s = SampleKernel(KernelExpr::Kphi(StableExample().AsRational()),
                                       RandomPolydiskPoints(12, 2, 4));
  EXPECT_LE(s.hermitian_defect, 1e-12);
  for (int i = 0; i < 12; ++i) EXPECT_EQ(s.gram(i, i).imag(), 0.0);
}

TEST(ContainmentTest, Examples) {
  const std::vector<Point> pts = RandomPolydiskPoints(20, 2, 6);
  const KernelExpr s = KernelExpr::Szego(0);
  EXPECT_TRUE(ContainmentTest(s, s, 1.0, pts, 1e-10));
  EXPECT_FALSE(ContainmentTest(2.0 * s, s, 1.0, pts, 1e-10));
  EXPECT_TRUE(ContainmentTest(KernelExpr::RankOne(kZ1), s, 1.0, pts, 1e-10));
  EXPECT_THROW(ContainmentTest(s, s, 0.0, pts, 1e-10), std::invalid_argument);
}

TEST(ContainmentTest, BruteForceOracle) {
  // Szego(z1) - z1 conj(w1) = sum_{n != 1} (z1 conj(w1))^n: its Gram matrix is
  // a sum of rank-one PSD terms, checked here by direct partial sums.
  const std::vector<Point> pts = RandomPolydiskPoints(8, 2, 10);
  const int n = static_cast<int>(pts.size());
  Eigen::MatrixXcd partial = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k < 400; ++k) {
    if (k == 1) continue;
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v(i) = std::pow(pts[i][0], k);
    partial += v * v.adjoint();
  }
  const SampledKernel s =
      SampleKernel(KernelExpr::Szego(0) - KernelExpr::RankOne(kZ1), pts);
  EXPECT_LE((s.gram.matrix() - partial).norm(), 1e-10);
}

TEST(BlendDecompositions, ZeroPerturbationAverages) {
  const KernelPair k{KernelExpr::Szego(0), KernelExpr::Constant(1.0)};
  const KernelPair l{KernelExpr::Constant(2.0), KernelExpr::RankOne(kZ2)};
  const KernelPair b = BlendDecompositions(k, l, Poly(2), 0.5);
  for (const Point& z : RandomPolydiskPoints(5, 2, 2)) {
    for (const Point& w : RandomPolydiskPoints(5, 2, 3)) {
      EXPECT_NEAR(std::abs(b.first(z, w) - 0.5 * (k.first(z, w) + l.first(z, w))), 0.0, 1e-14);
      EXPECT_NEAR(std::abs(b.second(z, w) - 0.5 * (k.second(z, w) + l.second(z, w))), 0.0, 1e-14);
    }
  }
}

TEST(BlendDecompositions, ZeroFunctionFromCoordinate) {
  // z1 and -z1 both decompose as K1 = 0, K2 = 1.
  const KernelPair k{KernelExpr::Constant(0.0), KernelExpr::Constant(1.0)};
  const std::vector<Point> pts = RandomPolydiskPoints(20, 2, 8);
  for (double t : {0.0, 1.0}) {
    const KernelPair b = BlendDecompositions(k, k, kZ1, t);
    EXPECT_LE(AglerResidual(Poly(2), b.first, b.second, pts), 1e-12);
  }
  const KernelPair b0 = BlendDecompositions(k, k, kZ1, 0.0);
  const KernelPair b1 = BlendDecompositions(k, k, kZ1, 1.0);
  const Point z = pts[0];
  const Point w = pts[1];
  EXPECT_GT(std::abs(b0.first(z, w) - b1.first(z, w)), 1e-3);
  EXPECT_THROW(BlendDecompositions(k, k, kZ1, 1.5), std::invalid_argument);
}

TEST(BlendDecompositions, ResidualClosureProperty) {
  // phi = 0 and f = g inner: the Agler kernels of g also decompose -g.
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<Point> pts = RandomPolydiskPoints(15, 2, 12);
  for (const RationalInner& g :
       {MakeRationalInner(kZ1Z2, Poly::Constant(2, 1.0)), StableExample()}) {
    const DecomposeResult d = Decompose(g);
    ASSERT_EQ(d.status, DecomposeStatus::kFeasible);
    const KernelPair k{KernelExpr::Gram(d.pair.k1), KernelExpr::Gram(d.pair.k2)};
    const double in = AglerResidual(g.AsRational(), k.first, k.second, pts);
    const Rational minus_g(Scale(g.numerator, -1.0), g.p);
    const double in_minus = AglerResidual(minus_g, k.first, k.second, pts);
    for (int s = 0; s < 5; ++s) {
      const KernelPair b = BlendDecompositions(k, k, g.AsRational(), u(rng));
      EXPECT_LE(AglerResidual(Poly(2), b.first, b.second, pts), in + in_minus + 1e-10);
    }
  }
}

TEST(KernelExpr, HermitianSymmetryProperty) {
  const RationalInner phi = StableExample();
  const DecomposeResult d = Decompose(phi);
  const std::vector<KernelExpr> exprs = {
      KernelExpr::Kphi(phi.AsRational()),
      KernelExpr::Gram(d.pair.k1) - 0.3 * KernelExpr::Szego(1),
      KernelExpr::RankOne(kMean).DivideByShift(0).MultiplyByShift(1) + KernelExpr::Constant(2.0),
      BlendDecompositions({KernelExpr::Szego(0), KernelExpr::Szego(1)},
                          {KernelExpr::Gram(d.pair.k1), KernelExpr::Gram(d.pair.k2)}, kZ1Z2, 0.3)
          .first,
  };
  const std::vector<Point> zs = RandomPolydiskPoints(20, 2, 40);
  const std::vector<Point> ws = RandomPolydiskPoints(20, 2, 41);
  for (const KernelExpr& k : exprs) {
    for (std::size_t i = 0; i < zs.size(); ++i) {
      EXPECT_LE(std::abs(k(zs[i], ws[i]) - std::conj(k(ws[i], zs[i]))), 1e-12);
    }
  }
}

TEST(KernelExpr, KphiPositivityProperty) {
  const std::vector<RationalInner> phis = {
      MakeRationalInner(kZ1, Poly::Constant(2, 1.0)),
      MakeRationalInner(kZ1Z2, Poly::Constant(2, 1.0)),
      StableExample(),
      MakeUniqueExample(1, 1),
      MakeUniqueExample(2, 3),
  };
  for (std::size_t i = 0; i < phis.size(); ++i) {
    const PsdCheck c = SamplePsdCheck(KernelExpr::Kphi(phis[i].AsRational()),
                                      RandomPolydiskPoints(30, 2, 100 + i), 1e-9);
    EXPECT_TRUE(c.psd) << "phi #" << i << " min_eig " << c.min_eig;
  }
}

TEST(RandomPolydiskPoints, SeededAndInside) {
  const std::vector<Point> a = RandomPolydiskPoints(50, 3, 0x5EED);
  const std::vector<Point> b = RandomPolydiskPoints(50, 3, 0x5EED);
  EXPECT_EQ(a, b);
  for (const Point& z : a) {
    ASSERT_EQ(z.size(), 3u);
    for (const Complex& c : z) EXPECT_LT(std::abs(c), 1.0);
  }
  EXPECT_NE(a, RandomPolydiskPoints(50, 3, 1));
}

Eigen::MatrixXcd Jordan2() {
  Eigen::MatrixXcd n = Eigen::MatrixXcd::Zero(2, 2);
  n(0, 1) = 1.0;
  return n;
}

TEST(AndoCheck, Examples) {
  const AndoResult a = AndoCheck(kZ1Z2, Jordan2(), Jordan2());
  EXPECT_EQ(a.norm, 0.0);
  EXPECT_TRUE(a.ok);
  const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(3, 3);
  EXPECT_EQ(AndoCheck(kMean, zero, zero).norm, 0.0);
  const AndoResult s = AndoCheck(kMean, CompressedShift(0, 3, 3), CompressedShift(1, 3, 3));
  EXPECT_TRUE(s.ok);
  EXPECT_LE(s.norm, 1.0 + 1e-10);
}

TEST(AndoCheck, RejectsInvalidOperators) {
  EXPECT_THROW(AndoCheck(kZ1, Jordan2(), Jordan2().transpose()), std::invalid_argument);
  EXPECT_THROW(AndoCheck(kZ1, Eigen::MatrixXcd::Zero(2, 3), Eigen::MatrixXcd::Zero(2, 3)),
               std::invalid_argument);
  EXPECT_THROW(AndoCheck(kZ1, Eigen::MatrixXcd::Zero(2, 2), Eigen::MatrixXcd::Zero(3, 3)),
               std::invalid_argument);
  EXPECT_THROW(AndoCheck(kZ1, 2.0 * Eigen::MatrixXcd::Identity(2, 2),
                         Eigen::MatrixXcd::Identity(2, 2)),
               std::invalid_argument);
}

TEST(AndoCheck, CompressedShiftsCommuteAndContract) {
  for (int n1 = 0; n1 <= 4; ++n1) {
    for (int n2 = 0; n2 <= 4; ++n2) {
      const Eigen::MatrixXcd s1 = CompressedShift(0, n1, n2);
      const Eigen::MatrixXcd s2 = CompressedShift(1, n1, n2);
      EXPECT_EQ((s1 * s2 - s2 * s1).norm(), 0.0);
      EXPECT_LE(SpectralNorm(s1), 1.0 + 1e-12);
    }
  }
  // Shift of z1^a z2^b lands on z1^(a+1) z2^b.
  const Eigen::MatrixXcd s1 = CompressedShift(0, 2, 1);
  EXPECT_EQ(s1(1 * 2 + 1, 0 * 2 + 1), Complex(1.0));
}

TEST(AndoCheck, RandomCommutingContractionsProperty) {
  const std::vector<OperatorPair> ops = RandomCommutingContractions(100, 4, 0x5EED);
  ASSERT_EQ(ops.size(), 100u);
  for (const Poly& p : {kZ1, kZ2, kZ1Z2, kMean}) {
    for (const auto& [t1, t2] : ops) {
      const AndoResult r = AndoCheck(p, t1, t2, 1e-8);
      EXPECT_TRUE(r.ok) << r.norm;
    }
  }
}

TEST(TorusSupNorm, KnownValues) {
  EXPECT_NEAR(TorusSupNorm(kMean), 1.0, 1e-15);
  EXPECT_NEAR(TorusSupNorm(P2({{{0, 0}, 4.0}, {{1, 0}, -1.0}, {{0, 1}, -1.0}})), 6.0, 1e-12);
}

}  // namespace
}  // namespace agler
