#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "agler/poly.h"
#include "agler/rational_inner.h"
#include "agler/sdpcore.h"

namespace agler {

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

/// A kernel on the bidisk built from a fixed set of atoms. Every constructor
/// and combinator preserves Hermitian symmetry K(z, w) = conj(K(w, z)), which
/// is why scalars are restricted to reals.
class KernelExpr {
 public:
  struct Node;

  /// K(z, w) = c.
  static KernelExpr Constant(double c);
  /// K(z, w) = 1 / (1 - z_axis conj(w_axis)), axis zero-based.
  static KernelExpr Szego(int axis);
  /// (1 - phi(z) conj(phi(w))) / ((1 - z1 conj(w1)) (1 - z2 conj(w2))).
  static KernelExpr Kphi(Rational phi);
  static KernelExpr Gram(GramKernel g);
  /// f(z) conj(f(w)).
  static KernelExpr RankOne(Rational f);

  /// K(z, w) / (1 - z_axis conj(w_axis)).
  KernelExpr DivideByShift(int axis) const;
  /// K(z, w) * (1 - z_axis conj(w_axis)).
  KernelExpr MultiplyByShift(int axis) const;

  friend KernelExpr operator+(const KernelExpr& a, const KernelExpr& b);
  friend KernelExpr operator-(const KernelExpr& a, const KernelExpr& b);
  friend KernelExpr operator*(double c, const KernelExpr& a);

  Complex operator()(std::span<const Complex> z, std::span<const Complex> w) const;

 private:
  explicit KernelExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Throws std::domain_error unless every coordinate has modulus < 1.
void RequireInsidePolydisk(std::span<const Complex> z);

/// `count` points uniformly distributed in the open polydisk D^d (rejection
/// sampling per coordinate).
std::vector<Point> RandomPolydiskPoints(int count, int d = 2,
                                        std::uint64_t seed = kDefaultSeed);

Complex KphiEval(const Rational& phi, std::span<const Complex> z,
                 std::span<const Complex> w);
inline Complex KphiEval(const RationalInner& phi, std::span<const Complex> z,
                        std::span<const Complex> w) {
  return KphiEval(phi.AsRational(), z, w);
}

/// max over all (z, w) in points x points of
/// |1 - phi(z)conj(phi(w)) - (1 - z1 conj(w1)) K2 - (1 - z2 conj(w2)) K1|.
double AglerResidual(const Rational& phi, const KernelExpr& k1,
                     const KernelExpr& k2, const std::vector<Point>& points);

/// Same defect, maximised over explicit (z, w) pairs.
double AglerResidualPairs(const Rational& phi, const KernelExpr& k1,
                          const KernelExpr& k2,
                          const std::vector<std::pair<Point, Point>>& pairs);

struct SampledKernel {
  std::vector<Point> points;
  HermMatrix gram;
  /// max |K(z_i, z_j) - conj(K(z_j, z_i))| before symmetrization.
  double hermitian_defect = 0.0;
};

SampledKernel SampleKernel(const KernelExpr& k, const std::vector<Point>& points);

struct PsdCheck {
  bool psd = false;
  double min_eig = 0.0;
};

PsdCheck SamplePsdCheck(const KernelExpr& k, const std::vector<Point>& points,
                        double tol);

/// Sampled test that K2 - K1 / b^2 is a positive kernel. A false answer
/// disproves contractive containment of H(K1) in H(K2) with constant b; true
/// is evidence only.
bool ContainmentTest(const KernelExpr& k1, const KernelExpr& k2, double b,
                     const std::vector<Point>& points, double tol);

using KernelPair = std::pair<KernelExpr, KernelExpr>;  // (K1, K2)

/// Given Agler kernels (K1, K2) of phi + f and (L1, L2) of phi - f, returns
///   K1' = (K1 + L1)/2 + (1 - t) f(z)conj(f(w)) / (1 - z2 conj(w2)),
///   K2' = (K2 + L2)/2 + t f(z)conj(f(w)) / (1 - z1 conj(w1)),
/// an Agler decomposition of phi for every t in [0, 1].
KernelPair BlendDecompositions(const KernelPair& k, const KernelPair& l,
                               const Rational& f, double t);

struct AndoResult {
  double norm = 0.0;
  bool ok = false;
  double commutator = 0.0;
};

/// p(T1, T2) = sum_a c_a T1^a1 T2^a2.
Eigen::MatrixXcd EvaluateMatrixPolynomial(const Poly& p, const Eigen::MatrixXcd& t1,
                                          const Eigen::MatrixXcd& t2);

/// Spectral norm of p(T1, T2) for a commuting pair of contractions. Throws
/// std::invalid_argument for non-square or mismatched shapes, for
/// ||T1 T2 - T2 T1||_F > tol, and for ||T_r|| > 1 + tol.
AndoResult AndoCheck(const Poly& p, const Eigen::MatrixXcd& t1,
                     const Eigen::MatrixXcd& t2, double tol = 1e-10);

/// Compression of multiplication by z_axis to span{z1^a z2^b : a <= n1, b <= n2}.
Eigen::MatrixXcd CompressedShift(int axis, int n1, int n2);

using OperatorPair = std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd>;

/// Seeded commuting contractions. Even entries are scaled compressed shifts
/// on polynomials of bidegree <= (n1, n2) with n_r <= max_degree; odd entries
/// are U D1 U*, U D2 U* with D_r diagonal in the closed disk and U a random
/// unitary.
std::vector<OperatorPair> RandomCommutingContractions(int count, int max_degree,
                                                      std::uint64_t seed = kDefaultSeed);

/// max |p| over a grid x grid sample of the torus.
double TorusSupNorm(const Poly& p, int grid = 64);

}  // namespace agler
