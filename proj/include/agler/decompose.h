#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "agler/kernels.h"
#include "agler/poly.h"
#include "agler/rational_inner.h"
#include "agler/sdpcore.h"
#include "agler/stability.h"

namespace agler {

struct DecomposeConfig {
  FeasibilityConfig solver;
  int certificate_pairs = 200;
  std::uint64_t certificate_seed = kDefaultSeed;
  /// Relative eigenvalue threshold for the reported numerical ranks.
  double rank_tol = 1e-7;
  double residual_tol = 1e-6;
  double min_eig_tol = 1e-8;
};

struct AglerCertificate {
  double residual_max = 0.0;
  int points_used = 0;
  double min_eig_k1 = 0.0;
  double min_eig_k2 = 0.0;
  int rank_k1 = 0;
  int rank_k2 = 0;
  /// Dimension caps k2 (k1 + 1) and k1 (k2 + 1).
  int cap_k1 = 0;
  int cap_k2 = 0;
  double affine_residual = 0.0;
  int iterations = 0;
  std::string solver_status;
};

struct AglerPair {
  GramKernel k1;
  GramKernel k2;
  AglerCertificate certificate;
};

enum class DecomposeStatus { kFeasible, kUnknown };

std::string ToString(DecomposeStatus status);

struct DecomposeResult {
  DecomposeStatus status = DecomposeStatus::kUnknown;
  /// On kUnknown this holds the solver's last iterate.
  AglerPair pair;
};

/// Exponents (a, b) with a <= k1, b < k2: the monomials allowed in K1.
std::vector<Exponent> K1Basis(int k1, int k2);
/// Exponents (a, b) with a < k1, b <= k2: the monomials allowed in K2.
std::vector<Exponent> K2Basis(int k1, int k2);

/// Coefficient matching of
///   p(z)conj(p(w)) - (m p~)(z)conj((m p~)(w))
///     = (1 - z1 conj(w1)) e2(z)^T A2 conj(e2(w))
///     + (1 - z2 conj(w2)) e1(z)^T A1 conj(e1(w))
/// in the monomials z^a conj(w)^b. Unknown 0 is A1, unknown 1 is A2.
AffineConstraintSet AglerConstraints(const RationalInner& phi);

/// Solves for PSD Gram matrices of an Agler decomposition of phi and
/// certifies the result by sampling.
DecomposeResult Decompose(const RationalInner& phi, const DecomposeConfig& cfg = {});

/// The decomposition defect of a pair re-evaluated on `pairs` random point
/// pairs drawn with `seed`.
double IndependentResidual(const RationalInner& phi, const AglerPair& pair,
                           int pairs, std::uint64_t seed);

/// Polynomials q_i with K(z, w) = sum_i q_i(z) conj(q_i(w)) / (p(z) conj(p(w))):
/// the eigenvectors of A scaled by sqrt(eigenvalue), for eigenvalues above
/// rank_tol * max(1, largest eigenvalue).
std::vector<Poly> ExtractSos(const GramKernel& g, double rank_tol = 1e-9);

enum class Verdict { kUnique, kNotUnique, kUnknown };
enum class UniquenessMethod { kOneVariableRule, kStableDenominator, kTorusZeroNullspace };

std::string ToString(Verdict v);
std::string ToString(UniquenessMethod m);

struct UniquenessConfig {
  StabilityConfig stability;
  int torus_grid = 256;
  int refine_iters = 50;
  double zero_tol = 1e-10;
  double nullspace_tol = 1e-9;
};

struct UniquenessReport {
  Verdict verdict = Verdict::kUnknown;
  UniquenessMethod method = UniquenessMethod::kOneVariableRule;
  /// Polynomials q with deg q < (k1, k2) vanishing at every torus zero of p.
  std::vector<Poly> basis_of_l;
  int nullity = 0;
  std::vector<Point> torus_zeros;
  std::string diagnostics;
};

/// Zeros of p on the torus: local minima of |p| on a grid x grid scan,
/// refined by Gauss-Newton in the two angles and kept when |p| < zero_tol.
std::vector<Point> FindTorusZeros(const Poly& p, int grid = 256, int refine_iters = 50,
                                  double zero_tol = 1e-10);

UniquenessReport UniquenessTest(const RationalInner& phi, const UniquenessConfig& cfg = {});

/// phi = p~ / p with p = 3 - z1^k1 - z2^k2 - z1^k1 z2^k2.
RationalInner MakeUniqueExample(int k1, int k2);

struct SupportReport {
  std::vector<int> truncation;
  /// max |coefficient| of p * X_1 phi with n1 >= k1.
  double max_forbidden_x1 = 0.0;
  /// max |coefficient| of p * X_2 phi with n2 >= k2.
  double max_forbidden_x2 = 0.0;
  double max_forbidden = 0.0;
  bool pass = false;
};

/// Truncated-series check that p * X_1 phi has no coefficients with n1 >= k1
/// and p * X_2 phi none with n2 >= k2. Requires a stable denominator; throws
/// std::domain_error otherwise and std::invalid_argument when the truncation
/// is below (k1 + 2, k2 + 2).
SupportReport SupportCheck(const RationalInner& phi, const std::vector<int>& truncation,
                           double tol = 1e-10);

}  // namespace agler
