#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace agler {

using Complex = std::complex<double>;

/// Dense complex Hermitian matrix. The input is symmetrized as (M + M*) / 2 on
/// construction, so the Hermitian invariant holds exactly.
class HermMatrix {
 public:
  HermMatrix() = default;
  explicit HermMatrix(int n);
  explicit HermMatrix(const Eigen::MatrixXcd& m);

  static HermMatrix Identity(int n);

  int n() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

  double FrobeniusNorm() const { return m_.norm(); }

 private:
  Eigen::MatrixXcd m_;
};

/// Raised when the Jacobi sweep cap is hit.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, int sweeps)
      : std::runtime_error(what), sweeps_(sweeps) {}
  int sweeps() const { return sweeps_; }

 private:
  int sweeps_;
};

struct EigenDecomposition {
  Eigen::VectorXd values;     // descending
  Eigen::MatrixXcd vectors;   // unitary, column k pairs with values(k)
  int sweeps = 0;
};

/// Cyclic complex Jacobi eigensolver, capped at `max_sweeps` sweeps.
EigenDecomposition HermitianEig(const HermMatrix& m, int max_sweeps = 100);

double MinEigenvalue(const HermMatrix& m);

/// Nearest PSD matrix in the Frobenius norm (negative eigenvalues clipped).
HermMatrix PsdProject(const HermMatrix& m);

/// Spectral norm of a general complex matrix, via the eigenvalues of M*M.
double SpectralNorm(const Eigen::MatrixXcd& m);

/// One term weight * X_unknown(row, col) of a linear equation.
struct AffineTerm {
  int unknown = 0;
  int row = 0;
  int col = 0;
  Complex weight = 1.0;
};

struct AffineEquation {
  std::vector<AffineTerm> terms;
  Complex target = 0.0;
};

/// Complex-linear equations over a tuple of Hermitian unknowns,
/// sum_t weight_t * X_{k_t}(r_t, c_t) = target.
class AffineConstraintSet {
 public:
  explicit AffineConstraintSet(std::vector<int> sizes);

  const std::vector<int>& sizes() const { return sizes_; }
  const std::vector<AffineEquation>& equations() const { return equations_; }

  /// Throws std::out_of_range when a term references a bad unknown or entry.
  void AddEquation(AffineEquation eq);

  /// Per-equation residual L(X) - c.
  std::vector<Complex> Residual(const std::vector<HermMatrix>& x) const;
  double MaxResidual(const std::vector<HermMatrix>& x) const;

 private:
  std::vector<int> sizes_;
  std::vector<AffineEquation> equations_;
};

struct FeasibilityConfig {
  double eps_affine = 1e-9;
  double eps_psd = 1e-9;
  int max_iters = 20000;
  std::uint64_t seed = 0x5EED;
  /// Iterations between face-restricted polishing attempts; 0 disables.
  int polish_every = 25;
};

enum class FeasibilityStatus { kFeasible, kMaxIters, kInfeasibleEvidence };

std::string ToString(FeasibilityStatus status);

struct FeasibilityResult {
  FeasibilityStatus status = FeasibilityStatus::kMaxIters;
  std::vector<HermMatrix> solution;
  double affine_residual = 0.0;
  double min_eig = 0.0;
  int iterations = 0;
  /// Numerical rank of the real-linear constraint map versus its column count.
  int constraint_rank = 0;
  int parameter_count = 0;
  /// The iterate stopped moving before the tolerances were met.
  bool stalled = false;
  /// Set when the returned point came from the face-restricted polish step.
  bool polished = false;
  std::string note;
};

/// Orthogonal projection (in the Frobenius inner product) onto the solution
/// set of the equations; least squares for inconsistent systems.
std::vector<HermMatrix> AffineProject(const AffineConstraintSet& constraints,
                                      const std::vector<HermMatrix>& x);

/// Finds Hermitian PSD matrices satisfying the equations by alternating
/// Frobenius projections onto the affine set and the PSD cone, starting from
/// least-squares-scaled identities. Every few iterations the iterate's
/// numerical range is used to solve the equations on the corresponding face
/// of the cone; a face solution is accepted only if it passes both
/// tolerances. When the equations pin down a single point which is not PSD,
/// the result is kInfeasibleEvidence.
FeasibilityResult AffinePsdFeasibility(const AffineConstraintSet& constraints,
                                       const FeasibilityConfig& cfg = {});

}  // namespace agler
