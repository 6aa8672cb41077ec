#pragma once

#include <optional>
#include <string>
#include <vector>

#include "agler/poly.h"
#include "agler/sdpcore.h"

namespace agler {

/// Interpolation data on the bidisk: node i is mapped to target i.
struct PickData {
  std::vector<Point> nodes;
  std::vector<Complex> targets;
};

struct PickConfig {
  FeasibilityConfig solver;
  int max_n = 64;
  double residual_tol = 1e-8;
  double psd_tol = 1e-9;
};

enum class PickStatus { kFeasible, kInfeasibleEvidence, kUnknown };

std::string ToString(PickStatus status);

struct PickResult {
  PickStatus status = PickStatus::kUnknown;
  /// Filled for kFeasible, and with the last iterate for kUnknown.
  HermMatrix k1;
  HermMatrix k2;
  double residual = 0.0;
  double min_eig_k1 = 0.0;
  double min_eig_k2 = 0.0;
  int iterations = 0;
  std::optional<std::string> obstruction;
  /// Most negative eigenvalue of [1 - mu_i conj(mu_j)] for the certificate.
  std::optional<double> obstruction_eigenvalue;
};

/// Throws std::invalid_argument for nodes outside the open bidisk, targets
/// outside the closed disk, mismatched lengths, or more than max_n points.
void ValidatePickData(const PickData& data, int max_n = 64);

/// [1 - mu_i conj(mu_j)].
HermMatrix PickTargetMatrix(const PickData& data);

/// [1 - lambda_r^i conj(lambda_r^j)] for axis r (zero-based).
Eigen::MatrixXcd PickNodeMatrix(const PickData& data, int axis);

/// max |C1(i,j) K2(i,j) + C2(i,j) K1(i,j) - M(i,j)| over all entries.
double PickResidual(const PickData& data, const HermMatrix& k1, const HermMatrix& k2);

/// Solves for PSD K1, K2 with
///   1 - mu_i conj(mu_j) = (1 - l1_i conj(l1_j)) K2(i,j) + (1 - l2_i conj(l2_j)) K1(i,j).
/// Duplicated nodes with different targets and dual certificates Y = v v*
/// (v a negative eigenvector of the target matrix) are checked before solving.
PickResult PickFeasible(const PickData& data, const PickConfig& cfg = {});

/// One-variable Pick test: the matrix [(1 - mu_i conj(mu_j)) / (1 - l_i conj(l_j))]
/// has minimum eigenvalue >= -tol.
bool PickOneVar(const std::vector<Complex>& nodes, const std::vector<Complex>& targets,
                double tol = 1e-10);

}  // namespace agler
