#include "agler/pick.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace agler {

std::string ToString(PickStatus status) {
  switch (status) {
    case PickStatus::kFeasible:
      return "feasible";
    case PickStatus::kInfeasibleEvidence:
      return "infeasible_evidence";
    case PickStatus::kUnknown:
      return "unknown";
  }
  return "unknown";
}

void ValidatePickData(const PickData& data, int max_n) {
  const std::size_t n = data.nodes.size();
  if (n == 0) throw std::invalid_argument("pick data: no nodes");
  if (data.targets.size() != n) {
    throw std::invalid_argument("pick data: nodes and targets differ in length");
  }
  if (static_cast<int>(n) > max_n) {
    throw std::invalid_argument("pick data: " + std::to_string(n) + " nodes exceeds the cap of " +
                                std::to_string(max_n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (data.nodes[i].size() != 2) {
      throw std::invalid_argument("pick data: node " + std::to_string(i) + " is not in C^2");
    }
    for (const Complex& c : data.nodes[i]) {
      if (!(std::abs(c) < 1.0)) {
        throw std::invalid_argument("pick data: node " + std::to_string(i) +
                                    " is not in the open bidisk");
      }
    }
    if (!(std::abs(data.targets[i]) <= 1.0)) {
      throw std::invalid_argument("pick data: target " + std::to_string(i) +
                                  " has modulus > 1");
    }
  }
}

HermMatrix PickTargetMatrix(const PickData& data) {
  const int n = static_cast<int>(data.targets.size());
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = 1.0 - data.targets[i] * std::conj(data.targets[j]);
  return HermMatrix(m);
}

Eigen::MatrixXcd PickNodeMatrix(const PickData& data, int axis) {
  const int n = static_cast<int>(data.nodes.size());
  Eigen::MatrixXcd c(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      c(i, j) = 1.0 - data.nodes[i][axis] * std::conj(data.nodes[j][axis]);
  return c;
}

double PickResidual(const PickData& data, const HermMatrix& k1, const HermMatrix& k2) {
  const Eigen::MatrixXcd c1 = PickNodeMatrix(data, 0);
  const Eigen::MatrixXcd c2 = PickNodeMatrix(data, 1);
  const Eigen::MatrixXcd lhs =
      c1.cwiseProduct(k2.matrix()) + c2.cwiseProduct(k1.matrix());
  return (lhs - PickTargetMatrix(data).matrix()).cwiseAbs().maxCoeff();
}

namespace {

// Y = v v* certifies infeasibility when conj(C_r) o Y is PSD for both axes
// and <Y, M> < 0: pairing the equations with Y gives a nonnegative left side.
std::optional<double> DualCertificate(const PickData& data, const HermMatrix& m) {
  const EigenDecomposition eig = HermitianEig(m);
  const Eigen::MatrixXcd c1 = PickNodeMatrix(data, 0).conjugate();
  const Eigen::MatrixXcd c2 = PickNodeMatrix(data, 1).conjugate();
  const double scale = std::max(1.0, m.FrobeniusNorm());
  for (int k = static_cast<int>(eig.values.size()) - 1; k >= 0; --k) {
    const double lambda = eig.values(k);
    if (lambda >= -1e-12 * scale) break;
    const Eigen::VectorXcd v = eig.vectors.col(k);
    const Eigen::MatrixXcd y = v * v.adjoint();
    const double tol = 1e-12 * scale;
    if (MinEigenvalue(HermMatrix(c1.cwiseProduct(y))) < -tol) continue;
    if (MinEigenvalue(HermMatrix(c2.cwiseProduct(y))) < -tol) continue;
    return lambda;
  }
  return std::nullopt;
}

// Searches for Hermitian Y = Y+ - Y- with W_r = conj(C_r) o Y PSD and
// <M, Y> = -1. A hit is re-verified: the diagonal equations bound tr K_r by
// T_r = sum_i M_ii / min_i C_r(i,i), so Y certifies infeasibility when
// <M, Y> < -sum_r max(0, -min eig W_r) T_r. Returns <M, Y> / ||Y||_F.
std::optional<double> DualSearch(const PickData& data, const HermMatrix& m,
                                 const FeasibilityConfig& solver) {
  const int n = static_cast<int>(data.nodes.size());
  const Eigen::MatrixXcd w1 = PickNodeMatrix(data, 0).conjugate();
  const Eigen::MatrixXcd w2 = PickNodeMatrix(data, 1).conjugate();
  // Unknowns: Y+, Y-, W1, W2.
  AffineConstraintSet cs({n, n, n, n});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      cs.AddEquation({{{2, i, j, 1.0}, {0, i, j, -w1(i, j)}, {1, i, j, w1(i, j)}}, 0.0});
      cs.AddEquation({{{3, i, j, 1.0}, {0, i, j, -w2(i, j)}, {1, i, j, w2(i, j)}}, 0.0});
    }
  }
  AffineEquation pairing;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      pairing.terms.push_back({0, j, i, m(i, j)});
      pairing.terms.push_back({1, j, i, -m(i, j)});
    }
  }
  pairing.target = -1.0;
  cs.AddEquation(std::move(pairing));
  const FeasibilityResult fr = AffinePsdFeasibility(cs, solver);
  if (fr.status != FeasibilityStatus::kFeasible) return std::nullopt;

  const Eigen::MatrixXcd y = fr.solution[0].matrix() - fr.solution[1].matrix();
  const double pair = (m.matrix().cwiseProduct(y.conjugate())).sum().real();
  double slack = 0.0;
  for (const Eigen::MatrixXcd* w : {&w1, &w2}) {
    const double neg = std::max(0.0, -MinEigenvalue(HermMatrix(Eigen::MatrixXcd(w->cwiseProduct(y)))));
    const double cmin = w->diagonal().real().minCoeff();
    const double trace_bound = m.matrix().diagonal().real().sum() / cmin;
    slack += neg * trace_bound;
  }
  if (!(pair < -slack - 1e-12 * y.norm())) return std::nullopt;
  return pair / y.norm();
}

std::string FormatDouble(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

PickResult PickFeasible(const PickData& data, const PickConfig& cfg) {
  ValidatePickData(data, cfg.max_n);
  const int n = static_cast<int>(data.nodes.size());
  PickResult out;

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (data.nodes[i] == data.nodes[j] && data.targets[i] != data.targets[j]) {
        out.status = PickStatus::kInfeasibleEvidence;
        out.obstruction = "nodes " + std::to_string(i) + " and " + std::to_string(j) +
                          " coincide but their targets differ";
        return out;
      }
    }
  }

  const HermMatrix m = PickTargetMatrix(data);
  if (const std::optional<double> lambda = DualCertificate(data, m)) {
    out.status = PickStatus::kInfeasibleEvidence;
    out.obstruction_eigenvalue = *lambda;
    out.obstruction =
        "Y = v v* with v the eigenvector of [1 - mu_i conj(mu_j)] for eigenvalue " +
        FormatDouble(*lambda) + " keeps both node-weighted Hadamard products PSD, "
        "so no pair of PSD kernels can match the targets";
    return out;
  }

  const Eigen::MatrixXcd c1 = PickNodeMatrix(data, 0);
  const Eigen::MatrixXcd c2 = PickNodeMatrix(data, 1);
  // Unknown 0 is K1 (weighted by axis 2), unknown 1 is K2 (weighted by axis 1).
  AffineConstraintSet cs({n, n});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      AffineEquation eq;
      eq.terms.push_back({0, i, j, c2(i, j)});
      eq.terms.push_back({1, i, j, c1(i, j)});
      eq.target = m(i, j);
      cs.AddEquation(std::move(eq));
    }
  }
  const FeasibilityResult fr = AffinePsdFeasibility(cs, cfg.solver);
  out.k1 = fr.solution[0];
  out.k2 = fr.solution[1];
  out.residual = PickResidual(data, out.k1, out.k2);
  out.min_eig_k1 = MinEigenvalue(out.k1);
  out.min_eig_k2 = MinEigenvalue(out.k2);
  out.iterations = fr.iterations;
  const bool ok = fr.status == FeasibilityStatus::kFeasible &&
                  out.residual <= cfg.residual_tol && out.min_eig_k1 >= -cfg.psd_tol &&
                  out.min_eig_k2 >= -cfg.psd_tol;
  if (ok) {
    out.status = PickStatus::kFeasible;
  } else if (fr.status == FeasibilityStatus::kInfeasibleEvidence) {
    out.status = PickStatus::kInfeasibleEvidence;
    out.obstruction = fr.note;
  } else if (const std::optional<double> pair = DualSearch(data, m, cfg.solver)) {
    out.status = PickStatus::kInfeasibleEvidence;
    out.obstruction = "Hermitian Y with both node-weighted Hadamard products PSD has "
                      "<[1 - mu_i conj(mu_j)], Y> / ||Y|| = " + FormatDouble(*pair) +
                      " < 0, which PSD kernels cannot produce";
  } else {
    out.status = PickStatus::kUnknown;
  }
  return out;
}

bool PickOneVar(const std::vector<Complex>& nodes, const std::vector<Complex>& targets,
                double tol) {
  if (nodes.size() != targets.size()) {
    throw std::invalid_argument("PickOneVar: nodes and targets differ in length");
  }
  for (const Complex& l : nodes) {
    if (!(std::abs(l) < 1.0)) throw std::invalid_argument("PickOneVar: node outside the disk");
  }
  const int n = static_cast<int>(nodes.size());
  if (n == 0) return true;
  Eigen::MatrixXcd p(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      p(i, j) = (1.0 - targets[i] * std::conj(targets[j])) /
                (1.0 - nodes[i] * std::conj(nodes[j]));
  return MinEigenvalue(HermMatrix(p)) >= -tol;
}

}  // namespace agler
