#include "agler/sdpcore.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/SparseCore>

namespace agler {

HermMatrix::HermMatrix(int n) : m_(Eigen::MatrixXcd::Zero(n, n)) {}

HermMatrix::HermMatrix(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("HermMatrix: matrix is not square");
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermMatrix HermMatrix::Identity(int n) {
  return HermMatrix(Eigen::MatrixXcd::Identity(n, n));
}

EigenDecomposition HermitianEig(const HermMatrix& m, int max_sweeps) {
  const int n = m.n();
  Eigen::MatrixXcd a = m.matrix();
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(n, n);
  const double scale = a.norm();
  const double eps = std::numeric_limits<double>::epsilon();

  auto off_norm2 = [&]() {
    double s = 0.0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        if (i != j) s += std::norm(a(i, j));
    return s;
  };

  int sweep = 0;
  while (off_norm2() > (eps * scale) * (eps * scale)) {
    if (sweep == max_sweeps) {
      throw ConvergenceError("HermitianEig: no convergence after " +
                                 std::to_string(max_sweeps) + " sweeps",
                             sweep);
    }
    ++sweep;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Skip entries already negligible against both diagonals.
        if (mag < eps * 1e-3 * std::sqrt(std::abs(app * aqq)) &&
            mag < eps * 1e-3 * scale) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const Complex phase = apq / mag;
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // G = diag(1, conj(phase)) * [[c, s], [-s, c]] on the (p, q) plane.
        const Complex gpp = c;
        const Complex gpq = s;
        const Complex gqp = -s * std::conj(phase);
        const Complex gqq = c * std::conj(phase);
        for (int k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * gpp + akq * gqp;
          a(k, q) = akp * gpq + akq * gqq;
        }
        for (int k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
          a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (int k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * gpp + vkq * gqp;
          v(k, q) = vkp * gpq + vkq * gqq;
        }
      }
    }
  }

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return a(i, i).real() > a(j, j).real();
  });
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]).real();
    out.vectors.col(k) = v.col(order[k]);
  }
  out.sweeps = sweep;
  return out;
}

double MinEigenvalue(const HermMatrix& m) {
  if (m.n() == 0) return 0.0;
  return HermitianEig(m).values(m.n() - 1);
}

HermMatrix PsdProject(const HermMatrix& m) {
  if (m.n() == 0) return m;
  const EigenDecomposition eig = HermitianEig(m);
  const Eigen::VectorXd clipped = eig.values.cwiseMax(0.0);
  return HermMatrix(eig.vectors * clipped.cast<Complex>().asDiagonal() *
                    eig.vectors.adjoint());
}

double SpectralNorm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  const HermMatrix gram(m.adjoint() * m);
  return std::sqrt(std::max(0.0, HermitianEig(gram).values(0)));
}

std::string ToString(FeasibilityStatus status) {
  switch (status) {
    case FeasibilityStatus::kFeasible:
      return "feasible";
    case FeasibilityStatus::kMaxIters:
      return "max_iters";
    case FeasibilityStatus::kInfeasibleEvidence:
      return "infeasible_evidence";
  }
  return "unknown";
}

AffineConstraintSet::AffineConstraintSet(std::vector<int> sizes)
    : sizes_(std::move(sizes)) {
  for (int s : sizes_) {
    if (s < 0) throw std::invalid_argument("AffineConstraintSet: negative size");
  }
}

void AffineConstraintSet::AddEquation(AffineEquation eq) {
  for (const AffineTerm& t : eq.terms) {
    if (t.unknown < 0 || t.unknown >= static_cast<int>(sizes_.size())) {
      throw std::out_of_range("AffineConstraintSet: unknown index out of range");
    }
    const int n = sizes_[t.unknown];
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n) {
      throw std::out_of_range("AffineConstraintSet: entry index out of range");
    }
  }
  equations_.push_back(std::move(eq));
}

std::vector<Complex> AffineConstraintSet::Residual(
    const std::vector<HermMatrix>& x) const {
  std::vector<Complex> r;
  r.reserve(equations_.size());
  for (const AffineEquation& eq : equations_) {
    Complex acc = -eq.target;
    for (const AffineTerm& t : eq.terms) acc += t.weight * x[t.unknown](t.row, t.col);
    r.push_back(acc);
  }
  return r;
}

double AffineConstraintSet::MaxResidual(const std::vector<HermMatrix>& x) const {
  double m = 0.0;
  for (const Complex& r : Residual(x)) m = std::max(m, std::abs(r));
  return m;
}

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Real coordinates of a Hermitian tuple, isometric for the Frobenius norm:
// diagonal entries, then sqrt(2) * (Re, Im) of each strict upper entry.
class ParamLayout {
 public:
  explicit ParamLayout(const std::vector<int>& sizes) : sizes_(sizes) {
    int off = 0;
    for (int n : sizes_) {
      offsets_.push_back(off);
      off += n * n;
    }
    total_ = off;
  }

  int total() const { return total_; }

  int Diag(int k, int i) const { return offsets_[k] + i; }
  // Index of the real part of the (i, j), i < j entry; the imaginary part
  // follows it.
  int Upper(int k, int i, int j) const {
    const int n = sizes_[k];
    const int before = i * n - i * (i + 1) / 2 + (j - i - 1);
    return offsets_[k] + n + 2 * before;
  }

  Eigen::VectorXd ToParams(const std::vector<HermMatrix>& x) const {
    Eigen::VectorXd v(total_);
    for (std::size_t k = 0; k < sizes_.size(); ++k) {
      const int n = sizes_[k];
      for (int i = 0; i < n; ++i) {
        v(Diag(k, i)) = x[k](i, i).real();
        for (int j = i + 1; j < n; ++j) {
          v(Upper(k, i, j)) = kSqrt2 * x[k](i, j).real();
          v(Upper(k, i, j) + 1) = kSqrt2 * x[k](i, j).imag();
        }
      }
    }
    return v;
  }

  std::vector<HermMatrix> FromParams(const Eigen::VectorXd& v) const {
    std::vector<HermMatrix> x;
    for (std::size_t k = 0; k < sizes_.size(); ++k) {
      const int n = sizes_[k];
      Eigen::MatrixXcd m(n, n);
      for (int i = 0; i < n; ++i) {
        m(i, i) = v(Diag(k, i));
        for (int j = i + 1; j < n; ++j) {
          const Complex e(v(Upper(k, i, j)), v(Upper(k, i, j) + 1));
          m(i, j) = e / kSqrt2;
          m(j, i) = std::conj(e) / kSqrt2;
        }
      }
      x.emplace_back(m);
    }
    return x;
  }

  // Real and imaginary rows contributed by weight * X_k(r, c).
  void AppendTerm(const AffineTerm& t, int row_re,
                  std::vector<Eigen::Triplet<double>>& out) const {
    const double wr = t.weight.real();
    const double wi = t.weight.imag();
    const int row_im = row_re + 1;
    if (t.row == t.col) {
      const int d = Diag(t.unknown, t.row);
      out.emplace_back(row_re, d, wr);
      out.emplace_back(row_im, d, wi);
      return;
    }
    const bool upper = t.row < t.col;
    const int a = upper ? Upper(t.unknown, t.row, t.col)
                        : Upper(t.unknown, t.col, t.row);
    const int b = a + 1;
    // X(r, c) = (p_a + i s p_b) / sqrt2 with s = +1 above the diagonal.
    const double s = upper ? 1.0 : -1.0;
    out.emplace_back(row_re, a, wr / kSqrt2);
    out.emplace_back(row_re, b, -s * wi / kSqrt2);
    out.emplace_back(row_im, a, wi / kSqrt2);
    out.emplace_back(row_im, b, s * wr / kSqrt2);
  }

 private:
  std::vector<int> sizes_;
  std::vector<int> offsets_;
  int total_ = 0;
};

struct RealSystem {
  Eigen::SparseMatrix<double> a;
  Eigen::VectorXd b;
};

RealSystem BuildRealSystem(const AffineConstraintSet& cs,
                           const ParamLayout& layout) {
  const int m = static_cast<int>(cs.equations().size());
  std::vector<Eigen::Triplet<double>> trip;
  RealSystem sys;
  sys.b.resize(2 * m);
  for (int e = 0; e < m; ++e) {
    const AffineEquation& eq = cs.equations()[e];
    for (const AffineTerm& t : eq.terms) layout.AppendTerm(t, 2 * e, trip);
    sys.b(2 * e) = eq.target.real();
    sys.b(2 * e + 1) = eq.target.imag();
  }
  sys.a.resize(2 * m, layout.total());
  sys.a.setFromTriplets(trip.begin(), trip.end());
  return sys;
}

struct Pseudoinverse {
  Eigen::MatrixXd pinv;
  int rank = 0;
};

Pseudoinverse ComputePseudoinverse(const Eigen::MatrixXd& a) {
  Pseudoinverse out;
  if (a.size() == 0) {
    out.pinv = Eigen::MatrixXd::Zero(a.cols(), a.rows());
    return out;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double tol = sv.size() > 0 ? sv(0) * 1e-11 * std::max(a.rows(), a.cols()) : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol) {
      inv(i) = 1.0 / sv(i);
      ++out.rank;
    }
  }
  out.pinv = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
  return out;
}

// Connected blocks of the equation/parameter incidence graph; the affine
// projection factors over them.
struct Component {
  std::vector<int> params;
  std::vector<int> rows;  // real rows
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::MatrixXd pinv;
  int rank = 0;
};

class AffineProjector {
 public:
  AffineProjector(const AffineConstraintSet& cs, const ParamLayout& layout)
      : sys_(BuildRealSystem(cs, layout)) {
    const int p = layout.total();
    std::vector<int> parent(static_cast<std::size_t>(p));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int i) {
      while (parent[i] != i) i = parent[i] = parent[parent[i]];
      return i;
    };
    const Eigen::SparseMatrix<double, Eigen::RowMajor> rows(sys_.a);
    std::vector<int> row_anchor(static_cast<std::size_t>(rows.rows()), -1);
    for (int r = 0; r < rows.rows(); ++r) {
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(rows, r); it; ++it) {
        if (row_anchor[r] < 0) {
          row_anchor[r] = it.col();
        } else {
          parent[find(it.col())] = find(row_anchor[r]);
        }
      }
    }
    std::vector<int> comp_of(static_cast<std::size_t>(p), -1);
    std::vector<int> root_comp(static_cast<std::size_t>(p), -1);
    std::vector<bool> constrained(static_cast<std::size_t>(p), false);
    for (int r = 0; r < rows.rows(); ++r) {
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(rows, r); it; ++it) {
        constrained[it.col()] = true;
      }
    }
    for (int i = 0; i < p; ++i) {
      if (!constrained[i]) {
        ++free_params_;
        continue;
      }
      const int root = find(i);
      if (root_comp[root] < 0) {
        root_comp[root] = static_cast<int>(comps_.size());
        comps_.emplace_back();
      }
      comp_of[i] = root_comp[root];
      comps_[comp_of[i]].params.push_back(i);
    }
    for (int r = 0; r < rows.rows(); ++r) {
      if (row_anchor[r] < 0) {
        empty_rows_.push_back(r);
        continue;
      }
      comps_[comp_of[row_anchor[r]]].rows.push_back(r);
    }
    for (Component& c : comps_) {
      std::vector<int> local(static_cast<std::size_t>(p), -1);
      for (std::size_t k = 0; k < c.params.size(); ++k) local[c.params[k]] = static_cast<int>(k);
      c.a = Eigen::MatrixXd::Zero(static_cast<int>(c.rows.size()), static_cast<int>(c.params.size()));
      c.b.resize(static_cast<int>(c.rows.size()));
      for (std::size_t k = 0; k < c.rows.size(); ++k) {
        const int r = c.rows[k];
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(rows, r); it; ++it) {
          c.a(static_cast<int>(k), local[it.col()]) += it.value();
        }
        c.b(static_cast<int>(k)) = sys_.b(r);
      }
      Pseudoinverse pi = ComputePseudoinverse(c.a);
      c.pinv = std::move(pi.pinv);
      c.rank = pi.rank;
      rank_ += c.rank;
    }
  }

  Eigen::VectorXd Project(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y = x;
    for (const Component& c : comps_) {
      Eigen::VectorXd xc(static_cast<int>(c.params.size()));
      for (std::size_t k = 0; k < c.params.size(); ++k) xc(static_cast<int>(k)) = x(c.params[k]);
      xc -= c.pinv * (c.a * xc - c.b);
      for (std::size_t k = 0; k < c.params.size(); ++k) y(c.params[k]) = xc(static_cast<int>(k));
    }
    return y;
  }

  int rank() const { return rank_; }
  int nullity(int total) const { return total - rank_; }
  const RealSystem& system() const { return sys_; }

 private:
  RealSystem sys_;
  std::vector<Component> comps_;
  std::vector<int> empty_rows_;
  int free_params_ = 0;
  int rank_ = 0;
};

double MinEig(const std::vector<HermMatrix>& x) {
  double m = std::numeric_limits<double>::infinity();
  for (const HermMatrix& h : x) {
    if (h.n() > 0) m = std::min(m, MinEigenvalue(h));
  }
  return std::isinf(m) ? 0.0 : m;
}

constexpr int kPolishParamLimit = 4096;

// Gauss-Newton on the factors of X_k = L_k L_k^*; every iterate is PSD, so
// only the equations have to be driven to zero.
bool FactorNewton(std::vector<Eigen::MatrixXcd> l, const AffineConstraintSet& cs,
                  const ParamLayout& layout, const RealSystem& sys,
                  const FeasibilityConfig& cfg, std::vector<HermMatrix>& out) {
  int nparam = 0;
  for (const Eigen::MatrixXcd& f : l) nparam += 2 * static_cast<int>(f.size());
  if (nparam > kPolishParamLimit) return false;
  auto assemble = [](const std::vector<Eigen::MatrixXcd>& f) {
    std::vector<HermMatrix> xs;
    for (const Eigen::MatrixXcd& m : f) xs.emplace_back(Eigen::MatrixXcd(m * m.adjoint()));
    return xs;
  };
  auto residual = [&](const std::vector<HermMatrix>& xs) -> Eigen::VectorXd {
    return sys.a * layout.ToParams(xs) - sys.b;
  };
  std::vector<HermMatrix> xs = assemble(l);
  Eigen::VectorXd r = residual(xs);
  // A factor heading to a lower rank makes the steps linear; the columns it
  // sheds are dropped between rounds.
  for (int round = 0; round < 4; ++round) {
    if (round > 0) {
      double smax = 0.0;
      std::vector<Eigen::JacobiSVD<Eigen::MatrixXcd>> svds;
      for (const Eigen::MatrixXcd& f : l) {
        if (f.size() == 0) {
          svds.emplace_back();
          continue;
        }
        svds.emplace_back(f, Eigen::ComputeThinU);
        smax = std::max(smax, svds.back().singularValues()(0));
      }
      bool dropped = false;
      for (std::size_t k = 0; k < l.size(); ++k) {
        if (l[k].size() == 0) continue;
        const Eigen::VectorXd& sv = svds[k].singularValues();
        int keep = 0;
        while (keep < sv.size() && sv(keep) > 1e-2 * smax) ++keep;
        if (keep < l[k].cols()) {
          dropped = true;
          l[k] = svds[k].matrixU().leftCols(keep) * sv.head(keep).asDiagonal();
        }
      }
      if (!dropped) break;
      nparam = 0;
      for (const Eigen::MatrixXcd& f : l) nparam += 2 * static_cast<int>(f.size());
      xs = assemble(l);
      r = residual(xs);
    }
    for (int it = 0; it < 30 && nparam > 0; ++it) {
      if (cs.MaxResidual(xs) <= 0.1 * cfg.eps_affine) break;
      Eigen::MatrixXd jac(r.size(), nparam);
      int col = 0;
      for (std::size_t k = 0; k < l.size(); ++k) {
        const Eigen::MatrixXcd& f = l[k];
        for (Eigen::Index c = 0; c < f.cols(); ++c) {
          for (Eigen::Index i = 0; i < f.rows(); ++i) {
            for (const Complex unit : {Complex(1.0, 0.0), Complex(0.0, 1.0)}) {
              Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(f.rows(), f.cols());
              e(i, c) = unit;
              std::vector<HermMatrix> dx;
              for (std::size_t q = 0; q < l.size(); ++q) {
                dx.emplace_back(q == k ? Eigen::MatrixXcd(e * f.adjoint() + f * e.adjoint())
                                       : Eigen::MatrixXcd::Zero(l[q].rows(), l[q].rows()));
              }
              jac.col(col++) = sys.a * layout.ToParams(dx);
            }
          }
        }
      }
      const Eigen::VectorXd step = jac.completeOrthogonalDecomposition().solve(-r);
      bool improved = false;
      for (double s = 1.0; s > 1e-6; s *= 0.5) {
        std::vector<Eigen::MatrixXcd> trial = l;
        int pos = 0;
        for (Eigen::MatrixXcd& f : trial) {
          for (Eigen::Index c = 0; c < f.cols(); ++c) {
            for (Eigen::Index i = 0; i < f.rows(); ++i) {
              f(i, c) += s * Complex(step(pos), step(pos + 1));
              pos += 2;
            }
          }
        }
        std::vector<HermMatrix> txs = assemble(trial);
        Eigen::VectorXd tr = residual(txs);
        if (tr.norm() < r.norm()) {
          l = std::move(trial);
          xs = std::move(txs);
          r = std::move(tr);
          improved = true;
          break;
        }
      }
      if (!improved) break;
    }
    if (cs.MaxResidual(xs) <= 0.1 * cfg.eps_affine) break;
  }
  if (cs.MaxResidual(xs) <= cfg.eps_affine && MinEig(xs) >= -cfg.eps_psd) {
    out = std::move(xs);
    return true;
  }
  return false;
}

// Solves the equations restricted to the face {V Y V* : Y Hermitian} spanned
// by the dominant eigenvectors of each block, moving Y as little as possible.
// Returns true and overwrites `out` when the face solution meets both
// tolerances.
bool PolishOnFace(const std::vector<HermMatrix>& x,
                  const AffineConstraintSet& cs, const ParamLayout& layout,
                  const RealSystem& sys, const FeasibilityConfig& cfg,
                  std::vector<HermMatrix>& out) {
  if (layout.total() > kPolishParamLimit) return false;
  std::vector<EigenDecomposition> eigs;
  double scale = 0.0;
  for (const HermMatrix& h : x) {
    eigs.push_back(h.n() > 0 ? HermitianEig(h) : EigenDecomposition{});
    if (h.n() > 0) scale = std::max(scale, std::abs(eigs.back().values(0)));
  }
  scale = std::max(scale, 1e-300);
  for (double rel : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-8}) {
    std::vector<Eigen::MatrixXcd> bases;
    std::vector<int> ranks;
    for (std::size_t k = 0; k < x.size(); ++k) {
      int r = 0;
      const int n = x[k].n();
      while (r < n && eigs[k].values(r) > rel * scale) ++r;
      ranks.push_back(r);
      bases.push_back(n > 0 ? Eigen::MatrixXcd(eigs[k].vectors.leftCols(r))
                            : Eigen::MatrixXcd(0, 0));
    }
    const ParamLayout reduced(ranks);
    // Columns of B map reduced coordinates to full coordinates.
    Eigen::MatrixXd basis_map = Eigen::MatrixXd::Zero(layout.total(), reduced.total());
    std::vector<HermMatrix> unit;
    for (int r : ranks) unit.emplace_back(r);
    for (int j = 0; j < reduced.total(); ++j) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(reduced.total());
      e(j) = 1.0;
      const std::vector<HermMatrix> y = reduced.FromParams(e);
      std::vector<HermMatrix> full;
      for (std::size_t k = 0; k < x.size(); ++k) {
        full.emplace_back(x[k].n() > 0
                              ? Eigen::MatrixXcd(bases[k] * y[k].matrix() * bases[k].adjoint())
                              : Eigen::MatrixXcd(0, 0));
      }
      basis_map.col(j) = layout.ToParams(full);
    }
    std::vector<HermMatrix> y0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      y0.emplace_back(x[k].n() > 0
                          ? Eigen::MatrixXcd(bases[k].adjoint() * x[k].matrix() * bases[k])
                          : Eigen::MatrixXcd(0, 0));
    }
    Eigen::VectorXd y = reduced.ToParams(y0);
    const Eigen::MatrixXd a_red = sys.a * basis_map;
    const Pseudoinverse pi = ComputePseudoinverse(a_red);
    y -= pi.pinv * (a_red * y - sys.b);
    // One refinement step for the least-squares correction.
    y -= pi.pinv * (a_red * y - sys.b);
    std::vector<HermMatrix> candidate = layout.FromParams(basis_map * y);
    if (cs.MaxResidual(candidate) <= cfg.eps_affine &&
        MinEig(candidate) >= -cfg.eps_psd) {
      out = std::move(candidate);
      return true;
    }
    std::vector<Eigen::MatrixXcd> factors;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const int n = x[k].n();
      Eigen::VectorXd root(ranks[k]);
      for (int i = 0; i < ranks[k]; ++i) root(i) = std::sqrt(std::max(eigs[k].values(i), 0.0));
      factors.push_back(n > 0 ? Eigen::MatrixXcd(bases[k] * root.asDiagonal())
                              : Eigen::MatrixXcd(0, 0));
    }
    if (FactorNewton(std::move(factors), cs, layout, sys, cfg, out)) return true;
  }
  return false;
}

}  // namespace

std::vector<HermMatrix> AffineProject(const AffineConstraintSet& constraints,
                                      const std::vector<HermMatrix>& x) {
  const ParamLayout layout(constraints.sizes());
  const AffineProjector projector(constraints, layout);
  return layout.FromParams(projector.Project(layout.ToParams(x)));
}

FeasibilityResult AffinePsdFeasibility(const AffineConstraintSet& constraints,
                                       const FeasibilityConfig& cfg) {
  const ParamLayout layout(constraints.sizes());
  const AffineProjector projector(constraints, layout);
  FeasibilityResult result;
  result.parameter_count = layout.total();
  result.constraint_rank = projector.rank();

  auto finish = [&](FeasibilityStatus status, std::vector<HermMatrix> x, int iters) {
    result.status = status;
    result.affine_residual = constraints.MaxResidual(x);
    result.min_eig = MinEig(x);
    result.iterations = iters;
    result.solution = std::move(x);
    return result;
  };

  // Scaled identities, scale chosen by least squares against the targets.
  std::vector<HermMatrix> ident;
  for (int n : constraints.sizes()) ident.push_back(HermMatrix::Identity(n));
  const std::vector<Complex> li = constraints.Residual(ident);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t e = 0; e < li.size(); ++e) {
    const Complex l = li[e] + constraints.equations()[e].target;
    num += (std::conj(l) * constraints.equations()[e].target).real();
    den += std::norm(l);
  }
  const double s = den > 0.0 ? num / den : 1.0;
  Eigen::VectorXd x = layout.ToParams(ident) * s;

  if (projector.nullity(layout.total()) == 0) {
    // The equations determine a single point.
    std::vector<HermMatrix> only = layout.FromParams(projector.Project(x));
    const double res = constraints.MaxResidual(only);
    const double me = MinEig(only);
    if (res <= cfg.eps_affine && me >= -cfg.eps_psd) {
      return finish(FeasibilityStatus::kFeasible, std::move(only), 0);
    }
    if (res <= cfg.eps_affine) {
      result.note = "equations determine a unique point, which is not PSD";
      return finish(FeasibilityStatus::kInfeasibleEvidence, std::move(only), 0);
    }
    result.note = "equations are inconsistent";
    return finish(FeasibilityStatus::kMaxIters, std::move(only), 0);
  }

  std::vector<HermMatrix> last = layout.FromParams(projector.Project(x));
  int it = 0;
  while (it < cfg.max_iters) {
    ++it;
    const Eigen::VectorXd xa = projector.Project(x);
    last = layout.FromParams(xa);
    if (constraints.MaxResidual(last) <= cfg.eps_affine &&
        MinEig(last) >= -cfg.eps_psd) {
      return finish(FeasibilityStatus::kFeasible, std::move(last), it);
    }
    std::vector<HermMatrix> polished;
    if (cfg.polish_every > 0 && it % cfg.polish_every == 0 &&
        PolishOnFace(last, constraints, layout, projector.system(), cfg, polished)) {
      result.polished = true;
      return finish(FeasibilityStatus::kFeasible, std::move(polished), it);
    }
    std::vector<HermMatrix> psd;
    for (const HermMatrix& h : last) psd.push_back(PsdProject(h));
    const Eigen::VectorXd xp = layout.ToParams(psd);
    const double step = (xp - x).norm();
    x = xp;
    if (step <= 1e-14 * (1.0 + x.norm())) {
      result.stalled = true;
      break;
    }
  }
  std::vector<HermMatrix> polished;
  if (cfg.polish_every > 0 &&
      PolishOnFace(last, constraints, layout, projector.system(), cfg, polished)) {
    result.polished = true;
    return finish(FeasibilityStatus::kFeasible, std::move(polished), it);
  }
  return finish(FeasibilityStatus::kMaxIters, std::move(last), it);
}

}  // namespace agler
