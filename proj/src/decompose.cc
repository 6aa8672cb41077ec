#include "agler/decompose.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace agler {

std::string ToString(DecomposeStatus status) {
  return status == DecomposeStatus::kFeasible ? "feasible" : "unknown";
}

std::string ToString(Verdict v) {
  switch (v) {
    case Verdict::kUnique:
      return "UNIQUE";
    case Verdict::kNotUnique:
      return "NOT_UNIQUE";
    case Verdict::kUnknown:
      return "UNKNOWN";
  }
  return "UNKNOWN";
}

std::string ToString(UniquenessMethod m) {
  switch (m) {
    case UniquenessMethod::kOneVariableRule:
      return "one_variable_rule";
    case UniquenessMethod::kStableDenominator:
      return "stable_denominator";
    case UniquenessMethod::kTorusZeroNullspace:
      return "torus_zero_nullspace";
  }
  return "unknown";
}

std::vector<Exponent> K1Basis(int k1, int k2) {
  std::vector<Exponent> b;
  for (int a = 0; a <= k1; ++a)
    for (int c = 0; c < k2; ++c) b.push_back({a, c});
  return b;
}

std::vector<Exponent> K2Basis(int k1, int k2) {
  std::vector<Exponent> b;
  for (int a = 0; a < k1; ++a)
    for (int c = 0; c <= k2; ++c) b.push_back({a, c});
  return b;
}

AffineConstraintSet AglerConstraints(const RationalInner& phi) {
  const int k1 = phi.k1;
  const int k2 = phi.k2;
  const std::vector<Exponent> b1 = K1Basis(k1, k2);
  const std::vector<Exponent> b2 = K2Basis(k1, k2);
  AffineConstraintSet cs({static_cast<int>(b1.size()), static_cast<int>(b2.size())});

  // Monomials z^alpha conj(w)^beta with alpha, beta <= (k1, k2).
  const int side = (k1 + 1) * (k2 + 1);
  auto mono = [&](const Exponent& e) { return e[0] * (k2 + 1) + e[1]; };
  std::vector<AffineEquation> eqs(static_cast<std::size_t>(side * side));
  for (int i = 0; i < side; ++i) {
    const Exponent ai{i / (k2 + 1), i % (k2 + 1)};
    for (int j = 0; j < side; ++j) {
      const Exponent aj{j / (k2 + 1), j % (k2 + 1)};
      eqs[i * side + j].target = phi.p.coeff(ai) * std::conj(phi.p.coeff(aj)) -
                                 phi.numerator.coeff(ai) * std::conj(phi.numerator.coeff(aj));
    }
  }
  auto add_block = [&](int unknown, const std::vector<Exponent>& basis, int axis) {
    for (std::size_t r = 0; r < basis.size(); ++r) {
      for (std::size_t c = 0; c < basis.size(); ++c) {
        const int ri = static_cast<int>(r);
        const int ci = static_cast<int>(c);
        eqs[mono(basis[r]) * side + mono(basis[c])].terms.push_back({unknown, ri, ci, 1.0});
        Exponent sr = basis[r];
        Exponent sc = basis[c];
        ++sr[axis];
        ++sc[axis];
        eqs[mono(sr) * side + mono(sc)].terms.push_back({unknown, ri, ci, -1.0});
      }
    }
  };
  add_block(0, b1, 1);  // (1 - z2 conj(w2)) K1
  add_block(1, b2, 0);  // (1 - z1 conj(w1)) K2
  for (AffineEquation& e : eqs) cs.AddEquation(std::move(e));
  return cs;
}

namespace {

int NumericalRank(const HermMatrix& a, double rel_tol) {
  if (a.n() == 0) return 0;
  const Eigen::VectorXd ev = HermitianEig(a).values;
  const double thresh = rel_tol * std::max(1.0, ev(0));
  int r = 0;
  for (int i = 0; i < ev.size(); ++i) r += ev(i) > thresh ? 1 : 0;
  return r;
}

std::vector<std::pair<Point, Point>> RandomPairs(int n, std::uint64_t seed) {
  const std::vector<Point> pts = RandomPolydiskPoints(2 * n, 2, seed);
  std::vector<std::pair<Point, Point>> pairs;
  for (int i = 0; i < n; ++i) pairs.emplace_back(pts[2 * i], pts[2 * i + 1]);
  return pairs;
}

}  // namespace

double IndependentResidual(const RationalInner& phi, const AglerPair& pair,
                           int pairs, std::uint64_t seed) {
  return AglerResidualPairs(phi.AsRational(), KernelExpr::Gram(pair.k1),
                            KernelExpr::Gram(pair.k2), RandomPairs(pairs, seed));
}

DecomposeResult Decompose(const RationalInner& phi, const DecomposeConfig& cfg) {
  if (phi.k1 == 0 && phi.k2 == 0) {
    DecomposeResult out;
    out.status = DecomposeStatus::kFeasible;
    out.pair.k1 = GramKernel{{}, HermMatrix(0), phi.p};
    out.pair.k2 = GramKernel{{}, HermMatrix(0), phi.p};
    out.pair.certificate.points_used = cfg.certificate_pairs;
    out.pair.certificate.residual_max =
        IndependentResidual(phi, out.pair, cfg.certificate_pairs, cfg.certificate_seed);
    out.pair.certificate.solver_status = "feasible";
    return out;
  }
  const AffineConstraintSet cs = AglerConstraints(phi);
  const FeasibilityResult fr = AffinePsdFeasibility(cs, cfg.solver);

  DecomposeResult out;
  AglerPair& pair = out.pair;
  pair.k1 = GramKernel{K1Basis(phi.k1, phi.k2), fr.solution[0], phi.p};
  pair.k2 = GramKernel{K2Basis(phi.k1, phi.k2), fr.solution[1], phi.p};

  AglerCertificate& cert = pair.certificate;
  cert.points_used = cfg.certificate_pairs;
  cert.residual_max = IndependentResidual(phi, pair, cfg.certificate_pairs, cfg.certificate_seed);
  cert.min_eig_k1 = MinEigenvalue(pair.k1.a);
  cert.min_eig_k2 = MinEigenvalue(pair.k2.a);
  cert.rank_k1 = NumericalRank(pair.k1.a, cfg.rank_tol);
  cert.rank_k2 = NumericalRank(pair.k2.a, cfg.rank_tol);
  cert.cap_k1 = phi.k2 * (phi.k1 + 1);
  cert.cap_k2 = phi.k1 * (phi.k2 + 1);
  cert.affine_residual = fr.affine_residual;
  cert.iterations = fr.iterations;
  cert.solver_status = ToString(fr.status);

  const bool certified = fr.status == FeasibilityStatus::kFeasible &&
                         cert.residual_max <= cfg.residual_tol &&
                         cert.min_eig_k1 >= -cfg.min_eig_tol &&
                         cert.min_eig_k2 >= -cfg.min_eig_tol &&
                         cert.rank_k1 <= cert.cap_k1 && cert.rank_k2 <= cert.cap_k2;
  out.status = certified ? DecomposeStatus::kFeasible : DecomposeStatus::kUnknown;
  return out;
}

std::vector<Poly> ExtractSos(const GramKernel& g, double rank_tol) {
  std::vector<Poly> out;
  if (g.basis.empty()) return out;
  const EigenDecomposition eig = HermitianEig(g.a);
  const double thresh = rank_tol * std::max(1.0, eig.values(0));
  for (int k = 0; k < eig.values.size(); ++k) {
    if (eig.values(k) <= thresh) continue;
    const double s = std::sqrt(eig.values(k));
    std::vector<std::pair<Exponent, Complex>> terms;
    for (std::size_t j = 0; j < g.basis.size(); ++j) {
      terms.emplace_back(g.basis[j], s * eig.vectors(static_cast<int>(j), k));
    }
    out.push_back(Poly::FromTerms(static_cast<int>(g.basis.front().size()), terms));
  }
  return out;
}

std::vector<Point> FindTorusZeros(const Poly& p, int grid, int refine_iters, double zero_tol) {
  if (p.nvars() != 2) throw std::invalid_argument("FindTorusZeros: p must be bivariate");
  const double h = 2.0 * std::numbers::pi / grid;
  std::vector<double> mod(static_cast<std::size_t>(grid * grid));
  for (int a = 0; a < grid; ++a) {
    for (int b = 0; b < grid; ++b) {
      const Complex z[2] = {std::polar(1.0, a * h), std::polar(1.0, b * h)};
      mod[a * grid + b] = std::abs(p(z));
    }
  }
  const Poly d1 = p.Derivative(0);
  const Poly d2 = p.Derivative(1);
  std::vector<Point> zeros;
  std::vector<std::pair<double, double>> angles;
  for (int a = 0; a < grid; ++a) {
    for (int b = 0; b < grid; ++b) {
      const double v = mod[a * grid + b];
      bool local_min = true;
      for (int da = -1; da <= 1 && local_min; ++da) {
        for (int db = -1; db <= 1; ++db) {
          if (da == 0 && db == 0) continue;
          const int na = (a + da + grid) % grid;
          const int nb = (b + db + grid) % grid;
          if (mod[na * grid + nb] < v) {
            local_min = false;
            break;
          }
        }
      }
      if (!local_min) continue;
      double t1 = a * h;
      double t2 = b * h;
      double best = v;
      for (int it = 0; it < refine_iters && best > 0.0; ++it) {
        const Complex z[2] = {std::polar(1.0, t1), std::polar(1.0, t2)};
        const Complex f = p(z);
        const Complex g1 = Complex(0.0, 1.0) * z[0] * d1(z);
        const Complex g2 = Complex(0.0, 1.0) * z[1] * d2(z);
        Eigen::Matrix2d jac;
        jac << g1.real(), g2.real(), g1.imag(), g2.imag();
        const Eigen::Vector2d step =
            jac.completeOrthogonalDecomposition().solve(Eigen::Vector2d(-f.real(), -f.imag()));
        bool improved = false;
        for (double s = 1.0; s > 1e-9; s *= 0.5) {
          const Complex zt[2] = {std::polar(1.0, t1 + s * step(0)),
                                 std::polar(1.0, t2 + s * step(1))};
          const double vt = std::abs(p(zt));
          if (vt < best) {
            best = vt;
            t1 += s * step(0);
            t2 += s * step(1);
            improved = true;
            break;
          }
        }
        if (!improved) break;
      }
      if (best >= zero_tol) continue;
      auto wrap = [](double t) {
        t = std::fmod(t, 2.0 * std::numbers::pi);
        return t < 0 ? t + 2.0 * std::numbers::pi : t;
      };
      t1 = wrap(t1);
      t2 = wrap(t2);
      bool dup = false;
      for (const auto& [u1, u2] : angles) {
        auto dist = [](double x, double y) {
          const double d = std::abs(x - y);
          return std::min(d, 2.0 * std::numbers::pi - d);
        };
        if (dist(u1, t1) < 1e-6 && dist(u2, t2) < 1e-6) dup = true;
      }
      if (dup) continue;
      angles.emplace_back(t1, t2);
      zeros.push_back({std::polar(1.0, t1), std::polar(1.0, t2)});
    }
  }
  return zeros;
}

UniquenessReport UniquenessTest(const RationalInner& phi, const UniquenessConfig& cfg) {
  UniquenessReport rep;
  if (phi.k1 == 0 || phi.k2 == 0) {
    rep.verdict = Verdict::kUnique;
    rep.method = UniquenessMethod::kOneVariableRule;
    rep.diagnostics = "phi depends on one variable only";
    return rep;
  }
  const StabilityCertificate stab = IsStable(phi.p, cfg.stability);
  if (stab.stable) {
    rep.verdict = Verdict::kNotUnique;
    rep.method = UniquenessMethod::kStableDenominator;
    rep.diagnostics = "p has no zeros on the closed bidisk (min |p| = " +
                      std::to_string(stab.min_modulus) + ")";
    return rep;
  }

  rep.method = UniquenessMethod::kTorusZeroNullspace;
  rep.torus_zeros = FindTorusZeros(phi.p, cfg.torus_grid, cfg.refine_iters, cfg.zero_tol);
  if (rep.torus_zeros.empty()) {
    rep.verdict = Verdict::kUnknown;
    rep.diagnostics = "p is not certified stable but no torus zero was located";
    if (stab.witness) {
      rep.diagnostics += "; stability witness has |p| = " + std::to_string(stab.witness_modulus);
    }
    return rep;
  }

  // Evaluation of q = sum_{a<k1, b<k2} q_ab z1^a z2^b at every torus zero.
  const std::vector<Exponent> basis = [&] {
    std::vector<Exponent> b;
    for (int a = 0; a < phi.k1; ++a)
      for (int c = 0; c < phi.k2; ++c) b.push_back({a, c});
    return b;
  }();
  const int nz = static_cast<int>(rep.torus_zeros.size());
  const int nb = static_cast<int>(basis.size());
  Eigen::MatrixXcd vander(nz, nb);
  for (int r = 0; r < nz; ++r) {
    for (int c = 0; c < nb; ++c) {
      vander(r, c) = std::pow(rep.torus_zeros[r][0], basis[c][0]) *
                     std::pow(rep.torus_zeros[r][1], basis[c][1]);
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(vander, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > cfg.nullspace_tol * std::max(1.0, sv(0))) ++rank;
  }
  rep.nullity = nb - rank;
  for (int k = rank; k < nb; ++k) {
    std::vector<std::pair<Exponent, Complex>> terms;
    for (int c = 0; c < nb; ++c) terms.emplace_back(basis[c], svd.matrixV()(c, k));
    rep.basis_of_l.push_back(Poly::FromTerms(2, terms));
  }
  rep.diagnostics = std::to_string(nz) + " torus zeros located";
  rep.verdict = rep.nullity == 0 ? Verdict::kUnique : Verdict::kUnknown;
  return rep;
}

RationalInner MakeUniqueExample(int k1, int k2) {
  if (k1 < 1 || k2 < 1) {
    throw std::invalid_argument("MakeUniqueExample: k1 and k2 must be >= 1");
  }
  const Poly p = Poly::FromTerms(
      2, {{{0, 0}, 3.0}, {{k1, 0}, -1.0}, {{0, k2}, -1.0}, {{k1, k2}, -1.0}});
  return MakeRationalInner(Poly::Constant(2, 1.0), p, DegreeProfile{{k1, k2}});
}

SupportReport SupportCheck(const RationalInner& phi, const std::vector<int>& truncation,
                           double tol) {
  if (truncation.size() != 2 || truncation[0] < phi.k1 + 2 || truncation[1] < phi.k2 + 2) {
    throw std::invalid_argument("SupportCheck: truncation must be at least (k1+2, k2+2)");
  }
  if (!IsStable(phi.p).stable) {
    throw std::domain_error(
        "SupportCheck: not applicable, the denominator is not certified stable");
  }
  SupportReport rep;
  rep.truncation = truncation;
  const CoeffGrid series = SeriesInverse(phi.p, truncation).MulPoly(phi.numerator);
  const CoeffGrid g1 = BackwardShift(series, 0).MulPoly(phi.p);
  const CoeffGrid g2 = BackwardShift(series, 1).MulPoly(phi.p);
  for (std::size_t k = 0; k < g1.size(); ++k) {
    if (g1.ExponentAt(k)[0] >= phi.k1) {
      rep.max_forbidden_x1 = std::max(rep.max_forbidden_x1, std::abs(g1.coeffs()[k]));
    }
  }
  for (std::size_t k = 0; k < g2.size(); ++k) {
    if (g2.ExponentAt(k)[1] >= phi.k2) {
      rep.max_forbidden_x2 = std::max(rep.max_forbidden_x2, std::abs(g2.coeffs()[k]));
    }
  }
  rep.max_forbidden = std::max(rep.max_forbidden_x1, rep.max_forbidden_x2);
  rep.pass = rep.max_forbidden <= tol;
  return rep;
}

}  // namespace agler
