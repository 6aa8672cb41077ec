#include "agler/rational_inner.h"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace agler {

namespace {

constexpr int kTorusGrid = 64;
constexpr double kInnerTol = 1e-8;
constexpr double kSingularTol = 1e-8;

void RequireBidisk(const Poly& p, const char* name) {
  if (p.nvars() != 2) {
    throw std::invalid_argument(std::string("MakeRationalInner: ") + name +
                                " must have 2 variables");
  }
}

}  // namespace

Complex RationalInner::operator()(std::span<const Complex> z) const {
  return numerator(z) / p(z);
}

RationalInner MakeRationalInner(const Poly& m, const Poly& p,
                                const DegreeProfile& profile) {
  RequireBidisk(m, "m");
  RequireBidisk(p, "p");
  const Poly mt = m.Trim();
  int nonzero = 0;
  Complex lead = 0.0;
  for (const Complex& c : mt.coeffs()) {
    if (c != Complex(0.0)) {
      ++nonzero;
      lead = c;
    }
  }
  if (nonzero != 1 || std::abs(std::abs(lead) - 1.0) > 1e-12) {
    throw std::invalid_argument(
        "MakeRationalInner: m must be a monomial with a unimodular coefficient");
  }
  if (p.coeffs()[0] == Complex(0.0)) {
    throw std::invalid_argument("MakeRationalInner: p(0,0) must be nonzero");
  }

  RationalInner phi;
  phi.m = mt;
  phi.p = p.Trim();
  phi.profile = profile;
  phi.p_tilde = Reflect(phi.p, profile);
  phi.numerator = Mul(phi.m, phi.p_tilde);
  phi.k1 = mt.degrees()[0] + profile.degrees[0];
  phi.k2 = mt.degrees()[1] + profile.degrees[1];

  // Denominator must not vanish inside the bidisk.
  const double scale = phi.p.L1Norm();
  constexpr int kPhases = 32;
  for (double r1 : {0.0, 0.25, 0.5, 0.75, 0.9, 0.97, 0.99}) {
    for (double r2 : {0.0, 0.25, 0.5, 0.75, 0.9, 0.97, 0.99}) {
      for (int a = 0; a < kPhases; ++a) {
        for (int b = 0; b < kPhases; ++b) {
          const Complex z[2] = {std::polar(r1, 2 * std::numbers::pi * a / kPhases),
                                std::polar(r2, 2 * std::numbers::pi * b / kPhases)};
          if (std::abs(phi.p(z)) <= 1e-12 * scale) {
            throw std::domain_error(
                "MakeRationalInner: p vanishes inside the bidisk near (" +
                std::to_string(z[0].real()) + "," + std::to_string(z[0].imag()) +
                "), (" + std::to_string(z[1].real()) + "," +
                std::to_string(z[1].imag()) + ")");
          }
        }
      }
    }
  }

  for (int a = 0; a < kTorusGrid; ++a) {
    for (int b = 0; b < kTorusGrid; ++b) {
      const Complex z[2] = {std::polar(1.0, 2 * std::numbers::pi * a / kTorusGrid),
                            std::polar(1.0, 2 * std::numbers::pi * b / kTorusGrid)};
      const Complex den = phi.p(z);
      if (std::abs(den) < kSingularTol) {
        ++phi.boundary_singular;
        continue;
      }
      const double dev = std::abs(std::abs(phi.numerator(z) / den) - 1.0);
      if (dev > kInnerTol) {
        throw std::domain_error("MakeRationalInner: |phi| deviates from 1 by " +
                                std::to_string(dev) + " on the torus");
      }
    }
  }
  return phi;
}

RationalInner MakeRationalInner(const Poly& m, const Poly& p) {
  return MakeRationalInner(m, p, TightProfile(p));
}

Eigen::VectorXcd GramKernel::MonomialVector(std::span<const Complex> z) const {
  Eigen::VectorXcd e(static_cast<int>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    Complex v = 1.0;
    for (std::size_t i = 0; i < basis[k].size(); ++i) {
      for (int j = 0; j < basis[k][i]; ++j) v *= z[i];
    }
    e(static_cast<int>(k)) = v;
  }
  return e;
}

Complex GramKernel::operator()(std::span<const Complex> z,
                               std::span<const Complex> w) const {
  if (basis.empty()) return 0.0;
  const Eigen::VectorXcd ez = MonomialVector(z);
  const Eigen::VectorXcd ew = MonomialVector(w);
  const Complex num = ez.transpose() * a.matrix() * ew.conjugate();
  return num / (denom(z) * std::conj(denom(w)));
}

}  // namespace agler
