#pragma once

#include <span>
#include <vector>

#include "agler/poly.h"
#include "agler/sdpcore.h"

namespace agler {

/// phi = m * p~ / p on the bidisk, with m a unimodular monomial and p~ the
/// reflection of p under `profile`. The degree of phi is (k1, k2) with
/// k_r = deg_r m + profile_r.
struct RationalInner {
  Poly m;
  Poly p;
  DegreeProfile profile;
  int k1 = 0;
  int k2 = 0;
  Poly p_tilde;
  /// m * p~.
  Poly numerator;
  /// Torus grid points skipped by the inner check because |p| < 1e-8 there.
  int boundary_singular = 0;

  Complex operator()(std::span<const Complex> z) const;
  Complex operator()(std::initializer_list<Complex> z) const {
    return (*this)(std::span<const Complex>(z.begin(), z.size()));
  }
  Rational AsRational() const { return Rational(numerator, p); }
};

/// Validates the data and builds phi. Throws std::invalid_argument for a
/// malformed monomial, a profile that does not dominate deg p, or p(0) = 0;
/// throws std::domain_error when p vanishes on the open-bidisk validation grid
/// or |phi| deviates from 1 by more than 1e-8 on the 64x64 torus grid.
RationalInner MakeRationalInner(const Poly& m, const Poly& p,
                                const DegreeProfile& profile);

/// Convenience overload using the tight degree of p as profile.
RationalInner MakeRationalInner(const Poly& m, const Poly& p);

/// A kernel e(z)^T A conj(e(w)) / (p(z) conj(p(w))) over a monomial basis.
struct GramKernel {
  std::vector<Exponent> basis;
  HermMatrix a;
  Poly denom;

  Complex operator()(std::span<const Complex> z, std::span<const Complex> w) const;
  /// Monomial vector e(z) over `basis`.
  Eigen::VectorXcd MonomialVector(std::span<const Complex> z) const;
};

}  // namespace agler
