#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace agler {

using Complex = std::complex<double>;
using Exponent = std::vector<int>;
using Point = std::vector<Complex>;

/// Reference degrees (j_1, ..., j_d) used by Reflect().
struct DegreeProfile {
  std::vector<int> degrees;
};

/// A d-variate complex polynomial stored on a dense coefficient grid.
///
/// Coefficients are row-major with the last variable fastest. The grid
/// extents are `degrees[i] + 1` per axis; they are only made tight by an
/// explicit call to Trim().
class Poly {
 public:
  /// The zero polynomial in `nvars` variables.
  explicit Poly(int nvars = 2);

  /// Takes ownership of a coefficient grid. Throws std::invalid_argument when
  /// the grid size does not match the extents.
  Poly(std::vector<int> degrees, std::vector<Complex> coeffs);

  static Poly Constant(int nvars, Complex c);
  static Poly Monomial(const Exponent& exponent, Complex c = 1.0);
  /// Sparse construction: list of (exponent, coefficient) terms.
  static Poly FromTerms(int nvars,
                        const std::vector<std::pair<Exponent, Complex>>& terms);

  int nvars() const { return static_cast<int>(degrees_.size()); }
  const std::vector<int>& degrees() const { return degrees_; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }

  /// Coefficient at `exponent`; zero outside the grid.
  Complex coeff(const Exponent& exponent) const;
  void set_coeff(const Exponent& exponent, Complex value);

  std::size_t Index(const Exponent& exponent) const;
  Exponent ExponentAt(std::size_t index) const;

  bool IsZero(double tol = 0.0) const;

  /// Shrinks the grid so that every axis has a nonzero top slice. A zero
  /// polynomial becomes the single coefficient 0 with all degrees 0.
  Poly Trim(double tol = 0.0) const;

  /// Zero-pads to the given extents (each >= the current one).
  Poly Pad(const std::vector<int>& degrees) const;

  /// Sum of |coefficient| over the grid.
  double L1Norm() const;
  double MaxAbsCoeff() const;

  /// Horner evaluation, innermost axis last.
  Complex operator()(std::span<const Complex> z) const;
  Complex operator()(std::initializer_list<Complex> z) const {
    return (*this)(std::span<const Complex>(z.begin(), z.size()));
  }

  /// Partial derivative in variable `axis`.
  Poly Derivative(int axis) const;

  friend bool operator==(const Poly& a, const Poly& b);

 private:
  std::vector<int> degrees_;
  std::vector<Complex> coeffs_;
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly operator*(Complex c, const Poly& a);

Poly Add(const Poly& a, const Poly& b);
Poly Sub(const Poly& a, const Poly& b);
Poly Mul(const Poly& a, const Poly& b);
Poly Scale(const Poly& a, Complex c);

/// Coefficientwise reflection: the result's coefficient at alpha is
/// conj(p[profile - alpha]). On the torus this is a unimodular multiple of
/// conj(p). Throws std::invalid_argument if `profile` does not dominate the
/// actual (trimmed) degree of `p`.
Poly Reflect(const Poly& p, const DegreeProfile& profile);

/// The trimmed degrees of `p`.
DegreeProfile TightProfile(const Poly& p);

/// Truncated power series: coefficients for exponents 0 <= n_i < truncation[i].
class CoeffGrid {
 public:
  CoeffGrid() = default;
  explicit CoeffGrid(std::vector<int> truncation);
  CoeffGrid(std::vector<int> truncation, std::vector<Complex> coeffs);

  /// Taylor coefficients of a polynomial, cut to `truncation`.
  static CoeffGrid FromPoly(const Poly& p, std::vector<int> truncation);

  int nvars() const { return static_cast<int>(truncation_.size()); }
  const std::vector<int>& truncation() const { return truncation_; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }

  Complex at(const Exponent& exponent) const;
  Complex& at(const Exponent& exponent);
  std::size_t Index(const Exponent& exponent) const;
  Exponent ExponentAt(std::size_t index) const;
  std::size_t size() const { return coeffs_.size(); }

  /// Product with a polynomial, kept at this grid's truncation. The result
  /// is exact for every retained coefficient.
  CoeffGrid MulPoly(const Poly& p) const;

  /// Lifts the grid one step along `axis` (multiplication by z_axis); the
  /// truncation on that axis grows by one.
  CoeffGrid ShiftUp(int axis) const;

  double MaxAbsDiff(const CoeffGrid& other) const;

 private:
  std::vector<int> truncation_;
  std::vector<Complex> coeffs_;
};

/// Taylor coefficients of 1/p up to `truncation`, by the recursion
/// c_0 = 1/p_0, c_a = -(1/p_0) sum_{0<b<=a} p_b c_{a-b}.
/// Throws std::domain_error when p(0) == 0.
CoeffGrid SeriesInverse(const Poly& p, const std::vector<int>& truncation);

/// (g - g|_{z_axis=0}) / z_axis. `axis` is zero-based. Throws
/// std::domain_error when the truncation along `axis` is 1, since the result
/// would be an empty grid.
CoeffGrid BackwardShift(const CoeffGrid& g, int axis);

/// A quotient num/den of polynomials in the same variables.
struct Rational {
  Poly num;
  Poly den;

  Rational(Poly numerator, Poly denominator)
      : num(std::move(numerator)), den(std::move(denominator)) {}
  // NOLINTNEXTLINE(google-explicit-constructor)
  Rational(Poly p) : num(std::move(p)), den(Poly::Constant(num.nvars(), 1.0)) {}

  Complex operator()(std::span<const Complex> z) const { return num(z) / den(z); }
};

}  // namespace agler
