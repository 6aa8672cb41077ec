#include "agler/poly.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace agler {

namespace {

std::size_t GridSize(const std::vector<int>& extents) {
  std::size_t n = 1;
  for (int e : extents) n *= static_cast<std::size_t>(e);
  return n;
}

std::vector<int> Extents(const std::vector<int>& degrees) {
  std::vector<int> ext(degrees);
  for (int& e : ext) ++e;
  return ext;
}

std::size_t RowMajorIndex(const std::vector<int>& extents,
                          const Exponent& exponent) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < extents.size(); ++i) {
    idx = idx * static_cast<std::size_t>(extents[i]) +
          static_cast<std::size_t>(exponent[i]);
  }
  return idx;
}

Exponent RowMajorExponent(const std::vector<int>& extents, std::size_t index) {
  Exponent e(extents.size());
  for (std::size_t i = extents.size(); i-- > 0;) {
    e[i] = static_cast<int>(index % static_cast<std::size_t>(extents[i]));
    index /= static_cast<std::size_t>(extents[i]);
  }
  return e;
}

bool Inside(const std::vector<int>& extents, const Exponent& e) {
  for (std::size_t i = 0; i < extents.size(); ++i) {
    if (e[i] < 0 || e[i] >= extents[i]) return false;
  }
  return true;
}

void RequireSameVars(const Poly& a, const Poly& b, const char* op) {
  if (a.nvars() != b.nvars()) {
    throw std::invalid_argument(std::string(op) +
                                "(): operands have different nvars (" +
                                std::to_string(a.nvars()) + " vs " +
                                std::to_string(b.nvars()) + ")");
  }
}

}  // namespace

Poly::Poly(int nvars) : degrees_(static_cast<std::size_t>(nvars), 0), coeffs_(1) {
  if (nvars < 1) throw std::invalid_argument("Poly: nvars must be positive");
}

Poly::Poly(std::vector<int> degrees, std::vector<Complex> coeffs)
    : degrees_(std::move(degrees)), coeffs_(std::move(coeffs)) {
  if (degrees_.empty()) {
    throw std::invalid_argument("Poly: nvars must be positive");
  }
  for (int d : degrees_) {
    if (d < 0) throw std::invalid_argument("Poly: negative degree");
  }
  if (coeffs_.size() != GridSize(Extents(degrees_))) {
    throw std::invalid_argument(
        "Poly: coefficient count " + std::to_string(coeffs_.size()) +
        " does not match grid size " +
        std::to_string(GridSize(Extents(degrees_))));
  }
}

Poly Poly::Constant(int nvars, Complex c) {
  Poly p(nvars);
  p.coeffs_[0] = c;
  return p;
}

Poly Poly::Monomial(const Exponent& exponent, Complex c) {
  std::vector<int> degrees(exponent);
  Poly p(degrees, std::vector<Complex>(GridSize(Extents(degrees))));
  p.set_coeff(exponent, c);
  return p;
}

Poly Poly::FromTerms(int nvars,
                     const std::vector<std::pair<Exponent, Complex>>& terms) {
  std::vector<int> degrees(static_cast<std::size_t>(nvars), 0);
  for (const auto& [e, c] : terms) {
    if (static_cast<int>(e.size()) != nvars) {
      throw std::invalid_argument("Poly::FromTerms: exponent arity mismatch");
    }
    for (int i = 0; i < nvars; ++i) degrees[i] = std::max(degrees[i], e[i]);
  }
  Poly p(degrees, std::vector<Complex>(GridSize(Extents(degrees))));
  for (const auto& [e, c] : terms) p.coeffs_[p.Index(e)] += c;
  return p;
}

std::size_t Poly::Index(const Exponent& exponent) const {
  return RowMajorIndex(Extents(degrees_), exponent);
}

Exponent Poly::ExponentAt(std::size_t index) const {
  return RowMajorExponent(Extents(degrees_), index);
}

Complex Poly::coeff(const Exponent& exponent) const {
  if (static_cast<int>(exponent.size()) != nvars()) {
    throw std::invalid_argument("Poly::coeff: exponent arity mismatch");
  }
  if (!Inside(Extents(degrees_), exponent)) return 0.0;
  return coeffs_[Index(exponent)];
}

void Poly::set_coeff(const Exponent& exponent, Complex value) {
  if (static_cast<int>(exponent.size()) != nvars() ||
      !Inside(Extents(degrees_), exponent)) {
    throw std::out_of_range("Poly::set_coeff: exponent outside grid");
  }
  coeffs_[Index(exponent)] = value;
}

bool Poly::IsZero(double tol) const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [tol](Complex c) { return std::abs(c) <= tol; });
}

Poly Poly::Trim(double tol) const {
  const auto ext = Extents(degrees_);
  std::vector<int> top(degrees_.size(), -1);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (std::abs(coeffs_[k]) <= tol) continue;
    const Exponent e = RowMajorExponent(ext, k);
    for (std::size_t i = 0; i < e.size(); ++i) top[i] = std::max(top[i], e[i]);
  }
  if (top[0] < 0) return Poly(nvars());
  Poly out(top, std::vector<Complex>(GridSize(Extents(top))));
  for (std::size_t k = 0; k < out.coeffs_.size(); ++k) {
    out.coeffs_[k] = coeffs_[RowMajorIndex(ext, out.ExponentAt(k))];
  }
  return out;
}

Poly Poly::Pad(const std::vector<int>& degrees) const {
  if (degrees.size() != degrees_.size()) {
    throw std::invalid_argument("Poly::Pad: arity mismatch");
  }
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (degrees[i] < degrees_[i]) {
      throw std::invalid_argument("Poly::Pad: cannot shrink grid");
    }
  }
  Poly out(degrees, std::vector<Complex>(GridSize(Extents(degrees))));
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    out.coeffs_[out.Index(ExponentAt(k))] = coeffs_[k];
  }
  return out;
}

double Poly::L1Norm() const {
  double s = 0.0;
  for (const Complex& c : coeffs_) s += std::abs(c);
  return s;
}

double Poly::MaxAbsCoeff() const {
  double s = 0.0;
  for (const Complex& c : coeffs_) s = std::max(s, std::abs(c));
  return s;
}

Complex Poly::operator()(std::span<const Complex> z) const {
  if (static_cast<int>(z.size()) != nvars()) {
    throw std::invalid_argument("Poly eval: point has " +
                                std::to_string(z.size()) +
                                " coordinates, polynomial has " +
                                std::to_string(nvars()) + " variables");
  }
  // Horner along the last axis first, then fold outward.
  std::vector<Complex> level(coeffs_);
  for (std::size_t axis = degrees_.size(); axis-- > 0;) {
    const std::size_t width = static_cast<std::size_t>(degrees_[axis]) + 1;
    std::vector<Complex> next(level.size() / width);
    for (std::size_t row = 0; row < next.size(); ++row) {
      Complex acc = 0.0;
      for (std::size_t k = width; k-- > 0;) acc = acc * z[axis] + level[row * width + k];
      next[row] = acc;
    }
    level = std::move(next);
  }
  return level[0];
}

Poly Poly::Derivative(int axis) const {
  if (axis < 0 || axis >= nvars()) {
    throw std::invalid_argument("Poly::Derivative: axis out of range");
  }
  std::vector<int> degrees(degrees_);
  degrees[axis] = std::max(0, degrees[axis] - 1);
  Poly out(degrees, std::vector<Complex>(GridSize(Extents(degrees))));
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    Exponent e = ExponentAt(k);
    if (e[axis] == 0) continue;
    const double n = e[axis];
    --e[axis];
    out.coeffs_[out.Index(e)] += n * coeffs_[k];
  }
  return out;
}

bool operator==(const Poly& a, const Poly& b) {
  return a.degrees_ == b.degrees_ && a.coeffs_ == b.coeffs_;
}

namespace {

Poly Combine(const Poly& a, const Poly& b, double sign) {
  std::vector<int> degrees(a.degrees());
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    degrees[i] = std::max(degrees[i], b.degrees()[i]);
  }
  Poly out = a.Pad(degrees);
  std::vector<Complex> coeffs(out.coeffs());
  for (std::size_t k = 0; k < b.coeffs().size(); ++k) {
    coeffs[out.Index(b.ExponentAt(k))] += sign * b.coeffs()[k];
  }
  return Poly(degrees, std::move(coeffs)).Trim();
}

}  // namespace

Poly Add(const Poly& a, const Poly& b) {
  RequireSameVars(a, b, "Add");
  return Combine(a, b, 1.0);
}

Poly Sub(const Poly& a, const Poly& b) {
  RequireSameVars(a, b, "Sub");
  return Combine(a, b, -1.0);
}

Poly Mul(const Poly& a, const Poly& b) {
  RequireSameVars(a, b, "Mul");
  std::vector<int> degrees(a.degrees());
  for (std::size_t i = 0; i < degrees.size(); ++i) degrees[i] += b.degrees()[i];
  Poly out(degrees, std::vector<Complex>(GridSize(Extents(degrees))));
  std::vector<Complex> coeffs(out.coeffs().size());
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    if (a.coeffs()[i] == Complex(0.0)) continue;
    const Exponent ea = a.ExponentAt(i);
    for (std::size_t j = 0; j < b.coeffs().size(); ++j) {
      Exponent e = b.ExponentAt(j);
      for (std::size_t k = 0; k < e.size(); ++k) e[k] += ea[k];
      coeffs[out.Index(e)] += a.coeffs()[i] * b.coeffs()[j];
    }
  }
  return Poly(degrees, std::move(coeffs)).Trim();
}

Poly Scale(const Poly& a, Complex c) {
  std::vector<Complex> coeffs(a.coeffs());
  for (Complex& x : coeffs) x *= c;
  return Poly(a.degrees(), std::move(coeffs)).Trim();
}

Poly operator+(const Poly& a, const Poly& b) { return Add(a, b); }
Poly operator-(const Poly& a, const Poly& b) { return Sub(a, b); }
Poly operator*(const Poly& a, const Poly& b) { return Mul(a, b); }
Poly operator*(Complex c, const Poly& a) { return Scale(a, c); }

DegreeProfile TightProfile(const Poly& p) { return {p.Trim().degrees()}; }

Poly Reflect(const Poly& p, const DegreeProfile& profile) {
  if (static_cast<int>(profile.degrees.size()) != p.nvars()) {
    throw std::invalid_argument("Reflect: profile arity does not match nvars");
  }
  const Poly tight = p.Trim();
  for (int i = 0; i < p.nvars(); ++i) {
    if (profile.degrees[i] < tight.degrees()[i]) {
      throw std::invalid_argument(
          "Reflect: profile " + std::to_string(profile.degrees[i]) +
          " is below the degree " + std::to_string(tight.degrees()[i]) +
          " of variable " + std::to_string(i + 1));
    }
  }
  Poly out(profile.degrees,
           std::vector<Complex>(GridSize(Extents(profile.degrees))));
  std::vector<Complex> coeffs(out.coeffs().size());
  for (std::size_t k = 0; k < tight.coeffs().size(); ++k) {
    Exponent e = tight.ExponentAt(k);
    for (int i = 0; i < p.nvars(); ++i) e[i] = profile.degrees[i] - e[i];
    coeffs[out.Index(e)] = std::conj(tight.coeffs()[k]);
  }
  return Poly(profile.degrees, std::move(coeffs));
}

CoeffGrid::CoeffGrid(std::vector<int> truncation)
    : truncation_(std::move(truncation)) {
  for (int n : truncation_) {
    if (n < 1) throw std::invalid_argument("CoeffGrid: truncation must be >= 1");
  }
  coeffs_.assign(GridSize(truncation_), 0.0);
}

CoeffGrid::CoeffGrid(std::vector<int> truncation, std::vector<Complex> coeffs)
    : CoeffGrid(std::move(truncation)) {
  if (coeffs.size() != coeffs_.size()) {
    throw std::invalid_argument("CoeffGrid: coefficient count mismatch");
  }
  coeffs_ = std::move(coeffs);
}

CoeffGrid CoeffGrid::FromPoly(const Poly& p, std::vector<int> truncation) {
  if (static_cast<int>(truncation.size()) != p.nvars()) {
    throw std::invalid_argument("CoeffGrid::FromPoly: arity mismatch");
  }
  CoeffGrid g(std::move(truncation));
  for (std::size_t k = 0; k < g.size(); ++k) {
    g.coeffs_[k] = p.coeff(g.ExponentAt(k));
  }
  return g;
}

std::size_t CoeffGrid::Index(const Exponent& exponent) const {
  return RowMajorIndex(truncation_, exponent);
}

Exponent CoeffGrid::ExponentAt(std::size_t index) const {
  return RowMajorExponent(truncation_, index);
}

Complex CoeffGrid::at(const Exponent& exponent) const {
  if (!Inside(truncation_, exponent)) return 0.0;
  return coeffs_[Index(exponent)];
}

Complex& CoeffGrid::at(const Exponent& exponent) {
  if (!Inside(truncation_, exponent)) {
    throw std::out_of_range("CoeffGrid::at: exponent outside truncation");
  }
  return coeffs_[Index(exponent)];
}

CoeffGrid CoeffGrid::MulPoly(const Poly& p) const {
  if (p.nvars() != nvars()) {
    throw std::invalid_argument("CoeffGrid::MulPoly: arity mismatch");
  }
  CoeffGrid out(truncation_);
  for (std::size_t k = 0; k < size(); ++k) {
    if (coeffs_[k] == Complex(0.0)) continue;
    const Exponent e = ExponentAt(k);
    for (std::size_t j = 0; j < p.coeffs().size(); ++j) {
      Exponent s = p.ExponentAt(j);
      for (std::size_t i = 0; i < s.size(); ++i) s[i] += e[i];
      if (Inside(truncation_, s)) out.coeffs_[out.Index(s)] += coeffs_[k] * p.coeffs()[j];
    }
  }
  return out;
}

CoeffGrid CoeffGrid::ShiftUp(int axis) const {
  std::vector<int> trunc(truncation_);
  ++trunc[axis];
  CoeffGrid out(trunc);
  for (std::size_t k = 0; k < size(); ++k) {
    Exponent e = ExponentAt(k);
    ++e[axis];
    out.coeffs_[out.Index(e)] = coeffs_[k];
  }
  return out;
}

double CoeffGrid::MaxAbsDiff(const CoeffGrid& other) const {
  if (other.truncation_ != truncation_) {
    throw std::invalid_argument("CoeffGrid::MaxAbsDiff: truncation mismatch");
  }
  double m = 0.0;
  for (std::size_t k = 0; k < size(); ++k) {
    m = std::max(m, std::abs(coeffs_[k] - other.coeffs_[k]));
  }
  return m;
}

CoeffGrid SeriesInverse(const Poly& p, const std::vector<int>& truncation) {
  if (static_cast<int>(truncation.size()) != p.nvars()) {
    throw std::invalid_argument("SeriesInverse: truncation arity mismatch");
  }
  const Complex p0 = p.coeffs()[0];
  if (p0 == Complex(0.0)) {
    throw std::domain_error("SeriesInverse: constant term is zero");
  }
  CoeffGrid c(truncation);
  // Row-major order visits every a - b (b > 0) before a.
  for (std::size_t k = 0; k < c.size(); ++k) {
    const Exponent a = c.ExponentAt(k);
    if (k == 0) {
      c.at(a) = 1.0 / p0;
      continue;
    }
    Complex acc = 0.0;
    for (std::size_t j = 1; j < p.coeffs().size(); ++j) {
      const Complex pb = p.coeffs()[j];
      if (pb == Complex(0.0)) continue;
      Exponent diff = p.ExponentAt(j);
      bool valid = true;
      for (std::size_t i = 0; i < diff.size(); ++i) {
        diff[i] = a[i] - diff[i];
        if (diff[i] < 0) valid = false;
      }
      if (valid) acc += pb * c.at(diff);
    }
    c.at(a) = -acc / p0;
  }
  return c;
}

CoeffGrid BackwardShift(const CoeffGrid& g, int axis) {
  if (axis < 0 || axis >= g.nvars()) {
    throw std::invalid_argument("BackwardShift: axis out of range");
  }
  if (g.truncation()[axis] == 1) {
    throw std::domain_error(
        "BackwardShift: truncation along axis is 1; result would be empty");
  }
  std::vector<int> trunc(g.truncation());
  --trunc[axis];
  CoeffGrid out(trunc);
  for (std::size_t k = 0; k < out.size(); ++k) {
    Exponent e = out.ExponentAt(k);
    ++e[axis];
    out.at(out.ExponentAt(k)) = g.at(e);
  }
  return out;
}

}  // namespace agler
