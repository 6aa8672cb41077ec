#include "agler/kernels.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>

namespace agler {

namespace {

struct ConstantNode {
  double c;
};
struct SzegoNode {
  int axis;
};
struct KphiNode {
  Rational phi;
};
struct GramNode {
  GramKernel g;
};
struct RankOneNode {
  Rational f;
};
struct ShiftNode {
  std::shared_ptr<const KernelExpr::Node> child;
  int axis;
  bool divide;
};
struct SumNode {
  std::vector<std::pair<double, std::shared_ptr<const KernelExpr::Node>>> terms;
};

Complex ShiftFactor(std::span<const Complex> z, std::span<const Complex> w, int axis) {
  return 1.0 - z[axis] * std::conj(w[axis]);
}

void RequireAxis(int axis) {
  if (axis < 0 || axis > 1) {
    throw std::invalid_argument("KernelExpr: axis must be 0 or 1");
  }
}

}  // namespace

struct KernelExpr::Node {
  std::variant<ConstantNode, SzegoNode, KphiNode, GramNode, RankOneNode,
               ShiftNode, SumNode>
      value;

  Complex Eval(std::span<const Complex> z, std::span<const Complex> w) const {
    return std::visit(
        [&](const auto& n) -> Complex {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, ConstantNode>) {
            return n.c;
          } else if constexpr (std::is_same_v<T, SzegoNode>) {
            return 1.0 / ShiftFactor(z, w, n.axis);
          } else if constexpr (std::is_same_v<T, KphiNode>) {
            return (1.0 - n.phi(z) * std::conj(n.phi(w))) /
                   (ShiftFactor(z, w, 0) * ShiftFactor(z, w, 1));
          } else if constexpr (std::is_same_v<T, GramNode>) {
            return n.g(z, w);
          } else if constexpr (std::is_same_v<T, RankOneNode>) {
            return n.f(z) * std::conj(n.f(w));
          } else if constexpr (std::is_same_v<T, ShiftNode>) {
            const Complex inner = n.child->Eval(z, w);
            const Complex s = ShiftFactor(z, w, n.axis);
            return n.divide ? inner / s : inner * s;
          } else {
            Complex acc = 0.0;
            for (const auto& [c, child] : n.terms) acc += c * child->Eval(z, w);
            return acc;
          }
        },
        value);
  }
};

KernelExpr KernelExpr::Constant(double c) {
  return KernelExpr(std::make_shared<const Node>(Node{ConstantNode{c}}));
}

KernelExpr KernelExpr::Szego(int axis) {
  RequireAxis(axis);
  return KernelExpr(std::make_shared<const Node>(Node{SzegoNode{axis}}));
}

KernelExpr KernelExpr::Kphi(Rational phi) {
  return KernelExpr(std::make_shared<const Node>(Node{KphiNode{std::move(phi)}}));
}

KernelExpr KernelExpr::Gram(GramKernel g) {
  return KernelExpr(std::make_shared<const Node>(Node{GramNode{std::move(g)}}));
}

KernelExpr KernelExpr::RankOne(Rational f) {
  return KernelExpr(std::make_shared<const Node>(Node{RankOneNode{std::move(f)}}));
}

KernelExpr KernelExpr::DivideByShift(int axis) const {
  RequireAxis(axis);
  return KernelExpr(std::make_shared<const Node>(Node{ShiftNode{node_, axis, true}}));
}

KernelExpr KernelExpr::MultiplyByShift(int axis) const {
  RequireAxis(axis);
  return KernelExpr(std::make_shared<const Node>(Node{ShiftNode{node_, axis, false}}));
}

KernelExpr operator+(const KernelExpr& a, const KernelExpr& b) {
  return KernelExpr(std::make_shared<const KernelExpr::Node>(
      KernelExpr::Node{SumNode{{{1.0, a.node_}, {1.0, b.node_}}}}));
}

KernelExpr operator-(const KernelExpr& a, const KernelExpr& b) {
  return KernelExpr(std::make_shared<const KernelExpr::Node>(
      KernelExpr::Node{SumNode{{{1.0, a.node_}, {-1.0, b.node_}}}}));
}

KernelExpr operator*(double c, const KernelExpr& a) {
  return KernelExpr(std::make_shared<const KernelExpr::Node>(
      KernelExpr::Node{SumNode{{{c, a.node_}}}}));
}

Complex KernelExpr::operator()(std::span<const Complex> z,
                               std::span<const Complex> w) const {
  return node_->Eval(z, w);
}

void RequireInsidePolydisk(std::span<const Complex> z) {
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!(std::abs(z[i]) < 1.0)) {
      throw std::domain_error("point coordinate " + std::to_string(i + 1) +
                              " has modulus " + std::to_string(std::abs(z[i])) +
                              " >= 1");
    }
  }
}

std::vector<Point> RandomPolydiskPoints(int count, int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    Point z(static_cast<std::size_t>(d));
    for (Complex& c : z) {
      double x = 0.0;
      double y = 0.0;
      do {
        x = u(rng);
        y = u(rng);
      } while (x * x + y * y >= 1.0);
      c = Complex(x, y);
    }
    pts.push_back(std::move(z));
  }
  return pts;
}

Complex KphiEval(const Rational& phi, std::span<const Complex> z,
                 std::span<const Complex> w) {
  if (z.size() != 2 || w.size() != 2) {
    throw std::invalid_argument("KphiEval: points must lie in C^2");
  }
  RequireInsidePolydisk(z);
  RequireInsidePolydisk(w);
  return KernelExpr::Kphi(phi)(z, w);
}

namespace {

Complex AglerDefect(const Rational& phi, const KernelExpr& k1,
                    const KernelExpr& k2, std::span<const Complex> z,
                    std::span<const Complex> w) {
  return 1.0 - phi(z) * std::conj(phi(w)) - ShiftFactor(z, w, 0) * k2(z, w) -
         ShiftFactor(z, w, 1) * k1(z, w);
}

}  // namespace

double AglerResidual(const Rational& phi, const KernelExpr& k1,
                     const KernelExpr& k2, const std::vector<Point>& points) {
  if (points.empty()) throw std::invalid_argument("AglerResidual: no points");
  for (const Point& z : points) RequireInsidePolydisk(z);
  double m = 0.0;
  for (const Point& z : points) {
    for (const Point& w : points) {
      m = std::max(m, std::abs(AglerDefect(phi, k1, k2, z, w)));
    }
  }
  return m;
}

double AglerResidualPairs(const Rational& phi, const KernelExpr& k1,
                          const KernelExpr& k2,
                          const std::vector<std::pair<Point, Point>>& pairs) {
  double m = 0.0;
  for (const auto& [z, w] : pairs) {
    RequireInsidePolydisk(z);
    RequireInsidePolydisk(w);
    m = std::max(m, std::abs(AglerDefect(phi, k1, k2, z, w)));
  }
  return m;
}

SampledKernel SampleKernel(const KernelExpr& k, const std::vector<Point>& points) {
  for (const Point& z : points) RequireInsidePolydisk(z);
  const int n = static_cast<int>(points.size());
  Eigen::MatrixXcd g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = k(points[i], points[j]);
  }
  SampledKernel out;
  out.points = points;
  out.hermitian_defect = (g - g.adjoint()).cwiseAbs().maxCoeff();
  out.gram = HermMatrix(g);
  return out;
}

PsdCheck SamplePsdCheck(const KernelExpr& k, const std::vector<Point>& points,
                        double tol) {
  const SampledKernel s = SampleKernel(k, points);
  PsdCheck out;
  out.min_eig = MinEigenvalue(s.gram);
  out.psd = out.min_eig >= -tol;
  return out;
}

bool ContainmentTest(const KernelExpr& k1, const KernelExpr& k2, double b,
                     const std::vector<Point>& points, double tol) {
  if (!(b > 0.0)) throw std::invalid_argument("ContainmentTest: b must be > 0");
  return SamplePsdCheck(k2 - (1.0 / (b * b)) * k1, points, tol).psd;
}

KernelPair BlendDecompositions(const KernelPair& k, const KernelPair& l,
                               const Rational& f, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument("BlendDecompositions: t must lie in [0, 1]");
  }
  const KernelExpr ff = KernelExpr::RankOne(f);
  KernelExpr k1 = 0.5 * (k.first + l.first) + (1.0 - t) * ff.DivideByShift(1);
  KernelExpr k2 = 0.5 * (k.second + l.second) + t * ff.DivideByShift(0);
  return {std::move(k1), std::move(k2)};
}

Eigen::MatrixXcd EvaluateMatrixPolynomial(const Poly& p, const Eigen::MatrixXcd& t1,
                                          const Eigen::MatrixXcd& t2) {
  if (p.nvars() != 2) {
    throw std::invalid_argument("EvaluateMatrixPolynomial: p must be bivariate");
  }
  const int n = static_cast<int>(t1.rows());
  std::vector<Eigen::MatrixXcd> pow1{Eigen::MatrixXcd::Identity(n, n)};
  std::vector<Eigen::MatrixXcd> pow2{Eigen::MatrixXcd::Identity(n, n)};
  for (int k = 0; k < p.degrees()[0]; ++k) pow1.push_back(pow1.back() * t1);
  for (int k = 0; k < p.degrees()[1]; ++k) pow2.push_back(pow2.back() * t2);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t k = 0; k < p.coeffs().size(); ++k) {
    const Complex c = p.coeffs()[k];
    if (c == Complex(0.0)) continue;
    const Exponent e = p.ExponentAt(k);
    out += c * (pow1[e[0]] * pow2[e[1]]);
  }
  return out;
}

AndoResult AndoCheck(const Poly& p, const Eigen::MatrixXcd& t1,
                     const Eigen::MatrixXcd& t2, double tol) {
  if (t1.rows() != t1.cols() || t2.rows() != t2.cols()) {
    throw std::invalid_argument("AndoCheck: operators must be square");
  }
  if (t1.rows() != t2.rows()) {
    throw std::invalid_argument("AndoCheck: operators have different sizes");
  }
  AndoResult out;
  out.commutator = (t1 * t2 - t2 * t1).norm();
  if (out.commutator > tol) {
    throw std::invalid_argument("AndoCheck: operators do not commute (||[T1,T2]||_F = " +
                                std::to_string(out.commutator) + ")");
  }
  for (const Eigen::MatrixXcd* t : {&t1, &t2}) {
    const double nt = SpectralNorm(*t);
    if (nt > 1.0 + tol) {
      throw std::invalid_argument("AndoCheck: operator norm " + std::to_string(nt) +
                                  " exceeds 1");
    }
  }
  out.norm = SpectralNorm(EvaluateMatrixPolynomial(p, t1, t2));
  out.ok = out.norm <= 1.0 + tol;
  return out;
}

Eigen::MatrixXcd CompressedShift(int axis, int n1, int n2) {
  RequireAxis(axis);
  const int dim = (n1 + 1) * (n2 + 1);
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(dim, dim);
  for (int a = 0; a <= n1; ++a) {
    for (int b = 0; b <= n2; ++b) {
      const int ta = a + (axis == 0 ? 1 : 0);
      const int tb = b + (axis == 1 ? 1 : 0);
      if (ta <= n1 && tb <= n2) s(ta * (n2 + 1) + tb, a * (n2 + 1) + b) = 1.0;
    }
  }
  return s;
}

std::vector<OperatorPair> RandomCommutingContractions(int count, int max_degree,
                                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto in_disk = [&] {
    return std::polar(std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng));
  };
  std::vector<OperatorPair> out;
  for (int k = 0; k < count; ++k) {
    if (k % 2 == 0) {
      const int n1 = deg(rng);
      const int n2 = deg(rng);
      const Complex c1 = in_disk();
      const Complex c2 = in_disk();
      out.emplace_back(c1 * CompressedShift(0, n1, n2), c2 * CompressedShift(1, n1, n2));
    } else {
      const int n = dim(rng);
      Eigen::MatrixXcd g(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
      const Eigen::MatrixXcd u = g.householderQr().householderQ();
      Eigen::VectorXcd d1(n);
      Eigen::VectorXcd d2(n);
      for (int i = 0; i < n; ++i) {
        d1(i) = in_disk();
        d2(i) = in_disk();
      }
      out.emplace_back(u * d1.asDiagonal() * u.adjoint(), u * d2.asDiagonal() * u.adjoint());
    }
  }
  return out;
}

double TorusSupNorm(const Poly& p, int grid) {
  if (p.nvars() != 2) throw std::invalid_argument("TorusSupNorm: p must be bivariate");
  double sup = 0.0;
  for (int a = 0; a < grid; ++a) {
    for (int b = 0; b < grid; ++b) {
      const Complex z[2] = {std::polar(1.0, 2.0 * std::numbers::pi * a / grid),
                            std::polar(1.0, 2.0 * std::numbers::pi * b / grid)};
      sup = std::max(sup, std::abs(p(z)));
    }
  }
  return sup;
}

}  // namespace agler
