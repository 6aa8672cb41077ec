#include "agler/json_io.h"

#include <cmath>
#include <limits>

namespace agler::io {

namespace {

const Json& Field(const Json& j, const char* key, const char* what) {
  if (!j.is_object()) throw SchemaError(std::string(what) + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) {
    throw SchemaError(std::string(what) + ": missing field \"" + key + "\"");
  }
  return *it;
}

int IntFrom(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw SchemaError(std::string(what) + ": expected an integer");
  return j.get<int>();
}

std::vector<int> IntList(const Json& j, const char* what) {
  if (!j.is_array()) throw SchemaError(std::string(what) + ": expected an array");
  std::vector<int> out;
  for (const Json& e : j) out.push_back(IntFrom(e, what));
  return out;
}

// Non-finite doubles become null; the caller records why. Adding 0.0 folds
// -0.0 into 0.0.
Json Real(double x) { return std::isfinite(x) ? Json(x + 0.0) : Json(nullptr); }

Json ExponentList(const std::vector<Exponent>& basis) {
  Json out = Json::array();
  for (const Exponent& e : basis) out.push_back(e);
  return out;
}

Json PolyList(const std::vector<Poly>& polys) {
  Json out = Json::array();
  for (const Poly& p : polys) out.push_back(ToJson(p));
  return out;
}

}  // namespace

Json ToJson(Complex c) { return Json::array({c.real() + 0.0, c.imag() + 0.0}); }

Complex ComplexFromJson(const Json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw SchemaError("complex number: expected [re, im]");
  }
  return Complex(j[0].get<double>(), j[1].get<double>());
}

Json PointToJson(const Point& z) {
  Json out = Json::array();
  for (const Complex& c : z) out.push_back(ToJson(c));
  return out;
}

Point PointFromJson(const Json& j) {
  if (!j.is_array()) throw SchemaError("point: expected an array of [re, im]");
  Point z;
  for (const Json& e : j) z.push_back(ComplexFromJson(e));
  return z;
}

Json ToJson(const Poly& p) {
  Json out;
  out["nvars"] = p.nvars();
  out["degrees"] = p.degrees();
  Json coeffs = Json::array();
  for (const Complex& c : p.coeffs()) coeffs.push_back(ToJson(c));
  out["coeffs"] = std::move(coeffs);
  return out;
}

Poly PolyFromJson(const Json& j) {
  const int nvars = IntFrom(Field(j, "nvars", "poly"), "poly.nvars");
  std::vector<int> degrees = IntList(Field(j, "degrees", "poly"), "poly.degrees");
  if (nvars < 1 || static_cast<int>(degrees.size()) != nvars) {
    throw SchemaError("poly: degrees must list one entry per variable");
  }
  std::size_t expected = 1;
  for (int d : degrees) {
    if (d < 0) throw SchemaError("poly: negative degree");
    expected *= static_cast<std::size_t>(d) + 1;
  }
  const Json& cj = Field(j, "coeffs", "poly");
  if (!cj.is_array() || cj.size() != expected) {
    throw SchemaError("poly: coeffs must hold prod(degrees + 1) = " + std::to_string(expected) +
                      " entries");
  }
  std::vector<Complex> coeffs;
  coeffs.reserve(expected);
  for (const Json& c : cj) coeffs.push_back(ComplexFromJson(c));
  return Poly(std::move(degrees), std::move(coeffs));
}

Json MatrixToJson(const Eigen::MatrixXcd& m) {
  Json out;
  out["rows"] = m.rows();
  out["cols"] = m.cols();
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index k = 0; k < m.cols(); ++k) data.push_back(ToJson(m(i, k)));
  out["data"] = std::move(data);
  return out;
}

Eigen::MatrixXcd MatrixFromJson(const Json& j) {
  const int rows = IntFrom(Field(j, "rows", "matrix"), "matrix.rows");
  const int cols = IntFrom(Field(j, "cols", "matrix"), "matrix.cols");
  if (rows < 0 || cols < 0) throw SchemaError("matrix: negative shape");
  const Json& data = Field(j, "data", "matrix");
  if (!data.is_array() || data.size() != static_cast<std::size_t>(rows) * cols) {
    throw SchemaError("matrix: data must hold rows * cols entries");
  }
  Eigen::MatrixXcd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) m(i, k) = ComplexFromJson(data[i * cols + k]);
  return m;
}

HermMatrix HermFromJson(const Json& j) {
  const Eigen::MatrixXcd m = MatrixFromJson(j);
  if (m.rows() != m.cols()) throw SchemaError("hermitian matrix: must be square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (m.size() > 0 && (m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw SchemaError("hermitian matrix: input is not Hermitian");
  }
  return HermMatrix(m);
}

Json ToJson(const RationalInner& phi) {
  Json out;
  out["schema"] = std::string("agler.rational_inner/") + kSchemaVersion;
  out["m"] = ToJson(phi.m);
  out["p"] = ToJson(phi.p);
  out["profile"] = phi.profile.degrees;
  out["k1"] = phi.k1;
  out["k2"] = phi.k2;
  out["p_tilde"] = ToJson(phi.p_tilde);
  out["numerator"] = ToJson(phi.numerator);
  out["boundary_singular"] = phi.boundary_singular;
  return out;
}

RationalInner PhiFromJson(const Json& j) {
  const Poly p = PolyFromJson(Field(j, "p", "phi"));
  const Poly m = j.contains("m") ? PolyFromJson(j["m"]) : Poly::Constant(p.nvars(), 1.0);
  if (j.contains("profile")) {
    return MakeRationalInner(m, p, DegreeProfile{IntList(j["profile"], "phi.profile")});
  }
  return MakeRationalInner(m, p);
}

Json ToJson(const GramKernel& g) {
  Json out;
  out["basis"] = ExponentList(g.basis);
  out["A"] = MatrixToJson(g.a.matrix());
  out["denom"] = ToJson(g.denom);
  return out;
}

GramKernel GramFromJson(const Json& j) {
  GramKernel g;
  const Json& basis = Field(j, "basis", "gram kernel");
  if (!basis.is_array()) throw SchemaError("gram kernel: basis must be an array");
  for (const Json& e : basis) g.basis.push_back(IntList(e, "gram kernel.basis"));
  g.a = HermFromJson(Field(j, "A", "gram kernel"));
  g.denom = PolyFromJson(Field(j, "denom", "gram kernel"));
  if (g.a.n() != static_cast<int>(g.basis.size())) {
    throw SchemaError("gram kernel: A must be square of the basis size");
  }
  for (const Exponent& e : g.basis) {
    if (static_cast<int>(e.size()) != g.denom.nvars()) {
      throw SchemaError("gram kernel: basis exponents must match the denominator's variables");
    }
  }
  return g;
}

Json ToJson(const AglerCertificate& c) {
  Json out;
  out["residual_max"] = Real(c.residual_max);
  out["points_used"] = c.points_used;
  out["min_eig_K1"] = Real(c.min_eig_k1);
  out["min_eig_K2"] = Real(c.min_eig_k2);
  out["rank_K1"] = c.rank_k1;
  out["rank_K2"] = c.rank_k2;
  out["rank_cap_K1"] = c.cap_k1;
  out["rank_cap_K2"] = c.cap_k2;
  out["affine_residual"] = Real(c.affine_residual);
  out["iterations"] = c.iterations;
  out["solver_status"] = c.solver_status;
  return out;
}

Json ToJson(const AglerPair& pair) {
  Json out;
  out["schema"] = std::string("agler.agler_pair/") + kSchemaVersion;
  out["K1"] = ToJson(pair.k1);
  out["K2"] = ToJson(pair.k2);
  out["certificate"] = ToJson(pair.certificate);
  return out;
}

AglerPair PairFromJson(const Json& j) {
  AglerPair pair;
  pair.k1 = GramFromJson(Field(j, "K1", "agler pair"));
  pair.k2 = GramFromJson(Field(j, "K2", "agler pair"));
  if (j.contains("certificate")) {
    const Json& c = j["certificate"];
    auto real = [&](const char* key) {
      return c.contains(key) && c[key].is_number() ? c[key].get<double>() : 0.0;
    };
    auto integer = [&](const char* key) {
      return c.contains(key) && c[key].is_number_integer() ? c[key].get<int>() : 0;
    };
    pair.certificate.residual_max = real("residual_max");
    pair.certificate.points_used = integer("points_used");
    pair.certificate.min_eig_k1 = real("min_eig_K1");
    pair.certificate.min_eig_k2 = real("min_eig_K2");
    pair.certificate.rank_k1 = integer("rank_K1");
    pair.certificate.rank_k2 = integer("rank_K2");
    pair.certificate.cap_k1 = integer("rank_cap_K1");
    pair.certificate.cap_k2 = integer("rank_cap_K2");
    pair.certificate.affine_residual = real("affine_residual");
    pair.certificate.iterations = integer("iterations");
    if (c.contains("solver_status") && c["solver_status"].is_string()) {
      pair.certificate.solver_status = c["solver_status"].get<std::string>();
    }
  }
  return pair;
}

Json ToJson(const SamplingGrid& g) {
  Json out;
  out["phases"] = g.phases;
  out["radii"] = g.radii;
  return out;
}

Json ToJson(const StabilityCertificate& c) {
  Json out;
  out["schema"] = std::string("agler.stability_certificate/") + kSchemaVersion;
  out["stable"] = c.stable;
  out["c_estimate"] = Real(c.c_estimate);
  out["c_estimate_infinite"] = std::isinf(c.c_estimate);
  out["min_modulus"] = Real(c.min_modulus);
  out["witness"] = c.witness ? PointToJson(*c.witness) : Json(nullptr);
  out["witness_modulus"] = c.witness ? Real(c.witness_modulus) : Json(nullptr);
  out["rigorous"] = c.rigorous;
  out["lipschitz_bound"] = Real(c.lipschitz_bound);
  out["reflection_defect"] = Real(c.reflection_defect);
  out["profile"] = c.profile;
  out["grid_spec"] = ToJson(c.grid);
  return out;
}

Json ToJson(const UniquenessReport& r) {
  Json out;
  out["schema"] = std::string("agler.uniqueness_report/") + kSchemaVersion;
  out["verdict"] = ToString(r.verdict);
  out["method"] = ToString(r.method);
  out["nullity"] = r.nullity;
  out["basis_of_L"] = PolyList(r.basis_of_l);
  Json zeros = Json::array();
  for (const Point& z : r.torus_zeros) zeros.push_back(PointToJson(z));
  out["torus_zeros"] = std::move(zeros);
  out["diagnostics"] = r.diagnostics;
  return out;
}

Json ToJson(const SupportReport& r) {
  Json out;
  out["schema"] = std::string("agler.support_report/") + kSchemaVersion;
  out["pass"] = r.pass;
  out["truncation"] = r.truncation;
  out["max_forbidden"] = r.max_forbidden;
  out["max_forbidden_X1"] = r.max_forbidden_x1;
  out["max_forbidden_X2"] = r.max_forbidden_x2;
  return out;
}

Json ToJson(const PickData& d) {
  Json out;
  Json nodes = Json::array();
  for (const Point& z : d.nodes) nodes.push_back(PointToJson(z));
  out["nodes"] = std::move(nodes);
  Json targets = Json::array();
  for (const Complex& c : d.targets) targets.push_back(ToJson(c));
  out["targets"] = std::move(targets);
  return out;
}

PickData PickDataFromJson(const Json& j) {
  PickData d;
  const Json& nodes = Field(j, "nodes", "pick data");
  const Json& targets = Field(j, "targets", "pick data");
  if (!nodes.is_array() || !targets.is_array()) {
    throw SchemaError("pick data: nodes and targets must be arrays");
  }
  for (const Json& n : nodes) d.nodes.push_back(PointFromJson(n));
  for (const Json& t : targets) d.targets.push_back(ComplexFromJson(t));
  return d;
}

Json ToJson(const PickResult& r) {
  Json out;
  out["schema"] = std::string("agler.pick_result/") + kSchemaVersion;
  out["status"] = ToString(r.status);
  if (r.status != PickStatus::kInfeasibleEvidence) {
    out["K1"] = MatrixToJson(r.k1.matrix());
    out["K2"] = MatrixToJson(r.k2.matrix());
    out["residual"] = Real(r.residual);
    out["min_eig_K1"] = Real(r.min_eig_k1);
    out["min_eig_K2"] = Real(r.min_eig_k2);
    out["iterations"] = r.iterations;
  }
  out["obstruction"] = r.obstruction ? Json(*r.obstruction) : Json(nullptr);
  out["obstruction_eigenvalue"] =
      r.obstruction_eigenvalue ? Real(*r.obstruction_eigenvalue) : Json(nullptr);
  return out;
}

}  // namespace agler::io
