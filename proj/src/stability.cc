#include "agler/stability.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>

#include <Eigen/Dense>

namespace agler {

namespace {

// Sparse term list with per-axis power tables, for evaluation on large grids.
class TermEvaluator {
 public:
  explicit TermEvaluator(const Poly& p) : nvars_(p.nvars()), max_deg_(p.degrees()) {
    for (std::size_t k = 0; k < p.coeffs().size(); ++k) {
      if (p.coeffs()[k] == Complex(0.0)) continue;
      exps_.push_back(p.ExponentAt(k));
      coeffs_.push_back(p.coeffs()[k]);
    }
  }

  // powers[i][k] = z_i^k.
  Complex Eval(const std::vector<const std::vector<Complex>*>& powers) const {
    Complex acc = 0.0;
    for (std::size_t t = 0; t < coeffs_.size(); ++t) {
      Complex term = coeffs_[t];
      for (int i = 0; i < nvars_; ++i) term *= (*powers[i])[exps_[t][i]];
      acc += term;
    }
    return acc;
  }

  int max_degree() const {
    return max_deg_.empty() ? 0 : *std::max_element(max_deg_.begin(), max_deg_.end());
  }

 private:
  int nvars_;
  std::vector<int> max_deg_;
  std::vector<Exponent> exps_;
  std::vector<Complex> coeffs_;
};

struct AxisSample {
  Complex z;
  bool on_circle = false;
  std::vector<Complex> powers;
};

std::vector<AxisSample> AxisSamples(const SamplingGrid& grid, int max_degree) {
  std::vector<AxisSample> out;
  for (double r : grid.radii) {
    const int nphase = r == 0.0 ? 1 : grid.phases;
    for (int k = 0; k < nphase; ++k) {
      AxisSample s;
      s.z = r == 1.0 ? std::polar(1.0, 2 * std::numbers::pi * k / grid.phases)
                     : std::polar(r, 2 * std::numbers::pi * k / grid.phases);
      if (k == 0) s.z = Complex(r, 0.0);
      s.on_circle = r == 1.0;
      s.powers.resize(static_cast<std::size_t>(max_degree) + 1);
      s.powers[0] = 1.0;
      for (int j = 1; j <= max_degree; ++j) s.powers[j] = s.powers[j - 1] * s.z;
      out.push_back(std::move(s));
    }
  }
  return out;
}

// Visits every point of the d-fold product of `samples`.
template <typename Fn>
void ForEachGridPoint(const std::vector<AxisSample>& samples, int d, Fn&& fn) {
  if (samples.empty()) return;
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  std::vector<const std::vector<Complex>*> powers(static_cast<std::size_t>(d));
  while (true) {
    for (int i = 0; i < d; ++i) powers[i] = &samples[idx[i]].powers;
    fn(idx, powers);
    int axis = d - 1;
    while (axis >= 0 && ++idx[axis] == samples.size()) {
      idx[axis] = 0;
      --axis;
    }
    if (axis < 0) break;
  }
}

double MarginFromValues(Complex pv, Complex ptv, int d, double weight) {
  return (std::pow(std::abs(pv), d) - std::pow(std::abs(ptv), d)) / weight;
}

// Gauss-Newton on |p| over the closed polydisk. Coordinates on the unit
// circle move along it; interior coordinates move freely and are snapped to
// the circle if a step leaves the disk.
Point RefineZero(const Poly& p, Point z, int iters) {
  const int d = p.nvars();
  std::vector<Poly> grad;
  for (int i = 0; i < d; ++i) grad.push_back(p.Derivative(i));
  std::vector<bool> on_circle(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) on_circle[i] = std::abs(z[i]) >= 1.0 - 1e-15;
  double best = std::abs(p(z));
  for (int it = 0; it < iters && best > 0.0; ++it) {
    const Complex f = p(z);
    // Real Jacobian of (Re p, Im p) with 2 columns per coordinate; angle
    // coordinates use only the first of their pair.
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(2, 2 * d);
    for (int i = 0; i < d; ++i) {
      const Complex g = grad[i](z);
      if (on_circle[i]) {
        const Complex dtheta = Complex(0.0, 1.0) * z[i] * g;
        jac(0, 2 * i) = dtheta.real();
        jac(1, 2 * i) = dtheta.imag();
      } else {
        jac(0, 2 * i) = g.real();
        jac(1, 2 * i) = g.imag();
        const Complex dy = Complex(0.0, 1.0) * g;
        jac(0, 2 * i + 1) = dy.real();
        jac(1, 2 * i + 1) = dy.imag();
      }
    }
    const Eigen::Vector2d rhs(-f.real(), -f.imag());
    const Eigen::VectorXd step =
        jac.completeOrthogonalDecomposition().solve(rhs);
    bool improved = false;
    for (double scale = 1.0; scale > 1e-9; scale *= 0.5) {
      Point trial = z;
      std::vector<bool> trial_circle = on_circle;
      for (int i = 0; i < d; ++i) {
        if (on_circle[i]) {
          trial[i] = z[i] * std::polar(1.0, scale * step(2 * i));
        } else {
          trial[i] = z[i] + scale * Complex(step(2 * i), step(2 * i + 1));
          if (std::abs(trial[i]) >= 1.0) {
            trial[i] /= std::abs(trial[i]);
            trial_circle[i] = true;
          }
        }
      }
      const double v = std::abs(p(trial));
      if (v < best) {
        best = v;
        z = std::move(trial);
        on_circle = std::move(trial_circle);
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return z;
}

}  // namespace

double MarginRatio(const Poly& p, const Poly& p_tilde, std::span<const Complex> z) {
  double weight = 1.0;
  for (const Complex& c : z) {
    if (!(std::abs(c) < 1.0)) {
      throw std::domain_error("MarginRatio: point must lie in the open polydisk");
    }
    weight *= 1.0 - std::norm(c);
  }
  return MarginFromValues(p(z), p_tilde(z), p.nvars(), weight);
}

double StabilityMargin(const Poly& p, const DegreeProfile& profile,
                       const SamplingGrid& grid) {
  SamplingGrid interior = grid;
  interior.radii.clear();
  const double cap = 1.0 - 1.0 / grid.phases;
  for (double r : grid.radii) {
    if (r <= cap) interior.radii.push_back(r);
  }
  const Poly pt = Reflect(p, profile);
  const Poly pp = p.Pad(pt.degrees());
  const TermEvaluator ep(pp);
  const TermEvaluator et(pt);
  const int d = p.nvars();
  const auto samples =
      AxisSamples(interior, std::max(ep.max_degree(), et.max_degree()));
  double best = std::numeric_limits<double>::infinity();
  ForEachGridPoint(samples, d, [&](const std::vector<std::size_t>& idx,
                                   const std::vector<const std::vector<Complex>*>& pw) {
    double weight = 1.0;
    for (std::size_t i : idx) weight *= 1.0 - std::norm(samples[i].z);
    best = std::min(best, MarginFromValues(ep.Eval(pw), et.Eval(pw), d, weight));
  });
  return best;
}

std::vector<double> LipschitzConstants(const Poly& p) {
  std::vector<double> l(static_cast<std::size_t>(p.nvars()), 0.0);
  for (std::size_t k = 0; k < p.coeffs().size(); ++k) {
    const Exponent e = p.ExponentAt(k);
    for (int i = 0; i < p.nvars(); ++i) l[i] += std::abs(p.coeffs()[k]) * e[i];
  }
  return l;
}

double CoveringRadius(const SamplingGrid& grid) {
  std::vector<double> r = grid.radii;
  std::sort(r.begin(), r.end());
  if (r.empty()) return 2.0;
  const double chord = 2.0 * std::sin(std::numbers::pi / (2.0 * grid.phases));
  double delta = r.front() + chord * r.front();   // points nearer the origin
  delta = std::max(delta, (1.0 - r.back()) + chord * r.back());
  for (std::size_t j = 0; j + 1 < r.size(); ++j) {
    delta = std::max(delta, 0.5 * (r[j + 1] - r[j]) + chord * r[j + 1]);
  }
  return delta;
}

StabilityCertificate IsStable(const Poly& p_in, const StabilityConfig& cfg) {
  const Poly p = p_in.Trim();
  if (p.IsZero()) throw std::invalid_argument("IsStable: p is identically zero");
  StabilityCertificate cert;
  cert.grid = SamplingGrid{cfg.grid_n, cfg.radii};
  cert.margin_grid = cert.grid;
  cert.profile = cfg.profile.empty() ? p.degrees() : cfg.profile;
  const int d = p.nvars();

  bool constant = true;
  for (int deg : p.degrees()) constant = constant && deg == 0;
  if (constant) {
    cert.min_modulus = std::abs(p.coeffs()[0]);
    cert.stable = cert.min_modulus > 0.0;
    cert.c_estimate = std::numeric_limits<double>::infinity();
    cert.rigorous = cert.stable;
    return cert;
  }

  const Poly pt = Reflect(p, DegreeProfile{cert.profile});
  const Poly pp = p.Pad(pt.degrees());
  const TermEvaluator ep(pp);
  const TermEvaluator et(pt);
  const auto samples = AxisSamples(cert.grid, std::max(ep.max_degree(), et.max_degree()));

  // Keep the smallest samples as refinement seeds.
  constexpr std::size_t kSeeds = 16;
  using Entry = std::pair<double, std::vector<std::size_t>>;
  std::priority_queue<Entry> seeds;
  double min_mod = std::numeric_limits<double>::infinity();
  ForEachGridPoint(samples, d, [&](const std::vector<std::size_t>& idx,
                                   const std::vector<const std::vector<Complex>*>& pw) {
    const Complex pv = ep.Eval(pw);
    const double mod = std::abs(pv);
    min_mod = std::min(min_mod, mod);
    bool torus = true;
    for (std::size_t i : idx) torus = torus && samples[i].on_circle;
    if (torus) {
      cert.reflection_defect =
          std::max(cert.reflection_defect, std::abs(mod - std::abs(et.Eval(pw))));
    }
    if (seeds.size() < kSeeds || mod < seeds.top().first) {
      seeds.emplace(mod, idx);
      if (seeds.size() > kSeeds) seeds.pop();
    }
  });
  cert.min_modulus = min_mod;

  std::vector<Entry> ordered;
  while (!seeds.empty()) {
    ordered.push_back(seeds.top());
    seeds.pop();
  }
  std::reverse(ordered.begin(), ordered.end());
  double best = std::numeric_limits<double>::infinity();
  for (const Entry& e : ordered) {
    Point z(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) z[i] = samples[e.second[i]].z;
    const Point refined = RefineZero(p, z, cfg.refine_iters);
    const double mod = std::abs(p(refined));
    if (mod < best) {
      best = mod;
      if (mod < cfg.zero_tol) {
        cert.witness = refined;
        cert.witness_modulus = mod;
      }
    }
  }
  if (cert.witness) {
    cert.stable = false;
    cert.c_estimate = 0.0;
    return cert;
  }

  cert.c_estimate = StabilityMargin(p, DegreeProfile{cert.profile}, cert.grid);
  cert.stable = cert.c_estimate > cfg.margin_tol;
  double bound = 0.0;
  for (double l : LipschitzConstants(p)) bound += l;
  cert.lipschitz_bound = bound * CoveringRadius(cert.grid);
  cert.rigorous = cert.stable && cert.min_modulus > cert.lipschitz_bound;
  return cert;
}

}  // namespace agler
