#pragma once

#include <optional>
#include <span>
#include <vector>

#include "agler/poly.h"

namespace agler {

/// Product grid on the closed polydisk: every coordinate runs over
/// radius * exp(2 pi i k / phases) for the given radii and k < phases.
struct SamplingGrid {
  int phases = 64;
  std::vector<double> radii = {0.0, 0.5, 0.9, 0.99, 1.0};
};

struct StabilityConfig {
  int grid_n = 64;
  std::vector<double> radii = {0.0, 0.5, 0.9, 0.99, 1.0};
  int refine_iters = 50;
  double zero_tol = 1e-10;
  double margin_tol = 1e-12;
  /// Reflection profile for the margin; empty means the tight degree of p.
  std::vector<int> profile;
};

struct StabilityCertificate {
  bool stable = false;
  /// Sampled infimum of the margin ratio; infinite for nonzero constants.
  double c_estimate = 0.0;
  double min_modulus = 0.0;
  std::optional<Point> witness;
  double witness_modulus = 0.0;
  /// min_modulus exceeds the Lipschitz bound over the grid's covering radius,
  /// so the absence of zeros holds on the whole closed polydisk.
  bool rigorous = false;
  double lipschitz_bound = 0.0;
  /// max ||p(tau)| - |p~(tau)|| over the torus samples.
  double reflection_defect = 0.0;
  SamplingGrid grid;
  SamplingGrid margin_grid;
  std::vector<int> profile;
};

/// (|p(z)|^d - |p~(z)|^d) / prod_i (1 - |z_i|^2), with d the number of
/// variables. Requires every |z_i| < 1.
double MarginRatio(const Poly& p, const Poly& p_tilde, std::span<const Complex> z);

/// Minimum of MarginRatio over the interior part of `grid`: radii above
/// 1 - 1/phases are dropped.
double StabilityMargin(const Poly& p, const DegreeProfile& profile,
                       const SamplingGrid& grid);

/// Grid scan of |p| over the closed polydisk with Gauss-Newton refinement of
/// the smallest samples. A refined point with |p| < zero_tol is returned as
/// the witness of instability; otherwise the margin of the reflection
/// inequality is reported as c_estimate and must exceed margin_tol.
StabilityCertificate IsStable(const Poly& p, const StabilityConfig& cfg = {});

/// Sum over terms of |c_a| * a_i: a bound on |dp/dz_i| on the closed polydisk.
std::vector<double> LipschitzConstants(const Poly& p);

/// Largest distance from a point of the closed unit disk to the nearest
/// sample of the one-variable grid.
double CoveringRadius(const SamplingGrid& grid);

}  // namespace agler
