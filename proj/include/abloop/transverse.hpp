#pragma once

#include "abloop/spectral1d.hpp"
#include "abloop/types.hpp"

namespace abloop {

/// -d^2/du^2 - beta delta(u) on (-a, a).
///   Side::plus:  Dirichlet at u = +-a.
///   Side::minus: Robin f'(+-a) = +-gamma_plus f(+-a) (gamma_plus = 0 gives Neumann).
struct TransverseProblem {
  double a = 1.0;
  double beta = 0.0;
  Side side = Side::plus;
  double gamma_plus = 0.0;
};

struct TransverseResult {
  double zeta = 0.0;   // negative eigenvalue, -kappa^2
  double kappa = 0.0;
  double residual = 0.0;  // |secular function| at the root
  bool in_regime = false;
};

/// Hypotheses under which the transverse operator is known to have exactly one negative
/// eigenvalue: beta a > 8/3 for plus; beta > 8 and beta > 8 gamma_plus / 3 for minus.
bool transverse_in_regime(const TransverseProblem& problem);

/// Even-mode secular equation, solved by bisection in kappa in (1e-12, beta) and Newton polish.
///   plus:  2 kappa coth(kappa a) = beta
///   minus: 2 (kappa t - g) = beta (1 - g t / kappa),  t = tanh(kappa a), g = gamma_plus
/// Outside the regime the root is still computed and in_regime is false, unless strict is set.
TransverseResult transverse_secular(const TransverseProblem& problem, bool strict = false);

/// Lowest `count` eigenvalues of the finite-difference discretisation with grid_size intervals
/// (even, so u = 0 is a node). Sets negative_count.
SpectralResult transverse_grid_oracle(const TransverseProblem& problem, int grid_size, int count = 3);

/// Same discretisation without the oracle's minimum resolution; used to measure grid defects.
SpectralResult transverse_grid_eigenvalues(const TransverseProblem& problem, int grid_size, int count = 1);

struct ExtrapolatedValue {
  double coarse = 0.0;
  double fine = 0.0;
  double extrapolated = 0.0;  // (4 fine - coarse) / 3
};

/// Ground-state Richardson extrapolation over grid_size and 2 grid_size.
ExtrapolatedValue transverse_oracle_extrapolated(const TransverseProblem& problem, int grid_size);

/// Smallest even grid size with beta h <= target, at least 200.
int transverse_grid_for(const TransverseProblem& problem, double beta_h);

}  // namespace abloop
