#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "abloop/curve.hpp"
#include "abloop/types.hpp"

namespace abloop {

/// Ordered eigenvalues of a discretised operator together with how they were obtained.
struct SpectralResult {
  std::vector<double> eigenvalues;
  std::vector<Eigen::VectorXcd> eigenvectors;
  std::vector<double> residuals;
  int size = 0;              // basis size / grid size
  std::string method;
  bool fallback = false;     // smooth solver was replaced by finite differences
  int negative_count = -1;   // number of negative eigenvalues, when computed
};

/// -p d^2/ds^2 + q(s) on [0, L] with periodic or flux-twisted boundary conditions.
/// q is sampled at s_i = i L / n.
struct LongitudinalProblem {
  double length = 0.0;
  double stiffness = 1.0;
  std::vector<double> potential;
  FluxBoundary boundary = FluxBoundary::periodic;
  double c0 = 0.0;
  int modes = 5;
  int basis_size = 128;
  bool want_vectors = false;
};

enum class LongitudinalMethod { automatic, fourier, finite_difference };

/// Lowest eigenvalues by Fourier-Galerkin in the twisted plane-wave basis, or by
/// second-order finite differences on the sample grid when q is not resolved spectrally.
SpectralResult solve_longitudinal(const LongitudinalProblem& problem,
                                  LongitudinalMethod method = LongitudinalMethod::automatic);

struct ComparisonOptions {
  FluxBoundary boundary = FluxBoundary::twisted;
  int basis_size = 128;
  int n_potential = 512;
};

/// mu_1..mu_n of -d^2/ds^2 - gamma^2/4 on the loop.
std::vector<double> solve_comparison(const FrameField& frame, Flux flux, int n, const ComparisonOptions& options = {});

struct UpmOptions {
  FluxBoundary boundary = FluxBoundary::twisted;
  CoeffVariant variant = CoeffVariant::derived;
  int basis_size = 128;
  int n_potential = 512;
  int bounds_n_u = 33;
  int bounds_n_s = 256;  // s samples for N, M; 0: the frame's sample grid
};

struct UpmResult {
  std::vector<double> mu;
  double stiffness = 1.0;  // p^{+-}
  double shift = 0.0;      // constant added to -gamma^2/4
  double N = 0.0;
  double M = 0.0;
};

/// Eigenvalues of the decoupled longitudinal bracketing operators
///   U+ = -[(1 - a g+)^-2 + N/2] d^2/ds^2 - gamma^2/4 + N/2 + M
///   U- = -[(1 + a g+)^-2 - N/2] d^2/ds^2 - gamma^2/4 - N/2 - M
UpmResult solve_U_pm(const FrameField& frame, Flux flux, double a, Side side, int n, const UpmOptions& options = {});
UpmResult solve_U_pm(const FrameField& frame, Flux flux, double a, Side side, int n, const CoeffBounds& bounds,
                     const UpmOptions& options = {});

}  // namespace abloop
