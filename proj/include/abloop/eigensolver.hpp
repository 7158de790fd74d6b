#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace abloop {

using SparseMatrixC = Eigen::SparseMatrix<std::complex<double>, Eigen::ColMajor, int>;

struct ShiftInvertOptions {
  double sigma = 0.0;
  int extra_vectors = 8;      // block size = k + extra_vectors
  int max_iterations = 300;
  double tolerance = 1e-10;   // residual / max(1, |lambda|)
  std::uint64_t seed = 20240601;
};

struct EigenPairs {
  std::vector<double> values;
  std::vector<Eigen::VectorXcd> vectors;
  std::vector<double> residuals;  // ||A v - lambda v|| with ||v|| = 1
  int iterations = 0;
  int below_shift = 0;  // eigenvalues of A below sigma (negative pivots of A - sigma I)
};

/// k eigenvalues of the Hermitian matrix A closest to sigma from above, by block inverse
/// subspace iteration on (A - sigma I)^-1 with Rayleigh-Ritz on A. Deterministic for a fixed seed.
/// Throws ErrorKind::convergence with the residuals when max_iterations is exhausted.
/// The result is the lowest part of the spectrum only when below_shift == 0.
EigenPairs shift_invert_eigs(const SparseMatrixC& A, int k, const ShiftInvertOptions& options);

}  // namespace abloop
