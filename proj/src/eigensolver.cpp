#include "abloop/eigensolver.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include <Eigen/SparseCholesky>

#include "abloop/error.hpp"

namespace abloop {

namespace {

using cd = std::complex<double>;

void orthonormalize(Eigen::MatrixXcd& X) {
  // two passes of modified Gram-Schmidt
  for (int pass = 0; pass < 2; ++pass) {
    for (int j = 0; j < X.cols(); ++j) {
      for (int i = 0; i < j; ++i) X.col(j) -= X.col(i).dot(X.col(j)) * X.col(i);
      const double nrm = X.col(j).norm();
      if (nrm < 1e-300) throw Error(ErrorKind::convergence, "subspace collapsed during orthogonalisation");
      X.col(j) /= nrm;
    }
  }
}

}  // namespace

EigenPairs shift_invert_eigs(const SparseMatrixC& A, int k, const ShiftInvertOptions& opt) {
  const int n = static_cast<int>(A.rows());
  if (A.rows() != A.cols()) throw Error(ErrorKind::precondition, "matrix must be square");
  if (k < 1 || k > n) throw Error(ErrorKind::precondition, "requested eigenpair count out of range");
  const int p = std::min(n, k + opt.extra_vectors);

  SparseMatrixC shifted = A;
  for (int i = 0; i < n; ++i) shifted.coeffRef(i, i) -= opt.sigma;
  Eigen::SimplicialLDLT<SparseMatrixC, Eigen::Lower> solver;
  solver.compute(shifted);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::convergence, "factorisation of A - sigma I failed");

  EigenPairs out;
  const Eigen::VectorXcd D = solver.vectorD();
  for (int i = 0; i < n; ++i)
    if (D(i).real() < 0.0) ++out.below_shift;

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd X(n, p);
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < n; ++i) X(i, j) = cd(normal(rng), normal(rng));
  orthonormalize(X);

  Eigen::VectorXd ritz;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    Eigen::MatrixXcd Y = solver.solve(X);
    orthonormalize(Y);
    const Eigen::MatrixXcd AY = A * Y;
    Eigen::MatrixXcd G = Y.adjoint() * AY;
    G = 0.5 * (G + G.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
    ritz = es.eigenvalues();
    X = Y * es.eigenvectors();
    const Eigen::MatrixXcd AX = AY * es.eigenvectors();

    bool converged = true;
    std::vector<double> res(k);
    for (int j = 0; j < k; ++j) {
      res[j] = (AX.col(j) - ritz(j) * X.col(j)).norm();
      if (res[j] > opt.tolerance * std::max(1.0, std::abs(ritz(j)))) converged = false;
    }
    out.iterations = it;
    if (converged) {
      for (int j = 0; j < k; ++j) {
        out.values.push_back(ritz(j));
        out.vectors.push_back(X.col(j));
        out.residuals.push_back(res[j]);
      }
      return out;
    }
    if (it == opt.max_iterations) {
      std::ostringstream os;
      os << "shift-invert subspace iteration stalled after " << it << " iterations; residuals:";
      for (double r : res) os << ' ' << r;
      throw Error(ErrorKind::convergence, os.str());
    }
  }
  return out;
}

}  // namespace abloop
