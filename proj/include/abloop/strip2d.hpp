#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "abloop/bracketing.hpp"
#include "abloop/curve.hpp"
#include "abloop/eigensolver.hpp"
#include "abloop/kernels.hpp"
#include "abloop/types.hpp"

namespace abloop {

/// Tensor grid on [0, L) x [-a, a]; n_u odd so u = 0 is a grid line.
struct StripGrid {
  int n_s = 128;
  int n_u = 129;

  /// Default resolution: n_s as given, h_u <= min(0.5 / beta, a / 8) with at least 129 rows.
  static StripGrid for_problem(double a, double beta, int n_s = 128);
  /// (h_s, h_u) -> (h_s / 2, h_u / 2).
  StripGrid refined() const { return {2 * n_s, 2 * (n_u - 1) + 1}; }
};

/// Boundary terms of the minus forms.
///   signed_curvature: -gamma/(2(1 + a gamma)) |g(a)|^2 + gamma/(2(1 - a gamma)) |g(-a)|^2
///   gamma_plus:       -gamma_plus (|g(a)|^2 + |g(-a)|^2)
enum class RobinKind { signed_curvature, gamma_plus };

struct StripSetup {
  StripForm form = StripForm::b;
  Side side = Side::plus;  // plus: Dirichlet at u = +-a; minus: Robin
  CoeffVariant coeffs = CoeffVariant::derived;
  RobinKind robin = RobinKind::signed_curvature;
  bool parallel = true;
  bool with_phase = false;
};

/// Discrete strip form F, diagonal mass M and the Hermitian matrix A = M^-1/2 F M^-1/2.
/// Unknown (i, j) is row i * m_u + (j - first_j).
struct StripOperator {
  StripGrid grid;
  StripSetup setup;
  double a = 0.0;
  double beta = 0.0;
  double c0 = 0.0;
  double gamma_plus = 0.0;
  double h_s = 0.0;
  double h_u = 0.0;
  int first_j = 0;
  int m_u = 0;
  SparseMatrixC form;
  Eigen::VectorXd mass;
  SparseMatrixC matrix;
  Eigen::VectorXd phase;  // K at unknowns when setup.with_phase

  int unknowns() const { return grid.n_s * m_u; }
  int index(int i, int j) const { return i * m_u + (j - first_j); }
  std::string tag() const;
};

StripOperator assemble(const FrameField& frame, Flux flux, double a, double beta, const StripGrid& grid,
                       const StripSetup& setup = {});

/// Lowest k eigenpairs of op.matrix by shift-invert with sigma = -beta^2/4 - gamma_plus^2 - 1,
/// lowered until no eigenvalue lies below the shift.
EigenPairs lowest_eigs(const StripOperator& op, int k);

/// Richardson estimate of the lowest k strip eigenvalues from grid and grid.refined().
/// Each raw eigenvalue is first corrected by the grid defect of the transverse delta problem on
/// the same u-grid (Dirichlet for plus, Robin/Neumann for minus); tolerance = |estimate - fine|.
struct StripEstimate {
  StripGrid coarse;
  StripGrid fine;
  std::vector<double> raw_coarse;
  std::vector<double> raw_fine;
  double defect_coarse = 0.0;
  double defect_fine = 0.0;
  bool defect_corrected = false;
  std::vector<double> value;
  std::vector<double> tolerance;
};

StripEstimate estimate_eigs(const FrameField& frame, Flux flux, double a, double beta, const StripGrid& grid,
                            const StripSetup& setup, int k);

struct Lemma2Report {
  StripGrid coarse;
  StripGrid fine;
  std::vector<double> eig_b;
  std::vector<double> eig_conjugated;
  double similarity_error = 0.0;  // max relative eigenvalue difference, check (i)
  std::vector<double> diff_coarse;  // b - b~ on the coarse grid
  std::vector<double> diff_fine;
  std::vector<double> order;        // log2(|diff_coarse| / |diff_fine|)
  bool order_resolved = false;      // some difference above rounding level
  double overlap = 0.0;             // |<v_b, e^{iK} v_b~>| on the fine grid
  bool similarity_ok = false;
  bool order_ok = false;
};

Lemma2Report lemma2_check(const FrameField& frame, Flux flux, double a, double beta, const StripGrid& grid,
                          Side side = Side::plus, CoeffVariant coeffs = CoeffVariant::derived, int k = 3);

/// Strip eigenvalue bracket for the report's (beta, c0, a): records kappa+-_j with Richardson
/// tolerances and checks tau-_j - tol <= kappa-_j <= kappa+_j + tol, kappa+_j <= tau+_j + tol.
void sandwich_check(const FrameField& frame, BracketReport& report, const StripGrid& grid, bool parallel = true);

/// Matrix Market coordinate dump of op.matrix.
void write_matrix_market(const StripOperator& op, std::ostream& out);

}  // namespace abloop
