#pragma once

#include <vector>

#include "abloop/curve.hpp"
#include "abloop/types.hpp"

namespace abloop {

/// Which quadratic form a strip discretisation represents.
///   b:       curvilinear form in the original gauge
///   b_tilde: form after multiplication by exp(iK), K = int_0^u c0 Omega_2
enum class StripForm { b, b_tilde };

inline const char* to_string(StripForm f) { return f == StripForm::b ? "b" : "b~"; }

struct StripFieldRequest {
  const FrameField* frame = nullptr;
  double c0 = 0.0;
  double a = 0.0;
  int n_s = 0;
  int n_u = 0;
  StripForm form = StripForm::b;
  CoeffVariant coeffs = CoeffVariant::derived;
  bool with_phase = false;
};

/// Coefficient fields of a strip form sampled on a periodic-in-s, node-centred-in-u grid.
/// Node (i, j) is stored at i * n_u + j; u-face (i, j+1/2) at i * (n_u - 1) + j.
struct StripFields {
  int n_s = 0;
  int n_u = 0;
  std::vector<double> s_nodes;
  std::vector<double> u_nodes;
  std::vector<double> potential;    // zeroth-order coefficient at nodes
  std::vector<double> s_stiffness;  // (1 + u gamma)^-2 at s-faces (i+1/2, j)
  std::vector<double> s_flux;       // c in 2 c Im(conj(g) g_s) at s-faces
  std::vector<double> u_flux;       // c in 2 c Im(conj(g) g_u) at u-faces
  std::vector<double> gamma_nodes;  // gamma(s_i)
  std::vector<double> phase;        // K(s_i, u_j) (derived variant), when requested
};

namespace serial {
StripFields evaluate_strip_fields(const StripFieldRequest& request);
}  // namespace serial

namespace parallel {
/// OpenMP over s-columns; bitwise identical to serial::evaluate_strip_fields.
StripFields evaluate_strip_fields(const StripFieldRequest& request);
}  // namespace parallel

}  // namespace abloop
