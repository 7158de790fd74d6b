#pragma once

namespace abloop {

/// Aharonov-Bohm flux through the solenoid at the origin, in units of the flux quantum.
struct Flux {
  double c0 = 0.0;
};

/// Which coefficient set to use where the published forms and a first-principles
/// substitution of the gauge field disagree.
enum class CoeffVariant { derived, literal };

/// How the loop circulation of the gauge field is handled in the longitudinal problems.
///   twisted:  u(L) = exp(-2 pi i c0) u(0); the circulation lives in the boundary condition.
///   periodic: u(L) = u(0); the circulation stays in the coefficients.
enum class FluxBoundary { twisted, periodic };

/// Sign tag of a bracketing operator: plus = Dirichlet/upper, minus = Robin/lower.
enum class Side { plus, minus };

inline const char* to_string(CoeffVariant v) { return v == CoeffVariant::derived ? "derived" : "literal"; }
inline const char* to_string(FluxBoundary b) { return b == FluxBoundary::twisted ? "twisted" : "periodic"; }
inline const char* to_string(Side s) { return s == Side::plus ? "+" : "-"; }

}  // namespace abloop
