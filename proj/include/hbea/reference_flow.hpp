#pragma once

// High-accuracy explicit integration of an autonomous field on a fixed band
// (embedded Runge–Kutta–Fehlberg 7(8) with step-size control).

#include "hbea/hjet.hpp"
#include "hbea/spectral.hpp"

namespace hbea {

struct FlowTolerance {
  double abs_tol = 1e-13;
  double rel_tol = 1e-13;
  /// Upper bound on the step; 0 means T/50.
  double max_dt = 0.0;
};

FourierState integrate_flow(const VectorFieldEval& field, const FourierState& u0, double t_final,
                            const FlowTolerance& tol = {});

}  // namespace hbea
