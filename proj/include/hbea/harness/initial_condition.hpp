#pragma once

#include "hbea/harness/config.hpp"
#include "hbea/models.hpp"

namespace hbea::harness {

/// gevrey_decay: |û_{c,k}| = A e^{−τ|k|}(1+|k|)^{−ℓ−s_c} with uniform random
///   phases (s_c is the component's base Sobolev order, so the wave's u sits
///   one order above v).
/// plane_wave: u = A e^{ikx} (complex) or A cos(kx) (real fields).
/// explicit: listed coefficients; real fields are mirrored.
FourierState make_initial_state(const PdeModel& model, const InitialConditionSpec& spec);

}  // namespace hbea::harness
