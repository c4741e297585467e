#include "hbea/harness/initial_condition.hpp"

#include <cmath>
#include <random>

#include "hbea/errors.hpp"

namespace hbea::harness {

FourierState make_initial_state(const PdeModel& model, const InitialConditionSpec& spec) {
  FourierState u = model.zero_state();
  const int K = model.max_mode();
  const bool real = model.space().real_field;
  const double root2pi = std::sqrt(kTwoPi);

  if (spec.kind == "gevrey_decay") {
    std::mt19937_64 rng(spec.seed);
    for (int c = 0; c < u.components(); ++c) {
      const int base = model.space().base_order[c];
      for (int k = real ? 0 : -K; k <= K; ++k) {
        const double ak = std::abs(k);
        const double mag =
            spec.amplitude * std::exp(-spec.tau * ak) * std::pow(1.0 + ak, -spec.ell - base);
        const double phase = kTwoPi * uniform01(rng);
        if (real && k == 0) {
          u.at(c, 0) = mag * std::cos(phase);
        } else {
          u.at(c, k) = std::polar(mag, phase);
          if (real) u.at(c, -k) = std::conj(u.at(c, k));
        }
      }
    }
  } else if (spec.kind == "plane_wave") {
    if (std::abs(spec.k) > K) throw ConfigError("plane_wave: k outside the band");
    if (real) {
      if (spec.k == 0) {
        u.at(0, 0) = spec.amplitude * root2pi;
      } else {
        u.at(0, spec.k) = 0.5 * spec.amplitude * root2pi;
        u.at(0, -spec.k) = 0.5 * spec.amplitude * root2pi;
      }
    } else {
      u.at(0, spec.k) = spec.amplitude * root2pi;
    }
  } else if (spec.kind == "explicit") {
    for (const auto& m : spec.modes) {
      if (std::abs(m.k) > K || m.component < 0 || m.component >= u.components()) {
        throw ConfigError("explicit initial mode outside the band");
      }
      u.at(m.component, m.k) = cd(m.re, m.im);
      if (real && m.k != 0) u.at(m.component, -m.k) = cd(m.re, -m.im);
    }
  } else {
    throw ConfigError("unknown initial condition kind '" + spec.kind + "'");
  }
  u.enforce_real_symmetry();
  try {
    model.check_domain(u);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("initial condition outside the model domain: ") + e.what());
  }
  return u;
}

}  // namespace hbea::harness
