#pragma once

// Small builders shared by the unit tests.

#include <cmath>
#include <random>

#include "hbea/models.hpp"
#include "hbea/spectral.hpp"

namespace test {

using hbea::cd;

inline hbea::PdeModel nls(int K, double lambda = 1.0, int sigma = 1) {
  hbea::ModelParams p;
  p.kind = hbea::ModelKind::nls;
  p.max_mode = K;
  p.lambda = lambda;
  p.sigma = sigma;
  return hbea::PdeModel(p);
}

inline hbea::PdeModel nonlocal(int K, double lambda = 1.0) {
  hbea::ModelParams p;
  p.kind = hbea::ModelKind::nonlocal_nls;
  p.max_mode = K;
  p.lambda = lambda;
  return hbea::PdeModel(p);
}

/// Wave with V(u) = Σ c_j u^j.
inline hbea::PdeModel wave(int K, std::vector<double> coeffs) {
  hbea::ModelParams p;
  p.kind = hbea::ModelKind::wave;
  p.max_mode = K;
  p.potential.coefficients = std::move(coeffs);
  return hbea::PdeModel(p);
}

inline hbea::PdeModel sine_gordon(int K, double gamma = 1.0) {
  hbea::ModelParams p;
  p.kind = hbea::ModelKind::wave;
  p.max_mode = K;
  p.potential.kind = hbea::WavePotential::Kind::sine_gordon;
  p.potential.gamma = gamma;
  return hbea::PdeModel(p);
}

/// Random state with |û_k| ≤ scale·e^{−decay|k|}.
inline hbea::FourierState random(const hbea::PdeModel& m, std::uint64_t seed, double scale = 0.3,
                                 double decay = 0.5, hbea::Cutoff cut = hbea::Cutoff::full()) {
  std::mt19937_64 rng(seed);
  return hbea::random_state(m.grid_ptr(), m.space(), cut, rng, scale, decay);
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline double rel(const hbea::FourierState& a, const hbea::FourierState& b) {
  return hbea::y_norm(a - b) / std::max(hbea::y_norm(b), 1e-300);
}

}  // namespace test
