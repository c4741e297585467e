#pragma once

// Independent reference constructions for small systems. Nothing here calls
// the library's stepping or expansion code.

#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using cd = std::complex<double>;
using cvec = std::vector<cd>;
/// Polynomial vector field in real coordinates, evaluated at complex points.
using Field = std::function<cvec(const cvec&)>;

/// One step of the s-stage Gauss method (s = 1, 2) for complex h, stages by
/// plain fixed-point iteration.
cvec gauss_map(const Field& f, const cvec& y, cd h, int s);

/// j-th Taylor coefficient of fn at 0 by the trapezoid rule on |z| = r.
cvec taylor(const std::function<cvec(cd)>& fn, int j, double r, int points = 32);

/// Modified-field coefficient f^j(y), j ≤ 3, of the s-stage Gauss method:
/// g^j from Cauchy integrals of the map in h, Lie derivatives from Cauchy
/// integrals along the direction, then term matching.
cvec modified_coefficient(const Field& f, const cvec& y, int j, int s);

/// ∫₀¹ ⟨y, J⁻¹ g(ty)⟩ dt with the given real pairing and J⁻¹.
double line_integral(const std::function<cvec(const cvec&)>& g, const cvec& y,
                     const std::function<double(const cvec&, const cvec&)>& pairing,
                     const std::function<cvec(const cvec&)>& j_inv);

// ---------------------------------------------------------------------------
// One-mode reductions. Coordinates are real parts and imaginary parts of the
// k = 1 coefficients.

/// Cubic NLS restricted to û_1 = x0 + i x1.
Field nls_one_mode(double lambda);

/// Wave with V(u) = c2 u² + c4 u⁴ restricted to û_1 = x0 + i x1,
/// v̂_1 = x2 + i x3 (û_{−1}, v̂_{−1} mirrored).
Field wave_one_mode(double c2, double c4);

/// Closed forms for the single-mode NLS under the midpoint rule, where the
/// map is a rotation: f³(c) = −iΩ₂(|c|²)c and H³(c) = ½∫₀^{|c|²}Ω₂.
cd nls_midpoint_f3(cd c, double lambda);
double nls_midpoint_H3(cd c, double lambda);

}  // namespace oracle
