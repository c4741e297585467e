#include <doctest.h>

#include "hbea/errors.hpp"
#include "support.hpp"

using namespace hbea;

namespace {

FourierState scalar_state(int K, double q = 1.0) {
  return FourierState(make_grid(K), PhaseSpace::scalar(q));
}

}  // namespace

TEST_CASE("gevrey_norm examples") {
  FourierState u = scalar_state(4);
  CHECK(gevrey_norm(u, {0.7, 1.5, 1.0}) == 0.0);

  u.at(0, 1) = 1.0;
  CHECK(gevrey_norm(u, {0.0, 0.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-15));

  FourierState v = scalar_state(4);
  v.at(0, 2) = 1.0;
  // weight k^ℓ e^{τ|k|} at k = 2
  CHECK(gevrey_norm(v, {0.5, 1.0, 1.0}) == doctest::Approx(2.0 * std::exp(1.0)).epsilon(1e-14));

  CHECK_THROWS_AS(gevrey_norm(v, {-0.1, 0.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(gevrey_norm(v, {0.1, 0.0, 0.0}), InvalidArgument);
}

TEST_CASE("project examples") {
  const PdeModel w = test::wave(6, {0, 0, 0.5});
  const FourierState u = test::random(w, 3);
  CHECK(project(u, Cutoff::full()) == u);

  FourierState only3 = w.zero_state();
  only3.at(0, 3) = 1.0;
  only3.at(0, -3) = 1.0;
  CHECK(y_norm(project(only3, Cutoff(2))) == 0.0);

  const PdeModel n = test::nls(6);
  FourierState s = n.zero_state();
  for (int k = 1; k <= 3; ++k) s.at(0, k) = 1.0;
  const FourierState p = project(s, Cutoff(5));
  CHECK(p.at(0, 1) == cd(1.0));
  CHECK(p.at(0, 2) == cd(1.0));
  CHECK(p.at(0, 3) == cd(0.0));
  CHECK(band_limit(n.space(), Cutoff(5), 6) == 2);
  CHECK(band_limit(w.space(), Cutoff(5), 6) == 5);
}

TEST_CASE("tail_bound_check examples") {
  FourierState z = scalar_state(16);
  const TailBound t0 = tail_bound_check(z, {0.3, 0.0, 1.0}, Cutoff(8));
  CHECK(t0.lhs == 0.0);
  CHECK(t0.rhs == 0.0);

  FourierState in = scalar_state(16);
  for (int k = -3; k <= 3; ++k) in.at(0, k) = 1.0;
  const TailBound t1 = tail_bound_check(in, {0.3, 0.0, 1.0}, Cutoff(8));
  CHECK(t1.lhs == 0.0);
  CHECK(t1.rhs > 0.0);

  FourierState d = scalar_state(16);
  for (int k = -16; k <= 16; ++k) d.at(0, k) = std::exp(-0.3 * std::abs(k));
  const TailBound t2 = tail_bound_check(d, {0.3, 0.0, 1.0}, Cutoff(8));
  double tail = 0;
  for (int k = 9; k <= 16; ++k) tail += 2 * std::exp(-0.6 * k);
  CHECK(t2.lhs == doctest::Approx(std::sqrt(tail)).epsilon(1e-13));
  CHECK(t2.lhs <= t2.rhs * (1 + 1e-10));
}

TEST_CASE("operator_power_bound examples") {
  CHECK(operator_power_bound(1.0, 0.5, 0, 1.0) == 1.0);
  CHECK(operator_power_bound(1.0 / std::exp(1.0), 0.0, 1, 1.0) == doctest::Approx(1.0));
  CHECK(operator_power_bound(1.0, 0.5, 2, 2.0) ==
        doctest::Approx(std::pow(4.0 / (std::exp(1.0) * 0.5), 4)).epsilon(1e-14));
  CHECK(operator_power_bound(1.0, 0.5, 2, 2.0) == doctest::Approx(74.98).epsilon(1e-3));
  CHECK_THROWS_AS(operator_power_bound(0.5, 0.5, 1, 1.0), InvalidArgument);
}

TEST_CASE("transforms: round trip and smooth sizes") {
  CHECK(FourierGrid::smooth_size(33) == 36);
  CHECK(FourierGrid::smooth_size(1) == 1);
  CHECK(FourierGrid::smooth_size(97) == 100);
  for (int K : {1, 5, 16}) {
    const PdeModel n = test::nls(K);
    const FourierState u = test::random(n, 10 + K, 1.0, 0.0);
    FourierState back = u.zeros_like();
    from_physical(to_physical(u), back);
    CHECK(test::rel(back, u) < 1e-12);
  }
}

TEST_CASE("property: Parseval against the physical grid") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const PdeModel n = test::nls(8);
    const FourierState u = test::random(n, seed, 1.0, 0.1);
    const auto vals = to_physical(u);
    double phys = 0;
    for (const cd& v : vals[0]) phys += std::norm(v) * n.grid().dx();
    CHECK(std::sqrt(phys) == doctest::Approx(y_norm(u)).epsilon(1e-10));

    // Wave: |û₀|² + ∫u_x² + ∫v².
    const PdeModel w = test::wave(8, {0, 0, 0.5});
    const FourierState U = test::random(w, seed + 100, 1.0, 0.1);
    FourierState ux = U.zeros_like();
    for (int k = -8; k <= 8; ++k) ux.at(0, k) = cd(0, k) * U.at(0, k);
    const auto dv = to_physical(ux);
    const auto uv = to_physical(U);
    double s = std::norm(U.at(0, 0));
    for (std::size_t j = 0; j < dv[0].size(); ++j) {
      s += (std::norm(dv[0][j]) + std::norm(uv[1][j])) * w.grid().dx();
      CHECK(std::abs(uv[0][j].imag()) < 1e-12);
    }
    CHECK(std::sqrt(s) == doctest::Approx(y_norm(U)).epsilon(1e-10));
  }
}

TEST_CASE("property: projector algebra and the P_m A estimate") {
  const PdeModel n = test::nls(10);
  const PdeModel w = test::wave(10, {0, 0, 0.5});
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    for (const PdeModel* m : {&n, &w}) {
      const FourierState u = test::random(*m, seed, 1.0, 0.0);
      for (std::int64_t a : {0, 1, 3, 7, 30}) {
        for (std::int64_t b : {0, 2, 5, 100}) {
          CHECK(project(project(u, Cutoff(a)), Cutoff(b)) == project(u, min(Cutoff(a), Cutoff(b))));
        }
        const FourierState p = project(u, Cutoff(a));
        CHECK(project(p, Cutoff(a)) == p);
        // Only the k ≠ 0 part of A counts; the wave's zero mode is in B.
        CHECK(y_norm(m->apply_A(p)) <= static_cast<double>(a) * y_norm(p) * (1 + 1e-12) + 1e-300);
      }
    }
  }
}

TEST_CASE("property: Gevrey norms grow with ell and tau") {
  const PdeModel n = test::nls(12);
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const FourierState u = test::random(n, seed, 1.0, 0.3);
    for (double tau : {0.0, 0.2, 0.7}) {
      for (double ell : {0.0, 0.5, 2.0}) {
        CHECK(gevrey_norm(u, {tau, ell, 2.0}) <= gevrey_norm(u, {tau, ell + 1, 2.0}) * (1 + 1e-14));
        CHECK(gevrey_norm(u, {tau, ell, 2.0}) <= gevrey_norm(u, {tau + 0.1, ell, 2.0}) * (1 + 1e-14));
      }
    }
  }
}

TEST_CASE("real fields keep conjugate symmetry") {
  const PdeModel w = test::wave(6, {0, 0, 0.5, 0, 0.25});
  FourierState u = test::random(w, 4);
  FourierState v = test::random(w, 5);
  FourierState x = u + 0.3 * v;
  x *= cd(1.7);
  x.axpy(-2.0, w.apply_B(u));
  for (int c = 0; c < 2; ++c) {
    for (int k = 1; k <= 6; ++k) {
      CHECK(std::abs(x.at(c, -k) - std::conj(x.at(c, k))) < 1e-12);
      CHECK(std::abs(w.apply_A(x).at(c, -k) - std::conj(w.apply_A(x).at(c, k))) < 1e-12);
    }
    CHECK(std::abs(x.at(c, 0).imag()) < 1e-12);
  }
}

TEST_CASE("zero state has zero norms; layout mismatch is rejected") {
  const PdeModel n = test::nls(4);
  CHECK(y_norm(n.zero_state()) == 0.0);
  CHECK(gevrey_norm(n.zero_state(), {2.0, 3.0, 2.0}) == 0.0);
  FourierState a = n.zero_state();
  const FourierState b = test::nls(5).zero_state();
  CHECK_THROWS_AS(a += b, InvalidArgument);
}
