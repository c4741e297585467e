#include <doctest.h>

#include "hbea/bea.hpp"
#include "hbea/errors.hpp"
#include "support.hpp"

using namespace hbea;

TEST_CASE("modified field coefficients: f¹ = F and the order-p gap") {
  const PdeModel n = test::nls(5);
  const FourierState u = test::random(n, 1);
  const FourierState F = n.apply_F(u);
  for (int s = 1; s <= 2; ++s) {
    const ButcherTableau t = gauss_legendre(s);
    CHECK(test::rel(modified_field_coefficient(n, t, 1, u, Cutoff::full()).value, F) < 1e-14);
    for (FieldEngine e : {FieldEngine::iterate_log, FieldEngine::lie_recursion}) {
      ModifiedFieldOptions o;
      o.engine = e;
      for (int j = 2; j <= t.order; ++j) {
        const FieldCoefficient c = modified_field_coefficient(n, t, j, u, Cutoff::full(), o);
        INFO("s=" << s << " j=" << j << " engine=" << to_string(e));
        if (e == FieldEngine::iterate_log) {
          CHECK(y_norm(c.value) <= 1e-6 * y_norm(F));
        } else {
          // nested differences: zero up to the reported noise
          CHECK(y_norm(c.value) <= std::max(1e-6 * y_norm(F), 10 * c.noise));
        }
      }
    }
  }
}

TEST_CASE("engines agree on f³") {
  const PdeModel sg = test::sine_gordon(4);
  const FourierState u = test::random(sg, 2);
  ModifiedFieldOptions lie;
  lie.engine = FieldEngine::lie_recursion;
  const FieldCoefficient a = modified_field_coefficient(sg, gauss_legendre(1), 3, u, Cutoff::full());
  const FieldCoefficient b =
      modified_field_coefficient(sg, gauss_legendre(1), 3, u, Cutoff::full(), lie);
  CHECK(test::rel(b.value, a.value) < 1e-5);
  CHECK_FALSE(a.noisy);
  CHECK(a.noise <= 1e-8 * y_norm(a.value));
  CHECK_THROWS_AS(modified_field_coefficient(sg, gauss_legendre(1), 13, u, Cutoff::full()),
                  InvalidArgument);
}

TEST_CASE("resolve_policy") {
  const PdeModel w = test::wave(64, {});
  const ButcherTableau mp = gauss_legendre(1);
  const ResolvedPolicy e =
      resolve_policy(TruncationPolicy::explicit_policy(4, Cutoff(7)), 0.1, mp, w);
  CHECK(e.n == 4);
  CHECK(e.m == Cutoff(7));

  TruncationPolicy p;
  p.mode = PolicyMode::paper_coupled;
  p.tau = 1.0;
  p.chi = 1.0;
  const ResolvedPolicy r = resolve_policy(p, 0.01, mp, w);
  CHECK(r.m == Cutoff(10));
  CHECK(r.n == 3);
  CHECK(r.n_clamped);

  // q/(1+q) = 1/2 for the wave, 2/3 for NLS.
  p.chi = 10.0;
  for (const PdeModel& m : {w, test::nls(1000)}) {
    const double q = m.space().q;
    double prev_m = 0;
    for (double h : {0.04, 0.02, 0.01}) {
      const ResolvedPolicy a = resolve_policy(p, h, mp, m);
      const ResolvedPolicy b = resolve_policy(p, h / 2, mp, m);
      const double ratio = static_cast<double>(b.m.value()) / a.m.value();
      CHECK(ratio == doctest::Approx(std::pow(2.0, q / (1 + q))).epsilon(0.02));
      CHECK(a.m.value() >= prev_m);
      CHECK(b.n >= a.n);
      prev_m = static_cast<double>(a.m.value());
    }
  }
  CHECK_THROWS_AS(resolve_policy(p, 0.0, mp, w), InvalidArgument);
}

TEST_CASE("modified_flow examples") {
  const PdeModel n = test::nls(4);
  const FourierState u = test::random(n, 3);
  const ModifiedField f1(n, gauss_legendre(1), 1, Cutoff::full());
  const FourierState ref =
      integrate_flow([&](const FourierState& x) { return n.apply_F(x); }, u, 0.1);
  CHECK(test::rel(modified_flow(f1, u, 0.1), ref) < 1e-12);

  // Linear midpoint: modified symbol (2/h)·atanh(ha/2) = a(1 + (ha)²/12 + (ha)⁴/80 + …).
  const PdeModel lin = test::nls(3, 0.0);
  const FourierState v = test::random(lin, 4, 1.0, 0.0);
  const double h = 0.05;
  for (int order : {3, 5}) {
    const ModifiedField f(lin, gauss_legendre(1), order, Cutoff::full());
    const FourierState out = modified_flow(f, v, h);
    for (int k = -3; k <= 3; ++k) {
      const cd a(0, -static_cast<double>(k * k));
      cd sym = a * (1.0 + (h * a) * (h * a) / 12.0);
      if (order == 5) sym += a * std::pow(h * a, 4) / 80.0;
      const cd want = std::exp(h * sym) * v.at(0, k);
      CHECK(std::abs(out.at(0, k) - want) < 1e-11);
    }
  }
}

TEST_CASE("modified Hamiltonian examples") {
  const PdeModel n = test::nls(4);
  const ModifiedField f(n, gauss_legendre(1), 4, Cutoff::full());
  const ModifiedHamiltonian H(f);
  CHECK(H.value(n.zero_state(), 0.1) == doctest::Approx(n.hamiltonian(n.zero_state())));

  const PdeModel nl = test::nonlocal(4, 0.5);
  const ModifiedField fl(nl, gauss_legendre(1), 3, Cutoff::full());
  CHECK_THROWS_AS(ModifiedHamiltonian{fl}, InvalidArgument);
  const FourierState anchor = test::random(nl, 5, 0.5);
  const ModifiedHamiltonian Hl(fl, anchor);
  CHECK(Hl.value(anchor, 0.1) == doctest::Approx(nl.hamiltonian(anchor)).epsilon(1e-14));

  const FourierState u = test::random(n, 6);
  const ModifiedHamiltonian::Checked c = H.value_checked(u, 0.1);
  CHECK(c.rel_diff < 1e-10);
  const std::vector<double> hj = H.coefficients(u);
  CHECK(hj.size() == 4);
  CHECK(hj[0] == doctest::Approx(n.hamiltonian(u) - n.hamiltonian(n.zero_state())));
  CHECK(std::abs(hj[1]) < 1e-6 * std::abs(hj[0]));
}

TEST_CASE("property: H̃ is exactly conserved for linear models") {
  for (const PdeModel& m : {test::nls(6, 0.0), test::wave(6, {0, 0, 0.5})}) {
    for (int s = 1; s <= 2; ++s) {
      const ButcherTableau t = gauss_legendre(s);
      const ModifiedHamiltonian H(ModifiedField(m, t, t.order + 2, Cutoff::full()));
      const double h = 0.05;
      FourierState u = test::random(m, 7);
      const double h0 = H.value(u, h);
      const StageSolveConfig cfg{.tol = 1e-15, .max_iter = 400};
      double drift = 0;
      for (int i = 0; i < 20; ++i) {
        u = step(m, t, u, h, Cutoff::full(), cfg);
        drift = std::max(drift, std::abs(H.value(u, h) - h0));
      }
      CHECK(drift <= 1e-10 * std::max(1.0, std::abs(h0)));
    }
  }
}

TEST_CASE("property: H̃ − H is O(h^p)") {
  const PdeModel n = test::nls(4);
  const FourierState u = test::random(n, 8);
  for (int s = 1; s <= 2; ++s) {
    const ButcherTableau t = gauss_legendre(s);
    const ModifiedHamiltonian H(ModifiedField(n, t, t.order + 2, Cutoff::full()));
    auto diff = [&](double h) { return std::abs(H.value(u, h) - n.hamiltonian(u)); };
    const double slope = std::log(diff(0.1) / diff(0.05)) / std::log(2.0);
    CHECK(slope == doctest::Approx(t.order).epsilon(0.3 / t.order));
  }
}

TEST_CASE("property: ∇H̃ = J⁻¹f̃") {
  const PdeModel n = test::nls(4);
  const PdeModel sg = test::sine_gordon(4);
  for (const PdeModel* m : {&n, &sg}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const FourierState u = test::random(*m, seed);
      CHECK(gradient_consistency(*m, gauss_legendre(1), TruncationPolicy::explicit_policy(3), u,
                                 0.1, 4, seed) <= 1e-5);
      CHECK(gradient_consistency(*m, gauss_legendre(1), TruncationPolicy::explicit_policy(1), u,
                                 0.1, 4, seed) <= 1e-6);
    }
  }
}

TEST_CASE("property: H̃ is conserved along the modified flow") {
  const PdeModel n = test::nls(4);
  const PdeModel sg = test::sine_gordon(4);
  for (const PdeModel* m : {&n, &sg}) {
    const FourierState u = test::random(*m, 9);
    const double h = 0.1;
    const ModifiedField f(*m, gauss_legendre(1), 4, Cutoff::full());
    const ModifiedHamiltonian H(f);
    FourierState v = u;
    for (int i = 0; i < 3; ++i) v = modified_flow(f, v, h);
    CHECK(std::abs(H.value(v, h) - H.value(u, h)) <= 1e-9);
  }
}
