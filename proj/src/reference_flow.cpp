#include "hbea/reference_flow.hpp"

#include <boost/numeric/odeint.hpp>

#include <cmath>

#include "hbea/errors.hpp"

namespace hbea {

namespace odeint = boost::numeric::odeint;

namespace {

void pack(const FourierState& u, std::vector<double>& x) {
  const auto d = u.data();
  x.resize(2 * d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    x[2 * i] = d[i].real();
    x[2 * i + 1] = d[i].imag();
  }
}

void unpack(const std::vector<double>& x, FourierState& u) {
  auto d = u.data();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = cd(x[2 * i], x[2 * i + 1]);
}

}  // namespace

FourierState integrate_flow(const VectorFieldEval& field, const FourierState& u0, double t_final,
                            const FlowTolerance& tol) {
  if (t_final == 0.0) return u0;
  if (!(t_final > 0.0)) throw InvalidArgument("integrate_flow: final time must be >= 0");
  using State = std::vector<double>;
  State x;
  pack(u0, x);
  FourierState scratch = u0;
  auto rhs = [&](const State& y, State& dy, double) {
    unpack(y, scratch);
    pack(field(scratch), dy);
  };
  const double max_dt = tol.max_dt > 0.0 ? tol.max_dt : t_final / 50.0;
  auto stepper = odeint::make_controlled(tol.abs_tol, tol.rel_tol, max_dt,
                                         odeint::runge_kutta_fehlberg78<State>());
  try {
    odeint::integrate_adaptive(stepper, rhs, x, 0.0, t_final, max_dt);
  } catch (const odeint::step_adjustment_error& e) {
    throw ConvergenceError(std::string("reference integrator: ") + e.what(), 0.0, 0);
  } catch (const odeint::no_progress_error& e) {
    throw ConvergenceError(std::string("reference integrator: ") + e.what(), 0.0, 0);
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw ConvergenceError("reference integrator: non-finite state", 0.0, 0);
  }
  FourierState out = u0;
  unpack(x, out);
  out.enforce_real_symmetry();
  return out;
}

}  // namespace hbea
