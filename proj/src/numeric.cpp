#include "ektau/numeric.hpp"

namespace ektau {

NewtonResult newton2(const std::function<Vec2(const Vec2&)>& f, Vec2 x0, double tol,
                     int max_iter, double fd_step, double max_step) {
  NewtonResult r;
  r.x = x0;
  try {
    Vec2 fx = f(r.x);
    r.residual = fx.norm();
    for (int it = 0; it < max_iter; ++it) {
      r.iterations = it;
      if (r.residual < tol) {
        r.converged = true;
        return r;
      }
      Mat2 jac;
      for (int j = 0; j < 2; ++j) {
        Vec2 e = Vec2::Zero();
        e[j] = fd_step;
        jac.col(j) = (f(r.x + e) - f(r.x - e)) / (2.0 * fd_step);
      }
      const auto lu = jac.fullPivLu();
      if (!lu.isInvertible()) return r;
      Vec2 dx = -lu.solve(fx);
      if (dx.norm() > max_step) dx *= max_step / dx.norm();
      // simple backtracking on |F|
      double t = 1.0;
      Vec2 trial;
      Vec2 ft;
      for (int b = 0; b < 20; ++b) {
        trial = r.x + t * dx;
        ft = f(trial);
        if (ft.norm() < r.residual || b == 19) break;
        t *= 0.5;
      }
      r.x = trial;
      fx = ft;
      r.residual = fx.norm();
    }
    r.converged = r.residual < tol;
  } catch (const Error&) {
    r.converged = false;
  }
  return r;
}

}  // namespace ektau
