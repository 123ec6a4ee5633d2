#include "lriga/minres.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lriga/errors.hpp"

namespace lriga {

MinresResult minres(const LinearMap& a, const Eigen::VectorXd& b, const LinearMap& precond,
                    const Eigen::VectorXd& x0, double tol, int maxit) {
  const auto apply_m = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return precond ? precond(v) : v; };
  MinresResult res;
  res.x = x0.size() == b.size() ? x0 : Eigen::VectorXd::Zero(b.size());

  Eigen::VectorXd r1 = b - a(res.x);
  Eigen::VectorXd y = apply_m(r1);
  const double ry = r1.dot(y);
  if (ry < 0.0) throw ValidationError("minres: preconditioner is not positive definite");
  const double beta1 = std::sqrt(ry);
  if (beta1 == 0.0) {
    res.converged = true;
    return res;
  }

  Eigen::VectorXd r2 = r1;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(b.size());
  Eigen::VectorXd w1 = w;
  Eigen::VectorXd w2 = w;
  double oldb = 0.0;
  double beta = beta1;
  double dbar = 0.0;
  double epsln = 0.0;
  double phibar = beta1;
  double cs = -1.0;
  double sn = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();

  for (int itn = 1; itn <= maxit; ++itn) {
    const Eigen::VectorXd v = y / beta;
    y = a(v);
    if (itn >= 2) y -= (beta / oldb) * r1;
    const double alfa = v.dot(y);
    y -= (alfa / beta) * r2;
    r1 = r2;
    r2 = y;
    y = apply_m(r2);
    oldb = beta;
    const double b2 = r2.dot(y);
    if (b2 < 0.0) throw ValidationError("minres: preconditioner is not positive definite");
    beta = std::sqrt(b2);

    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    const double gamma = std::max(std::hypot(gbar, beta), eps);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar *= sn;

    w1 = w2;
    w2 = w;
    w = (v - oldeps * w1 - delta * w2) / gamma;
    res.x += phi * w;

    res.iterations = itn;
    res.relative_residual = phibar / beta1;
    if (res.relative_residual <= tol) {
      res.converged = true;
      break;
    }
    if (beta == 0.0) {
      // Krylov space exhausted; the iterate is exact
      res.converged = true;
      break;
    }
  }
  return res;
}

}  // namespace lriga
