#include "lriga/geometry.hpp"

#include <cmath>
#include <sstream>

#include "lriga/dense_tensor.hpp"
#include "lriga/errors.hpp"

namespace lriga {

TensorSpace::TensorSpace(std::vector<UnivariateSpline> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw ValidationError("tensor space: at least one factor required");
}

std::vector<std::size_t> TensorSpace::dims() const {
  std::vector<std::size_t> out;
  out.reserve(factors_.size());
  for (const auto& f : factors_) out.push_back(f.size());
  return out;
}

std::size_t TensorSpace::total_size() const {
  std::size_t n = 1;
  for (const auto& f : factors_) n *= f.size();
  return n;
}

std::size_t TensorSpace::flat_index(std::span<const std::size_t> multi) const {
  std::size_t idx = 0;
  for (std::size_t d = 0; d < factors_.size(); ++d) idx = idx * factors_[d].size() + multi[d];
  return idx;
}

GeometryMap::GeometryMap(TensorSpace space, std::vector<double> control_points,
                         std::optional<std::vector<double>> weights)
    : space_(std::move(space)),
      control_points_(std::move(control_points)),
      weights_(std::move(weights)) {
  const std::size_t n = space_.total_size();
  const std::size_t D = space_.dimension();
  if (control_points_.size() != n * D) {
    std::ostringstream os;
    os << "geometry: expected " << n * D << " control point coordinates, got " << control_points_.size();
    throw ValidationError(os.str());
  }
  if (weights_) {
    if (weights_->size() != n) throw ValidationError("geometry: weight count does not match the space");
    for (double w : *weights_) {
      if (!(w > 0.0) || !std::isfinite(w)) throw ValidationError("geometry: NURBS weights must be positive");
    }
  }
}

GeometryPoint GeometryMap::evaluate_local(std::span<const LocalBasis> per_dim, bool with_jacobian) const {
  const std::size_t D = dimension();
  const auto dims = space_.dims();
  std::vector<int> extent(D);
  for (std::size_t d = 0; d < D; ++d) extent[d] = per_dim[d].degree() + 1;

  // homogeneous accumulation: num = sum w C beta, den = sum w beta, plus first derivatives
  Eigen::VectorXd num = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(D));
  Eigen::MatrixXd dnum = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(D), static_cast<Eigen::Index>(D));
  double den = 0.0;
  Eigen::VectorXd dden = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(D));

  std::vector<int> local(D, 0);
  std::vector<std::size_t> global(D);
  std::vector<double> dprod(D);
  for (;;) {
    double prod = 1.0;
    for (std::size_t d = 0; d < D; ++d) {
      global[d] = per_dim[d].first + static_cast<std::size_t>(local[d]);
      prod *= per_dim[d].ders(0, local[d]);
    }
    if (with_jacobian) {
      for (std::size_t e = 0; e < D; ++e) {
        double v = 1.0;
        for (std::size_t d = 0; d < D; ++d) v *= per_dim[d].ders(d == e ? 1 : 0, local[d]);
        dprod[e] = v;
      }
    }
    const std::size_t flat = space_.flat_index(global);
    const double w = weights_ ? (*weights_)[flat] : 1.0;
    const double* c = control_points_.data() + flat * D;
    for (std::size_t i = 0; i < D; ++i) num[static_cast<Eigen::Index>(i)] += w * c[i] * prod;
    den += w * prod;
    if (with_jacobian) {
      for (std::size_t e = 0; e < D; ++e) {
        const auto ee = static_cast<Eigen::Index>(e);
        for (std::size_t i = 0; i < D; ++i) dnum(static_cast<Eigen::Index>(i), ee) += w * c[i] * dprod[e];
        dden[ee] += w * dprod[e];
      }
    }

    bool done = true;
    for (std::size_t d = D; d-- > 0;) {
      if (++local[d] < extent[d]) {
        done = false;
        break;
      }
      local[d] = 0;
    }
    if (done) break;
  }

  GeometryPoint out;
  if (weights_) {
    out.value = num / den;
    if (with_jacobian) out.jacobian = (dnum - out.value * dden.transpose()) / den;
  } else {
    out.value = num;
    if (with_jacobian) out.jacobian = dnum;
  }
  return out;
}

GeometryPoint GeometryMap::evaluate(std::span<const double> xhat, bool with_jacobian) const {
  const std::size_t D = dimension();
  if (xhat.size() != D) throw ValidationError("geometry: point dimension mismatch");
  std::vector<LocalBasis> per_dim;
  per_dim.reserve(D);
  for (std::size_t d = 0; d < D; ++d) per_dim.push_back(space_.factor(d).eval_local(xhat[d], with_jacobian ? 1 : 0));
  if (with_jacobian) {
    // degree-0 factors have no derivative row
    for (auto& lb : per_dim) {
      if (lb.ders.rows() < 2) {
        Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(2, lb.ders.cols());
        padded.row(0) = lb.ders.row(0);
        lb.ders = padded;
      }
    }
  }
  return evaluate_local(per_dim, with_jacobian);
}

Eigen::VectorXd GeometryMap::eval(std::span<const double> xhat) const { return evaluate(xhat, false).value; }

Eigen::MatrixXd GeometryMap::jacobian(std::span<const double> xhat) const {
  return evaluate(xhat, true).jacobian;
}

double GeometryMap::omega(std::span<const double> xhat) const { return std::abs(jacobian(xhat).determinant()); }

Eigen::MatrixXd GeometryMap::q(std::span<const double> xhat) const {
  return weight_q_from_jacobian(jacobian(xhat), xhat);
}

Eigen::MatrixXd weight_q_from_jacobian(const Eigen::MatrixXd& J, std::span<const double> xhat) {
  const double det = J.determinant();
  const double scale = std::pow(J.norm(), static_cast<double>(J.rows()));
  if (!(std::abs(det) > 1e-13 * scale)) {
    std::ostringstream os;
    os << "singular geometry Jacobian at x = (";
    for (std::size_t i = 0; i < xhat.size(); ++i) os << (i ? ", " : "") << xhat[i];
    os << ")";
    throw SingularJacobianError(os.str(), std::vector<double>(xhat.begin(), xhat.end()));
  }
  const Eigen::MatrixXd Jinv = J.inverse();
  Eigen::MatrixXd Q = Jinv * Jinv.transpose() * std::abs(det);
  return 0.5 * (Q + Q.transpose());
}

GeometryMap GeometryMap::refined_to(const TensorSpace& fine) const {
  const std::size_t D = dimension();
  if (fine.dimension() != D) throw ValidationError("refined_to: dimension mismatch");
  // homogeneous coordinates (w C, w) refine linearly
  std::vector<std::size_t> shape = space_.dims();
  shape.push_back(D + 1);
  const std::size_t n = space_.total_size();
  std::vector<double> hom(n * (D + 1));
  for (std::size_t i = 0; i < n; ++i) {
    const double w = weights_ ? (*weights_)[i] : 1.0;
    for (std::size_t c = 0; c < D; ++c) hom[i * (D + 1) + c] = w * control_points_[i * D + c];
    hom[i * (D + 1) + D] = w;
  }
  for (std::size_t d = 0; d < D; ++d) {
    const Eigen::MatrixXd T = knot_insertion_matrix(space_.factor(d), fine.factor(d));
    hom = apply_mode(hom, shape, d, T);
    shape[d] = static_cast<std::size_t>(T.rows());
  }
  const std::size_t nf = fine.total_size();
  std::vector<double> cps(nf * D);
  std::optional<std::vector<double>> ws;
  if (weights_) ws.emplace(nf);
  for (std::size_t i = 0; i < nf; ++i) {
    const double w = hom[i * (D + 1) + D];
    for (std::size_t c = 0; c < D; ++c) cps[i * D + c] = hom[i * (D + 1) + c] / (weights_ ? w : 1.0);
    if (ws) (*ws)[i] = w;
  }
  return GeometryMap(fine, std::move(cps), std::move(ws));
}

GeometryMap GeometryMap::refined(int k) const {
  if (k == 0) return *this;
  std::vector<UnivariateSpline> factors;
  for (const auto& f : space_.factors()) factors.push_back(refine_knots(f, k));
  return refined_to(TensorSpace(std::move(factors)));
}

}  // namespace lriga
