#include "lriga/splines.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "lriga/errors.hpp"

namespace lriga {

KnotVector::KnotVector(std::vector<double> knots, int degree)
    : knots_(std::move(knots)), degree_(degree) {
  if (degree_ < 0) throw ValidationError("knot vector: degree must be nonnegative");
  const auto p = static_cast<std::size_t>(degree_);
  if (knots_.size() < 2 * (p + 1)) {
    throw ValidationError("knot vector: need at least 2(p+1) knots for p+1 basis functions");
  }
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i]) || knots_[i] < 0.0 || knots_[i] > 1.0) {
      throw ValidationError("knot vector: knots must lie in [0, 1]");
    }
    if (i > 0 && knots_[i] < knots_[i - 1]) {
      throw ValidationError("knot vector: knots must be nondecreasing");
    }
  }
  for (std::size_t i = 0; i <= p; ++i) {
    if (knots_[i] != 0.0 || knots_[knots_.size() - 1 - i] != 1.0) {
      throw ValidationError("knot vector: not an open knot vector (end knots must repeat p+1 times)");
    }
  }
  if (knots_[p + 1] == 0.0 || knots_[knots_.size() - p - 2] == 1.0) {
    throw ValidationError("knot vector: end knots repeat more than p+1 times");
  }
  for (int m : interior_multiplicities()) {
    if (m > degree_) {
      std::ostringstream os;
      os << "knot vector: interior multiplicity " << m << " exceeds degree " << degree_;
      throw ValidationError(os.str());
    }
  }
}

std::vector<double> KnotVector::breakpoints() const {
  std::vector<double> out;
  for (double k : knots_) {
    if (out.empty() || out.back() != k) out.push_back(k);
  }
  return out;
}

std::vector<int> KnotVector::interior_multiplicities() const {
  std::vector<int> out;
  const auto p = static_cast<std::size_t>(degree_);
  for (std::size_t i = p + 1; i + p + 1 < knots_.size(); ++i) {
    if (i > p + 1 && knots_[i] == knots_[i - 1]) {
      ++out.back();
    } else {
      out.push_back(1);
    }
  }
  return out;
}

std::size_t KnotVector::span_count() const { return breakpoints().size() - 1; }

std::size_t KnotVector::find_span(double x) const {
  const std::size_t n = basis_count();
  if (x >= knots_[n]) return n - 1;
  // largest s with knots[s] <= x
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  auto s = static_cast<std::size_t>(std::distance(knots_.begin(), it)) - 1;
  return std::clamp(s, static_cast<std::size_t>(degree_), n - 1);
}

UnivariateSpline UnivariateSpline::bernstein(int degree) {
  std::vector<double> knots(static_cast<std::size_t>(degree) + 1, 0.0);
  knots.resize(2 * (static_cast<std::size_t>(degree) + 1), 1.0);
  return UnivariateSpline(std::move(knots), degree);
}

LocalBasis UnivariateSpline::eval_local(double x, int max_order) const {
  if (!(x >= 0.0 && x <= 1.0)) {
    std::ostringstream os;
    os << "basis evaluation at x = " << x << " outside [0, 1]";
    throw DomainError(os.str());
  }
  const int p = degree();
  const auto& U = knots_.values();
  const std::size_t span = knots_.find_span(x);
  const int nd = std::max(0, max_order);

  // Piegl & Tiller, algorithm A2.3.
  Eigen::MatrixXd ndu(p + 1, p + 1);
  std::vector<double> left(p + 1), right(p + 1);
  ndu(0, 0) = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = x - U[span + 1 - j];
    right[j] = U[span + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu(j, r) = right[r + 1] + left[j - r];
      const double temp = ndu(r, j - 1) / ndu(j, r);
      ndu(r, j) = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu(j, j) = saved;
  }

  LocalBasis out;
  out.first = span - static_cast<std::size_t>(p);
  out.ders = Eigen::MatrixXd::Zero(nd + 1, p + 1);
  for (int j = 0; j <= p; ++j) out.ders(0, j) = ndu(j, p);

  Eigen::MatrixXd a(2, p + 1);
  for (int r = 0; r <= p; ++r) {
    int s1 = 0;
    int s2 = 1;
    a.setZero();
    a(0, 0) = 1.0;
    for (int k = 1; k <= std::min(nd, p); ++k) {
      double d = 0.0;
      const int rk = r - k;
      const int pk = p - k;
      if (r >= k) {
        a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
        d = a(s2, 0) * ndu(rk, pk);
      }
      const int j1 = rk >= -1 ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
        d += a(s2, j) * ndu(rk + j, pk);
      }
      if (r <= pk) {
        a(s2, k) = -a(s1, k - 1) / ndu(pk + 1, r);
        d += a(s2, k) * ndu(r, pk);
      }
      out.ders(k, r) = d;
      std::swap(s1, s2);
    }
  }
  double factor = p;
  for (int k = 1; k <= std::min(nd, p); ++k) {
    out.ders.row(k) *= factor;
    factor *= (p - k);
  }
  return out;
}

std::vector<double> UnivariateSpline::eval_basis_all(double x) const {
  return eval_basis_deriv(x, 0);
}

std::vector<double> UnivariateSpline::eval_basis_deriv(double x, int order) const {
  if (order < 0) throw ValidationError("derivative order must be nonnegative");
  const LocalBasis local = eval_local(x, order);
  std::vector<double> out(size(), 0.0);
  if (is_degenerate_order(order)) return out;
  for (int j = 0; j <= degree(); ++j) out[local.first + static_cast<std::size_t>(j)] = local.ders(order, j);
  return out;
}

Eigen::MatrixXd UnivariateSpline::collocation_matrix(std::span<const double> points) const {
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(points.size()),
                                            static_cast<Eigen::Index>(size()));
  for (std::size_t r = 0; r < points.size(); ++r) {
    const LocalBasis local = eval_local(points[r]);
    for (int j = 0; j <= degree(); ++j) {
      B(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(local.first) + j) = local.ders(0, j);
    }
  }
  return B;
}

UnivariateSpline refine_knots(const UnivariateSpline& spline, int k) {
  if (k < 0) throw ValidationError("refine_knots: k must be nonnegative");
  if (k == 0) return spline;
  const auto& old = spline.knots().values();
  std::vector<double> knots;
  knots.reserve(old.size() + static_cast<std::size_t>(k) * spline.knots().span_count());
  for (std::size_t i = 0; i < old.size(); ++i) {
    knots.push_back(old[i]);
    if (i + 1 < old.size() && old[i + 1] > old[i]) {
      const double a = old[i];
      const double b = old[i + 1];
      for (int j = 1; j <= k; ++j) knots.push_back(a + (b - a) * j / (k + 1));
    }
  }
  return UnivariateSpline(std::move(knots), spline.degree());
}

std::vector<double> greville_abscissae(const UnivariateSpline& spline) {
  const auto& U = spline.knots().values();
  const int p = spline.degree();
  const std::size_t n = spline.size();
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (p == 0) {
      g[i] = 0.5 * (U[i] + U[i + 1]);
      continue;
    }
    double sum = 0.0;
    for (int j = 1; j <= p; ++j) sum += U[i + static_cast<std::size_t>(j)];
    g[i] = sum / p;
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(g[i] > g[i - 1])) {
      throw ValidationError("greville_abscissae: duplicate abscissae, collocation matrix would be singular");
    }
  }
  return g;
}

Eigen::MatrixXd knot_insertion_matrix(const UnivariateSpline& coarse, const UnivariateSpline& fine) {
  if (coarse.degree() != fine.degree()) {
    throw ValidationError("knot_insertion_matrix: degrees differ");
  }
  std::map<double, int> need;
  for (double k : coarse.knots().values()) ++need[k];
  for (double k : fine.knots().values()) --need[k];
  for (const auto& [value, count] : need) {
    if (count > 0) throw ValidationError("knot_insertion_matrix: fine knots do not contain coarse knots");
  }
  const auto g = greville_abscissae(fine);
  const Eigen::MatrixXd Bf = fine.collocation_matrix(g);
  const Eigen::MatrixXd Bc = coarse.collocation_matrix(g);
  Eigen::MatrixXd T = Bf.partialPivLu().solve(Bc);
  // entries of the exact refinement matrix are convex weights; drop roundoff
  for (Eigen::Index i = 0; i < T.size(); ++i) {
    if (std::abs(T(i)) < 1e-15) T(i) = 0.0;
  }
  return T;
}

}  // namespace lriga
