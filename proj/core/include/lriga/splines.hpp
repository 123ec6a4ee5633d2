#pragma once

// Univariate B-spline bases on open knot vectors over [0, 1].

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace lriga {

/// Open knot vector of degree p on [0, 1].
///
/// The first and last p+1 knots equal 0 and 1, interior knots have
/// multiplicity at most p and there are at least p+1 basis functions.
/// The constructor throws ValidationError otherwise.
class KnotVector {
 public:
  KnotVector(std::vector<double> knots, int degree);

  [[nodiscard]] int degree() const noexcept { return degree_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return knots_; }
  [[nodiscard]] std::size_t size() const noexcept { return knots_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return knots_[i]; }

  /// Number of basis functions n = len(knots) - p - 1.
  [[nodiscard]] std::size_t basis_count() const noexcept {
    return knots_.size() - static_cast<std::size_t>(degree_) - 1;
  }

  /// Distinct knot values in increasing order, including 0 and 1.
  [[nodiscard]] std::vector<double> breakpoints() const;
  /// Multiplicity of every interior breakpoint, aligned with breakpoints()[1..end-1].
  [[nodiscard]] std::vector<int> interior_multiplicities() const;
  /// Number of nonempty knot spans.
  [[nodiscard]] std::size_t span_count() const;

  /// Index s with knots[s] <= x < knots[s+1], p <= s <= n-1. x = 1 maps to the last nonempty span.
  [[nodiscard]] std::size_t find_span(double x) const;

  friend bool operator==(const KnotVector&, const KnotVector&) = default;

 private:
  std::vector<double> knots_;
  int degree_;
};

/// Values and derivatives of the p+1 basis functions that do not vanish at a point.
///
/// ders(k, j) is the k-th derivative of basis function first + j.
struct LocalBasis {
  std::size_t first = 0;
  Eigen::MatrixXd ders;

  [[nodiscard]] int degree() const noexcept { return static_cast<int>(ders.cols()) - 1; }
};

class UnivariateSpline {
 public:
  explicit UnivariateSpline(KnotVector knots) : knots_(std::move(knots)) {}
  UnivariateSpline(std::vector<double> knots, int degree)
      : knots_(std::move(knots), degree) {}

  /// Bernstein-type single span basis of degree p.
  static UnivariateSpline bernstein(int degree);

  [[nodiscard]] const KnotVector& knots() const noexcept { return knots_; }
  [[nodiscard]] int degree() const noexcept { return knots_.degree(); }
  [[nodiscard]] std::size_t size() const noexcept { return knots_.basis_count(); }

  /// All n basis values at x in [0, 1] (Cox-de Boor). Throws DomainError outside.
  [[nodiscard]] std::vector<double> eval_basis_all(double x) const;

  /// Derivatives of the given order of all n basis functions at x.
  /// Orders above the degree yield zeros; see is_degenerate_order().
  [[nodiscard]] std::vector<double> eval_basis_deriv(double x, int order) const;

  /// True when the derivative order exceeds the degree and every derivative vanishes.
  [[nodiscard]] bool is_degenerate_order(int order) const noexcept { return order > degree(); }

  /// Nonzero basis functions at x with derivatives up to max_order.
  [[nodiscard]] LocalBasis eval_local(double x, int max_order = 0) const;

  /// Collocation matrix B(points), rows indexed by points, columns by basis functions.
  [[nodiscard]] Eigen::MatrixXd collocation_matrix(std::span<const double> points) const;

  friend bool operator==(const UnivariateSpline&, const UnivariateSpline&) = default;

 private:
  KnotVector knots_;
};

/// Inserts k equispaced knots strictly inside every nonempty knot span.
[[nodiscard]] UnivariateSpline refine_knots(const UnivariateSpline& spline, int k);

/// Knot averages knots[i+1..i+p] (span midpoints for p = 0).
/// Throws ValidationError when two abscissae coincide.
[[nodiscard]] std::vector<double> greville_abscissae(const UnivariateSpline& spline);

/// Matrix T with c_fine = T c_coarse for every spline of the coarse space.
/// The fine space must contain the coarse one (same degree, superset of knots).
[[nodiscard]] Eigen::MatrixXd knot_insertion_matrix(const UnivariateSpline& coarse,
                                                    const UnivariateSpline& fine);

}  // namespace lriga
