#include "lriga/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "lriga/errors.hpp"

namespace lriga {

std::vector<std::size_t> InterpolationSpace::dims() const {
  std::vector<std::size_t> out;
  for (const auto& f : factors) out.push_back(f.size());
  return out;
}

std::vector<std::vector<double>> InterpolationSpace::points() const {
  std::vector<std::vector<double>> out;
  for (const auto& f : factors) out.push_back(greville_abscissae(f));
  return out;
}

namespace {

constexpr double kBreakpointTol = 1e-14;

// Interior breakpoints of a knot vector with their multiplicities.
std::map<double, int> interior_breaks(const KnotVector& kv) {
  std::map<double, int> out;
  const auto bp = kv.breakpoints();
  const auto mult = kv.interior_multiplicities();
  for (std::size_t i = 0; i < mult.size(); ++i) out[bp[i + 1]] = mult[i];
  return out;
}

std::vector<std::size_t> odometer_start(std::size_t D) { return std::vector<std::size_t>(D, 0); }

// Advances a row-major multi-index; returns false after the last one.
bool next_index(std::vector<std::size_t>& idx, std::span<const std::size_t> extent) {
  for (std::size_t d = idx.size(); d-- > 0;) {
    if (++idx[d] < extent[d]) return true;
    idx[d] = 0;
  }
  return false;
}

QuadratureRule point_rule(const std::vector<double>& points) {
  QuadratureRule r;
  r.nodes = points;
  r.weights.assign(points.size(), 1.0);
  return r;
}

}  // namespace

InterpolationSpace build_interpolation_space(const GeometryMap& geo, const TensorSpace& solution,
                                             std::optional<int> degree_override) {
  const std::size_t D = geo.dimension();
  if (solution.dimension() != D) throw ValidationError("interpolation space: dimension mismatch");
  int pmax = 0;
  for (const auto& f : geo.space().factors()) pmax = std::max(pmax, f.degree());
  const int pt = degree_override ? *degree_override : static_cast<int>(D) * pmax + 1;
  InterpolationSpace space;
  for (std::size_t d = 0; d < D; ++d) {
    if (pt < solution.factor(d).degree()) {
      throw ValidationError("interpolation space: degree below the solution degree");
    }
    const auto& gk = geo.space().factor(d).knots();
    const int pg = gk.degree();
    std::map<double, int> breaks;
    for (const auto& [x, m] : interior_breaks(solution.factor(d).knots())) breaks[x] = 1;
    for (const auto& [x, m] : interior_breaks(gk)) {
      // the weight is C^{pg - m - 1} there
      const int mult = std::clamp(pt - (pg - m - 1), 1, pt);
      auto it = breaks.lower_bound(x - kBreakpointTol);
      if (it != breaks.end() && std::abs(it->first - x) <= kBreakpointTol) {
        it->second = std::max(it->second, mult);
      } else {
        breaks[x] = mult;
      }
    }
    std::vector<double> knots(static_cast<std::size_t>(pt) + 1, 0.0);
    for (const auto& [x, m] : breaks) knots.insert(knots.end(), static_cast<std::size_t>(m), x);
    knots.insert(knots.end(), static_cast<std::size_t>(pt) + 1, 1.0);
    space.factors.emplace_back(std::move(knots), pt);
  }
  return space;
}

WeightSamples sample_all_weights(const GeometryMap& geo, const InterpolationSpace& space) {
  const std::size_t D = geo.dimension();
  if (space.dimension() != D) throw ValidationError("sample_all_weights: dimension mismatch");
  const auto pts = space.points();
  const auto dims = space.dims();
  std::vector<BasisTable> tables;
  for (std::size_t d = 0; d < D; ++d) tables.push_back(tabulate(geo.space().factor(d), point_rule(pts[d]), 1));

  WeightSamples out;
  out.omega = DenseTensor(dims);
  out.q.assign(D, std::vector<DenseTensor>(D));
  for (std::size_t k = 0; k < D; ++k)
    for (std::size_t l = k; l < D; ++l) out.q[k][l] = DenseTensor(dims);

  std::vector<std::size_t> idx = odometer_start(D);
  std::vector<LocalBasis> lbs(D);
  std::vector<double> xhat(D);
  std::size_t flat = 0;
  do {
    for (std::size_t d = 0; d < D; ++d) {
      lbs[d] = tables[d].at_node[idx[d]];
      xhat[d] = pts[d][idx[d]];
    }
    const GeometryPoint gp = geo.evaluate_local(lbs, true);
    out.omega.data[flat] = std::abs(gp.jacobian.determinant());
    const Eigen::MatrixXd Q = weight_q_from_jacobian(gp.jacobian, xhat);
    for (std::size_t k = 0; k < D; ++k)
      for (std::size_t l = k; l < D; ++l)
        out.q[k][l].data[flat] = Q(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
    ++flat;
  } while (next_index(idx, dims));
  for (std::size_t k = 0; k < D; ++k)
    for (std::size_t l = 0; l < k; ++l) out.q[k][l] = out.q[l][k];
  return out;
}

DenseTensor sample_weight_grid(const GeometryMap& geo, const InterpolationSpace& space, WeightEntry which) {
  WeightSamples all = sample_all_weights(geo, space);
  if (which.is_omega) return std::move(all.omega);
  if (which.k >= geo.dimension() || which.l >= geo.dimension()) {
    throw ValidationError("sample_weight_grid: Q entry out of range");
  }
  return std::move(all.q[which.k][which.l]);
}

TtTensor interpolate_weight_tt(const DenseTensor& samples, const InterpolationSpace& space, double tol) {
  if (samples.shape != space.dims()) throw ValidationError("interpolate_weight_tt: sample grid shape mismatch");
  TtTensor tt = tt_svd(samples, tol);
  const auto pts = space.points();
  for (std::size_t d = 0; d < space.dimension(); ++d) {
    const Eigen::MatrixXd B = space.factors[d].collocation_matrix(pts[d]);
    const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(B).singularValues();
    const double cond = s[s.size() - 1] > 0.0 ? s[0] / s[s.size() - 1] : INFINITY;
    if (!(cond <= 1e12)) {
      std::ostringstream os;
      os << "interpolate_weight_tt: collocation matrix of dimension " << d << " has condition number " << cond;
      throw SingularSystemError(os.str());
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    TtCore& c = tt.core(d);
    // fibers core(a, :, b) as columns
    Eigen::MatrixXd fib(static_cast<Eigen::Index>(c.n), static_cast<Eigen::Index>(c.r0 * c.r1));
    for (std::size_t a = 0; a < c.r0; ++a)
      for (std::size_t i = 0; i < c.n; ++i)
        for (std::size_t b = 0; b < c.r1; ++b)
          fib(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a * c.r1 + b)) = c(a, i, b);
    const Eigen::MatrixXd sol = lu.solve(fib);
    for (std::size_t a = 0; a < c.r0; ++a)
      for (std::size_t i = 0; i < c.n; ++i)
        for (std::size_t b = 0; b < c.r1; ++b)
          c(a, i, b) = sol(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a * c.r1 + b));
  }
  return tt;
}

WeightTT build_weight_tt(const GeometryMap& geo, const InterpolationSpace& space, double tol, double noise_floor) {
  const std::size_t D = geo.dimension();
  const WeightSamples samples = sample_all_weights(geo, space);
  WeightTT out;
  out.omega = interpolate_weight_tt(samples.omega, space, tol);
  double qmax = 0.0;
  for (std::size_t k = 0; k < D; ++k)
    for (std::size_t l = k; l < D; ++l) qmax = std::max(qmax, samples.q[k][l].norm());
  out.q.assign(D, std::vector<TtTensor>(D));
  for (std::size_t k = 0; k < D; ++k) {
    for (std::size_t l = k; l < D; ++l) {
      const DenseTensor& s = samples.q[k][l];
      out.q[k][l] = s.norm() <= noise_floor * qmax ? TtTensor::zeros(space.dims())
                                                   : interpolate_weight_tt(s, space, tol);
    }
  }
  for (std::size_t k = 0; k < D; ++k)
    for (std::size_t l = 0; l < k; ++l) out.q[k][l] = out.q[l][k];
  return out;
}

double eval_weight(const TtTensor& coefficients, const InterpolationSpace& space, std::span<const double> xhat) {
  if (xhat.size() != space.dimension() || coefficients.dims() != space.dims()) {
    throw ValidationError("eval_weight: shape mismatch");
  }
  Eigen::RowVectorXd v = Eigen::RowVectorXd::Ones(1);
  for (std::size_t d = 0; d < space.dimension(); ++d) {
    const LocalBasis lb = space.factors[d].eval_local(xhat[d], 0);
    const TtCore& c = coefficients.core(d);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(c.r0), static_cast<Eigen::Index>(c.r1));
    for (Eigen::Index j = 0; j < lb.ders.cols(); ++j) {
      const std::size_t i = lb.first + static_cast<std::size_t>(j);
      for (std::size_t a = 0; a < c.r0; ++a)
        for (std::size_t b = 0; b < c.r1; ++b)
          m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) += lb.ders(0, j) * c(a, i, b);
    }
    v = v * m;
  }
  return v(0);
}

std::vector<QuadratureRule> make_rules(const TensorSpace& solution, const InterpolationSpace& space,
                                       int nodes_per_span) {
  std::vector<QuadratureRule> rules;
  for (std::size_t d = 0; d < solution.dimension(); ++d) {
    const int m = nodes_per_span > 0 ? nodes_per_span
                                     : exact_nodes_per_span(solution.factor(d).degree(), space.factors.at(d).degree());
    rules.push_back(gauss_legendre_per_span(solution.factor(d), m));
  }
  return rules;
}

namespace {

struct FactorTables {
  std::vector<BasisTable> solution;
  std::vector<Eigen::MatrixXd> interp_at_nodes;
};

FactorTables make_tables(const InterpolationSpace& space, const TensorSpace& solution,
                         const std::vector<QuadratureRule>& rules) {
  if (space.dimension() != solution.dimension() || rules.size() != solution.dimension()) {
    throw ValidationError("low-rank assembly: dimension mismatch");
  }
  FactorTables t;
  for (std::size_t d = 0; d < solution.dimension(); ++d) {
    t.solution.push_back(tabulate(solution.factor(d), rules[d], 1));
    t.interp_at_nodes.push_back(space.factors[d].collocation_matrix(rules[d].nodes));
  }
  return t;
}

Eigen::MatrixXd weighted_factor(const FactorTables& t, const std::vector<QuadratureRule>& rules, std::size_t d,
                                const Eigen::VectorXd& coeff, int row_order, int col_order) {
  const Eigen::VectorXd w = t.interp_at_nodes[d] * coeff;
  return weighted_product_matrix(t.solution[d], rules[d], std::span<const double>(w.data(), static_cast<std::size_t>(w.size())),
                                 row_order, col_order);
}

}  // namespace

KroneckerSum assemble_mass_lr(const WeightTT& weights, const InterpolationSpace& space, const TensorSpace& solution,
                              const std::vector<QuadratureRule>& rules) {
  const FactorTables t = make_tables(space, solution, rules);
  const auto dims = solution.dims();
  KroneckerSum out(dims, dims);
  for (const auto& slice : tt_to_canonical_slices(weights.omega)) {
    std::vector<Eigen::MatrixXd> f;
    for (std::size_t d = 0; d < dims.size(); ++d) f.push_back(weighted_factor(t, rules, d, slice[d], 0, 0));
    out.add_term(std::move(f));
  }
  return out;
}

KroneckerSum assemble_stiffness_lr(const WeightTT& weights, const InterpolationSpace& space,
                                   const TensorSpace& solution, const std::vector<QuadratureRule>& rules) {
  const FactorTables t = make_tables(space, solution, rules);
  const auto dims = solution.dims();
  const std::size_t D = dims.size();
  KroneckerSum out(dims, dims);
  for (std::size_t k = 0; k < D; ++k) {
    for (std::size_t l = 0; l < D; ++l) {
      for (const auto& slice : tt_to_canonical_slices(weights.q[k][l])) {
        std::vector<Eigen::MatrixXd> f;
        for (std::size_t d = 0; d < D; ++d) {
          f.push_back(weighted_factor(t, rules, d, slice[d], l == d ? 1 : 0, k == d ? 1 : 0));
        }
        out.add_term(std::move(f));
      }
    }
  }
  return out;
}

SparseRowMatrix assemble_dense(const GeometryMap& geo, const TensorSpace& solution,
                               const std::vector<QuadratureRule>& rules, MatrixKind kind, std::size_t row_cap) {
  const std::size_t D = solution.dimension();
  if (geo.dimension() != D || rules.size() != D) throw ValidationError("assemble_dense: dimension mismatch");
  const auto dims = solution.dims();
  const std::size_t N = solution.total_size();
  if (N > row_cap) {
    std::ostringstream os;
    os << "assemble_dense: " << N << " rows exceed the cap of " << row_cap;
    throw SizeCapError(os.str());
  }

  std::vector<BasisTable> sol_tab;
  std::vector<BasisTable> geo_tab;
  std::vector<std::size_t> nq(D);
  for (std::size_t d = 0; d < D; ++d) {
    sol_tab.push_back(tabulate(solution.factor(d), rules[d], 1));
    geo_tab.push_back(tabulate(geo.space().factor(d), rules[d], 1));
    nq[d] = rules[d].size();
  }

  // band storage: every row keeps the (2p_d + 1)^D column offsets
  std::vector<std::size_t> np(D);
  std::vector<std::size_t> bw(D);
  std::vector<std::size_t> stride(D);
  std::vector<std::size_t> bstride(D);
  std::size_t nl = 1;
  std::size_t B = 1;
  for (std::size_t d = D; d-- > 0;) {
    const auto p = static_cast<std::size_t>(solution.factor(d).degree());
    np[d] = p + 1;
    bw[d] = 2 * p + 1;
    stride[d] = d + 1 < D ? stride[d + 1] * dims[d + 1] : 1;
    bstride[d] = B;
    B *= bw[d];
    nl *= np[d];
  }
  std::vector<std::vector<std::size_t>> local_digits(nl, std::vector<std::size_t>(D));
  {
    std::vector<std::size_t> a = odometer_start(D);
    std::size_t i = 0;
    do local_digits[i++] = a;
    while (next_index(a, np));
  }
  std::vector<std::size_t> offidx(nl * nl);
  std::vector<std::size_t> local_row(nl);
  for (std::size_t a = 0; a < nl; ++a) {
    local_row[a] = 0;
    for (std::size_t d = 0; d < D; ++d) local_row[a] += local_digits[a][d] * stride[d];
    for (std::size_t b = 0; b < nl; ++b) {
      std::size_t o = 0;
      for (std::size_t d = 0; d < D; ++d) {
        o += (local_digits[b][d] + np[d] - 1 - local_digits[a][d]) * bstride[d];
      }
      offidx[a * nl + b] = o;
    }
  }

  std::vector<double> band(N * B, 0.0);
  std::vector<double> val(nl);
  std::vector<double> grad(nl * D);
  std::vector<double> qgrad(nl * D);
  std::vector<LocalBasis> lbs(D);
  std::vector<double> xhat(D);
  std::vector<std::size_t> q = odometer_start(D);
  do {
    double w = 1.0;
    std::size_t base = 0;
    for (std::size_t d = 0; d < D; ++d) {
      w *= rules[d].weights[q[d]];
      xhat[d] = rules[d].nodes[q[d]];
      lbs[d] = geo_tab[d].at_node[q[d]];
      base += sol_tab[d].at_node[q[d]].first * stride[d];
    }
    const GeometryPoint gp = geo.evaluate_local(lbs, true);
    for (std::size_t a = 0; a < nl; ++a) {
      double v = 1.0;
      for (std::size_t d = 0; d < D; ++d) v *= sol_tab[d].at_node[q[d]].ders(0, static_cast<Eigen::Index>(local_digits[a][d]));
      val[a] = v;
      if (kind == MatrixKind::stiffness) {
        for (std::size_t k = 0; k < D; ++k) {
          double g = 1.0;
          for (std::size_t d = 0; d < D; ++d) {
            g *= sol_tab[d].at_node[q[d]].ders(d == k ? 1 : 0, static_cast<Eigen::Index>(local_digits[a][d]));
          }
          grad[a * D + k] = g;
        }
      }
    }
    if (kind == MatrixKind::mass) {
      const double wo = w * std::abs(gp.jacobian.determinant());
      for (std::size_t a = 0; a < nl; ++a) {
        const double va = wo * val[a];
        double* row = band.data() + (base + local_row[a]) * B;
        const std::size_t* off = offidx.data() + a * nl;
        for (std::size_t b = 0; b < nl; ++b) row[off[b]] += va * val[b];
      }
    } else {
      const Eigen::MatrixXd Q = w * weight_q_from_jacobian(gp.jacobian, xhat);
      for (std::size_t a = 0; a < nl; ++a)
        for (std::size_t k = 0; k < D; ++k) {
          double s = 0.0;
          for (std::size_t l = 0; l < D; ++l) s += Q(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) * grad[a * D + l];
          qgrad[a * D + k] = s;
        }
      for (std::size_t a = 0; a < nl; ++a) {
        double* row = band.data() + (base + local_row[a]) * B;
        const std::size_t* off = offidx.data() + a * nl;
        const double* ga = qgrad.data() + a * D;
        for (std::size_t b = 0; b < nl; ++b) {
          const double* gb = grad.data() + b * D;
          double s = 0.0;
          for (std::size_t k = 0; k < D; ++k) s += ga[k] * gb[k];
          row[off[b]] += s;
        }
      }
    }
  } while (next_index(q, nq));

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(N * B);
  std::vector<std::size_t> i = odometer_start(D);
  std::vector<std::size_t> o = odometer_start(D);
  std::size_t row = 0;
  do {
    std::size_t oflat = 0;
    std::fill(o.begin(), o.end(), 0);
    do {
      bool inside = true;
      std::size_t col = 0;
      for (std::size_t d = 0; d < D; ++d) {
        const auto j = static_cast<std::ptrdiff_t>(i[d]) + static_cast<std::ptrdiff_t>(o[d]) -
                       static_cast<std::ptrdiff_t>(np[d] - 1);
        if (j < 0 || j >= static_cast<std::ptrdiff_t>(dims[d])) {
          inside = false;
          break;
        }
        col += static_cast<std::size_t>(j) * stride[d];
      }
      if (inside) {
        trip.emplace_back(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col), band[row * B + oflat]);
      }
      ++oflat;
    } while (next_index(o, bw));
    ++row;
  } while (next_index(i, dims));
  SparseRowMatrix out(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  out.setFromTriplets(trip.begin(), trip.end());
  out.makeCompressed();
  return out;
}

double relative_frobenius_diff(const KroneckerSum& a, const SparseRowMatrix& b) {
  const auto& dims = a.row_dims();
  const auto& cdims = a.col_dims();
  const std::size_t D = dims.size();
  if (static_cast<std::size_t>(b.rows()) != a.rows() || static_cast<std::size_t>(b.cols()) != a.cols()) {
    throw ValidationError("relative_frobenius_diff: shape mismatch");
  }
  std::vector<std::size_t> rstride(D);
  std::vector<std::size_t> cstride(D);
  for (std::size_t d = D; d-- > 0;) {
    rstride[d] = d + 1 < D ? rstride[d + 1] * dims[d + 1] : 1;
    cstride[d] = d + 1 < D ? cstride[d + 1] * cdims[d + 1] : 1;
  }
  const auto entry = [&](std::size_t r, std::size_t c) {
    double s = 0.0;
    for (const auto& t : a.terms()) {
      double p = 1.0;
      for (std::size_t d = 0; d < D && p != 0.0; ++d) {
        p *= t[d](static_cast<Eigen::Index>((r / rstride[d]) % dims[d]),
                  static_cast<Eigen::Index>((c / cstride[d]) % cdims[d]));
      }
      s += p;
    }
    return s;
  };

  double diff2 = 0.0;
  double norm2 = 0.0;
  for (Eigen::Index r = 0; r < b.outerSize(); ++r) {
    for (SparseRowMatrix::InnerIterator it(b, r); it; ++it) {
      const double e = entry(static_cast<std::size_t>(r), static_cast<std::size_t>(it.col())) - it.value();
      diff2 += e * e;
      norm2 += it.value() * it.value();
    }
  }

  // structural pattern of a: Kronecker product of per-dimension union patterns
  std::vector<std::vector<std::vector<std::size_t>>> cols(D);
  for (std::size_t d = 0; d < D; ++d) {
    cols[d].resize(dims[d]);
    for (std::size_t i = 0; i < dims[d]; ++i)
      for (std::size_t j = 0; j < cdims[d]; ++j) {
        bool nz = false;
        for (const auto& t : a.terms()) nz = nz || t[d](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != 0.0;
        if (nz) cols[d][i].push_back(j);
      }
  }
  std::vector<std::size_t> ri = odometer_start(D);
  std::vector<std::size_t> ext(D);
  std::vector<std::size_t> ci(D);
  std::size_t r = 0;
  do {
    bool empty = false;
    for (std::size_t d = 0; d < D; ++d) {
      ext[d] = cols[d][ri[d]].size();
      empty = empty || ext[d] == 0;
    }
    if (!empty) {
      const auto* inner = b.innerIndexPtr() + b.outerIndexPtr()[r];
      const auto* inner_end = b.innerIndexPtr() + b.outerIndexPtr()[r + 1];
      std::fill(ci.begin(), ci.end(), 0);
      do {
        std::size_t c = 0;
        for (std::size_t d = 0; d < D; ++d) c += cols[d][ri[d]][ci[d]] * cstride[d];
        if (!std::binary_search(inner, inner_end, static_cast<SparseRowMatrix::StorageIndex>(c))) {
          const double e = entry(r, c);
          diff2 += e * e;
        }
      } while (next_index(ci, ext));
    }
    ++r;
  } while (next_index(ri, dims));

  if (norm2 == 0.0) throw ValidationError("relative_frobenius_diff: reference matrix is zero");
  return std::sqrt(diff2 / norm2);
}

KroneckerSum eliminate_dirichlet(const KroneckerSum& op) {
  if (op.boundary_eliminated()) throw ValidationError("eliminate_dirichlet: boundary already eliminated");
  std::vector<std::size_t> rd;
  std::vector<std::size_t> cd;
  for (std::size_t d = 0; d < op.order(); ++d) {
    if (op.row_dims()[d] < 3 || op.col_dims()[d] < 3) {
      throw ValidationError("eliminate_dirichlet: need at least three basis functions per dimension");
    }
    rd.push_back(op.row_dims()[d] - 2);
    cd.push_back(op.col_dims()[d] - 2);
  }
  KroneckerSum out(rd, cd);
  for (const auto& t : op.terms()) {
    std::vector<Eigen::MatrixXd> f;
    for (std::size_t d = 0; d < t.size(); ++d) {
      f.emplace_back(t[d].block(1, 1, static_cast<Eigen::Index>(rd[d]), static_cast<Eigen::Index>(cd[d])));
    }
    out.add_term(std::move(f));
  }
  out.mark_boundary_eliminated();
  return out;
}

std::vector<std::size_t> OperatorLR::interior_dims() const {
  std::vector<std::size_t> out;
  for (const auto& m : interior_maps) out.push_back(m.size());
  return out;
}

OperatorLR make_operator_lr(const KroneckerSum& mass, const KroneckerSum& stiffness) {
  if (mass.row_dims() != stiffness.row_dims()) throw ValidationError("make_operator_lr: shape mismatch");
  OperatorLR out;
  out.mass = eliminate_dirichlet(mass);
  out.stiffness = eliminate_dirichlet(stiffness);
  for (std::size_t n : mass.row_dims()) {
    std::vector<std::size_t> m;
    for (std::size_t i = 1; i + 1 < n; ++i) m.push_back(i);
    out.interior_maps.push_back(std::move(m));
  }
  return out;
}

LowRankAssembly assemble_low_rank(const GeometryMap& geo, const TensorSpace& solution, const AssemblyConfig& cfg) {
  LowRankAssembly out;
  out.space = build_interpolation_space(geo, solution, cfg.interp_degree);
  out.weights = build_weight_tt(geo, out.space, cfg.tol, cfg.noise_floor);
  out.rules = make_rules(solution, out.space, cfg.nodes_per_span);
  out.mass = assemble_mass_lr(out.weights, out.space, solution, out.rules);
  out.stiffness = assemble_stiffness_lr(out.weights, out.space, solution, out.rules);
  return out;
}

}  // namespace lriga
