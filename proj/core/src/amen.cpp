#include "lriga/amen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/LU>

#include "lriga/errors.hpp"
#include "lriga/minres.hpp"

namespace lriga {

namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

Eigen::Index idx(std::size_t v) { return static_cast<Eigen::Index>(v); }

TtCore core_from(std::size_t r0, std::size_t n, std::size_t l, std::size_t r1, const Eigen::Ref<const Mat>& m) {
  TtCore c(r0, n, l, r1);
  c.matrix(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())) = m;
  return c;
}

// Slice l of a block core as a plain (r0, n, r1) core.
TtCore slice(const TtCore& bc, std::size_t l) {
  TtCore out(bc.r0, bc.n, bc.r1);
  for (std::size_t a = 0; a < bc.r0; ++a)
    for (std::size_t i = 0; i < bc.n; ++i)
      for (std::size_t b = 0; b < bc.r1; ++b) out(a, i, b) = bc.at(a, i, l, b);
  return out;
}

// Y(p, j, q) = sum phi(p, a) A(j, i) X(a, i, b) psi(q, b); a == nullptr means identity.
RowMatrix apply_local(const Mat& phi, const Mat* a, const Mat& psi, const TtCore& x) {
  const RowMatrix t1 = phi * x.right_unfolding();
  const std::size_t m = a ? static_cast<std::size_t>(a->rows()) : x.n;
  const std::size_t p0 = static_cast<std::size_t>(phi.rows());
  RowMatrix t2(idx(p0 * m), idx(x.r1));
  for (std::size_t p = 0; p < p0; ++p) {
    ConstRowMap slab(t1.data() + p * x.n * x.r1, idx(x.n), idx(x.r1));
    if (a)
      t2.middleRows(idx(p * m), idx(m)).noalias() = (*a) * slab;
    else
      t2.middleRows(idx(p * m), idx(m)) = slab;
  }
  return t2 * psi.transpose();
}

struct TermRef {
  std::size_t op;
  std::size_t term;
};

class AmenSolver {
 public:
  AmenSolver(const BlockOperator& op, const BlockTt& rhs, const AmenConfig& cfg)
      : op_(op), cfg_(cfg), dims_(op.dims()), D_(dims_.size()), L_(op.components) {
    for (std::size_t o = 0; o < op_.ops.size(); ++o)
      for (std::size_t t = 0; t < op_.ops[o].term_count(); ++t) terms_.push_back({o, t});
    for (std::size_t l = 0; l < L_; ++l) {
      TtTensor f = rhs.component(l);
      const double fn = tt_norm(f);
      rhs_norm2_ += fn * fn;
      if (fn > 0.0) {
        rhs_index_.push_back(l);
        rhs_.push_back(std::move(f));
      }
    }
    trunc_tol_ = cfg_.truncation_tol > 0.0 ? cfg_.truncation_tol : 0.01 * cfg_.tol;
    local_tol_ = cfg_.local_tol > 0.0 ? cfg_.local_tol : 0.1 * cfg_.tol;
  }

  [[nodiscard]] bool zero_rhs() const { return rhs_.empty(); }

  AmenResult run(const BlockTt& rhs_block) {
    x_ = BlockTt::random_rank_one(dims_, L_, 0, cfg_.seed).orthogonalized().cores();
    init_z();
    init_interfaces();
    AmenResult res;
    for (std::size_t sweep = 1; sweep <= cfg_.max_sweeps; ++sweep) {
      sweep_ = sweep;
      for (std::size_t d = 0; d + 1 < D_; ++d) {
        solve_local(d);
        move_right(d);
      }
      for (std::size_t d = D_ - 1; d >= 1; --d) {
        solve_local(d);
        move_left(d);
      }
      if (D_ == 1) solve_local(0);
      const BlockTt xb(x_, 0);
      const double r = kkt_residual(op_, xb, rhs_block, 0.01 * cfg_.tol);
      res.residual_history.push_back(r);
      res.residual = r;
      res.sweeps = sweep;
      if (r <= cfg_.tol) {
        res.converged = true;
        break;
      }
    }
    res.solution = BlockTt(x_, 0);
    res.minres_failures = minres_failures_;
    return res;
  }

 private:
  const BlockOperator& op_;
  const AmenConfig& cfg_;
  std::vector<std::size_t> dims_;
  std::size_t D_;
  std::size_t L_;
  std::vector<TermRef> terms_;
  std::vector<TtTensor> rhs_;
  std::vector<std::size_t> rhs_index_;
  double rhs_norm2_ = 0.0;
  double trunc_tol_ = 0.0;
  double local_tol_ = 0.0;
  std::size_t sweep_ = 0;
  std::size_t minres_failures_ = 0;

  std::vector<TtCore> x_;
  std::vector<TtCore> z_;
  // [d][g]: interfaces of cores < d (phi) and > d (psi)
  std::vector<std::vector<Mat>> phi_xx_, psi_xx_, phi_zx_, psi_zx_;
  // [d][k]: right-hand side interfaces, k over the nonzero components
  std::vector<std::vector<Mat>> phi_xf_, psi_xf_, phi_zf_, psi_zf_;

  const Mat& factor(const TermRef& g, std::size_t d) const { return op_.ops[g.op].term(g.term)[d]; }
  std::size_t z_rank() const { return std::max<std::size_t>(1, cfg_.enrichment_rank); }

  void init_z() {
    std::mt19937_64 rng(cfg_.seed + 1);
    std::normal_distribution<double> normal;
    std::vector<std::size_t> r(D_ + 1, 1);
    for (std::size_t d = 1; d < D_; ++d) {
      std::size_t left = 1;
      std::size_t right = 1;
      for (std::size_t k = 0; k < d && left < z_rank(); ++k) left *= dims_[k];
      for (std::size_t k = d; k < D_ && right < z_rank(); ++k) right *= dims_[k];
      r[d] = std::min({z_rank(), left, right});
    }
    z_.clear();
    for (std::size_t d = 0; d < D_; ++d) {
      TtCore c(r[d], dims_[d], r[d + 1]);
      for (double& v : c.data) v = normal(rng);
      z_.push_back(std::move(c));
    }
    // right-orthogonal cores 1..D-1
    for (std::size_t d = D_; d-- > 1;) {
      TtCore& c = z_[d];
      const ThinQr qr = thin_qr(c.right_unfolding().transpose());
      const auto k = static_cast<std::size_t>(qr.q.cols());
      TtCore& prev = z_[d - 1];
      const Mat left = prev.left_unfolding() * qr.r.transpose();
      prev = core_from(prev.r0, prev.n, 1, k, left);
      c = core_from(k, c.n, 1, c.r1, qr.q.transpose());
    }
  }

  void init_interfaces() {
    const std::size_t G = terms_.size();
    const std::size_t K = rhs_.size();
    auto sized = [&](std::size_t count) { return std::vector<std::vector<Mat>>(D_, std::vector<Mat>(count)); };
    phi_xx_ = sized(G);
    psi_xx_ = sized(G);
    phi_zx_ = sized(G);
    psi_zx_ = sized(G);
    phi_xf_ = sized(K);
    psi_xf_ = sized(K);
    phi_zf_ = sized(K);
    psi_zf_ = sized(K);
    const Mat one = Mat::Ones(1, 1);
    for (std::size_t g = 0; g < G; ++g) {
      phi_xx_[0][g] = one;
      phi_zx_[0][g] = one;
      psi_xx_[D_ - 1][g] = one;
      psi_zx_[D_ - 1][g] = one;
    }
    for (std::size_t k = 0; k < K; ++k) {
      phi_xf_[0][k] = one;
      phi_zf_[0][k] = one;
      psi_xf_[D_ - 1][k] = one;
      psi_zf_[D_ - 1][k] = one;
    }
    for (std::size_t d = D_ - 1; d >= 1; --d) update_right(d);
  }

  void update_left(std::size_t d) {
    for (std::size_t g = 0; g < terms_.size(); ++g) {
      const Mat& a = factor(terms_[g], d);
      phi_xx_[d + 1][g] = contract_left(phi_xx_[d][g], x_[d], &a, x_[d]);
      phi_zx_[d + 1][g] = contract_left(phi_zx_[d][g], z_[d], &a, x_[d]);
    }
    for (std::size_t k = 0; k < rhs_.size(); ++k) {
      phi_xf_[d + 1][k] = contract_left(phi_xf_[d][k], x_[d], nullptr, rhs_[k].core(d));
      phi_zf_[d + 1][k] = contract_left(phi_zf_[d][k], z_[d], nullptr, rhs_[k].core(d));
    }
  }

  void update_right(std::size_t d) {
    for (std::size_t g = 0; g < terms_.size(); ++g) {
      const Mat& a = factor(terms_[g], d);
      psi_xx_[d - 1][g] = contract_right(psi_xx_[d][g], x_[d], &a, x_[d]);
      psi_zx_[d - 1][g] = contract_right(psi_zx_[d][g], z_[d], &a, x_[d]);
    }
    for (std::size_t k = 0; k < rhs_.size(); ++k) {
      psi_xf_[d - 1][k] = contract_right(psi_xf_[d][k], x_[d], nullptr, rhs_[k].core(d));
      psi_zf_[d - 1][k] = contract_right(psi_zf_[d][k], z_[d], nullptr, rhs_[k].core(d));
    }
  }

  // Residual b - A x of the block core at d, framed by the given interfaces, one
  // (p0, n, p1) slice per component.
  std::vector<RowMatrix> framed_residual(std::size_t d, const std::vector<Mat>& phi_x, const std::vector<Mat>& psi_x,
                                         const std::vector<Mat>& phi_f, const std::vector<Mat>& psi_f) const {
    const TtCore& bc = x_[d];
    std::vector<TtCore> comps;
    for (std::size_t l = 0; l < L_; ++l) comps.push_back(slice(bc, l));
    std::vector<RowMatrix> out(L_);
    const auto p0 = phi_x.empty() ? phi_f.front().rows() : phi_x.front().rows();
    const auto p1 = psi_x.empty() ? psi_f.front().rows() : psi_x.front().rows();
    for (auto& m : out) m = RowMatrix::Zero(p0 * idx(bc.n), p1);
    for (std::size_t k = 0; k < rhs_.size(); ++k)
      out[rhs_index_[k]] += apply_local(phi_f[k], nullptr, psi_f[k], rhs_[k].core(d));
    for (std::size_t g = 0; g < terms_.size(); ++g) {
      const TermRef& t = terms_[g];
      for (const auto& e : op_.entries) {
        if (e.op != t.op) continue;
        out[e.row] -= e.scale * apply_local(phi_x[g], &factor(t, d), psi_x[g], comps[e.col]);
      }
    }
    return out;
  }

  std::vector<Mat> op_interfaces(const std::vector<Mat>& all, std::size_t o) const {
    std::vector<Mat> out;
    for (std::size_t g = 0; g < terms_.size(); ++g)
      if (terms_[g].op == o) out.push_back(all[g]);
    return out;
  }

  Mat local_matrix(std::size_t d, std::size_t m) const {
    Mat a = Mat::Zero(idx(L_ * m), idx(L_ * m));
    std::vector<Mat> per_op(op_.ops.size());
    for (std::size_t o = 0; o < op_.ops.size(); ++o) {
      if (op_.ops[o].term_count() == 0) {
        per_op[o] = Mat::Zero(idx(m), idx(m));
        continue;
      }
      per_op[o] = local_operator(op_interfaces(phi_xx_[d], o), op_interfaces(psi_xx_[d], o), op_.ops[o], d);
    }
    for (const auto& e : op_.entries)
      a.block(idx(e.row * m), idx(e.col * m), idx(m), idx(m)) += e.scale * per_op[e.op];
    return a;
  }

  Vec local_rhs(std::size_t d, std::size_t m) const {
    Vec g = Vec::Zero(idx(L_ * m));
    for (std::size_t k = 0; k < rhs_.size(); ++k) {
      const RowMatrix y = apply_local(phi_xf_[d][k], nullptr, psi_xf_[d][k], rhs_[k].core(d));
      g.segment(idx(rhs_index_[k] * m), idx(m)) += Eigen::Map<const Vec>(y.data(), y.size());
    }
    return g;
  }

  Vec local_apply(std::size_t d, const Vec& v, std::size_t r0, std::size_t n, std::size_t r1) const {
    const std::size_t m = r0 * n * r1;
    std::vector<TtCore> comps;
    for (std::size_t l = 0; l < L_; ++l) {
      TtCore c(r0, n, r1);
      std::copy(v.data() + l * m, v.data() + (l + 1) * m, c.data.begin());
      comps.push_back(std::move(c));
    }
    Vec out = Vec::Zero(v.size());
    for (std::size_t g = 0; g < terms_.size(); ++g) {
      const TermRef& t = terms_[g];
      for (const auto& e : op_.entries) {
        if (e.op != t.op) continue;
        const RowMatrix y = apply_local(phi_xx_[d][g], &factor(t, d), psi_xx_[d][g], comps[e.col]);
        out.segment(idx(e.row * m), idx(m)) += e.scale * Eigen::Map<const Vec>(y.data(), y.size());
      }
    }
    return out;
  }

  // Positive diagonal scaling: |diag| of the diagonal blocks; for a block with zero
  // diagonal, row sums of squared coupling entries over the neighbouring diagonals.
  Vec preconditioner_diagonal(std::size_t d, std::size_t r0, std::size_t n, std::size_t r1) const {
    const std::size_t m = r0 * n * r1;
    auto kron_vec = [&](const Vec& p, const Vec& a, const Vec& q) {
      Vec out(idx(m));
      for (std::size_t x = 0; x < r0; ++x)
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t y = 0; y < r1; ++y) out(idx((x * n + i) * r1 + y)) = p(idx(x)) * a(idx(i)) * q(idx(y));
      return out;
    };
    std::vector<Vec> diag(L_, Vec::Zero(idx(m)));
    std::vector<Vec> rowsq(L_, Vec::Zero(idx(m)));
    std::vector<std::vector<double>> coupling(L_, std::vector<double>(L_, 0.0));
    for (std::size_t g = 0; g < terms_.size(); ++g) {
      const TermRef& t = terms_[g];
      const Mat& phi = phi_xx_[d][g];
      const Mat& psi = psi_xx_[d][g];
      const Mat& a = factor(t, d);
      const Vec dg = kron_vec(phi.diagonal(), a.diagonal(), psi.diagonal());
      const Vec sq = kron_vec(phi.cwiseAbs2().rowwise().sum(), a.cwiseAbs2().rowwise().sum(),
                              psi.cwiseAbs2().rowwise().sum());
      for (const auto& e : op_.entries) {
        if (e.op != t.op) continue;
        if (e.row == e.col) diag[e.row] += e.scale * dg;
        rowsq[e.row] += (e.scale * e.scale) * sq;
        coupling[e.row][e.col] = 1.0;
      }
    }
    Vec out(idx(L_ * m));
    double dmax = 0.0;
    for (std::size_t l = 0; l < L_; ++l) dmax = std::max(dmax, diag[l].cwiseAbs().maxCoeff());
    for (std::size_t l = 0; l < L_; ++l) {
      Vec s = diag[l].cwiseAbs();
      if (s.maxCoeff() <= 1e-14 * dmax || dmax == 0.0) {
        double scale = 0.0;
        std::size_t count = 0;
        for (std::size_t c = 0; c < L_; ++c) {
          if (c == l || coupling[l][c] == 0.0) continue;
          const double mean = diag[c].cwiseAbs().mean();
          if (mean > 0.0) {
            scale += 1.0 / mean;
            ++count;
          }
        }
        s = rowsq[l] * (count > 0 ? scale / static_cast<double>(count) : 1.0);
      }
      out.segment(idx(l * m), idx(m)) = s;
    }
    const double floor = 1e-14 * std::max(out.maxCoeff(), std::numeric_limits<double>::min());
    return out.cwiseMax(floor);
  }

  void solve_local(std::size_t d) {
    if (cfg_.before_local_solve) cfg_.before_local_solve(BlockTt(x_, d), d);
    TtCore& bc = x_[d];
    const std::size_t r0 = bc.r0;
    const std::size_t n = bc.n;
    const std::size_t r1 = bc.r1;
    const std::size_t m = r0 * n * r1;
    const Vec g = local_rhs(d, m);
    // unknowns are (l, a, i, b); the core stores (a, i, l, b)
    Vec x0(idx(L_ * m));
    for (std::size_t a = 0; a < r0; ++a)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < L_; ++l)
          for (std::size_t b = 0; b < r1; ++b) x0(idx(l * m + (a * n + i) * r1 + b)) = bc.at(a, i, l, b);
    const bool direct = cfg_.local_solver == LocalSolver::direct ||
                        (cfg_.local_solver == LocalSolver::automatic && L_ * m <= cfg_.direct_limit);
    Vec sol;
    if (direct) {
      const Mat a = local_matrix(d, m);
      Eigen::PartialPivLU<Mat> lu(a);
      if (!(lu.rcond() >= std::numeric_limits<double>::epsilon())) {
        std::ostringstream os;
        os << "block AMEn: singular local system in sweep " << sweep_ << " at core " << d;
        throw SingularSystemError(os.str());
      }
      sol = lu.solve(g);
    } else {
      const Vec dinv = preconditioner_diagonal(d, r0, n, r1).cwiseInverse();
      const LinearMap apply = [&](const Vec& v) { return local_apply(d, v, r0, n, r1); };
      const LinearMap precond = [&](const Vec& v) { return Vec(dinv.cwiseProduct(v)); };
      const MinresResult mr = minres(apply, g, precond, x0, local_tol_, cfg_.local_maxit);
      if (!mr.converged) ++minres_failures_;
      sol = mr.x;
    }
    for (std::size_t a = 0; a < r0; ++a)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < L_; ++l)
          for (std::size_t b = 0; b < r1; ++b) bc.at(a, i, l, b) = sol(idx(l * m + (a * n + i) * r1 + b));
  }

  std::size_t enrichment_budget(std::size_t kept) const {
    if (cfg_.rank_cap == kNoRankCap) return z_rank();
    return kept >= cfg_.rank_cap ? 0 : std::min(z_rank(), cfg_.rank_cap - kept);
  }

  void move_right(std::size_t d) {
    const TtCore& bc = x_[d];
    const std::size_t r0 = bc.r0;
    const std::size_t n = bc.n;
    const std::size_t r1 = bc.r1;

    // residual in the z frames gives the next z core
    const std::vector<RowMatrix> zres = framed_residual(d, phi_zx_[d], psi_zx_[d], phi_zf_[d], psi_zf_[d]);
    const auto zr0 = static_cast<std::size_t>(zres.front().rows()) / n;
    const auto zr1 = static_cast<std::size_t>(zres.front().cols());
    Mat zm(idx(zr0 * n), idx(L_ * zr1));
    for (std::size_t l = 0; l < L_; ++l) zm.middleCols(idx(l * zr1), idx(zr1)) = zres[l];
    const ThinSvd zs = thin_svd(zm);
    const std::size_t kz = std::min<std::size_t>(z_rank(), static_cast<std::size_t>(zs.u.cols()));

    // enrichment: residual with x frames on the left, z frames on the right
    const std::vector<RowMatrix> eres = framed_residual(d, phi_xx_[d], psi_zx_[d], phi_xf_[d], psi_zf_[d]);
    Mat em(idx(r0 * n), idx(L_ * zr1));
    for (std::size_t l = 0; l < L_; ++l) em.middleCols(idx(l * zr1), idx(zr1)) = eres[l];

    const ThinSvd xs = thin_svd(bc.matrix(r0 * n, L_ * r1));
    const std::size_t r = truncation_rank(xs.s, trunc_tol_ * xs.s.norm(), cfg_.rank_cap);
    const std::size_t ke = std::min(enrichment_budget(r), static_cast<std::size_t>(std::min(em.rows(), em.cols())));
    Mat basis(idx(r0 * n), idx(r + ke));
    basis.leftCols(idx(r)) = xs.u.leftCols(idx(r));
    if (ke > 0) basis.rightCols(idx(ke)) = thin_svd(em).u.leftCols(idx(ke));
    const Mat q = thin_qr(basis).q;
    const auto rn = static_cast<std::size_t>(q.cols());
    const Mat c = (q.transpose() * xs.u.leftCols(idx(r))) * xs.s.head(idx(r)).asDiagonal() *
                  xs.v.leftCols(idx(r)).transpose();

    const TtCore& next = x_[d + 1];
    TtCore merged(rn, next.n, L_, next.r1);
    for (std::size_t l = 0; l < L_; ++l) {
      const Mat part = c.middleCols(idx(l * r1), idx(r1)) * next.right_unfolding();
      for (std::size_t a = 0; a < rn; ++a)
        for (std::size_t i = 0; i < next.n; ++i)
          for (std::size_t b = 0; b < next.r1; ++b) merged.at(a, i, l, b) = part(idx(a), idx(i * next.r1 + b));
    }
    x_[d] = core_from(r0, n, 1, rn, q);
    x_[d + 1] = std::move(merged);
    z_[d] = core_from(zr0, n, 1, kz, zs.u.leftCols(idx(kz)));
    update_left(d);
  }

  void move_left(std::size_t d) {
    const TtCore& bc = x_[d];
    const std::size_t r0 = bc.r0;
    const std::size_t n = bc.n;
    const std::size_t r1 = bc.r1;

    // rows (l, a), columns (i, b)
    auto stack = [&](const std::vector<RowMatrix>& parts, std::size_t p0, std::size_t p1) {
      Mat out(idx(L_ * p0), idx(n * p1));
      for (std::size_t l = 0; l < L_; ++l)
        out.middleRows(idx(l * p0), idx(p0)) = ConstRowMap(parts[l].data(), idx(p0), idx(n * p1));
      return out;
    };

    const std::vector<RowMatrix> zres = framed_residual(d, phi_zx_[d], psi_zx_[d], phi_zf_[d], psi_zf_[d]);
    const auto zr0 = static_cast<std::size_t>(zres.front().rows()) / n;
    const auto zr1 = static_cast<std::size_t>(zres.front().cols());
    const ThinSvd zs = thin_svd(stack(zres, zr0, zr1));
    const std::size_t kz = std::min<std::size_t>(z_rank(), static_cast<std::size_t>(zs.v.cols()));

    const std::vector<RowMatrix> eres = framed_residual(d, phi_zx_[d], psi_xx_[d], phi_zf_[d], psi_xf_[d]);
    const Mat em = stack(eres, zr0, r1);

    Mat p(idx(L_ * r0), idx(n * r1));
    for (std::size_t a = 0; a < r0; ++a)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < L_; ++l)
          for (std::size_t b = 0; b < r1; ++b) p(idx(l * r0 + a), idx(i * r1 + b)) = bc.at(a, i, l, b);
    const ThinSvd xs = thin_svd(p);
    const std::size_t r = truncation_rank(xs.s, trunc_tol_ * xs.s.norm(), cfg_.rank_cap);
    const std::size_t ke = std::min(enrichment_budget(r), static_cast<std::size_t>(std::min(em.rows(), em.cols())));
    Mat basis(idx(n * r1), idx(r + ke));
    basis.leftCols(idx(r)) = xs.v.leftCols(idx(r));
    if (ke > 0) basis.rightCols(idx(ke)) = thin_svd(em).v.leftCols(idx(ke));
    const Mat q = thin_qr(basis).q;
    const auto rn = static_cast<std::size_t>(q.cols());
    const Mat c = xs.u.leftCols(idx(r)) * xs.s.head(idx(r)).asDiagonal() * (xs.v.leftCols(idx(r)).transpose() * q);

    const TtCore& prev = x_[d - 1];
    TtCore merged(prev.r0, prev.n, L_, rn);
    for (std::size_t l = 0; l < L_; ++l) {
      const Mat part = prev.left_unfolding() * c.middleRows(idx(l * r0), idx(r0));
      for (std::size_t a = 0; a < prev.r0; ++a)
        for (std::size_t i = 0; i < prev.n; ++i)
          for (std::size_t b = 0; b < rn; ++b) merged.at(a, i, l, b) = part(idx(a * prev.n + i), idx(b));
    }
    x_[d] = core_from(rn, n, 1, r1, q.transpose());
    x_[d - 1] = std::move(merged);
    z_[d] = core_from(kz, n, 1, zr1, zs.v.leftCols(idx(kz)).transpose());
    update_right(d);
  }
};

}  // namespace

AmenResult block_amen_solve(const BlockOperator& op, const BlockTt& rhs, const AmenConfig& cfg) {
  if (op.components == 0 || op.ops.empty()) throw ValidationError("block AMEn: empty operator");
  if (rhs.components() != op.components) throw ValidationError("block AMEn: component count mismatch");
  if (rhs.dims() != op.dims()) throw ValidationError("block AMEn: right-hand side shape mismatch");
  for (const auto& a : op.ops)
    if (a.row_dims() != op.dims() || a.col_dims() != op.dims()) throw ValidationError("block AMEn: operators must be square and share a shape");
  for (const auto& e : op.entries)
    if (e.row >= op.components || e.col >= op.components || e.op >= op.ops.size()) {
      throw ValidationError("block AMEn: operator entry out of range");
    }
  if (!(cfg.tol > 0.0)) throw ValidationError("block AMEn: tol must be positive");
  if (cfg.max_sweeps == 0) throw ValidationError("block AMEn: max_sweeps must be positive");
  AmenSolver solver(op, rhs, cfg);
  if (solver.zero_rhs()) {
    AmenResult res;
    res.solution = BlockTt::zeros(op.dims(), op.components, 0);
    res.converged = true;
    return res;
  }
  return solver.run(rhs);
}

}  // namespace lriga
