#include "lriga/tt.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lriga/errors.hpp"

namespace lriga {

RowMap TtCore::matrix(std::size_t rows, std::size_t cols) {
  return {data.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols)};
}

ConstRowMap TtCore::matrix(std::size_t rows, std::size_t cols) const {
  return {data.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols)};
}

double TtCore::norm() const {
  double s = 0.0;
  for (double v : data) s += v * v;
  return std::sqrt(s);
}

TtTensor::TtTensor(std::vector<TtCore> cores) : cores_(std::move(cores)) {
  if (cores_.empty()) throw ValidationError("tensor train: at least one core required");
  if (cores_.front().r0 != 1 || cores_.back().r1 != 1) {
    throw ValidationError("tensor train: boundary ranks must be 1");
  }
  for (std::size_t d = 0; d < cores_.size(); ++d) {
    const auto& c = cores_[d];
    if (c.l != 1) throw ValidationError("tensor train: plain cores cannot carry a component index");
    if (c.data.size() != c.r0 * c.n * c.r1) throw ValidationError("tensor train: core data size mismatch");
    if (d > 0 && cores_[d - 1].r1 != c.r0) {
      std::ostringstream os;
      os << "tensor train: rank mismatch between cores " << d - 1 << " and " << d;
      throw ValidationError(os.str());
    }
  }
}

TtTensor TtTensor::rank_one(const std::vector<Eigen::VectorXd>& factors) {
  std::vector<TtCore> cores;
  cores.reserve(factors.size());
  for (const auto& f : factors) {
    TtCore c(1, static_cast<std::size_t>(f.size()), 1);
    for (Eigen::Index i = 0; i < f.size(); ++i) c.data[static_cast<std::size_t>(i)] = f[i];
    cores.push_back(std::move(c));
  }
  return TtTensor(std::move(cores));
}

TtTensor TtTensor::zeros(const std::vector<std::size_t>& dims) {
  std::vector<TtCore> cores;
  for (std::size_t n : dims) cores.emplace_back(1, n, 1);
  return TtTensor(std::move(cores));
}

std::vector<std::size_t> TtTensor::dims() const {
  std::vector<std::size_t> out;
  for (const auto& c : cores_) out.push_back(c.n);
  return out;
}

std::vector<std::size_t> TtTensor::ranks() const {
  std::vector<std::size_t> out{1};
  for (const auto& c : cores_) out.push_back(c.r1);
  return out;
}

std::size_t TtTensor::max_rank() const {
  std::size_t r = 1;
  for (const auto& c : cores_) r = std::max(r, c.r1);
  return r;
}

std::size_t TtTensor::storage() const {
  std::size_t s = 0;
  for (const auto& c : cores_) s += c.size();
  return s;
}

ThinSvd thin_svd(const Eigen::Ref<const Eigen::MatrixXd>& a) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  ThinSvd out{svd.matrixU(), svd.singularValues(), svd.matrixV()};
  for (Eigen::Index j = 0; j < out.u.cols(); ++j) {
    Eigen::Index idx = 0;
    out.u.col(j).cwiseAbs().maxCoeff(&idx);
    if (out.u(idx, j) < 0.0) {
      out.u.col(j) *= -1.0;
      out.v.col(j) *= -1.0;
    }
  }
  return out;
}

std::size_t truncation_rank(const Eigen::VectorXd& s, double threshold, std::size_t max_rank) {
  auto r = static_cast<std::size_t>(s.size());
  double tail2 = 0.0;
  const double thr2 = threshold * threshold;
  while (r > 1) {
    const double next = tail2 + s[static_cast<Eigen::Index>(r - 1)] * s[static_cast<Eigen::Index>(r - 1)];
    if (next > thr2) break;
    tail2 = next;
    --r;
  }
  return std::max<std::size_t>(1, std::min(r, max_rank));
}

ThinQr thin_qr(const Eigen::Ref<const Eigen::MatrixXd>& a) {
  const Eigen::Index k = std::min(a.rows(), a.cols());
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  ThinQr out;
  out.q = qr.householderQ() * Eigen::MatrixXd::Identity(a.rows(), k);
  out.r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  return out;
}

namespace {

TtCore core_from(std::size_t r0, std::size_t n, std::size_t r1, const Eigen::Ref<const Eigen::MatrixXd>& m) {
  // m is (r0 n) x r1 or r0 x (n r1); both share the row-major layout of the core
  TtCore c(r0, n, r1);
  c.matrix(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())) = m;
  return c;
}

}  // namespace

TtTensor tt_svd(const DenseTensor& full, double tol, std::size_t max_rank) {
  if (!(tol >= 0.0)) throw ValidationError("tt_svd: tolerance must be nonnegative");
  const std::size_t D = full.order();
  if (D == 0) throw ValidationError("tt_svd: empty shape");
  const double nrm = full.norm();
  if (nrm == 0.0) return TtTensor::zeros(full.shape);
  if (D == 1) {
    TtCore c(1, full.shape[0], 1);
    c.data = full.data;
    return TtTensor({std::move(c)});
  }
  const double delta = tol * nrm / std::sqrt(static_cast<double>(D - 1));

  std::vector<TtCore> cores;
  std::vector<double> rest = full.data;
  std::size_t r_prev = 1;
  std::size_t cols = full.size();
  for (std::size_t d = 0; d + 1 < D; ++d) {
    const std::size_t rows = r_prev * full.shape[d];
    cols /= full.shape[d];
    Eigen::MatrixXd C = ConstRowMap(rest.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    const ThinSvd svd = thin_svd(C);
    const std::size_t r = truncation_rank(svd.s, delta, max_rank);
    const auto ri = static_cast<Eigen::Index>(r);
    cores.push_back(core_from(r_prev, full.shape[d], r, svd.u.leftCols(ri)));
    RowMatrix next = svd.s.head(ri).asDiagonal() * svd.v.leftCols(ri).transpose();
    rest.assign(next.data(), next.data() + next.size());
    r_prev = r;
  }
  TtCore last(r_prev, full.shape[D - 1], 1);
  last.data = rest;
  cores.push_back(std::move(last));
  return TtTensor(std::move(cores));
}

namespace {

// Makes cores 1..D-1 right-orthogonal; the norm then sits in core 0.
void right_orthogonalize(std::vector<TtCore>& cores) {
  for (std::size_t d = cores.size() - 1; d > 0; --d) {
    TtCore& c = cores[d];
    const Eigen::MatrixXd At = c.right_unfolding().transpose();
    const ThinQr qr = thin_qr(At);
    const auto k = static_cast<std::size_t>(qr.q.cols());
    cores[d] = core_from(k, c.n, c.r1, qr.q.transpose());
    TtCore& prev = cores[d - 1];
    const Eigen::MatrixXd L = prev.left_unfolding() * qr.r.transpose();
    prev = core_from(prev.r0, prev.n, k, L);
  }
}

}  // namespace

TtTensor tt_round(const TtTensor& t, double tol, std::size_t max_rank) {
  if (!(tol >= 0.0)) throw ValidationError("tt_round: tolerance must be nonnegative");
  std::vector<TtCore> cores = t.cores();
  const std::size_t D = cores.size();
  if (D == 1) return t;
  right_orthogonalize(cores);
  const double nrm = cores[0].norm();
  if (nrm == 0.0) return TtTensor::zeros(t.dims());
  const double delta = tol * nrm / std::sqrt(static_cast<double>(D - 1));
  for (std::size_t d = 0; d + 1 < D; ++d) {
    TtCore& c = cores[d];
    const ThinSvd svd = thin_svd(c.left_unfolding());
    const std::size_t r = truncation_rank(svd.s, delta, max_rank);
    const auto ri = static_cast<Eigen::Index>(r);
    const std::size_t r0 = c.r0;
    const std::size_t n = c.n;
    cores[d] = core_from(r0, n, r, svd.u.leftCols(ri));
    TtCore& next = cores[d + 1];
    const Eigen::MatrixXd sv = svd.s.head(ri).asDiagonal() * svd.v.leftCols(ri).transpose();
    const Eigen::MatrixXd R = sv * next.right_unfolding();
    next = core_from(r, next.n, next.r1, R);
  }
  return TtTensor(std::move(cores));
}

DenseTensor tt_to_full(const TtTensor& t, std::size_t size_cap) {
  const auto dims = t.dims();
  const std::size_t total = product(dims);
  if (total > size_cap) {
    std::ostringstream os;
    os << "tt_to_full: " << total << " entries exceed the cap of " << size_cap;
    throw SizeCapError(os.str());
  }
  RowMatrix acc = RowMatrix::Ones(1, 1);
  for (const auto& c : t.cores()) {
    RowMatrix next = acc * c.right_unfolding();
    acc = ConstRowMap(next.data(), next.rows() * static_cast<Eigen::Index>(c.n), static_cast<Eigen::Index>(c.r1));
  }
  return DenseTensor(dims, std::vector<double>(acc.data(), acc.data() + acc.size()));
}

std::vector<std::vector<Eigen::VectorXd>> tt_to_canonical_slices(const TtTensor& t) {
  const auto R = t.ranks();
  const std::size_t D = t.dimension();
  std::vector<std::size_t> idx(D + 1, 0);
  std::vector<std::vector<Eigen::VectorXd>> out;
  for (;;) {
    std::vector<Eigen::VectorXd> term;
    term.reserve(D);
    for (std::size_t d = 0; d < D; ++d) {
      const TtCore& c = t.core(d);
      Eigen::VectorXd v(static_cast<Eigen::Index>(c.n));
      for (std::size_t i = 0; i < c.n; ++i) v[static_cast<Eigen::Index>(i)] = c(idx[d], i, idx[d + 1]);
      term.push_back(std::move(v));
    }
    out.push_back(std::move(term));
    // odometer over r_1 .. r_{D-1}, r_1 slowest
    std::size_t d = D;
    bool done = true;
    while (--d >= 1) {
      if (++idx[d] < R[d]) {
        done = false;
        break;
      }
      idx[d] = 0;
    }
    if (done) break;
  }
  return out;
}

TtTensor tt_add(const TtTensor& a, const TtTensor& b) {
  if (a.dims() != b.dims()) throw ValidationError("tt_add: dimension mismatch");
  const std::size_t D = a.dimension();
  std::vector<TtCore> cores;
  cores.reserve(D);
  for (std::size_t d = 0; d < D; ++d) {
    const TtCore& ca = a.core(d);
    const TtCore& cb = b.core(d);
    const bool first = d == 0;
    const bool last = d + 1 == D;
    const std::size_t r0 = first ? 1 : ca.r0 + cb.r0;
    const std::size_t r1 = last ? 1 : ca.r1 + cb.r1;
    const std::size_t row_off = first ? 0 : ca.r0;
    const std::size_t col_off = last ? 0 : ca.r1;
    TtCore c(r0, ca.n, r1);
    for (std::size_t x = 0; x < ca.r0; ++x)
      for (std::size_t i = 0; i < ca.n; ++i)
        for (std::size_t y = 0; y < ca.r1; ++y) c(x, i, y) += ca(x, i, y);
    for (std::size_t x = 0; x < cb.r0; ++x)
      for (std::size_t i = 0; i < cb.n; ++i)
        for (std::size_t y = 0; y < cb.r1; ++y) c(row_off + x, i, col_off + y) += cb(x, i, y);
    cores.push_back(std::move(c));
  }
  return TtTensor(std::move(cores));
}

TtTensor tt_scale(const TtTensor& a, double s) {
  std::vector<TtCore> cores = a.cores();
  for (double& v : cores.front().data) v *= s;
  return TtTensor(std::move(cores));
}

double tt_dot(const TtTensor& a, const TtTensor& b) {
  if (a.dims() != b.dims()) throw ValidationError("tt_dot: dimension mismatch");
  Eigen::MatrixXd phi = Eigen::MatrixXd::Ones(1, 1);
  for (std::size_t d = 0; d < a.dimension(); ++d) phi = contract_left(phi, a.core(d), nullptr, b.core(d));
  return phi(0, 0);
}

double tt_norm(const TtTensor& a) {
  std::vector<TtCore> cores = a.cores();
  right_orthogonalize(cores);
  return cores[0].norm();
}

Eigen::MatrixXd contract_left(const Eigen::MatrixXd& phi, const TtCore& test, const Eigen::MatrixXd* op,
                              const TtCore& trial) {
  if (test.l != 1 || trial.l != 1) throw ValidationError("contract_left: plain cores required");
  const std::size_t nw = test.n;
  const std::size_t nv = trial.n;
  // T1(a', i, b') = sum_i' op(i, i') V(a', i', b')
  RowMatrix t1(static_cast<Eigen::Index>(trial.r0 * nw), static_cast<Eigen::Index>(trial.r1));
  if (op) {
    for (std::size_t a = 0; a < trial.r0; ++a) {
      ConstRowMap va(trial.data.data() + a * nv * trial.r1, static_cast<Eigen::Index>(nv),
                     static_cast<Eigen::Index>(trial.r1));
      t1.middleRows(static_cast<Eigen::Index>(a * nw), static_cast<Eigen::Index>(nw)).noalias() = (*op) * va;
    }
  } else {
    t1 = trial.left_unfolding();
  }
  // T2(a, i, b') = sum_a' phi(a, a') T1(a', i, b')
  ConstRowMap t1r(t1.data(), static_cast<Eigen::Index>(trial.r0), static_cast<Eigen::Index>(nw * trial.r1));
  RowMatrix t2 = phi * t1r;
  ConstRowMap t2l(t2.data(), static_cast<Eigen::Index>(test.r0 * nw), static_cast<Eigen::Index>(trial.r1));
  return test.left_unfolding().transpose() * t2l;
}

Eigen::MatrixXd contract_right(const Eigen::MatrixXd& psi, const TtCore& test, const Eigen::MatrixXd* op,
                               const TtCore& trial) {
  if (test.l != 1 || trial.l != 1) throw ValidationError("contract_right: plain cores required");
  const std::size_t nw = test.n;
  const std::size_t nv = trial.n;
  // T1(a', i', b) = sum_b' V(a', i', b') psi(b, b')
  RowMatrix t1 = trial.left_unfolding() * psi.transpose();
  // T2(a', i, b) = sum_i' op(i, i') T1(a', i', b)
  RowMatrix t2(static_cast<Eigen::Index>(trial.r0 * nw), static_cast<Eigen::Index>(test.r1));
  if (op) {
    for (std::size_t a = 0; a < trial.r0; ++a) {
      t2.middleRows(static_cast<Eigen::Index>(a * nw), static_cast<Eigen::Index>(nw)).noalias() =
          (*op) * t1.middleRows(static_cast<Eigen::Index>(a * nv), static_cast<Eigen::Index>(nv));
    }
  } else {
    t2 = t1;
  }
  ConstRowMap t2r(t2.data(), static_cast<Eigen::Index>(trial.r0), static_cast<Eigen::Index>(nw * test.r1));
  return test.right_unfolding() * t2r.transpose();
}

}  // namespace lriga
