#include "lriga/block_tt.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "lriga/errors.hpp"

namespace lriga {

BlockTt::BlockTt(std::vector<TtCore> cores, std::size_t block_position)
    : cores_(std::move(cores)), block_(block_position) {
  if (cores_.empty()) throw ValidationError("block train: at least one core required");
  if (block_ >= cores_.size()) throw ValidationError("block train: block position out of range");
  if (cores_.front().r0 != 1 || cores_.back().r1 != 1) throw ValidationError("block train: boundary ranks must be 1");
  for (std::size_t d = 0; d < cores_.size(); ++d) {
    const auto& c = cores_[d];
    if (d != block_ && c.l != 1) throw ValidationError("block train: only the block core may carry components");
    if (c.data.size() != c.r0 * c.n * c.l * c.r1) throw ValidationError("block train: core data size mismatch");
    if (d > 0 && cores_[d - 1].r1 != c.r0) throw ValidationError("block train: rank mismatch");
  }
}

std::vector<std::size_t> BlockTt::dims() const {
  std::vector<std::size_t> out;
  for (const auto& c : cores_) out.push_back(c.n);
  return out;
}

std::vector<std::size_t> BlockTt::ranks() const {
  std::vector<std::size_t> out{1};
  for (const auto& c : cores_) out.push_back(c.r1);
  return out;
}

std::size_t BlockTt::max_rank() const {
  std::size_t r = 1;
  for (const auto& c : cores_) r = std::max(r, c.r1);
  return r;
}

std::size_t BlockTt::storage() const {
  std::size_t s = 0;
  for (const auto& c : cores_) s += c.size();
  return s;
}

TtTensor BlockTt::component(std::size_t l) const {
  if (l >= components()) throw ValidationError("block train: component index out of range");
  std::vector<TtCore> cores = cores_;
  const TtCore& bc = cores_[block_];
  TtCore slice(bc.r0, bc.n, bc.r1);
  for (std::size_t a = 0; a < bc.r0; ++a)
    for (std::size_t i = 0; i < bc.n; ++i)
      for (std::size_t b = 0; b < bc.r1; ++b) slice(a, i, b) = bc.at(a, i, l, b);
  cores[block_] = std::move(slice);
  return TtTensor(std::move(cores));
}

BlockTt BlockTt::zeros(const std::vector<std::size_t>& dims, std::size_t components, std::size_t block_position) {
  std::vector<TtCore> cores;
  for (std::size_t d = 0; d < dims.size(); ++d) cores.emplace_back(1, dims[d], d == block_position ? components : 1, 1);
  return BlockTt(std::move(cores), block_position);
}

BlockTt BlockTt::random_rank_one(const std::vector<std::size_t>& dims, std::size_t components,
                                 std::size_t block_position, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  BlockTt out = zeros(dims, components, block_position);
  for (auto& c : out.cores_) {
    for (double& v : c.data) v = normal(rng);
    const double nc = c.norm();
    if (nc > 0.0)
      for (double& v : c.data) v /= nc;
  }
  return out;
}

namespace {

TtCore reshaped(std::size_t r0, std::size_t n, std::size_t l, std::size_t r1, const Eigen::Ref<const Eigen::MatrixXd>& m) {
  TtCore c(r0, n, l, r1);
  c.matrix(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())) = m;
  return c;
}

}  // namespace

BlockTt BlockTt::orthogonalized() const {
  std::vector<TtCore> cores = cores_;
  for (std::size_t d = 0; d < block_; ++d) {
    TtCore& c = cores[d];
    const ThinQr qr = thin_qr(c.left_unfolding());
    const auto k = static_cast<std::size_t>(qr.q.cols());
    TtCore& next = cores[d + 1];
    const Eigen::MatrixXd R = qr.r * next.right_unfolding();
    next = reshaped(k, next.n, next.l, next.r1, R);
    c = reshaped(c.r0, c.n, 1, k, qr.q);
  }
  for (std::size_t d = cores.size() - 1; d > block_; --d) {
    TtCore& c = cores[d];
    const ThinQr qr = thin_qr(c.right_unfolding().transpose());
    const auto k = static_cast<std::size_t>(qr.q.cols());
    TtCore& prev = cores[d - 1];
    const Eigen::MatrixXd L = prev.left_unfolding() * qr.r.transpose();
    prev = reshaped(prev.r0, prev.n, prev.l, k, L);
    c = reshaped(k, c.n, 1, c.r1, qr.q.transpose());
  }
  return BlockTt(std::move(cores), block_);
}

std::size_t move_block(TtCore& cur, TtCore& next, Direction direction, double tol, std::size_t max_rank) {
  const std::size_t L = cur.l;
  const double threshold = tol * cur.norm();
  if (direction == Direction::right) {
    if (next.l != 1 || next.r0 != cur.r1) throw ValidationError("move_block: incompatible right neighbour");
    const ThinSvd svd = thin_svd(cur.matrix(cur.r0 * cur.n, L * cur.r1));
    const std::size_t r = truncation_rank(svd.s, threshold, max_rank);
    const auto ri = static_cast<Eigen::Index>(r);
    const Eigen::MatrixXd sv = svd.s.head(ri).asDiagonal() * svd.v.leftCols(ri).transpose();
    TtCore merged(r, next.n, L, next.r1);
    const auto r1 = static_cast<Eigen::Index>(cur.r1);
    for (std::size_t l = 0; l < L; ++l) {
      const Eigen::MatrixXd part = sv.middleCols(static_cast<Eigen::Index>(l) * r1, r1) * next.right_unfolding();
      for (std::size_t c = 0; c < r; ++c)
        for (std::size_t i = 0; i < next.n; ++i)
          for (std::size_t b = 0; b < next.r1; ++b)
            merged.at(c, i, l, b) = part(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(i * next.r1 + b));
    }
    cur = reshaped(cur.r0, cur.n, 1, r, svd.u.leftCols(ri));
    next = std::move(merged);
    return r;
  }
  if (next.l != 1 || next.r1 != cur.r0) throw ValidationError("move_block: incompatible left neighbour");
  // rows (l, a), columns (i, b)
  Eigen::MatrixXd P(static_cast<Eigen::Index>(L * cur.r0), static_cast<Eigen::Index>(cur.n * cur.r1));
  for (std::size_t a = 0; a < cur.r0; ++a)
    for (std::size_t i = 0; i < cur.n; ++i)
      for (std::size_t l = 0; l < L; ++l)
        for (std::size_t b = 0; b < cur.r1; ++b)
          P(static_cast<Eigen::Index>(l * cur.r0 + a), static_cast<Eigen::Index>(i * cur.r1 + b)) = cur.at(a, i, l, b);
  const ThinSvd svd = thin_svd(P);
  const std::size_t r = truncation_rank(svd.s, threshold, max_rank);
  const auto ri = static_cast<Eigen::Index>(r);
  const Eigen::MatrixXd us = svd.u.leftCols(ri) * svd.s.head(ri).asDiagonal();
  TtCore merged(next.r0, next.n, L, r);
  const auto r0 = static_cast<Eigen::Index>(cur.r0);
  for (std::size_t l = 0; l < L; ++l) {
    const Eigen::MatrixXd part = next.left_unfolding() * us.middleRows(static_cast<Eigen::Index>(l) * r0, r0);
    for (std::size_t a = 0; a < next.r0; ++a)
      for (std::size_t i = 0; i < next.n; ++i)
        for (std::size_t c = 0; c < r; ++c)
          merged.at(a, i, l, c) = part(static_cast<Eigen::Index>(a * next.n + i), static_cast<Eigen::Index>(c));
  }
  cur = reshaped(r, cur.n, 1, cur.r1, svd.v.leftCols(ri).transpose());
  next = std::move(merged);
  return r;
}

BlockTt block_core_move(const BlockTt& b, Direction direction, double tol, std::size_t max_rank) {
  const std::size_t pos = b.block_position();
  if (direction == Direction::right && pos + 1 >= b.dimension()) {
    throw ValidationError("block_core_move: block already at the last core");
  }
  if (direction == Direction::left && pos == 0) throw ValidationError("block_core_move: block already at the first core");
  std::vector<TtCore> cores = b.cores();
  const std::size_t other = direction == Direction::right ? pos + 1 : pos - 1;
  move_block(cores[pos], cores[other], direction, tol, max_rank);
  return BlockTt(std::move(cores), other);
}

BlockTt BlockTt::from_components(const std::vector<TtTensor>& components, std::size_t block_position, double tol) {
  if (components.empty()) throw ValidationError("block train: at least one component required");
  const auto dims = components.front().dims();
  const std::size_t D = dims.size();
  if (block_position >= D) throw ValidationError("block train: block position out of range");
  for (const auto& c : components)
    if (c.dims() != dims) throw ValidationError("block train: components must share their shape");
  const std::size_t L = components.size();
  std::vector<TtCore> cores;
  for (std::size_t d = 0; d < D; ++d) {
    const bool first = d == 0;
    const bool last = d + 1 == D;
    std::size_t r0 = 0;
    std::size_t r1 = 0;
    for (const auto& c : components) {
      r0 += c.core(d).r0;
      r1 += c.core(d).r1;
    }
    const std::size_t l = d == block_position ? L : 1;
    TtCore out(first ? 1 : r0, dims[d], l, last ? 1 : r1);
    std::size_t ro = 0;
    std::size_t co = 0;
    for (std::size_t k = 0; k < L; ++k) {
      const TtCore& c = components[k].core(d);
      const std::size_t slot = d == block_position ? k : 0;
      for (std::size_t a = 0; a < c.r0; ++a)
        for (std::size_t i = 0; i < c.n; ++i)
          for (std::size_t b = 0; b < c.r1; ++b)
            out.at(first ? a : ro + a, i, slot, last ? b : co + b) += c(a, i, b);
      ro += c.r0;
      co += c.r1;
    }
    cores.push_back(std::move(out));
  }
  BlockTt raw(std::move(cores), block_position);
  if (tol < 0.0) return raw;
  // orthogonalize, walk to the first core, then truncate on the way to the last core
  std::vector<TtCore> c = raw.orthogonalized().cores_;
  for (std::size_t d = block_position; d > 0; --d) move_block(c[d], c[d - 1], Direction::left, 0.0);
  const double local = D > 1 ? tol / std::sqrt(static_cast<double>(D - 1)) : tol;
  for (std::size_t d = 0; d + 1 < D; ++d) move_block(c[d], c[d + 1], Direction::right, local);
  for (std::size_t d = D - 1; d > block_position; --d) move_block(c[d], c[d - 1], Direction::left, 0.0);
  return BlockTt(std::move(c), block_position);
}

Eigen::MatrixXd left_interface(const std::vector<TtCore>& test, const std::vector<TtCore>& trial,
                               const std::vector<Eigen::MatrixXd>* factors, std::size_t d) {
  Eigen::MatrixXd phi = Eigen::MatrixXd::Ones(1, 1);
  for (std::size_t k = 0; k < d; ++k) phi = contract_left(phi, test[k], factors ? &(*factors)[k] : nullptr, trial[k]);
  return phi;
}

Eigen::MatrixXd right_interface(const std::vector<TtCore>& test, const std::vector<TtCore>& trial,
                                const std::vector<Eigen::MatrixXd>* factors, std::size_t d) {
  Eigen::MatrixXd psi = Eigen::MatrixXd::Ones(1, 1);
  for (std::size_t k = test.size(); k-- > d + 1;) {
    psi = contract_right(psi, test[k], factors ? &(*factors)[k] : nullptr, trial[k]);
  }
  return psi;
}

Eigen::MatrixXd local_operator(const std::vector<Eigen::MatrixXd>& phi, const std::vector<Eigen::MatrixXd>& psi,
                               const KroneckerSum& a, std::size_t d) {
  if (phi.size() != a.term_count() || psi.size() != a.term_count()) {
    throw ValidationError("local_operator: one interface per term required");
  }
  if (a.term_count() == 0) return {};
  const Eigen::Index r0 = phi.front().rows();
  const Eigen::Index r1 = psi.front().rows();
  const auto n = static_cast<Eigen::Index>(a.row_dims()[d]);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(r0 * n * r1, r0 * n * r1);
  for (std::size_t t = 0; t < a.term_count(); ++t) out += kron({phi[t], a.term(t)[d], psi[t]});
  return out;
}

Eigen::MatrixXd frame_project(const BlockTt& b, std::size_t d, const KroneckerSum& a) {
  if (b.block_position() != d) throw ValidationError("frame_project: the block index must sit at the projected core");
  if (a.row_dims() != b.dims() || a.col_dims() != b.dims()) throw ValidationError("frame_project: shape mismatch");
  std::vector<Eigen::MatrixXd> phi;
  std::vector<Eigen::MatrixXd> psi;
  for (const auto& t : a.terms()) {
    phi.push_back(left_interface(b.cores(), b.cores(), &t, d));
    psi.push_back(right_interface(b.cores(), b.cores(), &t, d));
  }
  if (a.term_count() == 0) {
    const TtCore& c = b.core(d);
    const auto m = static_cast<Eigen::Index>(c.r0 * c.n * c.r1);
    return Eigen::MatrixXd::Zero(m, m);
  }
  return local_operator(phi, psi, a, d);
}

Eigen::MatrixXd frame_matrix_dense(const BlockTt& b, std::size_t d, std::size_t size_cap) {
  const auto& cores = b.cores();
  const TtCore& cd = cores.at(d);
  std::size_t left_size = 1;
  std::size_t right_size = 1;
  for (std::size_t k = 0; k < d; ++k) left_size *= cores[k].n;
  for (std::size_t k = d + 1; k < cores.size(); ++k) right_size *= cores[k].n;
  const std::size_t rows = left_size * cd.n * right_size;
  const std::size_t cols = cd.r0 * cd.n * cd.r1;
  if (rows * cols > size_cap) throw SizeCapError("frame_matrix_dense: frame too large");
  RowMatrix left = RowMatrix::Ones(1, 1);
  for (std::size_t k = 0; k < d; ++k) {
    const RowMatrix next = left * cores[k].right_unfolding();
    left = ConstRowMap(next.data(), next.rows() * static_cast<Eigen::Index>(cores[k].n),
                       static_cast<Eigen::Index>(cores[k].r1));
  }
  RowMatrix right = RowMatrix::Ones(1, 1);
  for (std::size_t k = cores.size(); k-- > d + 1;) {
    const RowMatrix next = cores[k].left_unfolding() * right;
    right = ConstRowMap(next.data(), static_cast<Eigen::Index>(cores[k].r0),
                        next.cols() * static_cast<Eigen::Index>(cores[k].n));
  }
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t p = 0; p < left_size; ++p)
    for (std::size_t i = 0; i < cd.n; ++i)
      for (std::size_t q = 0; q < right_size; ++q) {
        const auto row = static_cast<Eigen::Index>((p * cd.n + i) * right_size + q);
        for (std::size_t a = 0; a < cd.r0; ++a)
          for (std::size_t c = 0; c < cd.r1; ++c)
            F(row, static_cast<Eigen::Index>((a * cd.n + i) * cd.r1 + c)) =
                left(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(a)) *
                right(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(q));
      }
  return F;
}

}  // namespace lriga
