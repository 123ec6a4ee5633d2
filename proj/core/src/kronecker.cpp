#include "lriga/kronecker.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lriga/dense_tensor.hpp"
#include "lriga/errors.hpp"

namespace lriga {

KroneckerSum::KroneckerSum(std::vector<std::size_t> row_dims, std::vector<std::size_t> col_dims)
    : row_dims_(std::move(row_dims)), col_dims_(std::move(col_dims)) {
  if (row_dims_.size() != col_dims_.size()) throw ValidationError("KroneckerSum: row/column order mismatch");
}

void KroneckerSum::add_term(std::vector<Eigen::MatrixXd> factors) {
  if (factors.size() != order()) throw ValidationError("KroneckerSum: wrong number of factors");
  for (std::size_t d = 0; d < factors.size(); ++d) {
    if (static_cast<std::size_t>(factors[d].rows()) != row_dims_[d] ||
        static_cast<std::size_t>(factors[d].cols()) != col_dims_[d]) {
      std::ostringstream os;
      os << "KroneckerSum: factor " << d << " has shape " << factors[d].rows() << "x" << factors[d].cols()
         << ", expected " << row_dims_[d] << "x" << col_dims_[d];
      throw ValidationError(os.str());
    }
  }
  terms_.push_back(std::move(factors));
}

std::size_t KroneckerSum::rows() const { return product(row_dims_); }
std::size_t KroneckerSum::cols() const { return product(col_dims_); }

std::size_t KroneckerSum::storage_nnz() const {
  std::size_t s = 0;
  for (const auto& t : terms_)
    for (const auto& f : t) s += static_cast<std::size_t>((f.array() != 0.0).count());
  return s;
}

KroneckerSum KroneckerSum::transposed() const {
  KroneckerSum out(col_dims_, row_dims_);
  for (const auto& t : terms_) {
    std::vector<Eigen::MatrixXd> f;
    f.reserve(t.size());
    for (const auto& m : t) f.emplace_back(m.transpose());
    out.terms_.push_back(std::move(f));
  }
  out.boundary_eliminated_ = boundary_eliminated_;
  return out;
}

KroneckerSum KroneckerSum::scaled(double s) const {
  KroneckerSum out = *this;
  for (auto& t : out.terms_)
    if (!t.empty()) t.front() *= s;
  return out;
}

KroneckerSum KroneckerSum::prepended(const Eigen::MatrixXd& factor) const {
  std::vector<std::size_t> rd{static_cast<std::size_t>(factor.rows())};
  std::vector<std::size_t> cd{static_cast<std::size_t>(factor.cols())};
  rd.insert(rd.end(), row_dims_.begin(), row_dims_.end());
  cd.insert(cd.end(), col_dims_.begin(), col_dims_.end());
  KroneckerSum out(std::move(rd), std::move(cd));
  for (const auto& t : terms_) {
    std::vector<Eigen::MatrixXd> f{factor};
    f.insert(f.end(), t.begin(), t.end());
    out.terms_.push_back(std::move(f));
  }
  out.boundary_eliminated_ = boundary_eliminated_;
  return out;
}

KroneckerSum KroneckerSum::without_zero_terms() const {
  KroneckerSum out(row_dims_, col_dims_);
  out.boundary_eliminated_ = boundary_eliminated_;
  for (const auto& t : terms_) {
    bool zero = false;
    for (const auto& f : t) zero = zero || f.isZero(0.0);
    if (!zero) out.terms_.push_back(t);
  }
  return out;
}

namespace {

SparseRowMatrix sparse_kron(const SparseRowMatrix& a, const SparseRowMatrix& b) {
  SparseRowMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(a.nonZeros() * b.nonZeros()));
  for (Eigen::Index i = 0; i < a.outerSize(); ++i)
    for (SparseRowMatrix::InnerIterator ia(a, i); ia; ++ia)
      for (Eigen::Index k = 0; k < b.outerSize(); ++k)
        for (SparseRowMatrix::InnerIterator ib(b, k); ib; ++ib)
          trip.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(),
                            ia.value() * ib.value());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

void check_row_cap(std::size_t rows, std::size_t cap, const char* what) {
  if (rows > cap) {
    std::ostringstream os;
    os << what << ": " << rows << " rows exceed the cap of " << cap;
    throw SizeCapError(os.str());
  }
}

}  // namespace

SparseRowMatrix KroneckerSum::to_sparse(std::size_t row_cap) const {
  check_row_cap(rows(), row_cap, "KroneckerSum::to_sparse");
  SparseRowMatrix sum(static_cast<Eigen::Index>(rows()), static_cast<Eigen::Index>(cols()));
  for (const auto& t : terms_) {
    SparseRowMatrix acc(1, 1);
    acc.insert(0, 0) = 1.0;
    for (const auto& f : t) acc = sparse_kron(acc, f.sparseView(1.0, 0.0));
    sum += acc;
  }
  sum.makeCompressed();
  return sum;
}

Eigen::MatrixXd KroneckerSum::to_dense(std::size_t row_cap) const {
  check_row_cap(rows(), row_cap, "KroneckerSum::to_dense");
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows()), static_cast<Eigen::Index>(cols()));
  for (const auto& t : terms_) sum += kron(t);
  return sum;
}

KroneckerSum operator+(const KroneckerSum& a, const KroneckerSum& b) {
  if (a.row_dims() != b.row_dims() || a.col_dims() != b.col_dims()) {
    throw ValidationError("KroneckerSum: cannot add operators of different shape");
  }
  KroneckerSum out = a;
  for (const auto& t : b.terms()) out.add_term(t);
  return out;
}

Eigen::VectorXd kron_apply(const KroneckerSum& a, const Eigen::VectorXd& v) {
  if (static_cast<std::size_t>(v.size()) != a.cols()) throw ValidationError("kron_apply: vector size mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(a.rows()));
  for (const auto& t : a.terms()) {
    std::vector<std::size_t> shape = a.col_dims();
    std::vector<double> cur(v.data(), v.data() + v.size());
    for (std::size_t d = 0; d < t.size(); ++d) {
      cur = apply_mode(cur, shape, d, t[d]);
      shape[d] = a.row_dims()[d];
    }
    out += Eigen::Map<const Eigen::VectorXd>(cur.data(), static_cast<Eigen::Index>(cur.size()));
  }
  return out;
}

namespace {

// Terms [begin, end) applied at once: block-diagonal cores, ranks add up across terms.
TtTensor apply_terms(const KroneckerSum& a, const TtTensor& v, std::size_t begin, std::size_t end) {
  const std::size_t D = a.order();
  const std::size_t T = end - begin;
  std::vector<TtCore> cores;
  cores.reserve(D);
  for (std::size_t d = 0; d < D; ++d) {
    const TtCore& vc = v.core(d);
    const bool first = d == 0;
    const bool last = d + 1 == D;
    const std::size_t m = a.row_dims()[d];
    TtCore c(first ? 1 : T * vc.r0, m, last ? 1 : T * vc.r1);
    for (std::size_t t = 0; t < T; ++t) {
      const Eigen::MatrixXd& op = a.term(begin + t)[d];
      const std::size_t ro = first ? 0 : t * vc.r0;
      const std::size_t co = last ? 0 : t * vc.r1;
      for (std::size_t x = 0; x < vc.r0; ++x) {
        ConstRowMap slab(vc.data.data() + x * vc.n * vc.r1, static_cast<Eigen::Index>(vc.n),
                         static_cast<Eigen::Index>(vc.r1));
        const RowMatrix res = op * slab;
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t y = 0; y < vc.r1; ++y)
            c(ro + x, i, co + y) += res(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(y));
      }
    }
    cores.push_back(std::move(c));
  }
  return TtTensor(std::move(cores));
}

constexpr std::size_t kApplyBatchRank = 256;

}  // namespace

TtTensor kron_apply(const KroneckerSum& a, const TtTensor& v, double tol, std::size_t max_rank) {
  if (v.dims() != a.col_dims()) throw ValidationError("kron_apply: tensor train shape mismatch");
  if (a.term_count() == 0) return TtTensor::zeros(a.row_dims());
  // batches of terms keep the unrounded ranks bounded; each batch is rounded before summation
  const std::size_t batch = std::max<std::size_t>(1, kApplyBatchRank / std::max<std::size_t>(1, v.max_rank()));
  if (a.term_count() <= batch) return tt_round(apply_terms(a, v, 0, a.term_count()), tol, max_rank);
  const double local = tol / std::sqrt(2.0);
  TtTensor acc;
  for (std::size_t b = 0; b < a.term_count(); b += batch) {
    const TtTensor part = tt_round(apply_terms(a, v, b, std::min(a.term_count(), b + batch)), 0.1 * local);
    acc = b == 0 ? part : tt_round(tt_add(acc, part), 0.1 * local);
  }
  return tt_round(acc, local, max_rank);
}

double frobenius_inner(const KroneckerSum& a, const KroneckerSum& b) {
  if (a.row_dims() != b.row_dims() || a.col_dims() != b.col_dims()) {
    throw ValidationError("frobenius_inner: shape mismatch");
  }
  double s = 0.0;
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      double p = 1.0;
      for (std::size_t d = 0; d < ta.size(); ++d) p *= ta[d].cwiseProduct(tb[d]).sum();
      s += p;
    }
  }
  return s;
}

double frobenius_norm(const KroneckerSum& a) { return std::sqrt(std::max(0.0, frobenius_inner(a, a))); }

Eigen::MatrixXd kron(const std::vector<Eigen::MatrixXd>& factors) {
  Eigen::MatrixXd acc = Eigen::MatrixXd::Ones(1, 1);
  for (const auto& f : factors) {
    Eigen::MatrixXd next(acc.rows() * f.rows(), acc.cols() * f.cols());
    for (Eigen::Index i = 0; i < acc.rows(); ++i)
      for (Eigen::Index j = 0; j < acc.cols(); ++j)
        next.block(i * f.rows(), j * f.cols(), f.rows(), f.cols()) = acc(i, j) * f;
    acc = std::move(next);
  }
  return acc;
}

}  // namespace lriga
