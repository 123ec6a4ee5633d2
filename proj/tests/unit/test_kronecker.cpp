#include <gtest/gtest.h>

#include <random>

#include "lriga/errors.hpp"
#include "lriga/kronecker.hpp"
#include "oracles.hpp"

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  const auto v = oracle::random_vector(static_cast<std::size_t>(r * c), rng);
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), r, c);
}

lriga::KroneckerSum random_sum(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols,
                               std::size_t terms, std::mt19937_64& rng) {
  lriga::KroneckerSum a(rows, cols);
  for (std::size_t t = 0; t < terms; ++t) {
    std::vector<Eigen::MatrixXd> f;
    for (std::size_t d = 0; d < rows.size(); ++d)
      f.push_back(random_matrix(static_cast<Eigen::Index>(rows[d]), static_cast<Eigen::Index>(cols[d]), rng));
    a.add_term(std::move(f));
  }
  return a;
}

Eigen::MatrixXd explicit_matrix(const lriga::KroneckerSum& a) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols()));
  for (const auto& t : a.terms()) m += oracle::kron_all(t);
  return m;
}

}  // namespace

TEST(Kron, MatchesOracle) {
  std::mt19937_64 rng(21);
  const std::vector<Eigen::MatrixXd> f{random_matrix(2, 3, rng), random_matrix(3, 2, rng), random_matrix(2, 2, rng)};
  EXPECT_NEAR((lriga::kron(f) - oracle::kron_all(f)).norm(), 0.0, 1e-13);
}

TEST(KroneckerSum, ApplyMatchesExplicitProduct) {
  std::mt19937_64 rng(22);
  const auto a = random_sum({3, 4, 2}, {2, 4, 3}, 4, rng);
  const auto xv = oracle::random_vector(a.cols(), rng);
  const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(xv.data(), static_cast<Eigen::Index>(xv.size()));
  EXPECT_NEAR((lriga::kron_apply(a, x) - explicit_matrix(a) * x).norm(), 0.0, 1e-12);
}

TEST(KroneckerSum, DenseSparseTransposed) {
  std::mt19937_64 rng(23);
  const auto a = random_sum({3, 2, 4}, {3, 2, 4}, 3, rng);
  const Eigen::MatrixXd m = explicit_matrix(a);
  EXPECT_NEAR((a.to_dense() - m).norm(), 0.0, 1e-12);
  EXPECT_NEAR((Eigen::MatrixXd(a.to_sparse()) - m).norm(), 0.0, 1e-12);
  EXPECT_NEAR((a.transposed().to_dense() - m.transpose()).norm(), 0.0, 1e-12);
  EXPECT_NEAR((a.scaled(-2.5).to_dense() + 2.5 * m).norm(), 0.0, 1e-12);
  EXPECT_THROW((void)a.to_sparse(10), lriga::SizeCapError);
}

TEST(KroneckerSum, PrependAndSum) {
  std::mt19937_64 rng(24);
  const auto a = random_sum({2, 3}, {2, 3}, 2, rng);
  const auto b = random_sum({2, 3}, {2, 3}, 1, rng);
  const Eigen::MatrixXd c = random_matrix(3, 3, rng);
  EXPECT_NEAR((a.prepended(c).to_dense() - oracle::kron2(c, explicit_matrix(a))).norm(), 0.0, 1e-12);
  const auto s = a + b;
  EXPECT_EQ(s.term_count(), 3u);
  EXPECT_NEAR((s.to_dense() - explicit_matrix(a) - explicit_matrix(b)).norm(), 0.0, 1e-12);
}

TEST(KroneckerSum, ZeroTermsAndStorage) {
  lriga::KroneckerSum a({2, 2}, {2, 2});
  a.add_term({Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Ones(2, 2)});
  a.add_term({Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Ones(2, 2)});
  EXPECT_EQ(a.storage_nnz(), 2u + 4u + 4u);
  const auto b = a.without_zero_terms();
  EXPECT_EQ(b.term_count(), 1u);
  EXPECT_THROW(a.add_term({Eigen::MatrixXd::Identity(3, 3), Eigen::MatrixXd::Ones(2, 2)}), lriga::ValidationError);
}

TEST(KroneckerSum, FrobeniusInner) {
  std::mt19937_64 rng(25);
  const auto a = random_sum({3, 2, 2}, {2, 3, 2}, 3, rng);
  const auto b = random_sum({3, 2, 2}, {2, 3, 2}, 2, rng);
  const Eigen::MatrixXd ma = explicit_matrix(a);
  const Eigen::MatrixXd mb = explicit_matrix(b);
  EXPECT_NEAR(lriga::frobenius_inner(a, b), (ma.array() * mb.array()).sum(), 1e-11);
  EXPECT_NEAR(lriga::frobenius_norm(a), ma.norm(), 1e-11);
}

TEST(KroneckerSum, ApplyToTensorTrain) {
  std::mt19937_64 rng(26);
  const auto a = random_sum({3, 4, 3}, {3, 4, 3}, 5, rng);
  const auto x = lriga::tt_svd(lriga::DenseTensor({3, 4, 3}, oracle::random_vector(36, rng)), 0.0);
  const Eigen::VectorXd xf = Eigen::Map<const Eigen::VectorXd>(lriga::tt_to_full(x).data.data(), 36);
  const Eigen::VectorXd ref = explicit_matrix(a) * xf;
  const auto y = lriga::tt_to_full(lriga::kron_apply(a, x, 1e-12));
  const Eigen::VectorXd yf = Eigen::Map<const Eigen::VectorXd>(y.data.data(), 36);
  EXPECT_LE((yf - ref).norm(), 1e-11 * ref.norm());
}

TEST(KroneckerSum, ApplyToTensorTrainWithManyTerms) {
  // more terms than one rounding batch holds
  std::mt19937_64 rng(27);
  const auto a = random_sum({2, 3, 2}, {2, 3, 2}, 300, rng);
  const auto x = lriga::TtTensor::rank_one({Eigen::VectorXd::Ones(2), Eigen::VectorXd::LinSpaced(3, 0, 1), Eigen::VectorXd::Ones(2)});
  const Eigen::VectorXd xf = Eigen::Map<const Eigen::VectorXd>(lriga::tt_to_full(x).data.data(), 12);
  const Eigen::VectorXd ref = explicit_matrix(a) * xf;
  const auto y = lriga::tt_to_full(lriga::kron_apply(a, x, 1e-12));
  const Eigen::VectorXd yf = Eigen::Map<const Eigen::VectorXd>(y.data.data(), 12);
  EXPECT_LE((yf - ref).norm(), 1e-10 * ref.norm());
}
