#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace lriga {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Row-major dense tensor, first index slowest.
struct DenseTensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  DenseTensor() = default;
  explicit DenseTensor(std::vector<std::size_t> shape_);
  DenseTensor(std::vector<std::size_t> shape_, std::vector<double> data_);

  [[nodiscard]] std::size_t size() const noexcept { return data.size(); }
  [[nodiscard]] std::size_t order() const noexcept { return shape.size(); }
  [[nodiscard]] std::size_t offset(std::span<const std::size_t> index) const;
  [[nodiscard]] double& operator[](std::span<const std::size_t> index) { return data[offset(index)]; }
  [[nodiscard]] double operator[](std::span<const std::size_t> index) const { return data[offset(index)]; }
  [[nodiscard]] double norm() const;
};

[[nodiscard]] std::size_t product(std::span<const std::size_t> dims);

/// Applies the matrix along tensor mode d of row-major data with the given shape.
/// Output shape equals the input shape with dims[d] replaced by op.rows().
[[nodiscard]] std::vector<double> apply_mode(std::span<const double> data,
                                             std::span<const std::size_t> shape, std::size_t mode,
                                             const Eigen::MatrixXd& op);

}  // namespace lriga
