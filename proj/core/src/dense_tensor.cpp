#include "lriga/dense_tensor.hpp"

#include <cmath>
#include <numeric>

#include "lriga/errors.hpp"

namespace lriga {

std::size_t product(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

DenseTensor::DenseTensor(std::vector<std::size_t> shape_) : shape(std::move(shape_)) {
  data.assign(product(shape), 0.0);
}

DenseTensor::DenseTensor(std::vector<std::size_t> shape_, std::vector<double> data_)
    : shape(std::move(shape_)), data(std::move(data_)) {
  if (data.size() != product(shape)) throw ValidationError("dense tensor: data size does not match shape");
}

std::size_t DenseTensor::offset(std::span<const std::size_t> index) const {
  std::size_t off = 0;
  for (std::size_t d = 0; d < shape.size(); ++d) off = off * shape[d] + index[d];
  return off;
}

double DenseTensor::norm() const {
  double s = 0.0;
  for (double v : data) s += v * v;
  return std::sqrt(s);
}

std::vector<double> apply_mode(std::span<const double> data, std::span<const std::size_t> shape,
                               std::size_t mode, const Eigen::MatrixXd& op) {
  std::size_t left = 1;
  std::size_t right = 1;
  for (std::size_t d = 0; d < mode; ++d) left *= shape[d];
  for (std::size_t d = mode + 1; d < shape.size(); ++d) right *= shape[d];
  const auto n = shape[mode];
  const auto m = static_cast<std::size_t>(op.rows());
  if (static_cast<std::size_t>(op.cols()) != n) throw ValidationError("apply_mode: shape mismatch");
  std::vector<double> out(left * m * right, 0.0);
  for (std::size_t a = 0; a < left; ++a) {
    Eigen::Map<const RowMatrix> in(data.data() + a * n * right, static_cast<Eigen::Index>(n),
                                static_cast<Eigen::Index>(right));
    Eigen::Map<RowMatrix> res(out.data() + a * m * right, static_cast<Eigen::Index>(m),
                           static_cast<Eigen::Index>(right));
    res.noalias() = op * in;
  }
  return out;
}

}  // namespace lriga
