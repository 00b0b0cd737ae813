#include "spi/transforms.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include "spi/errors.hpp"

namespace spi {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// C(k, j) = s_k cos(pi (2j + 1) k / (2N)), s_0 = sqrt(1/N), s_k = sqrt(2/N).
Eigen::MatrixXd dct_1d(std::size_t size) {
  const auto n = static_cast<Eigen::Index>(size);
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / static_cast<double>(n));
    for (Eigen::Index j = 0; j < n; ++j) {
      c(k, j) = scale * std::cos(std::numbers::pi * static_cast<double>((2 * j + 1) * k) /
                                 (2.0 * static_cast<double>(n)));
    }
  }
  return c;
}

}  // namespace

LinearOperator::LinearOperator(OperatorKind kind, std::size_t in_dim, std::size_t out_dim,
                               Map apply, Map apply_transpose)
    : kind_(kind),
      in_dim_(in_dim),
      out_dim_(out_dim),
      apply_(std::move(apply)),
      apply_transpose_(std::move(apply_transpose)) {}

Eigen::VectorXd LinearOperator::apply(const Eigen::VectorXd& v) const {
  if (static_cast<std::size_t>(v.size()) != in_dim_) {
    throw InvalidArgument("operator input has length " + std::to_string(v.size()) +
                          ", expected " + std::to_string(in_dim_));
  }
  return apply_(v);
}

Eigen::VectorXd LinearOperator::apply_transpose(const Eigen::VectorXd& v) const {
  if (static_cast<std::size_t>(v.size()) != out_dim_) {
    throw InvalidArgument("operator adjoint input has length " + std::to_string(v.size()) +
                          ", expected " + std::to_string(out_dim_));
  }
  return apply_transpose_(v);
}

LinearOperator dct_operator(std::size_t width, std::size_t height) {
  if (width == 0 || height == 0) throw InvalidArgument("dct_operator: zero dimension");
  const auto w = static_cast<Eigen::Index>(width);
  const auto h = static_cast<Eigen::Index>(height);
  const Eigen::MatrixXd cw = dct_1d(width);
  const Eigen::MatrixXd ch = dct_1d(height);

  // Row-major image X (h x w): forward Y = Ch X Cwᵀ, inverse X = Chᵀ Y Cw.
  auto forward = [cw, ch, w, h](const Eigen::VectorXd& v) {
    Eigen::Map<const RowMatrix> x(v.data(), h, w);
    Eigen::VectorXd out(v.size());
    Eigen::Map<RowMatrix>(out.data(), h, w) = ch * x * cw.transpose();
    return out;
  };
  auto inverse = [cw, ch, w, h](const Eigen::VectorXd& v) {
    Eigen::Map<const RowMatrix> y(v.data(), h, w);
    Eigen::VectorXd out(v.size());
    Eigen::Map<RowMatrix>(out.data(), h, w) = ch.transpose() * y * cw;
    return out;
  };
  const std::size_t n = width * height;
  return LinearOperator(OperatorKind::dct, n, n, forward, inverse);
}

LinearOperator gradient_operator(std::size_t width, std::size_t height) {
  if (width < 2 || height < 2) {
    throw InvalidArgument("gradient_operator: width and height must be at least 2");
  }
  const std::size_t n = width * height;

  auto forward = [width, height, n](const Eigen::VectorXd& v) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * n));
    for (std::size_t y = 0; y < height; ++y) {
      for (std::size_t x = 0; x < width; ++x) {
        const std::size_t i = y * width + x;
        if (x + 1 < width) out[i] = v[i + 1] - v[i];
        if (y + 1 < height) out[n + i] = v[i + width] - v[i];
      }
    }
    return out;
  };
  auto adjoint = [width, height, n](const Eigen::VectorXd& g) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t y = 0; y < height; ++y) {
      for (std::size_t x = 0; x < width; ++x) {
        const std::size_t i = y * width + x;
        if (x + 1 < width) {
          out[i + 1] += g[i];
          out[i] -= g[i];
        }
        if (y + 1 < height) {
          out[i + width] += g[n + i];
          out[i] -= g[n + i];
        }
      }
    }
    return out;
  };
  return LinearOperator(OperatorKind::gradient, n, 2 * n, forward, adjoint);
}

LinearOperator explicit_operator(Eigen::MatrixXd matrix) {
  const auto in_dim = static_cast<std::size_t>(matrix.cols());
  const auto out_dim = static_cast<std::size_t>(matrix.rows());
  auto shared = std::make_shared<const Eigen::MatrixXd>(std::move(matrix));
  return LinearOperator(
      OperatorKind::explicit_matrix, in_dim, out_dim,
      [shared](const Eigen::VectorXd& v) -> Eigen::VectorXd { return *shared * v; },
      [shared](const Eigen::VectorXd& v) -> Eigen::VectorXd { return shared->transpose() * v; });
}

Eigen::MatrixXd to_dense(const LinearOperator& op) {
  const auto in = static_cast<Eigen::Index>(op.in_dim());
  Eigen::MatrixXd dense(static_cast<Eigen::Index>(op.out_dim()), in);
  Eigen::VectorXd unit = Eigen::VectorXd::Zero(in);
  for (Eigen::Index j = 0; j < in; ++j) {
    unit[j] = 1.0;
    dense.col(j) = op.apply(unit);
    unit[j] = 0.0;
  }
  return dense;
}

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double tau) {
  if (!(tau >= 0.0)) throw InvalidArgument("soft_threshold: tau must be >= 0");
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double x = v[i];
    out[i] = x > tau ? x - tau : (x < -tau ? x + tau : 0.0);
  }
  return out;
}

}  // namespace spi
