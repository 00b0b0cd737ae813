#pragma once

#include <cstddef>
#include <functional>

#include <Eigen/Core>

namespace spi {

enum class OperatorKind { dct, gradient, explicit_matrix };

/// Matrix-free linear map with its adjoint.
class LinearOperator {
 public:
  using Map = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

  LinearOperator(OperatorKind kind, std::size_t in_dim, std::size_t out_dim, Map apply,
                 Map apply_transpose);

  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
  Eigen::VectorXd apply_transpose(const Eigen::VectorXd& v) const;

  std::size_t in_dim() const { return in_dim_; }
  std::size_t out_dim() const { return out_dim_; }
  OperatorKind kind() const { return kind_; }

 private:
  OperatorKind kind_;
  std::size_t in_dim_;
  std::size_t out_dim_;
  Map apply_;
  Map apply_transpose_;
};

/// Orthonormal separable 2D DCT-II on row-major images. The transpose is the
/// exact inverse.
LinearOperator dct_operator(std::size_t width, std::size_t height);

/// Anisotropic discrete gradient: horizontal forward differences for every
/// pixel followed by vertical ones, both row-major. The difference leaving
/// the last column (resp. row) is zero.
LinearOperator gradient_operator(std::size_t width, std::size_t height);

LinearOperator explicit_operator(Eigen::MatrixXd matrix);

/// Dense matrix of any operator, built column by column from unit vectors.
Eigen::MatrixXd to_dense(const LinearOperator& op);

/// Elementwise shrinkage: v - tau above tau, v + tau below -tau, 0 otherwise.
Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double tau);

}  // namespace spi
