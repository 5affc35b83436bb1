#pragma once

#include <Eigen/Dense>

namespace otcc {

struct SymmetricEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns match `values`
  int sweeps = 0;
};

/// Cyclic Jacobi rotations on a symmetric matrix (the input is symmetrized
/// first). Stops when the off-diagonal Frobenius norm falls below
/// `tol * ||A||_F` or after `max_sweeps`.
SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& a, double tol = 1e-14, int max_sweeps = 100);

}  // namespace otcc
