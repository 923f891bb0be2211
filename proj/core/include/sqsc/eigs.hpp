#pragma once
//
// Symmetric eigensolvers: matrix-free Lanczos (top-k, full
// reorthogonalization) and dense full-spectrum decomposition.
//

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "sqsc/common.hpp"

namespace sqsc {

/// Matrix-free symmetric operator: y = A x (x, y of length n).
using LinOp = std::function<void(const double*, double*)>;

struct EigenPairs {
  Eigen::VectorXd values;         // descending
  Eigen::MatrixXd vectors;        // unit columns matched to values
  std::vector<double> residuals;  // ||A v - lambda v||_2 per pair
  int iterations = 0;
  bool converged = false;
};

struct LanczosOptions {
  int max_iter = 0;             // 0: min(n, 300)
  double tol = 1e-10;           // residual <= tol * spectral-scale estimate
  std::uint64_t seed = 0x5eed;  // deterministic start vector
};

/// Top-k (largest algebraic) eigenpairs of a symmetric operator via Lanczos
/// with twice-applied full reorthogonalization. For the smallest eigenvalues
/// run it on the negated operator. k must lie in [1, 8].
EigenPairs top_eigenpairs(const LinOp& A, Index n, int k, const LanczosOptions& opts = {});

struct DenseSpectrum {
  Eigen::VectorXd values;   // ascending (solver order)
  Eigen::MatrixXd vectors;  // empty unless requested
};

/// Full spectrum of a dense symmetric matrix (tridiagonalization + implicit
/// shift iterations). Rejects visibly asymmetric inputs and n > 8192.
DenseSpectrum full_spectrum(const Eigen::MatrixXd& K, bool with_vectors = false);

/// Flip u in place so that <u, v> >= 0; returns the squared normalized
/// overlap (u' v)^2 / (|u|^2 |v|^2), the empirical alignment.
double sign_align(Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// Same, against ±1 labels.
double sign_align(Eigen::VectorXd& u, const std::vector<int>& labels);

}  // namespace sqsc
