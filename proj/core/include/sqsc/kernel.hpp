#pragma once
//
// Compressed kernel construction: K = { delta_{i != j} f(x_i^T x_j / sqrt p) / sqrt p }.
//
// Sparse kernels store the strict upper triangle in CSR with an optional
// value codebook (quantized/binarized entries become 8-bit codes); the global
// 1/sqrt(p) factor is stored once. Gram products are computed in p-chunked
// panels with compensated accumulation, and entries are compressed on the
// fly so the dense Gram never materializes for sparse layouts.
//

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sqsc/common.hpp"
#include "sqsc/nonlin.hpp"
#include "sqsc/synth.hpp"

namespace sqsc {

enum class KernelLayout { Dense, Sparse };

struct KernelBuildReport {
  std::int64_t nnz = 0;       // stored entries of the full matrix (2x upper)
  double sparsity = 0.0;      // nnz / (n (n-1))
  double build_seconds = 0.0;
  std::int64_t bits_estimate = 0;  // analytic storage model (nonlin.storage_bits)
  std::string note;                // e.g. auto-centering record for custom f
};

/// Symmetric zero-diagonal sparse kernel (strict upper triangle, CSR).
class SparseSymKernel {
 public:
  SparseSymKernel() = default;
  SparseSymKernel(Index n, double scale, std::vector<std::int64_t> row_ptr,
                  std::vector<std::int32_t> col_idx, std::vector<double> values);
  SparseSymKernel(Index n, double scale, std::vector<std::int64_t> row_ptr,
                  std::vector<std::int32_t> col_idx, std::vector<std::uint8_t> codes,
                  std::vector<double> codebook);

  Index n() const { return n_; }
  std::int64_t stored_nnz() const { return static_cast<std::int64_t>(col_idx_.size()); }
  std::int64_t full_nnz() const { return 2 * stored_nnz(); }
  double scale() const { return scale_; }
  const std::vector<std::int64_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::int32_t>& col_idx() const { return col_idx_; }
  bool has_codebook() const { return !codebook_.empty(); }
  const std::vector<double>& codebook() const { return codebook_; }
  const std::vector<std::uint8_t>& codes() const { return codes_; }

  /// Decoded (unscaled) f-value of the k-th stored entry.
  double stored_value(std::int64_t k) const {
    return codebook_.empty() ? values_[static_cast<std::size_t>(k)]
                             : codebook_[codes_[static_cast<std::size_t>(k)]];
  }

  /// Full matrix entry including the 1/sqrt(p) scale (zero on the diagonal).
  double entry(Index i, Index j) const;

  /// y = K x with a fixed block decomposition and sequential block merge, so
  /// the summation order (and hence the result bits) never depends on the
  /// thread count.
  void matvec(const double* x, double* y, int threads = 0) const;
  Eigen::VectorXd matvec(const Eigen::VectorXd& x, int threads = 0) const;

  Eigen::MatrixXd to_dense() const;

  /// Binary container: magic "SQSK", version, n, nnz, codebook, then
  /// little-endian row_ptr/col_idx/value arrays.
  void save(const std::string& path) const;
  static SparseSymKernel load(const std::string& path);

  /// Matrix Market coordinate/real/symmetric export (scaled values).
  void export_mtx(const std::string& path) const;

 private:
  void check() const;

  Index n_ = 0;
  double scale_ = 1.0;
  std::vector<std::int64_t> row_ptr_;  // size n+1
  std::vector<std::int32_t> col_idx_;  // strictly increasing within a row
  std::vector<double> values_;         // raw values (empty when coded)
  std::vector<std::uint8_t> codes_;    // codebook indices (empty when raw)
  std::vector<double> codebook_;
};

/// A built kernel in either layout plus its build report.
struct Kernel {
  KernelLayout layout = KernelLayout::Sparse;
  SparseSymKernel sparse;  // valid when layout == Sparse
  Eigen::MatrixXd dense;   // valid when layout == Dense (scaled, zero diagonal)
  KernelBuildReport report;

  Index n() const {
    return layout == KernelLayout::Sparse ? sparse.n() : static_cast<Index>(dense.rows());
  }
  void matvec(const double* x, double* y, int threads = 0) const;
};

struct KernelBuildOptions {
  Index dense_n_max = 16384;  // refuse accidental O(n^2) dense blowups
  int threads = 0;            // 0: resolve via SQSC_THREADS / hardware
};

/// Build the compressed kernel of X under f. Custom operators with a0 != 0
/// are auto-centered (a0 subtracted) and the report notes it.
Kernel build_kernel(const DataMatrix& X, const Nonlinearity& f, KernelLayout layout,
                    const KernelBuildOptions& opts = {});

/// Uniform-mask baseline: linear kernel entries kept independently with
/// probability eps (symmetric Bernoulli mask, zero diagonal).
Kernel uniform_mask_kernel(const DataMatrix& X, double eps, std::uint64_t seed,
                           const KernelBuildOptions& opts = {});

}  // namespace sqsc
