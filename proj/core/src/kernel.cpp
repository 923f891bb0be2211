//
// Kernel construction, deterministic sparse matvec, and container I/O.
//

#include "sqsc/kernel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>

#include "sqsc/parallel.hpp"
#include "sqsc/rng.hpp"

namespace sqsc {

namespace {

// Gram panels: row tiles x column tiles, inner products chunked over p with
// per-entry compensated accumulation across chunks. Tile/chunk sizes are
// fixed constants so entry values never depend on the thread count.
constexpr Index kRowTile = 128;
constexpr Index kColTile = 512;
constexpr Index kChunk = 4096;
constexpr std::uint64_t kTagMask = 3;

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

// acc += block product, Kahan-compensated (used only when p spans >1 chunk).
void accumulate_gram(const Eigen::MatrixXd& X, Index i0, Index ni, Index j0, Index nj,
                     Eigen::MatrixXd& acc, Eigen::MatrixXd& comp) {
  const Index p = X.rows();
  if (p <= kChunk) {
    acc.noalias() = X.middleCols(i0, ni).transpose() * X.middleCols(j0, nj);
    return;
  }
  acc.setZero(ni, nj);
  comp.setZero(ni, nj);
  Eigen::MatrixXd part(ni, nj);
  for (Index c0 = 0; c0 < p; c0 += kChunk) {
    const Index pc = std::min(kChunk, p - c0);
    part.noalias() = X.block(c0, i0, pc, ni).transpose() * X.block(c0, j0, pc, nj);
    for (Index j = 0; j < nj; ++j) {
      for (Index i = 0; i < ni; ++i) {
        const double y = part(i, j) - comp(i, j);
        const double t = acc(i, j) + y;
        comp(i, j) = (t - acc(i, j)) - y;
        acc(i, j) = t;
      }
    }
  }
}

// Map a quantized/binarized value onto its codebook index.
std::uint8_t encode_value(const std::vector<double>& codebook, double v) {
  auto it = std::lower_bound(codebook.begin(), codebook.end(), v - 1e-9);
  if (it == codebook.end() || std::abs(*it - v) > 1e-9 * (1.0 + std::abs(v))) {
    throw NumericsError("kernel: value " + std::to_string(v) + " not in operator codebook");
  }
  return static_cast<std::uint8_t>(it - codebook.begin());
}

std::vector<double> codebook_for(const Nonlinearity& f) {
  switch (f.kind) {
    case NonlinKind::Quantize:
      return quantize_codebook(f.M);
    case NonlinKind::Binarize:
    case NonlinKind::Sign:
      return {-1.0, 1.0};
    default:
      return {};
  }
}

struct RowBuffers {
  std::vector<std::vector<std::int32_t>> cols;
  std::vector<std::vector<double>> vals;
  std::vector<std::vector<std::uint8_t>> codes;
};

SparseSymKernel assemble_csr(Index n, double scale, RowBuffers& rows,
                             std::vector<double> codebook) {
  std::vector<std::int64_t> row_ptr(static_cast<std::size_t>(n) + 1, 0);
  for (Index i = 0; i < n; ++i) {
    row_ptr[static_cast<std::size_t>(i) + 1] =
        row_ptr[static_cast<std::size_t>(i)] +
        static_cast<std::int64_t>(rows.cols[static_cast<std::size_t>(i)].size());
  }
  const std::int64_t nnz = row_ptr[static_cast<std::size_t>(n)];
  std::vector<std::int32_t> col_idx;
  col_idx.reserve(static_cast<std::size_t>(nnz));
  if (!codebook.empty()) {
    std::vector<std::uint8_t> codes;
    codes.reserve(static_cast<std::size_t>(nnz));
    for (Index i = 0; i < n; ++i) {
      auto& c = rows.cols[static_cast<std::size_t>(i)];
      auto& v = rows.codes[static_cast<std::size_t>(i)];
      col_idx.insert(col_idx.end(), c.begin(), c.end());
      codes.insert(codes.end(), v.begin(), v.end());
    }
    return SparseSymKernel(n, scale, std::move(row_ptr), std::move(col_idx), std::move(codes),
                           std::move(codebook));
  }
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(nnz));
  for (Index i = 0; i < n; ++i) {
    auto& c = rows.cols[static_cast<std::size_t>(i)];
    auto& v = rows.vals[static_cast<std::size_t>(i)];
    col_idx.insert(col_idx.end(), c.begin(), c.end());
    values.insert(values.end(), v.begin(), v.end());
  }
  return SparseSymKernel(n, scale, std::move(row_ptr), std::move(col_idx), std::move(values));
}

void write_raw(std::ofstream& out, const void* data, std::size_t bytes, const std::string& path) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(bytes));
  if (!out) throw IoError("kernel: short write to " + path);
}

void read_raw(std::ifstream& in, void* data, std::size_t bytes, const std::string& path) {
  in.read(static_cast<char*>(data), static_cast<std::streamsize>(bytes));
  if (in.gcount() != static_cast<std::streamsize>(bytes)) {
    throw IoError("kernel: truncated read from " + path);
  }
}

}  // namespace

SparseSymKernel::SparseSymKernel(Index n, double scale, std::vector<std::int64_t> row_ptr,
                                 std::vector<std::int32_t> col_idx, std::vector<double> values)
    : n_(n),
      scale_(scale),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (values_.size() != col_idx_.size()) {
    throw DomainError("kernel: values/col_idx size mismatch");
  }
  check();
}

SparseSymKernel::SparseSymKernel(Index n, double scale, std::vector<std::int64_t> row_ptr,
                                 std::vector<std::int32_t> col_idx,
                                 std::vector<std::uint8_t> codes, std::vector<double> codebook)
    : n_(n),
      scale_(scale),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      codes_(std::move(codes)),
      codebook_(std::move(codebook)) {
  if (codes_.size() != col_idx_.size()) {
    throw DomainError("kernel: codes/col_idx size mismatch");
  }
  if (codebook_.empty()) throw DomainError("kernel: empty codebook with coded values");
  check();
}

void SparseSymKernel::check() const {
  if (n_ < 0) throw DomainError("kernel: negative dimension");
  if (row_ptr_.size() != static_cast<std::size_t>(n_) + 1 || row_ptr_.front() != 0 ||
      row_ptr_.back() != static_cast<std::int64_t>(col_idx_.size())) {
    throw DomainError("kernel: malformed row pointer array");
  }
  for (Index i = 0; i < n_; ++i) {
    const std::int64_t b = row_ptr_[static_cast<std::size_t>(i)];
    const std::int64_t e = row_ptr_[static_cast<std::size_t>(i) + 1];
    if (e < b) throw DomainError("kernel: row pointers not monotone");
    std::int32_t prev = static_cast<std::int32_t>(i);
    for (std::int64_t k = b; k < e; ++k) {
      const std::int32_t j = col_idx_[static_cast<std::size_t>(k)];
      if (j <= prev || j >= n_) {
        throw DomainError("kernel: column indices not strictly upper / sorted");
      }
      prev = j;
    }
  }
  for (const std::uint8_t c : codes_) {
    if (c >= codebook_.size()) throw DomainError("kernel: code out of codebook range");
  }
}

double SparseSymKernel::entry(Index i, Index j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) throw DomainError("kernel: entry index out of range");
  if (i == j) return 0.0;
  const Index r = std::min(i, j);
  const Index c = std::max(i, j);
  const auto b = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[static_cast<std::size_t>(r)]);
  const auto e = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[static_cast<std::size_t>(r) + 1]);
  const auto it = std::lower_bound(b, e, static_cast<std::int32_t>(c));
  if (it == e || *it != static_cast<std::int32_t>(c)) return 0.0;
  return stored_value(it - col_idx_.begin()) * scale_;
}

void SparseSymKernel::matvec(const double* x, double* y, int threads) const {
  // Fixed decomposition: at most 64 row blocks of >= 256 rows. Each block
  // gathers its own rows (upper triangle) and scatters the mirrored lower
  // contributions into a private buffer; buffers are merged in block order.
  const RangeBlocks blocks{n_, std::max<std::int64_t>(256, (n_ + 63) / 64)};
  const std::int64_t nb = blocks.count();
  std::vector<std::vector<double>> scatter(static_cast<std::size_t>(nb));
  std::vector<double> gather(static_cast<std::size_t>(n_), 0.0);

  parallel_for_blocks(nb, threads, [&](std::int64_t b) {
    auto& s = scatter[static_cast<std::size_t>(b)];
    s.assign(static_cast<std::size_t>(n_), 0.0);
    for (Index i = blocks.begin(b); i < blocks.end(b); ++i) {
      const std::int64_t kb = row_ptr_[static_cast<std::size_t>(i)];
      const std::int64_t ke = row_ptr_[static_cast<std::size_t>(i) + 1];
      double acc = 0.0;
      const double xi = x[i];
      if (codebook_.empty()) {
        for (std::int64_t k = kb; k < ke; ++k) {
          const std::int32_t j = col_idx_[static_cast<std::size_t>(k)];
          const double a = values_[static_cast<std::size_t>(k)];
          acc += a * x[j];
          s[static_cast<std::size_t>(j)] += a * xi;
        }
      } else {
        for (std::int64_t k = kb; k < ke; ++k) {
          const std::int32_t j = col_idx_[static_cast<std::size_t>(k)];
          const double a = codebook_[codes_[static_cast<std::size_t>(k)]];
          acc += a * x[j];
          s[static_cast<std::size_t>(j)] += a * xi;
        }
      }
      gather[static_cast<std::size_t>(i)] = acc;
    }
  });

  for (Index i = 0; i < n_; ++i) y[i] = gather[static_cast<std::size_t>(i)];
  for (std::int64_t b = 0; b < nb; ++b) {
    const auto& s = scatter[static_cast<std::size_t>(b)];
    for (Index i = 0; i < n_; ++i) y[i] += s[static_cast<std::size_t>(i)];
  }
  for (Index i = 0; i < n_; ++i) y[i] *= scale_;
}

Eigen::VectorXd SparseSymKernel::matvec(const Eigen::VectorXd& x, int threads) const {
  if (x.size() != n_) throw DomainError("kernel: matvec dimension mismatch");
  Eigen::VectorXd y(n_);
  matvec(x.data(), y.data(), threads);
  return y;
}

Eigen::MatrixXd SparseSymKernel::to_dense() const {
  if (n_ > 16384) throw DomainError("kernel: to_dense refused for n > 16384");
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n_, n_);
  for (Index i = 0; i < n_; ++i) {
    for (std::int64_t k = row_ptr_[static_cast<std::size_t>(i)];
         k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k) {
      const Index j = col_idx_[static_cast<std::size_t>(k)];
      const double v = stored_value(k) * scale_;
      K(i, j) = v;
      K(j, i) = v;
    }
  }
  return K;
}

void SparseSymKernel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("kernel: cannot open " + path + " for writing");
  const char magic[4] = {'S', 'Q', 'S', 'K'};
  const std::uint32_t version = 1;
  const std::uint64_t n = static_cast<std::uint64_t>(n_);
  const std::uint64_t nnz = static_cast<std::uint64_t>(col_idx_.size());
  const std::uint32_t cb_len = static_cast<std::uint32_t>(codebook_.size());
  const std::uint32_t reserved = 0;
  write_raw(out, magic, 4, path);
  write_raw(out, &version, 4, path);
  write_raw(out, &n, 8, path);
  write_raw(out, &nnz, 8, path);
  write_raw(out, &scale_, 8, path);
  write_raw(out, &cb_len, 4, path);
  write_raw(out, &reserved, 4, path);
  write_raw(out, row_ptr_.data(), row_ptr_.size() * 8, path);
  write_raw(out, col_idx_.data(), col_idx_.size() * 4, path);
  if (cb_len > 0) {
    write_raw(out, codebook_.data(), codebook_.size() * 8, path);
    write_raw(out, codes_.data(), codes_.size(), path);
  } else {
    write_raw(out, values_.data(), values_.size() * 8, path);
  }
}

SparseSymKernel SparseSymKernel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("kernel: cannot open " + path);
  char magic[4];
  std::uint32_t version = 0, cb_len = 0, reserved = 0;
  std::uint64_t n = 0, nnz = 0;
  double scale = 0.0;
  read_raw(in, magic, 4, path);
  if (std::memcmp(magic, "SQSK", 4) != 0) throw IoError("kernel: bad magic in " + path);
  read_raw(in, &version, 4, path);
  if (version != 1) throw IoError("kernel: unsupported container version in " + path);
  read_raw(in, &n, 8, path);
  read_raw(in, &nnz, 8, path);
  read_raw(in, &scale, 8, path);
  read_raw(in, &cb_len, 4, path);
  read_raw(in, &reserved, 4, path);
  if (n > (1ULL << 31) || nnz > (1ULL << 40) || cb_len > 256) {
    throw IoError("kernel: implausible header in " + path);
  }
  std::vector<std::int64_t> row_ptr(static_cast<std::size_t>(n) + 1);
  std::vector<std::int32_t> col_idx(static_cast<std::size_t>(nnz));
  read_raw(in, row_ptr.data(), row_ptr.size() * 8, path);
  if (nnz > 0) read_raw(in, col_idx.data(), col_idx.size() * 4, path);
  if (cb_len > 0) {
    std::vector<double> codebook(cb_len);
    std::vector<std::uint8_t> codes(static_cast<std::size_t>(nnz));
    read_raw(in, codebook.data(), codebook.size() * 8, path);
    if (nnz > 0) read_raw(in, codes.data(), codes.size(), path);
    return SparseSymKernel(static_cast<Index>(n), scale, std::move(row_ptr), std::move(col_idx),
                           std::move(codes), std::move(codebook));
  }
  std::vector<double> values(static_cast<std::size_t>(nnz));
  if (nnz > 0) read_raw(in, values.data(), values.size() * 8, path);
  return SparseSymKernel(static_cast<Index>(n), scale, std::move(row_ptr), std::move(col_idx),
                         std::move(values));
}

void SparseSymKernel::export_mtx(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("kernel: cannot open " + path + " for writing");
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << "% zero-diagonal compressed kernel, scaled entries\n";
  out << n_ << ' ' << n_ << ' ' << col_idx_.size() << '\n';
  char buf[64];
  for (Index i = 0; i < n_; ++i) {
    for (std::int64_t k = row_ptr_[static_cast<std::size_t>(i)];
         k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k) {
      const Index j = col_idx_[static_cast<std::size_t>(k)];
      // Symmetric coordinate format keeps row >= col: emit the mirrored entry.
      std::snprintf(buf, sizeof(buf), "%.17g", stored_value(k) * scale_);
      out << (j + 1) << ' ' << (i + 1) << ' ' << buf << '\n';
    }
  }
  if (!out) throw IoError("kernel: short write to " + path);
}

void Kernel::matvec(const double* x, double* y, int threads) const {
  if (layout == KernelLayout::Sparse) {
    sparse.matvec(x, y, threads);
    return;
  }
  // Dense path: Eigen GEMV (single-threaded, deterministic).
  Eigen::Map<const Eigen::VectorXd> xv(x, dense.rows());
  Eigen::Map<Eigen::VectorXd> yv(y, dense.rows());
  yv.noalias() = dense * xv;
}

namespace {

// Shared tiled driver: calls visit(i, j, t) for every strict-upper pair with
// t = x_i . x_j / sqrt(p). Parallel over row tiles; tile (I, J) is computed
// exactly once, by the row tile that owns I.
template <typename Visit>
void for_upper_gram(const Eigen::MatrixXd& X, int threads, const Visit& visit) {
  const Index n = X.cols();
  const double inv_sqrt_p = 1.0 / std::sqrt(static_cast<double>(X.rows()));
  const RangeBlocks rows{n, kRowTile};
  parallel_for_blocks(rows.count(), threads, [&](std::int64_t b) {
    const Index i0 = rows.begin(b);
    const Index i1 = rows.end(b);
    Eigen::MatrixXd acc, comp;
    for (Index j0 = i0; j0 < n; j0 += kColTile) {
      const Index j1 = std::min(n, j0 + kColTile);
      acc.resize(i1 - i0, j1 - j0);
      accumulate_gram(X, i0, i1 - i0, j0, j1 - j0, acc, comp);
      for (Index i = i0; i < i1; ++i) {
        for (Index j = std::max(j0, i + 1); j < j1; ++j) {
          visit(i, j, acc(i - i0, j - j0) * inv_sqrt_p);
        }
      }
    }
  });
}

}  // namespace

Kernel build_kernel(const DataMatrix& X, const Nonlinearity& f, KernelLayout layout,
                    const KernelBuildOptions& opts) {
  validate(f);
  const Index n = X.values.cols();
  const Index p = X.values.rows();
  if (n < 1 || p < 1) throw DomainError("kernel: empty data matrix");
  if (layout == KernelLayout::Dense && n > opts.dense_n_max) {
    throw DomainError("kernel: dense layout refused for n > " +
                      std::to_string(opts.dense_n_max) + " (use sparse)");
  }
  const double t0 = now_seconds();
  const double scale = 1.0 / std::sqrt(static_cast<double>(p));

  // Custom operators may have a nonzero Gaussian mean; center them so the
  // all-ones direction does not produce a spurious O(sqrt n) eigenvalue.
  Nonlinearity eff = f;
  std::string note;
  if (f.kind == NonlinKind::Custom) {
    const HermiteCoefficients q = coefficients_quadrature(f);
    if (q.a0_nonzero) {
      const double a0 = q.a0;
      auto base = f.custom_fn;
      eff.custom_fn = [base, a0](double t) { return base(t) - a0; };
      char buf[96];
      std::snprintf(buf, sizeof(buf), "custom operator auto-centered: a0 = %.6g subtracted", a0);
      note = buf;
    }
  }

  Kernel out;
  out.layout = layout;
  out.report.bits_estimate = storage_bits(f, n, 64);
  out.report.note = note;

  if (layout == KernelLayout::Dense) {
    out.dense = Eigen::MatrixXd::Zero(n, n);
    // Each row tile owns its tile_nnz slot, so the parallel writes are disjoint.
    std::vector<std::int64_t> tile_nnz(static_cast<std::size_t>((n + kRowTile - 1) / kRowTile), 0);
    auto& D = out.dense;
    for_upper_gram(X.values, opts.threads, [&](Index i, Index j, double t) {
      const double v = apply(eff, t);
      D(i, j) = v * scale;
      if (v != 0.0) ++tile_nnz[static_cast<std::size_t>(i / kRowTile)];
    });
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) D(j, i) = D(i, j);
    }
    out.report.nnz = 2 * std::accumulate(tile_nnz.begin(), tile_nnz.end(), std::int64_t{0});
  } else {
    RowBuffers rows;
    rows.cols.resize(static_cast<std::size_t>(n));
    std::vector<double> codebook = codebook_for(f);
    const bool coded = !codebook.empty();
    if (coded) {
      rows.codes.resize(static_cast<std::size_t>(n));
    } else {
      rows.vals.resize(static_cast<std::size_t>(n));
    }
    for_upper_gram(X.values, opts.threads, [&](Index i, Index j, double t) {
      const double v = apply(eff, t);
      if (v == 0.0) return;
      rows.cols[static_cast<std::size_t>(i)].push_back(static_cast<std::int32_t>(j));
      if (coded) {
        rows.codes[static_cast<std::size_t>(i)].push_back(encode_value(codebook, v));
      } else {
        rows.vals[static_cast<std::size_t>(i)].push_back(v);
      }
    });
    out.sparse = assemble_csr(n, scale, rows, std::move(codebook));
    out.report.nnz = out.sparse.full_nnz();
  }

  out.report.sparsity =
      n > 1 ? static_cast<double>(out.report.nnz) /
                  (static_cast<double>(n) * static_cast<double>(n - 1))
            : 0.0;
  out.report.build_seconds = now_seconds() - t0;
  return out;
}

Kernel uniform_mask_kernel(const DataMatrix& X, double eps, std::uint64_t seed,
                           const KernelBuildOptions& opts) {
  if (!(eps > 0.0 && eps <= 1.0)) {
    throw DomainError("kernel: uniform mask rate must lie in (0, 1]");
  }
  const Index n = X.values.cols();
  const Index p = X.values.rows();
  if (n < 1 || p < 1) throw DomainError("kernel: empty data matrix");
  const double t0 = now_seconds();
  const double scale = 1.0 / std::sqrt(static_cast<double>(p));

  RowBuffers rows;
  rows.cols.resize(static_cast<std::size_t>(n));
  rows.vals.resize(static_cast<std::size_t>(n));
  const std::uint64_t un = static_cast<std::uint64_t>(n);
  for_upper_gram(X.values, opts.threads, [&](Index i, Index j, double t) {
    // One keyed draw per unordered pair: independent of tiling and threads.
    Rng pair_rng(derive_seed(seed, kTagMask,
                             static_cast<std::uint64_t>(i) * un + static_cast<std::uint64_t>(j)));
    if (pair_rng.next_u01() >= eps) return;
    rows.cols[static_cast<std::size_t>(i)].push_back(static_cast<std::int32_t>(j));
    rows.vals[static_cast<std::size_t>(i)].push_back(t);
  });

  Kernel out;
  out.layout = KernelLayout::Sparse;
  out.sparse = assemble_csr(n, scale, rows, {});
  out.report.nnz = out.sparse.full_nnz();
  out.report.sparsity =
      n > 1 ? static_cast<double>(out.report.nnz) /
                  (static_cast<double>(n) * static_cast<double>(n - 1))
            : 0.0;
  out.report.bits_estimate =
      static_cast<std::int64_t>(std::llround(eps * static_cast<double>(n) *
                                             static_cast<double>(n) * 64.0));
  out.report.build_seconds = now_seconds() - t0;
  return out;
}

}  // namespace sqsc
