#include "sqsc/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

#include "sqsc/parallel.hpp"
#include "sqsc/rng.hpp"

namespace sqsc {

namespace {

// Substream tags: keep the column streams, the mu stream, and any future
// consumer of the same seed statistically independent.
constexpr std::uint64_t kTagColumn = 1;
constexpr std::uint64_t kTagMu = 2;

void validate(const MixtureConfig& cfg) {
  if (cfg.p < 2 || cfg.n < 2) throw DomainError("mixture: p and n must be >= 2");
  if (cfg.rho < 0.0) throw DomainError("mixture: rho must be >= 0");
  if (!(cfg.balance > 0.0 && cfg.balance < 1.0))
    throw DomainError("mixture: balance must lie in (0,1)");
  if (cfg.noise == NoiseLaw::StudentT && cfg.student_dof <= 4)
    throw DomainError("mixture: Student-t requires dof > 4 (finite kurtosis)");
}

double draw_noise(Rng& rng, NoiseLaw law, int dof) {
  switch (law) {
    case NoiseLaw::Gaussian:
      return rng.next_normal();
    case NoiseLaw::StudentT:
      return rng.next_student_t_unit(dof);
    case NoiseLaw::Rademacher:
      return rng.next_rademacher();
  }
  return 0.0;  // unreachable
}

Index minus_count(const MixtureConfig& cfg) {
  const Index k = std::llround(cfg.balance * static_cast<double>(cfg.n));
  return std::clamp<Index>(k, 0, cfg.n);
}

}  // namespace

Eigen::VectorXd mixture_mu(const MixtureConfig& cfg) {
  validate(cfg);
  Eigen::VectorXd dir;
  switch (cfg.mu_direction) {
    case MuDirection::OnesOverSqrtP:
      dir = Eigen::VectorXd::Ones(cfg.p) / std::sqrt(static_cast<double>(cfg.p));
      break;
    case MuDirection::RandomUnit: {
      Rng rng(derive_seed(cfg.seed, kTagMu));
      dir.resize(cfg.p);
      for (Index i = 0; i < cfg.p; ++i) dir(i) = rng.next_normal();
      const double norm = dir.norm();
      if (norm == 0.0) throw NumericsError("mixture: degenerate random direction");
      dir /= norm;
      break;
    }
    case MuDirection::Supplied: {
      if (cfg.mu_supplied.size() != cfg.p)
        throw DomainError("mixture: supplied mu direction has wrong dimension");
      const double norm = cfg.mu_supplied.norm();
      if (norm == 0.0) throw DomainError("mixture: supplied mu direction is zero");
      dir = cfg.mu_supplied / norm;
      break;
    }
  }
  return dir * std::sqrt(cfg.rho);
}

double imbalance_eta(const MixtureConfig& cfg) {
  validate(cfg);
  const Index n_minus = minus_count(cfg);
  return static_cast<double>(cfg.n - 2 * n_minus) / static_cast<double>(cfg.n);
}

DataMatrix generate(const MixtureConfig& cfg, int threads) {
  validate(cfg);
  const Eigen::VectorXd mu = mixture_mu(cfg);
  const Index n_minus = minus_count(cfg);

  DataMatrix out;
  out.values.resize(cfg.p, cfg.n);
  out.labels.resize(static_cast<std::size_t>(cfg.n));
  for (Index j = 0; j < cfg.n; ++j)
    out.labels[static_cast<std::size_t>(j)] = j < n_minus ? -1 : 1;

  // One keyed substream per column: parallel layout cannot change the data.
  const RangeBlocks blocks{cfg.n, 64};
  parallel_for_blocks(blocks.count(), threads, [&](std::int64_t b) {
    for (Index j = blocks.begin(b); j < blocks.end(b); ++j) {
      Rng rng(derive_seed(cfg.seed, kTagColumn, static_cast<std::uint64_t>(j)));
      const double vj = j < n_minus ? -1.0 : 1.0;
      double* col = out.values.col(j).data();
      for (Index i = 0; i < cfg.p; ++i)
        col[i] = vj * mu(i) + draw_noise(rng, cfg.noise, cfg.student_dof);
    }
  });
  return out;
}

double kurtosis(NoiseLaw law, int student_dof) {
  switch (law) {
    case NoiseLaw::Gaussian:
      return 3.0;
    case NoiseLaw::Rademacher:
      return 1.0;
    case NoiseLaw::StudentT:
      if (student_dof <= 4) throw DomainError("kurtosis: Student-t requires dof > 4");
      return 3.0 + 6.0 / static_cast<double>(student_dof - 4);
  }
  return 3.0;  // unreachable
}

double kurtosis(const MixtureConfig& cfg) { return kurtosis(cfg.noise, cfg.student_dof); }

namespace {

/// Big-endian reader that reports the byte offset of any truncation.
class IdxReader {
 public:
  IdxReader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw IoError("idx: cannot open '" + path + "'");
  }

  std::uint32_t read_u32() {
    unsigned char buf[4];
    read_raw(buf, 4);
    return (static_cast<std::uint32_t>(buf[0]) << 24) |
           (static_cast<std::uint32_t>(buf[1]) << 16) |
           (static_cast<std::uint32_t>(buf[2]) << 8) | static_cast<std::uint32_t>(buf[3]);
  }

  void read_bytes(unsigned char* dst, std::size_t count) { read_raw(dst, count); }

  std::size_t offset() const { return offset_; }

 private:
  void read_raw(unsigned char* dst, std::size_t count) {
    in_.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in_.gcount()) != count) {
      std::ostringstream msg;
      msg << "idx: '" << path_ << "' truncated at byte offset "
          << offset_ + static_cast<std::size_t>(std::max<std::streamsize>(in_.gcount(), 0))
          << " (wanted " << count << " more bytes)";
      throw IoError(msg.str());
    }
    offset_ += count;
  }

  std::string path_;
  std::ifstream in_;
  std::size_t offset_ = 0;
};

}  // namespace

DataMatrix load_idx(const std::string& images_path, const std::string& labels_path,
                    int class_a, int class_b, Index n, std::uint64_t seed) {
  if (class_a == class_b) throw DomainError("load_idx: class_a and class_b must differ");
  if (n < 2) throw DomainError("load_idx: n must be >= 2");

  IdxReader lab(labels_path);
  const std::uint32_t lab_magic = lab.read_u32();
  if (lab_magic != 0x00000801u) {
    std::ostringstream msg;
    msg << "idx: '" << labels_path << "' has magic 0x" << std::hex << lab_magic
        << ", expected 0x00000801";
    throw IoError(msg.str());
  }
  const std::uint32_t lab_count = lab.read_u32();
  std::vector<unsigned char> labels(lab_count);
  if (lab_count > 0) lab.read_bytes(labels.data(), labels.size());

  IdxReader img(images_path);
  const std::uint32_t img_magic = img.read_u32();
  if (img_magic != 0x00000803u) {
    std::ostringstream msg;
    msg << "idx: '" << images_path << "' has magic 0x" << std::hex << img_magic
        << ", expected 0x00000803";
    throw IoError(msg.str());
  }
  const std::uint32_t img_count = img.read_u32();
  const std::uint32_t rows = img.read_u32();
  const std::uint32_t cols = img.read_u32();
  if (img_count != lab_count)
    throw IoError("idx: image count " + std::to_string(img_count) +
                  " does not match label count " + std::to_string(lab_count));
  const Index p = static_cast<Index>(rows) * static_cast<Index>(cols);
  if (p < 1) throw IoError("idx: '" + images_path + "' has empty image dimensions");

  std::vector<Index> idx_a, idx_b;
  for (std::uint32_t i = 0; i < lab_count; ++i) {
    if (labels[i] == class_a) idx_a.push_back(static_cast<Index>(i));
    if (labels[i] == class_b) idx_b.push_back(static_cast<Index>(i));
  }
  const Index n_a = (n + 1) / 2;
  const Index n_b = n - n_a;
  if (static_cast<Index>(idx_a.size()) < n_a || static_cast<Index>(idx_b.size()) < n_b) {
    std::ostringstream msg;
    msg << "idx: classes " << class_a << "/" << class_b << " have " << idx_a.size() << "/"
        << idx_b.size() << " samples, need " << n_a << "/" << n_b;
    throw DomainError(msg.str());
  }

  // Deterministic sampling without replacement: partial Fisher-Yates keyed by
  // (seed, class), then ascending order for a stable layout.
  auto sample = [&](std::vector<Index>& pool, Index want, std::uint64_t key) {
    Rng rng(derive_seed(seed, key));
    for (Index i = 0; i < want; ++i) {
      const std::size_t span = pool.size() - static_cast<std::size_t>(i);
      const std::size_t j = static_cast<std::size_t>(i) +
                            static_cast<std::size_t>(rng.next_u64() % span);
      std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    }
    pool.resize(static_cast<std::size_t>(want));
    std::sort(pool.begin(), pool.end());
  };
  sample(idx_a, n_a, 101);
  sample(idx_b, n_b, 102);

  // Read the needed images in file order (single forward pass).
  std::vector<std::pair<Index, Index>> wanted;  // (file index, output column)
  wanted.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n_a; ++i) wanted.emplace_back(idx_a[static_cast<std::size_t>(i)], i);
  for (Index i = 0; i < n_b; ++i)
    wanted.emplace_back(idx_b[static_cast<std::size_t>(i)], n_a + i);
  std::sort(wanted.begin(), wanted.end());

  DataMatrix out;
  out.values.resize(p, n);
  out.labels.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i)
    out.labels[static_cast<std::size_t>(i)] = i < n_a ? -1 : 1;

  std::vector<unsigned char> pixel_buf(static_cast<std::size_t>(p));
  Index cursor = 0;
  for (const auto& [file_idx, col] : wanted) {
    // Skip unneeded records.
    while (cursor < file_idx) {
      img.read_bytes(pixel_buf.data(), pixel_buf.size());
      ++cursor;
    }
    img.read_bytes(pixel_buf.data(), pixel_buf.size());
    ++cursor;
    for (Index i = 0; i < p; ++i)
      out.values(i, col) = static_cast<double>(pixel_buf[static_cast<std::size_t>(i)]) / 255.0;
  }
  return out;
}

DataMatrix standardize(const DataMatrix& X) {
  const Index p = X.values.rows();
  const Index n = X.values.cols();
  if (n < 2) throw DomainError("standardize: need at least two samples");
  if (!X.labels.empty() && static_cast<Index>(X.labels.size()) != n)
    throw DomainError("standardize: label count does not match sample count");

  DataMatrix out;
  const Eigen::VectorXd mean = X.values.rowwise().mean();
  out.values = X.values.colwise() - mean;
  const double msq = out.values.squaredNorm() / static_cast<double>(p * n);
  if (!(msq > 1e-24)) throw DomainError("standardize: input has (near-)zero variance");
  out.values /= std::sqrt(msq);
  out.labels = X.labels;
  return out;
}

std::string to_string(NoiseLaw law, int dof) {
  switch (law) {
    case NoiseLaw::Gaussian:
      return "gaussian";
    case NoiseLaw::Rademacher:
      return "rademacher";
    case NoiseLaw::StudentT:
      return "student:dof=" + std::to_string(dof);
  }
  return {};
}

void parse_noise(const std::string& spec, NoiseLaw& law, int& dof) {
  if (spec == "gaussian") {
    law = NoiseLaw::Gaussian;
    return;
  }
  if (spec == "rademacher") {
    law = NoiseLaw::Rademacher;
    return;
  }
  const std::string prefix = "student:dof=";
  if (spec.rfind(prefix, 0) == 0) {
    const std::string v = spec.substr(prefix.size());
    int out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
      throw ParseError("noise spec '" + spec + "': bad dof value");
    if (out <= 4) throw DomainError("noise spec '" + spec + "': dof must exceed 4");
    law = NoiseLaw::StudentT;
    dof = out;
    return;
  }
  throw ParseError("noise spec '" + spec +
                   "': expected gaussian|rademacher|student:dof=<d>");
}

}  // namespace sqsc
