#pragma once
//
// Two-class mixture data generation (X = Z + mu v^T with controllable noise
// law and SNR), plus IDX image ingestion and standardization that bring real
// datasets into the same matrix form.
//

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sqsc/common.hpp"

namespace sqsc {

enum class NoiseLaw { Gaussian, StudentT, Rademacher };

enum class MuDirection { OnesOverSqrtP, RandomUnit, Supplied };

/// Configuration for the mixture x_i = ±mu + z_i: class 1 (label -1) sits at
/// -mu, class 2 (label +1) at +mu; ||mu||^2 = rho exactly; noise entries have
/// zero mean and unit variance.
struct MixtureConfig {
  Index p = 2;
  Index n = 2;
  double rho = 0.0;
  double balance = 0.5;  // fraction of -1 labels, in (0,1)
  NoiseLaw noise = NoiseLaw::Gaussian;
  int student_dof = 7;  // StudentT only; must exceed 4 for finite kurtosis
  MuDirection mu_direction = MuDirection::OnesOverSqrtP;
  Eigen::VectorXd mu_supplied;  // MuDirection::Supplied only
  std::uint64_t seed = 0;
};

/// p x n data matrix; columns are samples. `labels` is empty when unknown.
struct DataMatrix {
  Eigen::MatrixXd values;
  std::vector<int> labels;  // ±1 per column when present
};

/// Generate the mixture. Reproducible bit-for-bit from cfg.seed; column
/// substreams are keyed by (seed, column index) so block-parallel generation
/// equals serial generation.
DataMatrix generate(const MixtureConfig& cfg, int threads = 0);

/// The mean direction vector mu implied by cfg (exactly ||mu||^2 = rho).
Eigen::VectorXd mixture_mu(const MixtureConfig& cfg);

/// Fourth standardized moment of the noise entries: Gaussian 3,
/// Rademacher 1, StudentT(dof) 3 + 6/(dof-4).
double kurtosis(NoiseLaw law, int student_dof = 7);
double kurtosis(const MixtureConfig& cfg);

/// Class-imbalance limit v^T 1_n / n for cfg's label layout.
double imbalance_eta(const MixtureConfig& cfg);

/// Load a two-class subset from IDX image/label files (big-endian, magics
/// 0x00000803 / 0x00000801). Returns p = rows*cols x n matrix with pixels in
/// [0,1]; the first ceil(n/2) columns are class_a (label -1), the rest
/// class_b (+1); samples drawn without replacement, deterministically from
/// `seed`.
DataMatrix load_idx(const std::string& images_path, const std::string& labels_path,
                    int class_a, int class_b, Index n, std::uint64_t seed = 0);

/// Subtract the global per-coordinate mean (across samples), then apply one
/// scalar so the mean squared entry equals 1. Rejects (near-)constant input.
DataMatrix standardize(const DataMatrix& X);

/// Noise-law spec strings: `gaussian`, `rademacher`, `student:dof=7`.
std::string to_string(NoiseLaw law, int dof);
void parse_noise(const std::string& spec, NoiseLaw& law, int& dof);

}  // namespace sqsc
