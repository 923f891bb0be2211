#pragma once
//
// Monte Carlo experiment engine: seeded trials, sweeps over model axes,
// spectrum experiments, and CSV/JSON persistence. Joins every empirical
// measurement with its theoretical prediction from the rmt module.
//

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sqsc/eigs.hpp"
#include "sqsc/kernel.hpp"
#include "sqsc/nonlin.hpp"
#include "sqsc/rmt.hpp"
#include "sqsc/synth.hpp"

namespace sqsc {

/// Fixed default seed ("SQSC"); never time-based.
constexpr std::uint64_t kDefaultSeed = 0x53515343ULL;

/// How the kernel is compressed in an experiment. Uniform and Subsample are
/// baselines that force the linear operator.
enum class Method { Selective, Uniform, Subsample, Linear };

struct TrialConfig {
  MixtureConfig mixture;
  Nonlinearity f = Nonlinearity::sign();
  Method method = Method::Selective;
  double eps = 1.0;  // rate for Uniform (mask) / Subsample (sample fraction)
  int k_eigs = 2;
  std::uint64_t seed = kDefaultSeed;
  int threads = 0;
  /// Layout override; by default operators with zero entries use Sparse and
  /// everything else Dense (when n permits).
  std::optional<KernelLayout> layout;
};

struct TrialResult {
  double alignment_emp = 0.0;  // |v_hat . v|^2 / (n |v_hat|^2), sign-aligned
  double error_emp = 0.0;      // misclassified fraction under the sign rule
  std::vector<double> top_values;
  double sparsity_emp = 0.0;
  std::int64_t nnz = 0;
  double time_kernel_s = 0.0;
  double time_eig_s = 0.0;
  std::uint64_t seed = 0;
};

/// One seeded experiment: generate, compress, eigensolve, sign-align, score.
TrialResult run_trial(const TrialConfig& cfg);

/// Limiting model matching a trial configuration (method-adjusted moments).
SpectrumModel model_for(const TrialConfig& cfg);

/// Theory columns joined onto experiment rows. gamma is NaN when the model
/// has a2 != 0 (no scalar transition point); lambda is NaN when no informative
/// spike exists.
struct TheoryJoin {
  double a1 = 0.0, a2 = 0.0, nu = 0.0;
  double gamma = 0.0;
  double alignment = 0.0;
  double error = 0.5;
  double lambda = 0.0;
};
TheoryJoin theory_for(const TrialConfig& cfg);

enum class SweepAxis { Rho, S, C, Eps, M };

struct SweepSpec {
  SweepAxis axis = SweepAxis::Rho;
  std::vector<double> grid;
  int repeats = 1;
  TrialConfig base;
};

/// One row per trial; matches the fixed CSV schema exactly.
struct SweepRow {
  double axis_value = 0.0;
  int repeat = 0;
  Index p = 0, n = 0;
  double c = 0.0, rho = 0.0;
  std::string f_spec, method;
  double eps_nominal = 1.0, sparsity_emp = 0.0;
  std::int64_t nnz = 0;
  double a1 = 0.0, a2 = 0.0, nu = 0.0, gamma = 0.0;
  double alignment_theory = 0.0, alignment_emp = 0.0;
  double error_theory = 0.0, error_emp = 0.0;
  double lambda_theory = 0.0, lambda1_emp = 0.0, lambda2_emp = 0.0;
  double time_kernel_s = 0.0, time_eig_s = 0.0;
  std::uint64_t seed = 0;
};

struct SweepFailure {
  int axis_index = 0;
  int repeat = 0;
  std::string message;
};

struct SweepTable {
  std::vector<SweepRow> rows;  // grid-major, repeat-minor order
  std::vector<SweepFailure> failures;
};

/// repeats x |grid| trials with seeds derived from (base seed, axis index,
/// repeat). Trials run in parallel, each internally sequential; failures are
/// recorded per trial and the sweep continues.
SweepTable run_sweep(const SweepSpec& spec, int threads = 0);

struct SweepAggregate {
  double axis_value = 0.0;
  int count = 0;
  double alignment_mean = 0.0, alignment_se = 0.0;
  double error_mean = 0.0, error_se = 0.0;
  double alignment_theory = 0.0, error_theory = 0.0;
  double gamma = 0.0, lambda_theory = 0.0;
};

/// Per-grid-point mean and standard error (Welford), grid order preserved.
std::vector<SweepAggregate> aggregate(const SweepTable& table);

struct SpectrumConfig {
  TrialConfig trial;
  int bins = 100;
  bool with_vectors = false;  // also score extreme eigenvector alignments
  int extreme_count = 4;
};

struct SpectrumExperiment {
  std::vector<double> eigenvalues;     // ascending
  std::vector<double> bin_edges;       // bins + 1
  std::vector<double> bin_density;     // normalized counts / (n * width)
  std::vector<double> theory_density;  // limiting density at bin centers
  SupportDescription support;
  std::vector<SpikePrediction> spikes;  // predicted isolated eigenvalues
  std::vector<double> isolated;         // empirical eigenvalues off the bulk
  double l1_bulk = 0.0;                 // L1(hist, density) away from spikes
  std::vector<double> top_alignments;     // by descending eigenvalue
  std::vector<double> bottom_alignments;  // by ascending eigenvalue
  SpectrumModel model;
};

/// Dense full-spectrum experiment vs the limiting law (n <= 8192). Bins
/// within 3 bin-widths of a predicted spike are excluded from the L1 metric.
SpectrumExperiment spectrum_experiment(const SpectrumConfig& cfg);

const std::vector<std::string>& sweep_csv_header();
void export_csv(const SweepTable& table, const std::string& path);
void export_json(const SweepTable& table, const std::string& path);
SweepTable import_csv(const std::string& path);

/// Spectrum experiment CSV: rows tagged bin/theory/spike/edge/isolated.
void export_spectrum_csv(const SpectrumExperiment& sx, const std::string& path);

const char* to_string(Method m);
Method parse_harness_method(const std::string& name);
const char* to_string(SweepAxis axis);
SweepAxis parse_axis(const std::string& name);

}  // namespace sqsc
