#pragma once
//
// Spectral theory engine: limiting density, support edges, spurious and
// informative spikes, phase transition, alignment, misclassification, optimal
// thresholds, and compression-baseline equivalences. Everything is a pure
// function of the model parameters (a1, a2, nu, c, kappa, rho, eta) — no
// simulation anywhere in this module.
//

#include <complex>
#include <vector>

#include "sqsc/common.hpp"
#include "sqsc/nonlin.hpp"

namespace sqsc {

/// Parameters of the limiting spectral problem.
struct SpectrumModel {
  double a1 = 1.0;     // first Hermite coefficient of the entry operator
  double a2 = 0.0;     // second Hermite coefficient
  double nu = 1.0;     // Gaussian second moment of the operator (nu >= a1^2 + a2^2)
  double c = 1.0;      // p/n limit, in (0, inf)
  double kappa = 3.0;  // noise kurtosis (3 for Gaussian)
  double rho = 0.0;    // SNR limit |mu|^2
  double eta = 0.0;    // class-imbalance limit v^T 1 / n, in [-1, 1]
};

void validate(const SpectrumModel& model);

/// Model from an operator's Gaussian moments (closed form for built-ins,
/// quadrature for custom operators).
SpectrumModel model_from_operator(const Nonlinearity& f, double c, double kappa, double rho,
                                  double eta = 0.0);

/// Limiting-support description: 2 or 4 ordered edges (1 or 2 intervals).
struct SupportDescription {
  std::vector<double> edges;
  int components = 0;
  bool contains(double x, double margin = 0.0) const;
};

/// An isolated eigenvalue prediction.
struct SpikePrediction {
  double location = 0.0;  // limiting eigenvalue position z
  double m_value = 0.0;   // Stieltjes transform at the spike
  bool informative = false;
  double alignment = 0.0;           // squared eigenvector overlap, in [0, 1]
  bool alignment_available = true;  // false: imbalanced case not in closed form
};

/// Inadmissible-candidate diagnostics for the spurious-spike test.
struct SpikeCandidate {
  double x = 0.0;
  double z = 0.0;
  bool admissible = false;
};

/// Stieltjes transform m(z): solves the cleared cubic
///   a1 (nu - a1^2) m^3 + c (z a1 + nu) m^2 + c (z c + a1) m + c^2 = 0,
/// degenerating gracefully when a1 = 0 or nu = a1^2, selects the root with
/// Im[m] Im[z] >= 0 (real z: the limit from the upper half-plane), and
/// verifies the fixed-point residual <= 1e-10 (relative to 1 + |z|).
std::complex<double> stieltjes(const SpectrumModel& model, std::complex<double> z);

struct DensityOptions {
  double eps_im = 1e-6;    // imaginary offset of the boundary evaluation
  bool richardson = true;  // extrapolate eps and eps/2 to sharpen edges
  int threads = 0;
};

/// Limiting spectral density on a grid: rho(x) = Im[m(x + i eps)] / pi.
std::vector<double> density(const SpectrumModel& model, const std::vector<double>& x_grid,
                            const DensityOptions& opts = {});

/// Support edges from the extrema of x(m) = -1/m - a1^2 m/(c + a1 m)
/// - (nu - a1^2) m / c: real roots of the cleared quartic of x'(m) = 0,
/// mapped through x(m). Noise-only: rho does not enter.
SupportDescription support_edges(const SpectrumModel& model);

/// x(m) and x'(m) evaluated at real m (exposed for spike-consistency checks).
double x_of_m(const SpectrumModel& model, double m);
double x_prime_of_m(const SpectrumModel& model, double m);

/// Spurious (non-informative) spikes from the kurtosis term. Empty when
/// a2 = 0 or kappa = 1. Inadmissible candidates are filtered; pass
/// `diagnostics` to observe them.
std::vector<SpikePrediction> noninformative_spikes(const SpectrumModel& model,
                                                   std::vector<SpikeCandidate>* diagnostics = nullptr);

/// Largest real root gamma of F(x) = x^4 + 2x^3 + (1 - c nu/a1^2) x^2 - 2cx - c,
/// the SNR phase-transition point. Requires a1 > 0, a2 = 0. Asserts the
/// bracket sqrt(c) <= gamma <= sqrt(c nu)/a1.
double phase_transition(const SpectrumModel& model);

/// Informative spike for a1 > 0, a2 = 0:
///   rho > gamma: location G(rho), alignment F(rho)/(rho (1+rho)^3),
///                m = -c/(a1 (1+rho));
///   rho <= gamma: location G(gamma) (right bulk edge), alignment 0.
/// G(x) = (a1/c)(1+x) + a1/x + ((nu - a1^2)/a1)/(1+x).
SpikePrediction informative_spike(const SpectrumModel& model);

/// All isolated eigenvalues in the general case (a2 and/or imbalance active):
/// real roots m of
///   a1 a2^2 (kappa-1)(eta^2 rho - 1 - rho) m^3 - a2^2 c (kappa-1) m^2
///     + 2 a1 c^2 (rho+1) m + 2 c^3 = 0
/// with x'(m) > 0, mapped through x(m). The root with m = -c/(a1(1+rho))
/// (within 1e-8) is the informative one and carries the alignment
/// (rho/(1+rho)) m^2 x'(m); others have alignment 0. With eta != 0 and
/// a2 != 0 the alignment is not available in closed form.
std::vector<SpikePrediction> general_spikes(const SpectrumModel& model);

/// Limiting misclassification rate 0.5 erfc(sqrt(alpha / (2 - 2 alpha))),
/// for alpha in [0, 1).
double misclassification(double alpha);

/// Error-optimal truncation threshold: Binarize solves
/// s = exp(-s^2)/(2 sqrt(pi) erfc(s)); Quantize(M) solves
/// a1(s) nu'(s) = 2 a1'(s) nu(s). Root-finding to 1e-10.
double optimal_threshold(NonlinKind family, int M = 2);

/// Sparsity comparison of selective truncation vs the uniform mask with
/// identical limiting spectra: eps_selec = erfc(s),
/// eps_unif = erfc(s) + 2 s exp(-s^2)/sqrt(pi), ratio = eps_selec/eps_unif,
/// and the large-s asymptote 1/(2(1+s^2)).
struct UniformEquivalent {
  double eps_unif = 1.0;
  double eps_selec = 1.0;
  double ratio = 1.0;
  double ratio_asymptote = 0.5;
};
UniformEquivalent uniform_equivalent(double s);

/// Subsampling baseline: phase transition / spike / alignment of the model
/// with a1^2 = nu and c -> c / eps_sub.
struct SubsamplingTheory {
  double gamma = 0.0;
  double lambda = 0.0;
  double alpha = 0.0;
};
SubsamplingTheory subsampling_theory(const SpectrumModel& model, double eps_sub);

/// Compression baselines compared throughout.
enum class CompressionMethod { Selective, Uniform, Subsample };

struct EquiPerfPoint {
  double eps = 1.0;
  double rho = 0.0;
  bool attainable = true;
};

/// SNR rho needed to reach `target_error` at each sparsity eps, per method:
/// selective thresholding (s = erfc^{-1}(eps)), the uniform mask
/// (a1 = nu = eps), or subsampling (c -> c/eps). target_error = 0.5 returns
/// the phase-transition curve rho = gamma.
std::vector<EquiPerfPoint> equi_performance_curve(CompressionMethod method, double target_error,
                                                  double c, const std::vector<double>& eps_grid);

/// Inverse complementary error function on (0, 2).
double erfc_inv(double y);

const char* to_string(CompressionMethod m);
CompressionMethod parse_method(const std::string& name);

}  // namespace sqsc
