//
// Monte Carlo experiment engine implementation.
//

#include "sqsc/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>

#include "sqsc/csv.hpp"
#include "sqsc/json_out.hpp"
#include "sqsc/parallel.hpp"
#include "sqsc/rng.hpp"

namespace sqsc {

namespace {

constexpr std::uint64_t kTagMixture = 11;
constexpr std::uint64_t kTagMask = 12;
constexpr std::uint64_t kTagLanczos = 13;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

Nonlinearity effective_operator(const TrialConfig& cfg) {
  switch (cfg.method) {
    case Method::Selective:
      return cfg.f;
    case Method::Linear:
    case Method::Uniform:
    case Method::Subsample:
      return Nonlinearity::linear();
  }
  throw DomainError("trial: unknown method");
}

void check_method(const TrialConfig& cfg) {
  if ((cfg.method == Method::Uniform || cfg.method == Method::Subsample) &&
      cfg.f.kind != NonlinKind::Linear) {
    throw DomainError("trial: uniform/subsample baselines require the linear operator");
  }
  if (cfg.method == Method::Uniform || cfg.method == Method::Subsample) {
    if (!(cfg.eps > 0.0 && cfg.eps <= 1.0)) {
      throw DomainError("trial: eps must lie in (0, 1] for uniform/subsample");
    }
  }
}

MixtureConfig effective_mixture(const TrialConfig& cfg) {
  MixtureConfig mix = cfg.mixture;
  mix.seed = derive_seed(cfg.seed, kTagMixture);
  if (cfg.method == Method::Subsample) {
    mix.n = std::max<Index>(2, static_cast<Index>(std::llround(cfg.eps * static_cast<double>(mix.n))));
  }
  return mix;
}

KernelLayout choose_layout(const TrialConfig& cfg, const Nonlinearity& f, Index n) {
  if (cfg.layout) return *cfg.layout;
  if (cfg.method == Method::Uniform) return KernelLayout::Sparse;
  if (sparsity_level(f) < 0.999) return KernelLayout::Sparse;
  return n <= 8192 ? KernelLayout::Dense : KernelLayout::Sparse;
}

}  // namespace

SpectrumModel model_for(const TrialConfig& cfg) {
  check_method(cfg);
  const MixtureConfig mix = effective_mixture(cfg);
  const double c = static_cast<double>(mix.p) / static_cast<double>(mix.n);
  const double kap = kurtosis(mix);
  const double eta = imbalance_eta(mix);
  switch (cfg.method) {
    case Method::Selective:
      return model_from_operator(cfg.f, c, kap, mix.rho, eta);
    case Method::Linear:
      return model_from_operator(Nonlinearity::linear(), c, kap, mix.rho, eta);
    case Method::Uniform: {
      // Bernoulli(eps) masking of the linear kernel: a1 = nu = eps, a2 = 0.
      SpectrumModel md;
      md.a1 = cfg.eps;
      md.a2 = 0.0;
      md.nu = cfg.eps;
      md.c = c;
      md.kappa = kap;
      md.rho = mix.rho;
      md.eta = eta;
      validate(md);
      return md;
    }
    case Method::Subsample:
      // mix.n is already the subsampled count, so c = p / (eps n) here.
      return model_from_operator(Nonlinearity::linear(), c, kap, mix.rho, eta);
  }
  throw DomainError("trial: unknown method");
}

TheoryJoin theory_for(const TrialConfig& cfg) {
  const SpectrumModel md = model_for(cfg);
  TheoryJoin out;
  out.a1 = md.a1;
  out.a2 = md.a2;
  out.nu = md.nu;
  if (std::abs(md.a2) <= 1e-12) {
    out.gamma = phase_transition(md);
    const SpikePrediction sp = informative_spike(md);
    out.alignment = sp.alignment;
    out.lambda = sp.location;
  } else {
    out.gamma = kNaN;
    out.alignment = 0.0;
    out.lambda = kNaN;
    for (const SpikePrediction& sp : general_spikes(md)) {
      if (sp.informative) {
        out.alignment = sp.alignment_available ? sp.alignment : kNaN;
        out.lambda = sp.location;
      }
    }
  }
  out.error = std::isfinite(out.alignment) ? misclassification(out.alignment) : kNaN;
  return out;
}

TrialResult run_trial(const TrialConfig& cfg) {
  check_method(cfg);
  const MixtureConfig mix = effective_mixture(cfg);
  const DataMatrix X = generate(mix, cfg.threads);
  const Index n = X.values.cols();

  const Nonlinearity f = effective_operator(cfg);
  KernelBuildOptions kopts;
  kopts.threads = cfg.threads;

  Kernel K;
  if (cfg.method == Method::Uniform) {
    K = uniform_mask_kernel(X, cfg.eps, derive_seed(cfg.seed, kTagMask), kopts);
  } else {
    K = build_kernel(X, f, choose_layout(cfg, f, n), kopts);
  }

  const int k = std::clamp<int>(cfg.k_eigs, 1, static_cast<int>(std::min<Index>(8, n)));
  LanczosOptions lopts;
  lopts.seed = derive_seed(cfg.seed, kTagLanczos);
  const LinOp op = [&K, &cfg](const double* x, double* y) { K.matvec(x, y, cfg.threads); };

  const double t0 = now_seconds();
  const EigenPairs pairs = top_eigenpairs(op, n, k, lopts);
  const double t1 = now_seconds();

  TrialResult res;
  res.seed = cfg.seed;
  res.top_values.assign(pairs.values.data(), pairs.values.data() + pairs.values.size());
  res.sparsity_emp = K.report.sparsity;
  res.nnz = K.report.nnz;
  res.time_kernel_s = K.report.build_seconds;
  res.time_eig_s = t1 - t0;

  if (X.labels.empty()) {
    res.alignment_emp = kNaN;
    res.error_emp = kNaN;
    return res;
  }
  Eigen::VectorXd u = pairs.vectors.col(0);
  res.alignment_emp = sign_align(u, X.labels);
  Index wrong = 0;
  for (Index i = 0; i < n; ++i) {
    const int pred = u[i] > 0.0 ? 1 : (u[i] < 0.0 ? -1 : 0);
    if (pred != X.labels[static_cast<std::size_t>(i)]) ++wrong;
  }
  res.error_emp = static_cast<double>(wrong) / static_cast<double>(n);
  return res;
}

namespace {

TrialConfig apply_axis(const TrialConfig& base, SweepAxis axis, double v) {
  TrialConfig cfg = base;
  switch (axis) {
    case SweepAxis::Rho:
      if (v < 0.0) throw DomainError("sweep: rho must be nonnegative");
      cfg.mixture.rho = v;
      break;
    case SweepAxis::S:
      if (cfg.f.kind == NonlinKind::Sign) {
        cfg.f = Nonlinearity::binarize(v);
      } else if (cfg.f.kind == NonlinKind::Sparse || cfg.f.kind == NonlinKind::Binarize ||
                 cfg.f.kind == NonlinKind::Quantize) {
        cfg.f.s = v;
      } else {
        throw DomainError("sweep: s axis needs a thresholded operator");
      }
      break;
    case SweepAxis::C:
      if (!(v > 0.0)) throw DomainError("sweep: c must be positive");
      cfg.mixture.p = std::max<Index>(
          1, static_cast<Index>(std::llround(v * static_cast<double>(cfg.mixture.n))));
      break;
    case SweepAxis::Eps:
      if (!(v > 0.0 && v <= 1.0)) throw DomainError("sweep: eps must lie in (0, 1]");
      if (cfg.method == Method::Uniform || cfg.method == Method::Subsample) {
        cfg.eps = v;
      } else if (cfg.method == Method::Selective &&
                 (cfg.f.kind == NonlinKind::Sparse || cfg.f.kind == NonlinKind::Binarize ||
                  cfg.f.kind == NonlinKind::Sign)) {
        // eps is the kept fraction erfc(s): invert for the threshold.
        if (cfg.f.kind == NonlinKind::Sign) cfg.f = Nonlinearity::binarize(0.0);
        cfg.f.s = erfc_inv(v);
      } else {
        throw DomainError("sweep: eps axis needs uniform/subsample or a truncating operator");
      }
      break;
    case SweepAxis::M:
      if (cfg.f.kind != NonlinKind::Quantize) {
        throw DomainError("sweep: M axis requires the quantize operator");
      }
      cfg.f.M = static_cast<int>(std::llround(v));
      break;
  }
  return cfg;
}

SweepRow make_row(const TrialConfig& cfg, const TrialResult& res, const TheoryJoin& th,
                  double axis_value, int repeat) {
  const MixtureConfig mix = effective_mixture(cfg);
  const Nonlinearity f = effective_operator(cfg);
  SweepRow row;
  row.axis_value = axis_value;
  row.repeat = repeat;
  row.p = mix.p;
  row.n = mix.n;
  row.c = static_cast<double>(mix.p) / static_cast<double>(mix.n);
  row.rho = mix.rho;
  row.f_spec = to_string(f);
  row.method = to_string(cfg.method);
  row.eps_nominal = (cfg.method == Method::Uniform || cfg.method == Method::Subsample)
                        ? cfg.eps
                        : sparsity_level(f);
  row.sparsity_emp = res.sparsity_emp;
  row.nnz = res.nnz;
  row.a1 = th.a1;
  row.a2 = th.a2;
  row.nu = th.nu;
  row.gamma = th.gamma;
  row.alignment_theory = th.alignment;
  row.alignment_emp = res.alignment_emp;
  row.error_theory = th.error;
  row.error_emp = res.error_emp;
  row.lambda_theory = th.lambda;
  row.lambda1_emp = res.top_values.size() > 0 ? res.top_values[0] : kNaN;
  row.lambda2_emp = res.top_values.size() > 1 ? res.top_values[1] : kNaN;
  row.time_kernel_s = res.time_kernel_s;
  row.time_eig_s = res.time_eig_s;
  row.seed = res.seed;
  return row;
}

}  // namespace

SweepTable run_sweep(const SweepSpec& spec, int threads) {
  if (spec.grid.empty()) throw DomainError("sweep: empty grid");
  if (spec.repeats < 1) throw DomainError("sweep: repeats must be >= 1");

  const std::int64_t n_grid = static_cast<std::int64_t>(spec.grid.size());
  const std::int64_t n_trials = n_grid * spec.repeats;

  // Theory join once per grid point. A grid value that yields an invalid
  // configuration marks all of its trials failed; other grid points proceed.
  std::vector<TheoryJoin> theory(static_cast<std::size_t>(n_grid));
  std::vector<TrialConfig> grid_cfg(static_cast<std::size_t>(n_grid));
  std::vector<std::string> grid_error(static_cast<std::size_t>(n_grid));
  std::vector<char> grid_ok(static_cast<std::size_t>(n_grid), 0);
  for (std::int64_t g = 0; g < n_grid; ++g) {
    try {
      grid_cfg[static_cast<std::size_t>(g)] =
          apply_axis(spec.base, spec.axis, spec.grid[static_cast<std::size_t>(g)]);
      theory[static_cast<std::size_t>(g)] = theory_for(grid_cfg[static_cast<std::size_t>(g)]);
      grid_ok[static_cast<std::size_t>(g)] = 1;
    } catch (const std::exception& e) {
      grid_error[static_cast<std::size_t>(g)] = e.what();
    }
  }

  std::vector<SweepRow> rows(static_cast<std::size_t>(n_trials));
  std::vector<char> ok(static_cast<std::size_t>(n_trials), 0);
  std::vector<std::string> errors(static_cast<std::size_t>(n_trials));

  parallel_for_blocks(n_trials, threads, [&](std::int64_t t) {
    const std::int64_t g = t / spec.repeats;
    const int r = static_cast<int>(t % spec.repeats);
    if (!grid_ok[static_cast<std::size_t>(g)]) {
      errors[static_cast<std::size_t>(t)] = grid_error[static_cast<std::size_t>(g)];
      return;
    }
    TrialConfig cfg = grid_cfg[static_cast<std::size_t>(g)];
    cfg.seed = derive_seed(spec.base.seed, static_cast<std::uint64_t>(g),
                           static_cast<std::uint64_t>(r));
    cfg.threads = 1;  // trials are the unit of parallelism
    try {
      const TrialResult res = run_trial(cfg);
      rows[static_cast<std::size_t>(t)] =
          make_row(cfg, res, theory[static_cast<std::size_t>(g)],
                   spec.grid[static_cast<std::size_t>(g)], r);
      ok[static_cast<std::size_t>(t)] = 1;
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(t)] = e.what();
    }
  });

  SweepTable table;
  table.rows.reserve(static_cast<std::size_t>(n_trials));
  for (std::int64_t t = 0; t < n_trials; ++t) {
    if (ok[static_cast<std::size_t>(t)]) {
      table.rows.push_back(std::move(rows[static_cast<std::size_t>(t)]));
    } else {
      table.failures.push_back({static_cast<int>(t / spec.repeats),
                                static_cast<int>(t % spec.repeats),
                                errors[static_cast<std::size_t>(t)]});
    }
  }
  return table;
}

std::vector<SweepAggregate> aggregate(const SweepTable& table) {
  std::vector<SweepAggregate> out;
  std::size_t i = 0;
  while (i < table.rows.size()) {
    std::size_t j = i;
    while (j < table.rows.size() && table.rows[j].axis_value == table.rows[i].axis_value) ++j;

    SweepAggregate agg;
    agg.axis_value = table.rows[i].axis_value;
    agg.alignment_theory = table.rows[i].alignment_theory;
    agg.error_theory = table.rows[i].error_theory;
    agg.gamma = table.rows[i].gamma;
    agg.lambda_theory = table.rows[i].lambda_theory;

    // Welford over the repeat group.
    double mean_a = 0.0, m2_a = 0.0, mean_e = 0.0, m2_e = 0.0;
    int k = 0;
    for (std::size_t r = i; r < j; ++r) {
      const double a = table.rows[r].alignment_emp;
      const double e = table.rows[r].error_emp;
      if (!std::isfinite(a) || !std::isfinite(e)) continue;
      ++k;
      const double da = a - mean_a;
      mean_a += da / k;
      m2_a += da * (a - mean_a);
      const double de = e - mean_e;
      mean_e += de / k;
      m2_e += de * (e - mean_e);
    }
    agg.count = k;
    agg.alignment_mean = k > 0 ? mean_a : kNaN;
    agg.error_mean = k > 0 ? mean_e : kNaN;
    agg.alignment_se = k > 1 ? std::sqrt(m2_a / (k - 1) / k) : kNaN;
    agg.error_se = k > 1 ? std::sqrt(m2_e / (k - 1) / k) : kNaN;
    out.push_back(agg);
    i = j;
  }
  return out;
}

SpectrumExperiment spectrum_experiment(const SpectrumConfig& cfg) {
  if (cfg.bins < 4) throw DomainError("spectrum: need at least 4 bins");
  check_method(cfg.trial);
  const MixtureConfig mix = effective_mixture(cfg.trial);
  if (mix.n > 8192) throw DomainError("spectrum: n exceeds the dense cap 8192");

  const DataMatrix X = generate(mix, cfg.trial.threads);
  const Index n = X.values.cols();
  const Nonlinearity f = effective_operator(cfg.trial);

  KernelBuildOptions kopts;
  kopts.threads = cfg.trial.threads;
  Eigen::MatrixXd Kd;
  if (cfg.trial.method == Method::Uniform) {
    Kd = uniform_mask_kernel(X, cfg.trial.eps, derive_seed(cfg.trial.seed, kTagMask), kopts)
             .sparse.to_dense();
  } else {
    Kernel K = build_kernel(X, f, KernelLayout::Dense, kopts);
    Kd = std::move(K.dense);
  }

  const DenseSpectrum spec = full_spectrum(Kd, cfg.with_vectors);

  SpectrumExperiment out;
  out.model = model_for(cfg.trial);
  out.support = support_edges(out.model);
  out.spikes = general_spikes(out.model);
  out.eigenvalues.assign(spec.values.data(), spec.values.data() + spec.values.size());

  // Histogram over the full empirical range (slightly padded).
  const double lo_raw = std::min(out.eigenvalues.front(), out.support.edges.front());
  const double hi_raw = std::max(out.eigenvalues.back(), out.support.edges.back());
  const double span = std::max(hi_raw - lo_raw, 1e-12);
  const double lo = lo_raw - 0.005 * span;
  const double hi = hi_raw + 0.005 * span;
  const double width = (hi - lo) / cfg.bins;

  out.bin_edges.resize(static_cast<std::size_t>(cfg.bins) + 1);
  for (int b = 0; b <= cfg.bins; ++b) {
    out.bin_edges[static_cast<std::size_t>(b)] = lo + width * b;
  }
  std::vector<std::int64_t> counts(static_cast<std::size_t>(cfg.bins), 0);
  for (const double ev : out.eigenvalues) {
    int b = static_cast<int>((ev - lo) / width);
    b = std::clamp(b, 0, cfg.bins - 1);
    ++counts[static_cast<std::size_t>(b)];
  }
  out.bin_density.resize(static_cast<std::size_t>(cfg.bins));
  std::vector<double> centers(static_cast<std::size_t>(cfg.bins));
  for (int b = 0; b < cfg.bins; ++b) {
    out.bin_density[static_cast<std::size_t>(b)] =
        static_cast<double>(counts[static_cast<std::size_t>(b)]) /
        (static_cast<double>(n) * width);
    centers[static_cast<std::size_t>(b)] = lo + width * (b + 0.5);
  }

  DensityOptions dopts;
  dopts.threads = cfg.trial.threads;
  out.theory_density = density(out.model, centers, dopts);

  // Bulk L1: bins near a predicted spike (3 widths) or outside the support
  // (one width of slack) do not participate.
  double l1 = 0.0;
  for (int b = 0; b < cfg.bins; ++b) {
    const double x = centers[static_cast<std::size_t>(b)];
    if (!out.support.contains(x, width)) continue;
    bool near_spike = false;
    for (const SpikePrediction& sp : out.spikes) {
      if (std::abs(x - sp.location) <= 3.0 * width) near_spike = true;
    }
    if (near_spike) continue;
    l1 += std::abs(out.bin_density[static_cast<std::size_t>(b)] -
                   out.theory_density[static_cast<std::size_t>(b)]) *
          width;
  }
  out.l1_bulk = l1;

  for (const double ev : out.eigenvalues) {
    if (!out.support.contains(ev, 3.0 * width)) out.isolated.push_back(ev);
  }

  if (cfg.with_vectors && !X.labels.empty()) {
    const int m = std::min<int>(cfg.extreme_count, static_cast<int>(n));
    for (int j = 0; j < m; ++j) {
      Eigen::VectorXd u_top = spec.vectors.col(n - 1 - j);
      out.top_alignments.push_back(sign_align(u_top, X.labels));
      Eigen::VectorXd u_bot = spec.vectors.col(j);
      out.bottom_alignments.push_back(sign_align(u_bot, X.labels));
    }
  }
  return out;
}

const std::vector<std::string>& sweep_csv_header() {
  static const std::vector<std::string> header = {
      "axis_value",     "repeat",        "p",
      "n",              "c",             "rho",
      "f_spec",         "method",        "eps_nominal",
      "sparsity_emp",   "nnz",           "a1",
      "a2",             "nu",            "gamma",
      "alignment_theory", "alignment_emp", "error_theory",
      "error_emp",      "lambda_theory", "lambda1_emp",
      "lambda2_emp",    "time_kernel_s", "time_eig_s",
      "seed"};
  return header;
}

void export_csv(const SweepTable& table, const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(table.rows.size());
  for (const SweepRow& r : table.rows) {
    rows.push_back({format_g17(r.axis_value), std::to_string(r.repeat), std::to_string(r.p),
                    std::to_string(r.n), format_g17(r.c), format_g17(r.rho), r.f_spec, r.method,
                    format_g17(r.eps_nominal), format_g17(r.sparsity_emp), std::to_string(r.nnz),
                    format_g17(r.a1), format_g17(r.a2), format_g17(r.nu), format_g17(r.gamma),
                    format_g17(r.alignment_theory), format_g17(r.alignment_emp),
                    format_g17(r.error_theory), format_g17(r.error_emp),
                    format_g17(r.lambda_theory), format_g17(r.lambda1_emp),
                    format_g17(r.lambda2_emp), format_g17(r.time_kernel_s),
                    format_g17(r.time_eig_s), std::to_string(r.seed)});
  }
  write_csv(path, sweep_csv_header(), rows);
}

void export_json(const SweepTable& table, const std::string& path) {
  JsonWriter w;
  w.begin_array();
  for (const SweepRow& r : table.rows) {
    w.begin_object();
    w.kv("axis_value", r.axis_value);
    w.kv("repeat", static_cast<long long>(r.repeat));
    w.kv("p", static_cast<long long>(r.p));
    w.kv("n", static_cast<long long>(r.n));
    w.kv("c", r.c);
    w.kv("rho", r.rho);
    w.kv("f_spec", r.f_spec);
    w.kv("method", r.method);
    w.kv("eps_nominal", r.eps_nominal);
    w.kv("sparsity_emp", r.sparsity_emp);
    w.kv("nnz", static_cast<long long>(r.nnz));
    w.kv("a1", r.a1);
    w.kv("a2", r.a2);
    w.kv("nu", r.nu);
    w.kv("gamma", r.gamma);
    w.kv("alignment_theory", r.alignment_theory);
    w.kv("alignment_emp", r.alignment_emp);
    w.kv("error_theory", r.error_theory);
    w.kv("error_emp", r.error_emp);
    w.kv("lambda_theory", r.lambda_theory);
    w.kv("lambda1_emp", r.lambda1_emp);
    w.kv("lambda2_emp", r.lambda2_emp);
    w.kv("time_kernel_s", r.time_kernel_s);
    w.kv("time_eig_s", r.time_eig_s);
    // 64-bit seeds exceed JSON's exact-integer range; emit as string.
    w.kv("seed", std::to_string(r.seed));
    w.end_object();
  }
  w.end_array();
  std::ofstream out(path);
  if (!out) throw IoError("export_json: cannot open " + path + " for writing");
  out << w.str() << '\n';
  if (!out) throw IoError("export_json: short write to " + path);
}

SweepTable import_csv(const std::string& path) {
  const CsvTable csv = read_csv(path);
  if (csv.header != sweep_csv_header()) {
    throw ParseError("import_csv: header does not match the sweep schema in " + path);
  }
  SweepTable table;
  table.rows.reserve(csv.rows.size());
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    const auto& cells = csv.rows[i];
    SweepRow r;
    std::size_t k = 0;
    r.axis_value = csv.num(i, k++);
    r.repeat = static_cast<int>(csv.num(i, k++));
    r.p = static_cast<Index>(csv.num(i, k++));
    r.n = static_cast<Index>(csv.num(i, k++));
    r.c = csv.num(i, k++);
    r.rho = csv.num(i, k++);
    r.f_spec = cells[k++];
    r.method = cells[k++];
    r.eps_nominal = csv.num(i, k++);
    r.sparsity_emp = csv.num(i, k++);
    r.nnz = static_cast<std::int64_t>(csv.num(i, k++));
    r.a1 = csv.num(i, k++);
    r.a2 = csv.num(i, k++);
    r.nu = csv.num(i, k++);
    r.gamma = csv.num(i, k++);
    r.alignment_theory = csv.num(i, k++);
    r.alignment_emp = csv.num(i, k++);
    r.error_theory = csv.num(i, k++);
    r.error_emp = csv.num(i, k++);
    r.lambda_theory = csv.num(i, k++);
    r.lambda1_emp = csv.num(i, k++);
    r.lambda2_emp = csv.num(i, k++);
    r.time_kernel_s = csv.num(i, k++);
    r.time_eig_s = csv.num(i, k++);
    r.seed = std::strtoull(cells[k].c_str(), nullptr, 10);
    table.rows.push_back(std::move(r));
  }
  return table;
}

void export_spectrum_csv(const SpectrumExperiment& sx, const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  const std::size_t bins = sx.bin_density.size();
  for (std::size_t b = 0; b < bins; ++b) {
    rows.push_back({"bin", format_g17(sx.bin_edges[b]), format_g17(sx.bin_edges[b + 1]),
                    format_g17(sx.bin_density[b]), ""});
    const double center = 0.5 * (sx.bin_edges[b] + sx.bin_edges[b + 1]);
    rows.push_back({"theory", format_g17(center), "", format_g17(sx.theory_density[b]), ""});
  }
  for (const SpikePrediction& sp : sx.spikes) {
    rows.push_back({"spike", format_g17(sp.location), "", format_g17(sp.alignment),
                    sp.informative ? "1" : "0"});
  }
  for (const double e : sx.support.edges) {
    rows.push_back({"edge", format_g17(e), "", "", ""});
  }
  for (const double ev : sx.isolated) {
    rows.push_back({"isolated", format_g17(ev), "", "", ""});
  }
  rows.push_back({"l1_bulk", format_g17(sx.l1_bulk), "", "", ""});
  write_csv(path, {"record", "x_lo", "x_hi", "value", "flag"}, rows);
}

const char* to_string(Method m) {
  switch (m) {
    case Method::Selective: return "selective";
    case Method::Uniform: return "uniform";
    case Method::Subsample: return "subsample";
    case Method::Linear: return "linear";
  }
  return "?";
}

Method parse_harness_method(const std::string& name) {
  if (name == "selective") return Method::Selective;
  if (name == "uniform") return Method::Uniform;
  if (name == "subsample" || name == "subsampling") return Method::Subsample;
  if (name == "linear") return Method::Linear;
  throw ParseError("unknown method: " + name + " (expected selective|uniform|subsample|linear)");
}

const char* to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Rho: return "rho";
    case SweepAxis::S: return "s";
    case SweepAxis::C: return "c";
    case SweepAxis::Eps: return "eps";
    case SweepAxis::M: return "M";
  }
  return "?";
}

SweepAxis parse_axis(const std::string& name) {
  if (name == "rho") return SweepAxis::Rho;
  if (name == "s") return SweepAxis::S;
  if (name == "c") return SweepAxis::C;
  if (name == "eps") return SweepAxis::Eps;
  if (name == "M" || name == "m") return SweepAxis::M;
  throw ParseError("unknown sweep axis: " + name + " (expected rho|s|c|eps|M)");
}

}  // namespace sqsc
