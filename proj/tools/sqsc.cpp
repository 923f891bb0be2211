//
// sqsc — compressed-kernel spectral clustering: theory queries, seeded
// experiments, sweeps, and deterministic SVG plots.
//
// Exit codes: 0 success, 2 flag/parse errors, 3 domain errors, 1 runtime
// failures. Results go to stdout (or --out); stderr carries diagnostics only.
//

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sqsc/csv.hpp"
#include "sqsc/eigs.hpp"
#include "sqsc/harness.hpp"
#include "sqsc/json_out.hpp"
#include "sqsc/kernel.hpp"
#include "sqsc/nonlin.hpp"
#include "sqsc/rmt.hpp"
#include "sqsc/svg.hpp"
#include "sqsc/synth.hpp"

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------------------
// Config files: a flat JSON object {"flag": value, ...}. Applied after
// command-line parsing, so options already given on the command line keep
// their values (explicit flags win); unknown keys are rejected.

std::string config_scalar(const nlohmann::json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_float()) return sqsc::format_g17(v.get<double>());
  throw sqsc::ParseError("config key \"" + key + "\": values must be scalars or arrays of scalars");
}

void apply_json_config(CLI::App* sub, const std::string& path) {
  if (path.empty()) return;
  std::ifstream is(path);
  if (!is) throw sqsc::ParseError("config: cannot open " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(is);
  } catch (const std::exception& e) {
    throw sqsc::ParseError(std::string("config: not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw sqsc::ParseError("config: root must be a JSON object of flag/value pairs");
  }
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& key = it.key();
    std::string dashed = "--" + key;
    CLI::Option* op = sub->get_option_no_throw(dashed);
    if (op == nullptr && key.size() == 1) {
      dashed = "-" + key;
      op = sub->get_option_no_throw(dashed);
    }
    if (op == nullptr) {
      dashed = key;
      op = sub->get_option_no_throw(dashed);
    }
    if (op == nullptr) throw sqsc::ParseError("config: unknown key \"" + key + "\"");
    if (op->count() > 0) continue;  // set on the command line: explicit flag wins
    const nlohmann::json& v = it.value();
    if (op->get_expected_min() == 0) {
      if (v.is_array()) {
        throw sqsc::ParseError("config key \"" + key + "\": flags take one value");
      }
      // Route through the flag-name mapping so negated aliases work.
      op->add_result(op->get_flag_value(dashed, config_scalar(v, key)));
    } else if (v.is_array()) {
      for (const nlohmann::json& el : v) op->add_result(config_scalar(el, key));
    } else {
      op->add_result(config_scalar(v, key));
    }
    op->run_callback();
  }
}

// ---------------------------------------------------------------------------
// Small helpers.

void write_text(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
    std::cout.flush();
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw sqsc::IoError("cannot open output file: " + path);
  os << content;
  os.flush();
  if (!os) throw sqsc::IoError("write failed: " + path);
}

// Harness exporters take a path; map "stdout" onto the process stream.
std::string file_or_stdout(const std::string& path) {
  return (path.empty() || path == "-") ? "/dev/stdout" : path;
}

double parse_double(const std::string& token, const std::string& what) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw sqsc::ParseError(what + ": not a number: \"" + token + "\"");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

/// Grid spec: "lo:hi:count" (inclusive, evenly spaced) or "v1,v2,..." or a
/// single number.
std::vector<double> parse_grid(const std::string& spec) {
  if (spec.find(':') != std::string::npos) {
    const std::vector<std::string> parts = split(spec, ':');
    if (parts.size() != 3) {
      throw sqsc::ParseError("grid: expected lo:hi:count, got \"" + spec + "\"");
    }
    const double lo = parse_double(parts[0], "grid lo");
    const double hi = parse_double(parts[1], "grid hi");
    const double cnt_d = parse_double(parts[2], "grid count");
    const long long cnt = static_cast<long long>(cnt_d);
    if (cnt_d != static_cast<double>(cnt) || cnt < 1 || cnt > 1000000) {
      throw sqsc::ParseError("grid: count must be an integer in [1, 1e6]");
    }
    std::vector<double> g;
    if (cnt == 1) {
      g.push_back(lo);
    } else {
      const double step = (hi - lo) / static_cast<double>(cnt - 1);
      for (long long i = 0; i < cnt; ++i) g.push_back(lo + step * static_cast<double>(i));
      g.back() = hi;
    }
    return g;
  }
  std::vector<double> g;
  for (const std::string& tok : split(spec, ',')) {
    g.push_back(parse_double(tok, "grid value"));
  }
  if (g.empty()) throw sqsc::ParseError("grid: empty specification");
  return g;
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> g;
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (int i = 0; i < count; ++i) g.push_back(lo + step * static_cast<double>(i));
  g.back() = hi;
  return g;
}

// ---------------------------------------------------------------------------
// Shared option blocks.

struct CommonOpts {
  bool json = false;
  std::string out;
  std::string config;
  CLI::App* sub = nullptr;
};

void add_common_options(CLI::App* sub, CommonOpts& c) {
  c.sub = sub;
  sub->add_flag("--json", c.json, "emit JSON instead of the default format");
  sub->add_option("--out", c.out, "write the result to this file (default: stdout)");
  sub->add_option("--config", c.config, "JSON config file; explicit flags override file values");
}

/// Every command runs this first: merge config-file values into unset options.
void merge_config(const CommonOpts& c) { apply_json_config(c.sub, c.config); }

/// Limiting-model inputs: either an operator spec (--f) with mixture
/// parameters, or raw moments --a1/--a2/--nu.
struct ModelOpts {
  std::string f_spec;
  double c = 1.0;
  double rho = 0.0;
  double kappa = 3.0;
  double eta = 0.0;
  double a1 = 0.0, a2 = 0.0, nu = 0.0;
  CLI::Option* f_opt = nullptr;
  CLI::Option* a1_opt = nullptr;
  CLI::Option* a2_opt = nullptr;
  CLI::Option* nu_opt = nullptr;
};

void add_model_options(CLI::App* sub, ModelOpts& m) {
  m.f_opt = sub->add_option("--f", m.f_spec,
                            "operator spec: linear | sparse:s=S | quantize:M=M,s=S | "
                            "binarize:s=S | sign");
  sub->add_option("--c", m.c, "dimension ratio p/n")->capture_default_str();
  sub->add_option("--rho", m.rho, "signal-to-noise ratio |mu|^2")->capture_default_str();
  sub->add_option("--kappa", m.kappa, "noise kurtosis (Gaussian: 3)")->capture_default_str();
  sub->add_option("--eta", m.eta, "class-imbalance limit in [-1, 1]")->capture_default_str();
  m.a1_opt = sub->add_option("--a1", m.a1, "raw first Hermite moment (alternative to --f)");
  m.a2_opt = sub->add_option("--a2", m.a2, "raw second Hermite moment (with --a1/--nu)");
  m.nu_opt = sub->add_option("--nu", m.nu, "raw Gaussian second moment (alternative to --f)");
  m.f_opt->excludes(m.a1_opt)->excludes(m.a2_opt)->excludes(m.nu_opt);
  m.a1_opt->needs(m.nu_opt);
  m.nu_opt->needs(m.a1_opt);
  m.a2_opt->needs(m.a1_opt);
}

sqsc::SpectrumModel resolve_model(const ModelOpts& m) {
  const bool raw =
      m.a1_opt->count() > 0 || m.nu_opt->count() > 0 || m.a2_opt->count() > 0;
  if (raw && m.f_opt->count() > 0) {
    throw sqsc::ParseError("--f conflicts with raw moments --a1/--a2/--nu");
  }
  if (raw) {
    if (m.a1_opt->count() == 0 || m.nu_opt->count() == 0) {
      throw sqsc::ParseError("raw moments need both --a1 and --nu");
    }
    sqsc::SpectrumModel md;
    md.a1 = m.a1;
    md.a2 = m.a2;
    md.nu = m.nu;
    md.c = m.c;
    md.kappa = m.kappa;
    md.rho = m.rho;
    md.eta = m.eta;
    sqsc::validate(md);
    return md;
  }
  if (m.f_opt->count() > 0) {
    const sqsc::Nonlinearity f = sqsc::parse_nonlinearity(m.f_spec);
    return sqsc::model_from_operator(f, m.c, m.kappa, m.rho, m.eta);
  }
  throw sqsc::ParseError("a model is required: pass --f (with --c/--rho/...) or raw --a1/--nu");
}

/// Monte Carlo trial inputs shared by simulate / sweep / spectrum.
struct TrialOpts {
  std::string f_spec = "sign";
  std::string method = "selective";
  double eps = 1.0;
  std::int64_t p = 512;
  std::int64_t n = 256;
  double rho = 0.0;
  double balance = 0.5;
  std::string noise = "gaussian";
  std::string mu = "ones";
  int k = 2;
  std::string layout = "auto";
  std::uint64_t seed = sqsc::kDefaultSeed;
  int threads = 0;
};

void add_trial_options(CLI::App* sub, TrialOpts& t) {
  sub->add_option("--f", t.f_spec, "operator spec (see predict --help)")->capture_default_str();
  sub->add_option("--method", t.method, "selective | uniform | subsample | linear")
      ->capture_default_str();
  sub->add_option("--eps", t.eps, "rate for uniform (keep probability) / subsample (fraction)")
      ->capture_default_str();
  sub->add_option("--p", t.p, "data dimension")->capture_default_str();
  sub->add_option("--n", t.n, "sample count")->capture_default_str();
  sub->add_option("--rho", t.rho, "signal-to-noise ratio |mu|^2")->capture_default_str();
  sub->add_option("--balance", t.balance, "fraction of class -1, in (0,1)")->capture_default_str();
  sub->add_option("--noise", t.noise, "gaussian | rademacher | student:dof=D")
      ->capture_default_str();
  sub->add_option("--mu", t.mu, "mean direction: ones | random")->capture_default_str();
  sub->add_option("--k", t.k, "eigenpairs to compute (1..8)")->capture_default_str();
  sub->add_option("--layout", t.layout, "kernel layout: auto | dense | sparse")
      ->capture_default_str();
  sub->add_option("--seed", t.seed, "base seed for all randomness")->capture_default_str();
  sub->add_option("--threads", t.threads, "worker threads (0: SQSC_THREADS or hardware)")
      ->capture_default_str();
}

sqsc::TrialConfig resolve_trial(const TrialOpts& t) {
  sqsc::TrialConfig cfg;
  cfg.mixture.p = t.p;
  cfg.mixture.n = t.n;
  cfg.mixture.rho = t.rho;
  cfg.mixture.balance = t.balance;
  sqsc::parse_noise(t.noise, cfg.mixture.noise, cfg.mixture.student_dof);
  if (t.mu == "ones") {
    cfg.mixture.mu_direction = sqsc::MuDirection::OnesOverSqrtP;
  } else if (t.mu == "random") {
    cfg.mixture.mu_direction = sqsc::MuDirection::RandomUnit;
  } else {
    throw sqsc::ParseError("--mu must be ones or random, got \"" + t.mu + "\"");
  }
  cfg.f = sqsc::parse_nonlinearity(t.f_spec);
  cfg.method = sqsc::parse_harness_method(t.method);
  cfg.eps = t.eps;
  cfg.k_eigs = t.k;
  cfg.seed = t.seed;
  cfg.threads = t.threads;
  if (t.layout == "dense") {
    cfg.layout = sqsc::KernelLayout::Dense;
  } else if (t.layout == "sparse") {
    cfg.layout = sqsc::KernelLayout::Sparse;
  } else if (t.layout != "auto") {
    throw sqsc::ParseError("--layout must be auto, dense, or sparse, got \"" + t.layout + "\"");
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// JSON fragments.

void emit_model(sqsc::JsonWriter& w, const sqsc::SpectrumModel& md) {
  w.key("model").begin_object();
  w.kv("a1", md.a1).kv("a2", md.a2).kv("nu", md.nu).kv("c", md.c);
  w.kv("kappa", md.kappa).kv("rho", md.rho).kv("eta", md.eta);
  w.end_object();
}

void emit_edges(sqsc::JsonWriter& w, const sqsc::SupportDescription& sup) {
  w.key("edges").begin_array();
  for (const double e : sup.edges) w.value(e);
  w.end_array();
}

void emit_spikes(sqsc::JsonWriter& w, const std::vector<sqsc::SpikePrediction>& spikes) {
  w.key("spikes").begin_array();
  for (const sqsc::SpikePrediction& sp : spikes) {
    w.begin_object();
    w.kv("z", sp.location).kv("m", sp.m_value).kv("informative", sp.informative);
    if (sp.alignment_available) {
      w.kv("alpha", sp.alignment);
    } else {
      w.kv_null("alpha");
    }
    w.kv("alignment_available", sp.alignment_available);
    w.end_object();
  }
  w.end_array();
}

// ---------------------------------------------------------------------------
// predict

struct PredictCmd {
  ModelOpts model;
  CommonOpts common;
};

void run_predict(const PredictCmd& o) {
  merge_config(o.common);
  const sqsc::SpectrumModel md = resolve_model(o.model);
  if (!(md.a1 > 0.0)) {
    throw sqsc::DomainError("predict: the informative component needs a1 > 0");
  }
  const sqsc::SupportDescription sup = sqsc::support_edges(md);
  const std::vector<sqsc::SpikePrediction> spikes = sqsc::general_spikes(md);

  double gamma = kNaN;
  double lambda = kNaN;
  double alpha = kNaN;
  double error_rate = kNaN;
  if (md.a2 == 0.0) {
    gamma = sqsc::phase_transition(md);
    const sqsc::SpikePrediction sp = sqsc::informative_spike(md);
    lambda = sp.informative ? sp.location : kNaN;
    alpha = sp.alignment;
  } else {
    // Kurtosis-driven spikes present: no scalar transition point. The
    // informative location is still defined; alignment only when eta = 0.
    alpha = (md.eta == 0.0) ? 0.0 : kNaN;
    for (const sqsc::SpikePrediction& sp : spikes) {
      if (!sp.informative) continue;
      lambda = sp.location;
      alpha = sp.alignment_available ? sp.alignment : kNaN;
    }
  }
  if (std::isfinite(alpha)) error_rate = sqsc::misclassification(alpha);

  sqsc::JsonWriter w;
  w.begin_object();
  w.kv("a1", md.a1).kv("a2", md.a2).kv("nu", md.nu);
  w.kv("gamma", gamma).kv("lambda", lambda).kv("alpha", alpha).kv("error_rate", error_rate);
  emit_model(w, md);
  emit_edges(w, sup);
  emit_spikes(w, spikes);
  w.end_object();
  write_text(o.common.out, w.str());
}

// ---------------------------------------------------------------------------
// density

struct DensityCmd {
  ModelOpts model;
  CommonOpts common;
  std::string grid = "auto";
  double eps_im = 1e-6;
  bool richardson = true;
  int threads = 0;
};

std::vector<double> density_grid(const sqsc::SpectrumModel& md, const std::string& spec) {
  if (spec != "auto") return parse_grid(spec);
  const sqsc::SupportDescription sup = sqsc::support_edges(md);
  const double lo = sup.edges.front(), hi = sup.edges.back();
  const double pad = 0.05 * (hi - lo) + 1e-3;
  return linspace(lo - pad, hi + pad, 513);
}

void run_density(const DensityCmd& o) {
  merge_config(o.common);
  const sqsc::SpectrumModel md = resolve_model(o.model);
  const std::vector<double> grid = density_grid(md, o.grid);
  sqsc::DensityOptions opts;
  opts.eps_im = o.eps_im;
  opts.richardson = o.richardson;
  opts.threads = o.threads;
  const std::vector<double> rho = sqsc::density(md, grid, opts);
  const sqsc::SupportDescription sup = sqsc::support_edges(md);

  if (o.common.json) {
    double mass = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      mass += 0.5 * (rho[i] + rho[i + 1]) * (grid[i + 1] - grid[i]);
    }
    sqsc::JsonWriter w;
    w.begin_object();
    emit_model(w, md);
    emit_edges(w, sup);
    w.key("x").begin_array();
    for (const double x : grid) w.value(x);
    w.end_array();
    w.key("density").begin_array();
    for (const double v : rho) w.value(v);
    w.end_array();
    w.kv("mass", mass);
    w.end_object();
    write_text(o.common.out, w.str());
    return;
  }
  std::string csv = "x,density\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv += sqsc::format_g17(grid[i]) + "," + sqsc::format_g17(rho[i]) + "\n";
  }
  write_text(o.common.out, csv);
}

// ---------------------------------------------------------------------------
// edges

struct EdgesCmd {
  ModelOpts model;
  CommonOpts common;
};

void run_edges(const EdgesCmd& o) {
  merge_config(o.common);
  const sqsc::SpectrumModel md = resolve_model(o.model);
  const sqsc::SupportDescription sup = sqsc::support_edges(md);
  sqsc::JsonWriter w;
  w.begin_object();
  emit_model(w, md);
  emit_edges(w, sup);
  w.kv("components", sup.components);
  w.end_object();
  write_text(o.common.out, w.str());
}

// ---------------------------------------------------------------------------
// spikes

struct SpikesCmd {
  ModelOpts model;
  CommonOpts common;
};

void run_spikes(const SpikesCmd& o) {
  merge_config(o.common);
  const sqsc::SpectrumModel md = resolve_model(o.model);
  const sqsc::SupportDescription sup = sqsc::support_edges(md);
  const std::vector<sqsc::SpikePrediction> spikes = sqsc::general_spikes(md);
  const double gamma = (md.a2 == 0.0 && md.a1 > 0.0) ? sqsc::phase_transition(md) : kNaN;
  sqsc::JsonWriter w;
  w.begin_object();
  emit_model(w, md);
  w.kv("gamma", gamma);
  emit_edges(w, sup);
  emit_spikes(w, spikes);
  w.end_object();
  write_text(o.common.out, w.str());
}

// ---------------------------------------------------------------------------
// optimal-threshold

struct OptimalCmd {
  CommonOpts common;
  std::string family;
  int M = 0;
  CLI::Option* m_opt = nullptr;
};

void run_optimal(const OptimalCmd& o) {
  merge_config(o.common);
  if (o.family.empty()) {
    throw sqsc::ParseError("optimal-threshold: --family is required (binarize or quantize)");
  }
  sqsc::NonlinKind kind;
  if (o.family == "binarize") {
    kind = sqsc::NonlinKind::Binarize;
  } else if (o.family == "quantize") {
    kind = sqsc::NonlinKind::Quantize;
    if (o.m_opt->count() == 0) {
      throw sqsc::ParseError("optimal-threshold: --M is required for the quantize family");
    }
  } else {
    throw sqsc::ParseError("optimal-threshold: --family must be binarize or quantize");
  }
  const int M = (kind == sqsc::NonlinKind::Quantize) ? o.M : 2;
  const double s_opt = sqsc::optimal_threshold(kind, M);
  const sqsc::Nonlinearity f = (kind == sqsc::NonlinKind::Binarize)
                                   ? sqsc::Nonlinearity::binarize(s_opt)
                                   : sqsc::Nonlinearity::quantize(M, s_opt);
  const sqsc::HermiteCoefficients hc = sqsc::coefficients_closed_form(f);

  sqsc::JsonWriter w;
  w.begin_object();
  w.kv("family", o.family);
  if (kind == sqsc::NonlinKind::Quantize) {
    w.kv("M", M);
  } else {
    w.kv_null("M");
  }
  w.kv("s_opt", s_opt);
  w.kv("a1", hc.a1).kv("nu", hc.nu);
  w.kv("nu_over_a1sq", hc.nu / (hc.a1 * hc.a1));
  w.kv("sparsity", sqsc::sparsity_level(f));
  w.end_object();
  write_text(o.common.out, w.str());
}

// ---------------------------------------------------------------------------
// trade-off

struct TradeoffCmd {
  CommonOpts common;
  std::string methods = "all";
  double target_error = 0.5;
  double c = 1.0;
  std::string eps_grid = "0.02:1:50";
};

void run_tradeoff(const TradeoffCmd& o) {
  merge_config(o.common);
  std::vector<sqsc::CompressionMethod> methods;
  if (o.methods == "all") {
    methods = {sqsc::CompressionMethod::Selective, sqsc::CompressionMethod::Uniform,
               sqsc::CompressionMethod::Subsample};
  } else {
    for (const std::string& tok : split(o.methods, ',')) {
      methods.push_back(sqsc::parse_method(tok));
    }
  }
  const std::vector<double> grid = parse_grid(o.eps_grid);

  struct Curve {
    sqsc::CompressionMethod method;
    std::vector<sqsc::EquiPerfPoint> points;
  };
  std::vector<Curve> curves;
  for (const sqsc::CompressionMethod m : methods) {
    curves.push_back({m, sqsc::equi_performance_curve(m, o.target_error, o.c, grid)});
  }

  if (o.common.json) {
    sqsc::JsonWriter w;
    w.begin_object();
    w.kv("target_error", o.target_error).kv("c", o.c);
    w.key("curves").begin_array();
    for (const Curve& cu : curves) {
      w.begin_object();
      w.kv("method", sqsc::to_string(cu.method));
      w.key("points").begin_array();
      for (const sqsc::EquiPerfPoint& pt : cu.points) {
        w.begin_object();
        w.kv("eps", pt.eps).kv("rho", pt.attainable ? pt.rho : kNaN).kv("attainable", pt.attainable);
        w.end_object();
      }
      w.end_array();
      w.end_object();
    }
    w.end_array();
    w.end_object();
    write_text(o.common.out, w.str());
    return;
  }
  std::string csv = "method,eps,rho,attainable\n";
  for (const Curve& cu : curves) {
    for (const sqsc::EquiPerfPoint& pt : cu.points) {
      csv += std::string(sqsc::to_string(cu.method)) + "," + sqsc::format_g17(pt.eps) + "," +
             (pt.attainable ? sqsc::format_g17(pt.rho) : std::string("nan")) + "," +
             (pt.attainable ? "1" : "0") + "\n";
    }
  }
  write_text(o.common.out, csv);
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateCmd {
  TrialOpts trial;
  CommonOpts common;
};

void emit_trial_json(sqsc::JsonWriter& w, const sqsc::TrialConfig& cfg,
                     const sqsc::TrialResult& res, const sqsc::TheoryJoin& th) {
  w.key("config").begin_object();
  w.kv("p", static_cast<long long>(cfg.mixture.p)).kv("n", static_cast<long long>(cfg.mixture.n));
  w.kv("rho", cfg.mixture.rho).kv("balance", cfg.mixture.balance);
  w.kv("noise", sqsc::to_string(cfg.mixture.noise, cfg.mixture.student_dof));
  w.kv("f", sqsc::to_string(cfg.f)).kv("method", sqsc::to_string(cfg.method)).kv("eps", cfg.eps);
  w.kv("k", cfg.k_eigs).kv("seed", static_cast<unsigned long long>(cfg.seed));
  w.end_object();
  w.key("theory").begin_object();
  w.kv("a1", th.a1).kv("a2", th.a2).kv("nu", th.nu).kv("gamma", th.gamma);
  w.kv("alignment", th.alignment).kv("error", th.error).kv("lambda", th.lambda);
  w.end_object();
  w.key("empirical").begin_object();
  w.kv("alignment", res.alignment_emp).kv("error", res.error_emp);
  w.key("top_values").begin_array();
  for (const double v : res.top_values) w.value(v);
  w.end_array();
  w.kv("sparsity", res.sparsity_emp).kv("nnz", static_cast<long long>(res.nnz));
  w.kv("time_kernel_s", res.time_kernel_s).kv("time_eig_s", res.time_eig_s);
  w.end_object();
}

void run_simulate(const SimulateCmd& o) {
  merge_config(o.common);
  const sqsc::TrialConfig cfg = resolve_trial(o.trial);
  const sqsc::TrialResult res = sqsc::run_trial(cfg);
  const sqsc::TheoryJoin th = sqsc::theory_for(cfg);
  const sqsc::SpectrumModel md = sqsc::model_for(cfg);

  sqsc::JsonWriter w;
  w.begin_object();
  emit_trial_json(w, cfg, res, th);
  emit_model(w, md);
  w.end_object();
  write_text(o.common.out, w.str());
}

// ---------------------------------------------------------------------------
// sweep

struct SweepCmd {
  TrialOpts trial;
  CommonOpts common;
  std::string axis = "rho";
  std::string grid;
  int repeats = 1;
  bool aggregate_only = false;
};

void run_sweep_cmd(const SweepCmd& o) {
  merge_config(o.common);
  if (o.grid.empty()) throw sqsc::ParseError("sweep: --grid is required");
  sqsc::SweepSpec spec;
  spec.axis = sqsc::parse_axis(o.axis);
  spec.grid = parse_grid(o.grid);
  spec.repeats = o.repeats;
  spec.base = resolve_trial(o.trial);
  const sqsc::SweepTable table = sqsc::run_sweep(spec, o.trial.threads);

  for (const sqsc::SweepFailure& fl : table.failures) {
    std::cerr << "sqsc: sweep trial failed (axis index " << fl.axis_index << ", repeat "
              << fl.repeat << "): " << fl.message << '\n';
  }
  if (table.rows.empty() && !table.failures.empty()) {
    throw sqsc::NumericsError("sweep: every trial failed");
  }

  if (o.aggregate_only) {
    const std::vector<sqsc::SweepAggregate> agg = sqsc::aggregate(table);
    if (o.common.json) {
      sqsc::JsonWriter w;
      w.begin_object();
      w.kv("axis", sqsc::to_string(spec.axis));
      w.key("points").begin_array();
      for (const sqsc::SweepAggregate& a : agg) {
        w.begin_object();
        w.kv("axis_value", a.axis_value).kv("count", a.count);
        w.kv("alignment_mean", a.alignment_mean).kv("alignment_se", a.alignment_se);
        w.kv("error_mean", a.error_mean).kv("error_se", a.error_se);
        w.kv("alignment_theory", a.alignment_theory).kv("error_theory", a.error_theory);
        w.kv("gamma", a.gamma).kv("lambda_theory", a.lambda_theory);
        w.end_object();
      }
      w.end_array();
      w.end_object();
      write_text(o.common.out, w.str());
      return;
    }
    std::string csv =
        "axis_value,count,alignment_mean,alignment_se,error_mean,error_se,"
        "alignment_theory,error_theory,gamma,lambda_theory\n";
    for (const sqsc::SweepAggregate& a : agg) {
      csv += sqsc::format_g17(a.axis_value) + "," + std::to_string(a.count) + "," +
             sqsc::format_g17(a.alignment_mean) + "," + sqsc::format_g17(a.alignment_se) + "," +
             sqsc::format_g17(a.error_mean) + "," + sqsc::format_g17(a.error_se) + "," +
             sqsc::format_g17(a.alignment_theory) + "," + sqsc::format_g17(a.error_theory) + "," +
             sqsc::format_g17(a.gamma) + "," + sqsc::format_g17(a.lambda_theory) + "\n";
    }
    write_text(o.common.out, csv);
    return;
  }

  if (o.common.json) {
    sqsc::export_json(table, file_or_stdout(o.common.out));
  } else {
    sqsc::export_csv(table, file_or_stdout(o.common.out));
  }
}

// ---------------------------------------------------------------------------
// spectrum

struct SpectrumCmd {
  TrialOpts trial;
  CommonOpts common;
  int bins = 100;
  bool with_vectors = false;
  int extreme_count = 4;
};

void run_spectrum(const SpectrumCmd& o) {
  merge_config(o.common);
  sqsc::SpectrumConfig cfg;
  cfg.trial = resolve_trial(o.trial);
  cfg.bins = o.bins;
  cfg.with_vectors = o.with_vectors;
  cfg.extreme_count = o.extreme_count;
  const sqsc::SpectrumExperiment sx = sqsc::spectrum_experiment(cfg);

  if (!o.common.json) {
    sqsc::export_spectrum_csv(sx, file_or_stdout(o.common.out));
    return;
  }
  sqsc::JsonWriter w;
  w.begin_object();
  emit_model(w, sx.model);
  emit_edges(w, sx.support);
  w.kv("components", sx.support.components);
  emit_spikes(w, sx.spikes);
  w.key("isolated").begin_array();
  for (const double v : sx.isolated) w.value(v);
  w.end_array();
  w.kv("l1_bulk", sx.l1_bulk);
  w.key("bin_edges").begin_array();
  for (const double v : sx.bin_edges) w.value(v);
  w.end_array();
  w.key("bin_density").begin_array();
  for (const double v : sx.bin_density) w.value(v);
  w.end_array();
  w.key("theory_density").begin_array();
  for (const double v : sx.theory_density) w.value(v);
  w.end_array();
  w.key("top_alignments").begin_array();
  for (const double v : sx.top_alignments) w.value(v);
  w.end_array();
  w.key("bottom_alignments").begin_array();
  for (const double v : sx.bottom_alignments) w.value(v);
  w.end_array();
  w.key("eigenvalues").begin_array();
  for (const double v : sx.eigenvalues) w.value(v);
  w.end_array();
  w.end_object();
  write_text(o.common.out, w.str());
}

// ---------------------------------------------------------------------------
// mnist

struct MnistCmd {
  CommonOpts common;
  std::string images, labels, dir;
  std::string digits = "0,1";
  std::int64_t n = 2048;
  std::string family = "binarize";
  double s = 0.0;  // raw threshold on x_i^T x_j / sqrt(p)
  int M = 2;
  std::string s_grid;
  int k = 2;
  std::uint64_t seed = sqsc::kDefaultSeed;
  int threads = 0;
};

sqsc::Nonlinearity family_operator(const std::string& family, double s_raw, int M) {
  // CLI thresholds are in raw kernel-argument units; the operator's branch
  // point sits at sqrt(2) * f.s, so divide once here.
  const double s_op = s_raw / std::sqrt(2.0);
  if (family == "linear") {
    if (s_raw != 0.0) throw sqsc::ParseError("mnist: --s is not used with --family linear");
    return sqsc::Nonlinearity::linear();
  }
  if (family == "sparse") return sqsc::Nonlinearity::sparse(s_op);
  if (family == "binarize") return sqsc::Nonlinearity::binarize(s_op);
  if (family == "quantize") return sqsc::Nonlinearity::quantize(M, s_op);
  throw sqsc::ParseError("mnist: --family must be linear, sparse, binarize, or quantize");
}

struct MnistPoint {
  double sparsity = 0.0;
  std::int64_t nnz = 0;
  double error = 0.0;
  double alignment = 0.0;
  std::vector<double> top_values;
  double time_kernel_s = 0.0;
  double time_eig_s = 0.0;
};

MnistPoint mnist_point(const sqsc::DataMatrix& X, const sqsc::Nonlinearity& f, int k,
                       std::uint64_t seed, int threads) {
  sqsc::KernelBuildOptions kopts;
  kopts.threads = threads;
  const sqsc::KernelLayout layout =
      f.kind == sqsc::NonlinKind::Linear ? sqsc::KernelLayout::Dense : sqsc::KernelLayout::Sparse;
  const sqsc::Kernel K = sqsc::build_kernel(X, f, layout, kopts);
  const sqsc::Index n = X.values.cols();

  sqsc::LanczosOptions lopts;
  lopts.seed = seed;
  const sqsc::LinOp op = [&K, threads](const double* x, double* y) { K.matvec(x, y, threads); };
  const auto t0 = std::chrono::steady_clock::now();
  const sqsc::EigenPairs pairs =
      sqsc::top_eigenpairs(op, n, std::clamp(k, 1, 8), lopts);
  const auto t1 = std::chrono::steady_clock::now();

  MnistPoint pt;
  pt.sparsity = K.report.sparsity;
  pt.nnz = K.report.nnz;
  pt.top_values.assign(pairs.values.data(), pairs.values.data() + pairs.values.size());
  pt.time_kernel_s = K.report.build_seconds;
  pt.time_eig_s = std::chrono::duration<double>(t1 - t0).count();

  Eigen::VectorXd u = pairs.vectors.col(0);
  pt.alignment = sqsc::sign_align(u, X.labels);
  sqsc::Index wrong = 0;
  for (sqsc::Index i = 0; i < n; ++i) {
    const int pred = u[i] > 0.0 ? 1 : (u[i] < 0.0 ? -1 : 0);
    if (pred != X.labels[static_cast<std::size_t>(i)]) ++wrong;
  }
  const double err = static_cast<double>(wrong) / static_cast<double>(n);
  pt.error = std::min(err, 1.0 - err);  // classes are exchangeable: unlabeled error
  return pt;
}

void run_mnist(const MnistCmd& o) {
  merge_config(o.common);
  std::string images = o.images, labels = o.labels;
  if (images.empty() || labels.empty()) {
    std::string dir = o.dir;
    if (dir.empty()) {
      if (const char* env = std::getenv("SQSC_MNIST_DIR")) dir = env;
    }
    if (dir.empty()) {
      throw sqsc::ParseError(
          "mnist: pass --images/--labels, or --dir (or set SQSC_MNIST_DIR) containing "
          "train-images-idx3-ubyte / train-labels-idx1-ubyte");
    }
    if (images.empty()) images = dir + "/train-images-idx3-ubyte";
    if (labels.empty()) labels = dir + "/train-labels-idx1-ubyte";
  }
  const std::vector<std::string> dig = split(o.digits, ',');
  if (dig.size() != 2) throw sqsc::ParseError("mnist: --digits must be two classes, e.g. 0,1");
  const int d0 = static_cast<int>(parse_double(dig[0], "digit"));
  const int d1 = static_cast<int>(parse_double(dig[1], "digit"));

  const sqsc::DataMatrix X = sqsc::standardize(
      sqsc::load_idx(images, labels, d0, d1, o.n, o.seed));

  if (!o.s_grid.empty()) {
    std::string csv = "s,f,sparsity,error,alignment,lambda1\n";
    for (const double s_raw : parse_grid(o.s_grid)) {
      const sqsc::Nonlinearity f = family_operator(o.family, s_raw, o.M);
      const MnistPoint pt = mnist_point(X, f, o.k, o.seed, o.threads);
      csv += sqsc::format_g17(s_raw) + "," + sqsc::csv_field(sqsc::to_string(f)) + "," +
             sqsc::format_g17(pt.sparsity) + "," + sqsc::format_g17(pt.error) + "," +
             sqsc::format_g17(pt.alignment) + "," +
             sqsc::format_g17(pt.top_values.empty() ? kNaN : pt.top_values.front()) + "\n";
    }
    write_text(o.common.out, csv);
    return;
  }

  const sqsc::Nonlinearity f = family_operator(o.family, o.s, o.M);
  const MnistPoint pt = mnist_point(X, f, o.k, o.seed, o.threads);
  sqsc::JsonWriter w;
  w.begin_object();
  w.kv("images", images).kv("labels", labels);
  w.key("digits").begin_array();
  w.value(d0);
  w.value(d1);
  w.end_array();
  w.kv("p", static_cast<long long>(X.values.rows())).kv("n", static_cast<long long>(X.values.cols()));
  w.kv("family", o.family).kv("s", o.s).kv("f", sqsc::to_string(f));
  w.kv("sparsity", pt.sparsity).kv("nnz", static_cast<long long>(pt.nnz));
  w.kv("error", pt.error).kv("alignment", pt.alignment);
  w.key("top_values").begin_array();
  for (const double v : pt.top_values) w.value(v);
  w.end_array();
  w.kv("time_kernel_s", pt.time_kernel_s).kv("time_eig_s", pt.time_eig_s);
  w.kv("seed", static_cast<unsigned long long>(o.seed));
  w.end_object();
  write_text(o.common.out, w.str());
}

// ---------------------------------------------------------------------------
// plot

struct PlotCmd {
  CommonOpts common;
  std::string input;
  std::string kind;
  std::string y = "alignment";
  std::string title;
};

void plot_hist(const PlotCmd& o) {
  const sqsc::CsvTable t = sqsc::read_csv(o.input);
  const std::size_t c_rec = t.col("record");
  const std::size_t c_lo = t.col("x_lo");
  const std::size_t c_hi = t.col("x_hi");
  const std::size_t c_val = t.col("value");
  const std::size_t c_flag = t.col("flag");

  sqsc::SvgBars bars;
  sqsc::SvgSeries curve;
  sqsc::SvgMarks spikes;
  std::vector<double> edges;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const std::string& rec = t.rows[i][c_rec];
    if (rec == "bin") {
      if (bars.edges.empty()) bars.edges.push_back(t.num(i, c_lo));
      bars.edges.push_back(t.num(i, c_hi));
      bars.height.push_back(t.num(i, c_val));
    } else if (rec == "theory") {
      curve.x.push_back(t.num(i, c_lo));
      curve.y.push_back(t.num(i, c_val));
    } else if (rec == "spike") {
      spikes.x.push_back(t.num(i, c_lo));
      spikes.emphasized.push_back(t.rows[i][c_flag] == "1");
    } else if (rec == "edge") {
      edges.push_back(t.num(i, c_lo));
    }
  }
  const std::string title = o.title.empty() ? "spectrum vs limiting density" : o.title;
  write_text(o.common.out, sqsc::svg_histogram(bars, curve, spikes, edges, title));
}

std::string infer_axis_label(const sqsc::SweepTable& table) {
  if (table.rows.empty()) return "axis";
  const auto matches = [&](auto&& get) {
    for (const sqsc::SweepRow& r : table.rows) {
      if (std::abs(get(r) - r.axis_value) > 1e-9 * (1.0 + std::abs(r.axis_value))) return false;
    }
    return true;
  };
  if (matches([](const sqsc::SweepRow& r) { return r.rho; })) return "rho";
  if (matches([](const sqsc::SweepRow& r) { return r.eps_nominal; })) return "eps";
  if (matches([](const sqsc::SweepRow& r) { return r.c; })) return "c";
  const auto f_field = [](const sqsc::SweepRow& r, bool want_M) -> double {
    try {
      const sqsc::Nonlinearity f = sqsc::parse_nonlinearity(r.f_spec);
      return want_M ? static_cast<double>(f.M) : f.s;
    } catch (const std::exception&) {
      return kNaN;
    }
  };
  if (matches([&](const sqsc::SweepRow& r) { return f_field(r, false); })) return "s";
  if (matches([&](const sqsc::SweepRow& r) { return f_field(r, true); })) return "M";
  return "axis";
}

void plot_curve(const PlotCmd& o) {
  if (o.y != "alignment" && o.y != "error") {
    throw sqsc::ParseError("plot: --y must be alignment or error");
  }
  const bool want_err = o.y == "error";
  const sqsc::SweepTable table = sqsc::import_csv(o.input);
  const std::vector<sqsc::SweepAggregate> agg = sqsc::aggregate(table);

  sqsc::SvgPoints points;
  sqsc::SvgSeries theory;
  double vline = kNaN;
  bool vline_const = true;
  for (const sqsc::SweepAggregate& a : agg) {
    points.x.push_back(a.axis_value);
    points.y.push_back(want_err ? a.error_mean : a.alignment_mean);
    points.err.push_back(want_err ? a.error_se : a.alignment_se);
    theory.x.push_back(a.axis_value);
    theory.y.push_back(want_err ? a.error_theory : a.alignment_theory);
    if (std::isfinite(a.gamma)) {
      if (std::isnan(vline)) {
        vline = a.gamma;
      } else if (std::abs(a.gamma - vline) > 1e-9 * (1.0 + std::abs(vline))) {
        vline_const = false;
      }
    } else {
      vline_const = false;
    }
  }
  if (!vline_const) vline = kNaN;
  const std::string xlabel = infer_axis_label(table);
  // The transition marker only makes sense against the SNR axis.
  if (xlabel != "rho") vline = kNaN;
  const std::string title =
      o.title.empty() ? (std::string(want_err ? "error" : "alignment") + " vs " + xlabel) : o.title;
  write_text(o.common.out, sqsc::svg_curve(points, theory, vline, title, xlabel, o.y));
}

void plot_tradeoff(const PlotCmd& o) {
  const sqsc::SweepTable table = sqsc::import_csv(o.input);
  const std::vector<sqsc::SweepAggregate> agg = sqsc::aggregate(table);

  sqsc::SvgSeries error_curve, storage_curve;
  for (const sqsc::SweepAggregate& a : agg) {
    error_curve.x.push_back(a.axis_value);
    error_curve.y.push_back(a.error_mean);
  }
  // Analytic storage model per grid point, from the rows' operator specs.
  for (const sqsc::SweepRow& r : table.rows) {
    if (!storage_curve.x.empty() && storage_curve.x.back() == r.axis_value) continue;
    const sqsc::Nonlinearity f = sqsc::parse_nonlinearity(r.f_spec);
    storage_curve.x.push_back(r.axis_value);
    storage_curve.y.push_back(static_cast<double>(sqsc::storage_bits(f, r.n, 64)));
  }
  const std::string xlabel = infer_axis_label(table);
  const std::string title = o.title.empty() ? "error / storage trade-off" : o.title;
  write_text(o.common.out, sqsc::svg_tradeoff(error_curve, storage_curve, title, xlabel));
}

void run_plot(const PlotCmd& o) {
  merge_config(o.common);
  if (o.input.empty()) throw sqsc::ParseError("plot: --input is required");
  if (o.kind == "hist") {
    plot_hist(o);
  } else if (o.kind == "curve") {
    plot_curve(o);
  } else if (o.kind == "tradeoff") {
    plot_tradeoff(o);
  } else {
    throw sqsc::ParseError("plot: --kind must be hist, curve, or tradeoff");
  }
}

}  // namespace

// ---------------------------------------------------------------------------

int main(int argc, char** argv) {
  CLI::App app{"sqsc — spectral clustering under kernel compression: theory and experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "sqsc 1.0.0");
  app.set_help_all_flag("--help-all", "print help for every subcommand");

  PredictCmd predict_cmd;
  {
    CLI::App* sub = app.add_subcommand(
        "predict", "phase transition, spike locations, alignment, and error for a model");
    add_model_options(sub, predict_cmd.model);
    add_common_options(sub, predict_cmd.common);
    sub->callback([&predict_cmd] { run_predict(predict_cmd); });
  }

  DensityCmd density_cmd;
  {
    CLI::App* sub = app.add_subcommand("density", "limiting spectral density on a grid");
    add_model_options(sub, density_cmd.model);
    sub->add_option("--grid", density_cmd.grid,
                    "evaluation grid: lo:hi:count, comma list, or auto")
        ->capture_default_str();
    sub->add_option("--eps-im", density_cmd.eps_im, "imaginary boundary offset")
        ->capture_default_str();
    sub->add_flag("--richardson,!--no-richardson", density_cmd.richardson,
                  "Richardson extrapolation toward the real axis");
    sub->add_option("--threads", density_cmd.threads, "worker threads")->capture_default_str();
    add_common_options(sub, density_cmd.common);
    sub->callback([&density_cmd] { run_density(density_cmd); });
  }

  EdgesCmd edges_cmd;
  {
    CLI::App* sub = app.add_subcommand("edges", "support edges of the limiting spectrum");
    add_model_options(sub, edges_cmd.model);
    add_common_options(sub, edges_cmd.common);
    sub->callback([&edges_cmd] { run_edges(edges_cmd); });
  }

  SpikesCmd spikes_cmd;
  {
    CLI::App* sub = app.add_subcommand("spikes", "isolated-eigenvalue catalogue for a model");
    add_model_options(sub, spikes_cmd.model);
    add_common_options(sub, spikes_cmd.common);
    sub->callback([&spikes_cmd] { run_spikes(spikes_cmd); });
  }

  OptimalCmd optimal_cmd;
  {
    CLI::App* sub =
        app.add_subcommand("optimal-threshold", "error-optimal truncation threshold of a family");
    sub->add_option("--family", optimal_cmd.family, "binarize | quantize (required)")
        ->check(CLI::IsMember({"binarize", "quantize"}));
    optimal_cmd.m_opt = sub->add_option("--M", optimal_cmd.M, "quantizer bit parameter (>= 2)")
                            ->check(CLI::Range(2, 16));
    add_common_options(sub, optimal_cmd.common);
    sub->callback([&optimal_cmd] { run_optimal(optimal_cmd); });
  }

  TradeoffCmd tradeoff_cmd;
  {
    CLI::App* sub = app.add_subcommand(
        "trade-off", "SNR needed per sparsity level to reach a target error, by method");
    sub->add_option("--method", tradeoff_cmd.methods,
                    "selective | uniform | subsample, comma list, or all")
        ->capture_default_str();
    sub->add_option("--target-error", tradeoff_cmd.target_error,
                    "target misclassification rate in (0, 0.5]")
        ->capture_default_str();
    sub->add_option("--c", tradeoff_cmd.c, "dimension ratio p/n")->capture_default_str();
    sub->add_option("--eps-grid", tradeoff_cmd.eps_grid, "sparsity grid (lo:hi:count or list)")
        ->capture_default_str();
    add_common_options(sub, tradeoff_cmd.common);
    sub->callback([&tradeoff_cmd] { run_tradeoff(tradeoff_cmd); });
  }

  SimulateCmd simulate_cmd;
  {
    CLI::App* sub = app.add_subcommand("simulate", "one seeded experiment joined with theory");
    add_trial_options(sub, simulate_cmd.trial);
    add_common_options(sub, simulate_cmd.common);
    sub->callback([&simulate_cmd] { run_simulate(simulate_cmd); });
  }

  SweepCmd sweep_cmd;
  {
    CLI::App* sub = app.add_subcommand("sweep", "Monte Carlo sweep over a model axis");
    add_trial_options(sub, sweep_cmd.trial);
    sub->add_option("--axis", sweep_cmd.axis, "rho | s | c | eps | M")->capture_default_str();
    sub->add_option("--grid", sweep_cmd.grid, "axis grid: lo:hi:count or comma list (required)");
    sub->add_option("--repeats", sweep_cmd.repeats, "trials per grid point")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_flag("--aggregate", sweep_cmd.aggregate_only,
                  "emit per-grid-point means and standard errors instead of raw trials");
    add_common_options(sub, sweep_cmd.common);
    sub->callback([&sweep_cmd] { run_sweep_cmd(sweep_cmd); });
  }

  SpectrumCmd spectrum_cmd;
  {
    CLI::App* sub = app.add_subcommand(
        "spectrum", "dense full-spectrum experiment vs the limiting density");
    add_trial_options(sub, spectrum_cmd.trial);
    sub->add_option("--bins", spectrum_cmd.bins, "histogram bins")->capture_default_str();
    sub->add_flag("--with-vectors", spectrum_cmd.with_vectors,
                  "also score extreme eigenvector alignments");
    sub->add_option("--extreme-count", spectrum_cmd.extreme_count,
                    "eigenvectors scored at each spectrum end")
        ->capture_default_str();
    add_common_options(sub, spectrum_cmd.common);
    sub->callback([&spectrum_cmd] { run_spectrum(spectrum_cmd); });
  }

  MnistCmd mnist_cmd;
  {
    CLI::App* sub =
        app.add_subcommand("mnist", "two-digit experiment on IDX image data (e.g. MNIST)");
    sub->add_option("--images", mnist_cmd.images, "IDX image file");
    sub->add_option("--labels", mnist_cmd.labels, "IDX label file");
    sub->add_option("--dir", mnist_cmd.dir,
                    "directory with train-images-idx3-ubyte / train-labels-idx1-ubyte "
                    "(fallback: SQSC_MNIST_DIR)");
    sub->add_option("--digits", mnist_cmd.digits, "two digit classes")->capture_default_str();
    sub->add_option("--n", mnist_cmd.n, "sample count")->capture_default_str();
    sub->add_option("--family", mnist_cmd.family, "linear | sparse | binarize | quantize")
        ->capture_default_str();
    sub->add_option("--s", mnist_cmd.s, "truncation threshold on x_i^T x_j / sqrt(p)")
        ->capture_default_str();
    sub->add_option("--M", mnist_cmd.M, "quantizer bit parameter")->check(CLI::Range(2, 16));
    sub->add_option("--s-grid", mnist_cmd.s_grid,
                    "threshold grid; emits a CSV of error vs threshold instead of JSON");
    sub->add_option("--k", mnist_cmd.k, "eigenpairs to compute")->capture_default_str();
    sub->add_option("--seed", mnist_cmd.seed, "subset-sampling / Lanczos seed")
        ->capture_default_str();
    sub->add_option("--threads", mnist_cmd.threads, "worker threads")->capture_default_str();
    add_common_options(sub, mnist_cmd.common);
    sub->callback([&mnist_cmd] { run_mnist(mnist_cmd); });
  }

  PlotCmd plot_cmd;
  {
    CLI::App* sub = app.add_subcommand("plot", "render a harness CSV as a deterministic SVG");
    sub->add_option("--input", plot_cmd.input, "CSV produced by sweep or spectrum (required)");
    sub->add_option("--kind", plot_cmd.kind, "hist | curve | tradeoff (required)");
    sub->add_option("--y", plot_cmd.y, "curve y-quantity: alignment | error")
        ->capture_default_str();
    sub->add_option("--title", plot_cmd.title, "plot title (default: derived)");
    add_common_options(sub, plot_cmd.common);
    sub->callback([&plot_cmd] { run_plot(plot_cmd); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const sqsc::ParseError& e) {
    std::cerr << "sqsc: " << e.what() << '\n';
    return 2;
  } catch (const sqsc::DomainError& e) {
    std::cerr << "sqsc: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "sqsc: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
