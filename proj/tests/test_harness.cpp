#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "sqsc/csv.hpp"
#include "sqsc/harness.hpp"
#include "temp_files.hpp"

using namespace sqsc;

namespace {

TrialConfig small_trial() {
  TrialConfig cfg;
  cfg.mixture.p = 128;
  cfg.mixture.n = 96;
  cfg.mixture.rho = 3.0;
  cfg.f = Nonlinearity::sign();
  cfg.seed = 42;
  return cfg;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("trials are bit-exactly reproducible") {
  const TrialConfig cfg = small_trial();
  const TrialResult a = run_trial(cfg);
  const TrialResult b = run_trial(cfg);
  CHECK(a.alignment_emp == b.alignment_emp);
  CHECK(a.error_emp == b.error_emp);
  CHECK(a.top_values == b.top_values);
  CHECK(a.nnz == b.nnz);
  CHECK(a.sparsity_emp == b.sparsity_emp);
  CHECK(a.seed == cfg.seed);
  REQUIRE(a.top_values.size() == 2);
  CHECK(a.alignment_emp >= 0.0);
  CHECK(a.alignment_emp <= 1.0);

  TrialConfig other = cfg;
  other.seed = 43;
  const TrialResult c = run_trial(other);
  CHECK(c.alignment_emp != a.alignment_emp);
}

TEST_CASE("sweep rows reproduce in isolation and are thread-invariant") {
  SweepSpec spec;
  spec.axis = SweepAxis::Rho;
  spec.grid = {1.0, 3.0, 6.0};
  spec.repeats = 2;
  spec.base = small_trial();

  const SweepTable t1 = run_sweep(spec, 1);
  const SweepTable t3 = run_sweep(spec, 3);
  REQUIRE(t1.rows.size() == 6);
  REQUIRE(t1.failures.empty());
  REQUIRE(t3.rows.size() == 6);
  for (std::size_t i = 0; i < t1.rows.size(); ++i) {
    CHECK(t1.rows[i].axis_value == t3.rows[i].axis_value);
    CHECK(t1.rows[i].repeat == t3.rows[i].repeat);
    CHECK(t1.rows[i].alignment_emp == t3.rows[i].alignment_emp);
    CHECK(t1.rows[i].error_emp == t3.rows[i].error_emp);
    CHECK(t1.rows[i].seed == t3.rows[i].seed);
  }
  // Grid-major, repeat-minor order.
  CHECK(t1.rows[0].axis_value == 1.0);
  CHECK(t1.rows[1].axis_value == 1.0);
  CHECK(t1.rows[2].axis_value == 3.0);
  CHECK(t1.rows[0].repeat == 0);
  CHECK(t1.rows[1].repeat == 1);

  // All derived seeds distinct.
  std::set<std::uint64_t> seeds;
  for (const SweepRow& r : t1.rows) seeds.insert(r.seed);
  CHECK(seeds.size() == t1.rows.size());

  // Re-running one row in isolation reproduces it bit-exactly.
  const SweepRow& row = t1.rows[3];  // axis 3.0, repeat 1
  TrialConfig cfg = spec.base;
  cfg.mixture.rho = row.axis_value;
  cfg.seed = row.seed;
  cfg.threads = 1;
  const TrialResult redo = run_trial(cfg);
  CHECK(redo.alignment_emp == row.alignment_emp);
  CHECK(redo.error_emp == row.error_emp);
  REQUIRE(redo.top_values.size() >= 2);
  CHECK(redo.top_values[0] == row.lambda1_emp);
  CHECK(redo.top_values[1] == row.lambda2_emp);
  CHECK(redo.sparsity_emp == row.sparsity_emp);
  CHECK(redo.nnz == row.nnz);
}

TEST_CASE("sweep records failures and keeps going") {
  SweepSpec spec;
  spec.axis = SweepAxis::S;
  spec.grid = {0.5, -1.0};  // negative threshold is a domain error
  spec.repeats = 2;
  spec.base = small_trial();
  spec.base.f = Nonlinearity::binarize(0.5);

  const SweepTable t = run_sweep(spec);
  CHECK(t.rows.size() == 2);
  REQUIRE(t.failures.size() == 2);
  CHECK(t.failures[0].axis_index == 1);
  CHECK(!t.failures[0].message.empty());
  for (const SweepRow& r : t.rows) CHECK(r.axis_value == 0.5);
}

TEST_CASE("selective sparsity concentrates and errors match the sign rule") {
  // Keep-rate concentration in the noise-dominated regime. A strong signal
  // shifts the gram entries by +-rho/sqrt(p) and visibly inflates the rate,
  // so this uses a weak one; pairs sharing a sample are weakly dependent,
  // hence the margin is five binomial standard deviations, not three.
  TrialConfig cfg;
  cfg.mixture.p = 256;
  cfg.mixture.n = 512;
  cfg.mixture.rho = 0.5;
  cfg.f = Nonlinearity::binarize(1.0);
  cfg.seed = 2025;
  const TrialResult res = run_trial(cfg);

  const double q = std::erfc(1.0);
  const double pairs = 0.5 * 512.0 * 511.0;
  const double sd = std::sqrt(q * (1.0 - q) / pairs);
  CHECK(std::abs(res.sparsity_emp - q) <= 5.0 * sd + 1e-12);

  // Internal consistency above the transition: the empirical error is the
  // sign-rule misclassification of the empirical alignment.
  TrialConfig strong = cfg;
  strong.mixture.rho = 6.0;
  const TrialResult sres = run_trial(strong);
  CHECK(std::abs(sres.error_emp - misclassification(sres.alignment_emp)) <= 0.02);
  CHECK(sres.time_kernel_s >= 0.0);
  CHECK(sres.time_eig_s > 0.0);
}

TEST_CASE("method-adjusted limiting models") {
  TrialConfig cfg = small_trial();  // p=128, n=96 -> c = 4/3
  cfg.f = Nonlinearity::binarize(0.7);

  const SpectrumModel sel = model_for(cfg);
  const HermiteCoefficients cf = coefficients_closed_form(cfg.f);
  CHECK(sel.a1 == doctest::Approx(cf.a1).epsilon(1e-12));
  CHECK(sel.nu == doctest::Approx(cf.nu).epsilon(1e-12));
  CHECK(sel.c == doctest::Approx(128.0 / 96.0).epsilon(1e-12));
  CHECK(sel.rho == 3.0);

  TrialConfig uni = cfg;
  uni.f = Nonlinearity::linear();  // masking baselines start from the linear kernel
  uni.method = Method::Uniform;
  uni.eps = 0.3;
  const SpectrumModel mu = model_for(uni);
  CHECK_THROWS_AS(model_for([&] {
                    TrialConfig bad = uni;
                    bad.f = Nonlinearity::binarize(0.7);
                    return bad;
                  }()),
                  DomainError);
  CHECK(mu.a1 == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(mu.nu == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(mu.a2 == 0.0);
  CHECK(mu.c == doctest::Approx(128.0 / 96.0).epsilon(1e-12));

  TrialConfig sub = cfg;
  sub.f = Nonlinearity::linear();
  sub.method = Method::Subsample;
  sub.eps = 0.5;
  const SpectrumModel ms = model_for(sub);
  CHECK(ms.a1 == 1.0);  // subsampling keeps the linear kernel
  CHECK(ms.nu == 1.0);
  CHECK(ms.c == doctest::Approx(2.0 * 128.0 / 96.0).epsilon(1e-9));

  TrialConfig lin = cfg;
  lin.method = Method::Linear;
  const SpectrumModel ml = model_for(lin);
  CHECK(ml.a1 == 1.0);
  CHECK(ml.nu == 1.0);
}

TEST_CASE("theory join: scalar path and kurtosis path") {
  TrialConfig cfg;
  cfg.mixture.p = 200;
  cfg.mixture.n = 100;
  cfg.mixture.rho = 4.0;
  cfg.f = Nonlinearity::linear();
  const TheoryJoin th = theory_for(cfg);
  CHECK(th.gamma == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  CHECK(th.alignment > 0.0);
  CHECK(th.error == doctest::Approx(misclassification(th.alignment)).epsilon(1e-12));
  CHECK(std::isfinite(th.lambda));

  TrialConfig rc = cfg;
  rc.f = Nonlinearity::custom("sq2", [](double t) { return (t * t - 1.0) / std::sqrt(2.0); });
  const TheoryJoin t2 = theory_for(rc);  // pure second-order component: a2 != 0
  CHECK(std::isnan(t2.gamma));
  CHECK(t2.a2 > 0.1);
}

TEST_CASE("aggregation: welford means and errors, grid order kept") {
  SweepTable t;
  SweepRow r;
  r.axis_value = 2.0;
  r.alignment_theory = 0.5;
  r.error_theory = 0.1;
  r.gamma = 1.0;
  r.lambda_theory = 3.0;
  r.alignment_emp = 0.2;
  r.error_emp = 0.30;
  t.rows.push_back(r);
  r.alignment_emp = 0.4;
  r.error_emp = 0.10;
  t.rows.push_back(r);
  SweepRow q = r;
  q.axis_value = 1.0;
  q.alignment_emp = 0.9;
  q.error_emp = 0.05;
  t.rows.push_back(q);

  const std::vector<SweepAggregate> agg = aggregate(t);
  REQUIRE(agg.size() == 2);
  CHECK(agg[0].axis_value == 2.0);  // first-seen order, not sorted
  CHECK(agg[0].count == 2);
  CHECK(agg[0].alignment_mean == doctest::Approx(0.3).epsilon(1e-12));
  // se = sd / sqrt(count); sd of {0.2, 0.4} is 0.1414...
  CHECK(agg[0].alignment_se == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(agg[0].error_mean == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(agg[0].error_se == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(agg[0].alignment_theory == 0.5);
  CHECK(agg[0].gamma == 1.0);
  CHECK(agg[1].axis_value == 1.0);
  CHECK(agg[1].count == 1);
  CHECK(std::isnan(agg[1].alignment_se));  // no spread estimate from one trial
}

TEST_CASE("csv round trip preserves every bit") {
  SweepSpec spec;
  spec.axis = SweepAxis::Rho;
  spec.grid = {0.5, 4.0};
  spec.repeats = 2;
  spec.base = small_trial();
  const SweepTable t = run_sweep(spec);
  REQUIRE(t.rows.size() == 4);

  const std::string path = sqsc_test::temp_path("sweep.csv");
  export_csv(t, path);
  const SweepTable r = import_csv(path);
  REQUIRE(r.rows.size() == t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const SweepRow& a = t.rows[i];
    const SweepRow& b = r.rows[i];
    CHECK(a.axis_value == b.axis_value);
    CHECK(a.repeat == b.repeat);
    CHECK(a.p == b.p);
    CHECK(a.n == b.n);
    CHECK(a.c == b.c);
    CHECK(a.rho == b.rho);
    CHECK(a.f_spec == b.f_spec);
    CHECK(a.method == b.method);
    CHECK(a.eps_nominal == b.eps_nominal);
    CHECK(a.sparsity_emp == b.sparsity_emp);
    CHECK(a.nnz == b.nnz);
    CHECK(a.a1 == b.a1);
    CHECK(a.a2 == b.a2);
    CHECK(a.nu == b.nu);
    CHECK(a.gamma == b.gamma);
    CHECK(a.alignment_theory == b.alignment_theory);
    CHECK(a.alignment_emp == b.alignment_emp);
    CHECK(a.error_theory == b.error_theory);
    CHECK(a.error_emp == b.error_emp);
    CHECK(a.lambda_theory == b.lambda_theory);
    CHECK(a.lambda1_emp == b.lambda1_emp);
    CHECK(a.lambda2_emp == b.lambda2_emp);
    CHECK(a.seed == b.seed);
  }
  // The schema is fixed: 24 documented columns in order.
  const std::vector<std::string> expected = {
      "axis_value",   "repeat",           "p",
      "n",            "c",                "rho",
      "f_spec",       "method",           "eps_nominal",
      "sparsity_emp", "nnz",              "a1",
      "a2",           "nu",               "gamma",
      "alignment_theory", "alignment_emp", "error_theory",
      "error_emp",    "lambda_theory",    "lambda1_emp",
      "lambda2_emp",  "time_kernel_s",    "time_eig_s",
      "seed"};
  CHECK(sweep_csv_header().size() == 25);
  CHECK(sweep_csv_header() == expected);
  sqsc_test::remove_file(path);
}

TEST_CASE("json export parses and carries the rows") {
  SweepSpec spec;
  spec.axis = SweepAxis::Rho;
  spec.grid = {2.0};
  spec.repeats = 2;
  spec.base = small_trial();
  const SweepTable t = run_sweep(spec);
  const std::string path = sqsc_test::temp_path("sweep.json");
  export_json(t, path);

  const nlohmann::json doc = nlohmann::json::parse(sqsc_test::read_file(path));
  REQUIRE(doc.is_array());
  REQUIRE(doc.size() == 2);
  const nlohmann::json& row = doc[0];
  CHECK(row["axis_value"].get<double>() == 2.0);
  // 64-bit seeds are serialized as strings to stay exact in JSON.
  CHECK(row["seed"].get<std::string>() == std::to_string(t.rows[0].seed));
  CHECK(row["f_spec"].get<std::string>() == "sign");
  sqsc_test::remove_file(path);
}

TEST_CASE("spectrum experiment: bulk, spike, and export") {
  SpectrumConfig sc;
  sc.trial.mixture.p = 512;
  sc.trial.mixture.n = 1024;
  sc.trial.mixture.rho = 4.0;
  sc.trial.f = Nonlinearity::sign();
  sc.trial.seed = 7;
  sc.bins = 60;
  sc.with_vectors = true;

  const SpectrumExperiment sx = spectrum_experiment(sc);
  REQUIRE(sx.eigenvalues.size() == 1024);
  CHECK(std::is_sorted(sx.eigenvalues.begin(), sx.eigenvalues.end()));
  REQUIRE(sx.bin_edges.size() == 61);
  REQUIRE(sx.bin_density.size() == 60);
  REQUIRE(sx.theory_density.size() == 60);
  REQUIRE(sx.support.edges.size() == 2);

  // rho = 4 is far above the transition: the informative spike is predicted
  // and visible as an isolated empirical eigenvalue near the prediction.
  REQUIRE(!sx.spikes.empty());
  const SpikePrediction& sp = sx.spikes.back();
  CHECK(sp.informative);
  REQUIRE(!sx.isolated.empty());
  // The top eigenvalue fluctuates O(lambda/sqrt(n)) at n = 1024; check the
  // prediction in relative terms.
  const double top = sx.eigenvalues.back();
  CHECK(std::abs(top - sp.location) <= 0.10 * sp.location);
  CHECK(sx.l1_bulk <= 0.1);
  REQUIRE(!sx.top_alignments.empty());
  CHECK(std::abs(sx.top_alignments[0] - sp.alignment) <= 0.1);

  const std::string path = sqsc_test::temp_path("spectrum.csv");
  export_spectrum_csv(sx, path);
  const CsvTable csv = read_csv(path);
  const std::size_t rec = csv.col("record");
  std::set<std::string> kinds;
  for (std::size_t i = 0; i < csv.rows.size(); ++i) kinds.insert(csv.rows[i][rec]);
  CHECK(kinds.count("bin") == 1);
  CHECK(kinds.count("theory") == 1);
  CHECK(kinds.count("edge") == 1);
  CHECK(kinds.count("spike") == 1);
  CHECK(kinds.count("isolated") == 1);
  CHECK(kinds.count("l1_bulk") == 1);
  sqsc_test::remove_file(path);
}

TEST_CASE("spec string round trips") {
  CHECK(parse_harness_method("selective") == Method::Selective);
  CHECK(parse_harness_method("uniform") == Method::Uniform);
  CHECK(parse_harness_method("subsample") == Method::Subsample);
  CHECK(parse_harness_method("linear") == Method::Linear);
  CHECK(std::string(to_string(Method::Uniform)) == "uniform");
  CHECK_THROWS_AS(parse_harness_method("bogus"), ParseError);

  CHECK(parse_axis("rho") == SweepAxis::Rho);
  CHECK(parse_axis("s") == SweepAxis::S);
  CHECK(parse_axis("c") == SweepAxis::C);
  CHECK(parse_axis("eps") == SweepAxis::Eps);
  CHECK(parse_axis("M") == SweepAxis::M);
  CHECK(std::string(to_string(SweepAxis::Eps)) == "eps");
  CHECK_THROWS_AS(parse_axis("bogus"), ParseError);
}

}  // TEST_SUITE
