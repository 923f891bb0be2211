#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "doctest.h"
#include "sqsc/synth.hpp"
#include "temp_files.hpp"

using namespace sqsc;

namespace {

MixtureConfig base_cfg() {
  MixtureConfig cfg;
  cfg.p = 64;
  cfg.n = 37;
  cfg.rho = 1.5;
  cfg.seed = 42;
  return cfg;
}

}  // namespace

TEST_SUITE("synth") {

TEST_CASE("generation is deterministic and thread-count independent") {
  const MixtureConfig cfg = base_cfg();
  const DataMatrix a = generate(cfg, 1);
  const DataMatrix b = generate(cfg, 4);
  REQUIRE(a.values.rows() == cfg.p);
  REQUIRE(a.values.cols() == cfg.n);
  CHECK((a.values.array() == b.values.array()).all());
  CHECK(a.labels == b.labels);

  MixtureConfig other = cfg;
  other.seed = 43;
  const DataMatrix c = generate(other, 1);
  CHECK((a.values.array() != c.values.array()).any());

  MixtureConfig student = cfg;
  student.noise = NoiseLaw::StudentT;
  student.student_dof = 7;
  const DataMatrix s1 = generate(student, 1);
  const DataMatrix s2 = generate(student, 3);
  CHECK((s1.values.array() == s2.values.array()).all());
}

TEST_CASE("mixture mean vector: exact norm and class sign convention") {
  MixtureConfig cfg = base_cfg();
  cfg.p = 101;
  cfg.rho = 2.7;
  for (MuDirection dir : {MuDirection::OnesOverSqrtP, MuDirection::RandomUnit}) {
    cfg.mu_direction = dir;
    const Eigen::VectorXd mu = mixture_mu(cfg);
    CHECK(mu.squaredNorm() == doctest::Approx(2.7).epsilon(1e-12));
  }
  cfg.mu_direction = MuDirection::OnesOverSqrtP;
  const Eigen::VectorXd mu = mixture_mu(cfg);
  for (int i = 0; i < mu.size(); ++i)
    CHECK(mu[i] == doctest::Approx(std::sqrt(2.7 / 101.0)).epsilon(1e-12));

  // Columns with label +1 sit at +mu: the label-weighted mean recovers mu.
  MixtureConfig big;
  big.p = 200;
  big.n = 4000;
  big.rho = 9.0;
  big.seed = 7;
  const DataMatrix X = generate(big);
  const Eigen::VectorXd mu_big = mixture_mu(big);
  Eigen::VectorXd v(big.n);
  for (Index j = 0; j < big.n; ++j) v[j] = X.labels[static_cast<std::size_t>(j)];
  const Eigen::VectorXd mu_hat = (X.values * v) / static_cast<double>(big.n);
  CHECK((mu_hat - mu_big).norm() <= 0.5);  // noise term is O(sqrt(p/n))
}

TEST_CASE("labels respect the balance fraction; eta matches the layout") {
  MixtureConfig cfg = base_cfg();
  cfg.n = 10;
  cfg.balance = 0.5;
  const DataMatrix X = generate(cfg);
  const long minus = std::count(X.labels.begin(), X.labels.end(), -1);
  CHECK(minus == 5);

  for (double bal : {0.3, 0.5, 0.77}) {
    cfg.balance = bal;
    cfg.n = 1000;
    const DataMatrix Y = generate(cfg);
    const double sum = std::accumulate(Y.labels.begin(), Y.labels.end(), 0.0);
    CHECK(imbalance_eta(cfg) == doctest::Approx(sum / 1000.0).epsilon(1e-12));
  }
}

TEST_CASE("noise laws: kurtosis constants and empirical moments") {
  CHECK(kurtosis(NoiseLaw::Gaussian) == 3.0);
  CHECK(kurtosis(NoiseLaw::Rademacher) == 1.0);
  CHECK(kurtosis(NoiseLaw::StudentT, 7) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(kurtosis(NoiseLaw::StudentT, 10) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK_THROWS_AS(kurtosis(NoiseLaw::StudentT, 4), DomainError);

  MixtureConfig cfg;
  cfg.p = 1000;
  cfg.n = 1000;
  cfg.rho = 0.0;  // pure noise
  cfg.seed = 2024;
  for (NoiseLaw law : {NoiseLaw::Gaussian, NoiseLaw::Rademacher, NoiseLaw::StudentT}) {
    cfg.noise = law;
    const DataMatrix X = generate(cfg);
    const double n_entries = static_cast<double>(cfg.p * cfg.n);
    const double mean = X.values.sum() / n_entries;
    const double m2 = X.values.array().square().sum() / n_entries;
    const double m4 = X.values.array().pow(4).sum() / n_entries;
    CAPTURE(static_cast<int>(law));
    CHECK(std::abs(mean) <= 5e-3);
    CHECK(m2 == doctest::Approx(1.0).epsilon(0.02));
    CHECK(std::abs(m4 / (m2 * m2) - kurtosis(law, cfg.student_dof)) <= 0.2);
  }
}

TEST_CASE("standardize: zero global mean, unit mean square, rejects constants") {
  MixtureConfig cfg = base_cfg();
  cfg.p = 40;
  cfg.n = 200;
  DataMatrix X = generate(cfg);
  X.values.array() = X.values.array() * 3.7 + 0.9;  // arbitrary affine distortion
  const DataMatrix Y = standardize(X);
  REQUIRE(Y.values.rows() == X.values.rows());
  // Per-coordinate mean across samples is (numerically) zero...
  const Eigen::VectorXd row_means = Y.values.rowwise().mean();
  CHECK(row_means.cwiseAbs().maxCoeff() <= 1e-12);
  // ...and the global mean-square entry is exactly one.
  const double msq =
      Y.values.array().square().sum() / static_cast<double>(Y.values.size());
  CHECK(msq == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(Y.labels == X.labels);

  DataMatrix flat;
  flat.values = Eigen::MatrixXd::Constant(5, 8, 3.0);
  CHECK_THROWS_AS(standardize(flat), DomainError);
}

TEST_CASE("idx loading: round trip, label split, and error paths") {
  const std::string img = sqsc_test::temp_path("images-idx3-ubyte");
  const std::string lab = sqsc_test::temp_path("labels-idx1-ubyte");
  // Six 2x2 images, alternating labels 0/1, pixel value = image index * 40.
  std::vector<std::uint8_t> pixels;
  std::vector<std::uint8_t> labels;
  for (int i = 0; i < 6; ++i) {
    for (int k = 0; k < 4; ++k) pixels.push_back(static_cast<std::uint8_t>(i * 40 + k));
    labels.push_back(static_cast<std::uint8_t>(i % 2));
  }
  sqsc_test::write_idx_pair(img, lab, 2, 2, pixels, labels);

  const DataMatrix X = load_idx(img, lab, 0, 1, 4, /*seed=*/5);
  REQUIRE(X.values.rows() == 4);  // p = 2*2
  REQUIRE(X.values.cols() == 4);
  REQUIRE(X.labels.size() == 4);
  // First ceil(n/2) columns carry class_a == label -1.
  CHECK(X.labels[0] == -1);
  CHECK(X.labels[1] == -1);
  CHECK(X.labels[2] == 1);
  CHECK(X.labels[3] == 1);
  // Pixels are byte/255 in [0,1]; class-a images have even source indices,
  // whose pixel bytes are 40*i..40*i+3 for i in {0,2,4}.
  for (int j = 0; j < 4; ++j)
    for (int r = 0; r < 4; ++r) {
      const double v = X.values(r, j);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      const double scaled = v * 255.0;
      CHECK(std::abs(scaled - std::round(scaled)) <= 1e-9);
    }
  // Determinism in the subset seed.
  const DataMatrix X2 = load_idx(img, lab, 0, 1, 4, 5);
  CHECK((X.values.array() == X2.values.array()).all());

  CHECK_THROWS_AS(load_idx(img, lab, 0, 0, 4, 5), DomainError);  // equal classes
  CHECK_THROWS_AS(load_idx(img, lab, 0, 1, 50, 5), DomainError);  // not enough samples
  CHECK_THROWS_AS(load_idx("/nonexistent", lab, 0, 1, 4, 5), IoError);

  const std::string bad = sqsc_test::temp_path("bad-idx");
  sqsc_test::write_file(bad, "not an idx file at all");
  CHECK_THROWS_AS(load_idx(bad, lab, 0, 1, 4, 5), IoError);

  sqsc_test::remove_file(img);
  sqsc_test::remove_file(lab);
  sqsc_test::remove_file(bad);
}

TEST_CASE("noise spec strings") {
  NoiseLaw law;
  int dof = 0;
  parse_noise("gaussian", law, dof);
  CHECK(law == NoiseLaw::Gaussian);
  parse_noise("rademacher", law, dof);
  CHECK(law == NoiseLaw::Rademacher);
  parse_noise("student:dof=9", law, dof);
  CHECK(law == NoiseLaw::StudentT);
  CHECK(dof == 9);
  CHECK(to_string(NoiseLaw::StudentT, 9) == "student:dof=9");
  CHECK(to_string(NoiseLaw::Gaussian, 7) == "gaussian");
  CHECK_THROWS_AS(parse_noise("bogus", law, dof), ParseError);
  CHECK_THROWS_AS(parse_noise("student:dof=3", law, dof), DomainError);
}

}  // TEST_SUITE
