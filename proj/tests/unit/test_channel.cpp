#include <doctest.h>

#include <cmath>

#include "mulink/channel.hpp"

using namespace mulink;

TEST_CASE("iid rayleigh statistics and determinism") {
  const int draws = 25000;  // 4 entries per draw -> 1e5 samples
  Rng rng(101);
  std::complex<double> mean = 0.0;
  double var = 0.0;
  for (int t = 0; t < draws; ++t) {
    const auto C = iid_rayleigh(2, 2, rng);
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i) {
        mean += C(i, k);
        var += std::norm(C(i, k));
      }
  }
  const double n = 4.0 * draws;
  CHECK(std::abs(mean) / n < 0.02);
  CHECK(var / n == doctest::Approx(1.0).epsilon(0.02));

  Rng a(7), b(7);
  CHECK((iid_rayleigh(3, 4, a) - iid_rayleigh(3, 4, b)).norm() == 0.0);
  CHECK_THROWS_AS(iid_rayleigh(0, 4, a), std::invalid_argument);
}

TEST_CASE("large-scale parameters") {
  Rng rng(5);
  const auto p0 = large_scale({1.0, 0.81}, 0.0, rng);
  CHECK(p0.alpha[0] == doctest::Approx(1.0));
  CHECK(p0.alpha[1] == doctest::Approx(0.9));
  CHECK(p0.beta[0] == doctest::Approx(1.0));  // zero spread: no shadowing
  CHECK(p0.beta[1] == doctest::Approx(1.0));

  // 3 dB spread: 10 log10(beta) has zero mean and 3 dB std
  const int draws = 100000;
  double sum = 0.0, sum2 = 0.0;
  for (int t = 0; t < draws; ++t) {
    const auto p = large_scale({1.0}, 3.0, rng);
    const double db = 10.0 * std::log10(p.beta[0]);
    sum += db;
    sum2 += db * db;
  }
  const double mean = sum / draws;
  const double std_db = std::sqrt(sum2 / draws - mean * mean);
  CHECK(std::abs(mean) < 0.05);
  CHECK(std_db == doctest::Approx(3.0).epsilon(0.02));

  CHECK_THROWS_AS(large_scale({-1.0}, 3.0, rng), std::invalid_argument);
}

TEST_CASE("receive correlation matrix and its square root") {
  const auto id = build_rx_correlation(0.0, 3);
  CHECK((id.rxx - Eigen::MatrixXd::Identity(3, 3)).norm() == 0.0);

  const auto two = build_rx_correlation(0.8, 2);
  CHECK(two.rxx(0, 0) == 1.0);
  CHECK(two.rxx(0, 1) == doctest::Approx(0.8));
  CHECK(two.rxx(1, 0) == doctest::Approx(0.8));

  const auto four = build_rx_correlation(0.8, 4);
  CHECK(four.rxx(0, 3) == doctest::Approx(std::pow(0.8, 9)));  // (4-1)^2 = 9
  CHECK(four.rxx(1, 3) == doctest::Approx(std::pow(0.8, 4)));
  CHECK((four.root * four.root - four.rxx).norm() < 1e-10);
  CHECK((four.root - four.root.transpose()).norm() < 1e-12);
  CHECK(!four.clamped);

  CHECK_THROWS_AS(build_rx_correlation(1.0, 4), std::invalid_argument);
}

TEST_CASE("scenario 2 reproduces scenario 1 when all transforms are identity") {
  ChannelConfig c2;
  c2.scenario = ChannelScenario::kCorrelatedLargeScale;
  c2.num_users = 2;
  c2.num_rx = 3;
  c2.correlation = 0.0;
  c2.shadow_spread_db = 0.0;
  c2.path_loss_min = 1.0;
  c2.path_loss_max = 1.0;
  const ChannelModel model(c2);

  Rng rng(31);
  double var = 0.0;
  std::complex<double> mean = 0.0;
  const int draws = 20000;
  for (int t = 0; t < draws; ++t) {
    const auto ch = model.realize(rng);
    for (int k = 0; k < 2; ++k) {
      CHECK(ch.gains[static_cast<std::size_t>(k)] == doctest::Approx(1.0));
      for (int i = 0; i < 3; ++i) {
        mean += ch.C(i, k);
        var += std::norm(ch.C(i, k));
      }
    }
  }
  const double n = 6.0 * draws;
  CHECK(std::abs(mean) / n < 0.02);
  CHECK(var / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("scenario 2 empirical receive correlation matches the model") {
  ChannelConfig cfg;
  cfg.scenario = ChannelScenario::kCorrelatedLargeScale;
  cfg.num_users = 1;
  cfg.num_rx = 4;
  cfg.correlation = 0.8;
  cfg.shadow_spread_db = 3.0;
  const ChannelModel model(cfg);

  Rng rng(77);
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(4, 4);
  const int draws = 100000;
  for (int t = 0; t < draws; ++t) {
    const auto ch = model.realize(rng);
    const double g = ch.gains[0];
    acc += (ch.C.col(0) * ch.C.col(0).adjoint()) / (g * g);
  }
  acc /= draws;
  const auto& expected = model.correlation().rxx;
  CHECK((acc.real() - expected).norm() / expected.norm() < 0.02);
}

TEST_CASE("channel application") {
  Rng rng(9);
  Eigen::MatrixXcd C = iid_rayleigh(3, 2, rng);
  Eigen::VectorXcd x(3);
  x << std::complex<double>{1, 0}, std::complex<double>{0, -1}, std::complex<double>{0.5, 0.5};

  // noiseless: exact product
  Rng quiet(1);
  CHECK((apply_channel(C, x, 0.0, quiet) - C * x).norm() == 0.0);

  // zero input: empirical noise variance within 2%
  const Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(3);
  double var = 0.0;
  const int draws = 50000;
  for (int t = 0; t < draws; ++t) var += apply_channel(C, zero, 0.7, rng).squaredNorm();
  CHECK(var / (2.0 * draws) == doctest::Approx(0.7).epsilon(0.02));

  // single-user scalar channel
  Eigen::MatrixXcd one(1, 1);
  one << std::complex<double>{1, 0};
  Eigen::VectorXcd xs(1);
  xs << std::complex<double>{2, 1};
  Rng r2(4);
  const auto y = apply_channel(one, xs, 0.0, r2);
  CHECK(y(0) == xs(0));

  CHECK_THROWS_AS(apply_channel(C, xs, 0.1, rng), std::invalid_argument);
  CHECK_THROWS_AS(apply_channel(C, x, -1.0, rng), std::invalid_argument);
}
