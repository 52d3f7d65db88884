#include <doctest.h>

#include <cmath>

#include "mulink/decoder.hpp"
#include "mulink/generator_matrix.hpp"
#include "mulink/graph_analysis.hpp"
#include "mulink/peg.hpp"
#include "mulink/rng.hpp"
#include "oracles.hpp"

using namespace mulink;

TEST_CASE("variable-to-check update") {
  // standard BP: the (1 - rho) term vanishes
  const double msgs1[] = {0.7, -1.1, 0.4};
  const double rho1[] = {1.0, 1.0, 1.0};
  CHECK(variable_to_check_message(0.2, msgs1, rho1, 1) ==
        doctest::Approx(0.2 + 0.7 + 0.4));

  // degree-1 variable: empty exclusion sum
  const double msgs2[] = {0.9};
  const double rho2[] = {0.25};
  CHECK(variable_to_check_message(1.5, msgs2, rho2, 0) ==
        doctest::Approx(1.5 - 0.75 * 0.9));

  // hand evaluation with mixed weights
  const double msgs3[] = {0.5, -0.2, 0.3};
  const double rho3[] = {0.6, 0.6, 0.5};
  CHECK(variable_to_check_message(1.0, msgs3, rho3, 2) == doctest::Approx(1.03));

  // clipping
  const double big[] = {49.0, 49.0};
  const double ones[] = {1.0, 1.0};
  CHECK(variable_to_check_message(30.0, big, ones, 1) == kMessageClip);
}

TEST_CASE("check-to-variable update") {
  const double with_zero[] = {0.0, 1.3, -2.0};
  CHECK(check_to_variable_message(with_zero) == 0.0);

  const double single[] = {0.8};
  CHECK(check_to_variable_message(single) == doctest::Approx(0.8));

  const double pair[] = {1.2, -0.4};
  const double expected = 2.0 * std::atanh(std::tanh(0.6) * std::tanh(-0.2));
  CHECK(check_to_variable_message(pair) == doctest::Approx(expected));
  CHECK(expected == doctest::Approx(-0.2128).epsilon(1e-3));

  // saturated inputs stay clipped and finite
  const double sat[] = {50.0, 50.0, 50.0};
  const double lam = check_to_variable_message(sat);
  CHECK(std::isfinite(lam));
  CHECK(lam <= kMessageClip);
}

TEST_CASE("check message magnitude is contracted below the smallest input") {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> psi(2 + trial % 5);
    double min_abs = kMessageClip;
    for (auto& p : psi) {
      p = rng.uniform(-8.0, 8.0);
      min_abs = std::min(min_abs, std::abs(p));
    }
    CHECK(std::abs(check_to_variable_message(psi)) <= min_abs + 1e-9);
  }
}

TEST_CASE("belief computation") {
  CHECK(compute_belief(0.7, {}, {}) == 0.7);

  const double msgs[] = {1.0, -0.4};
  const double ones[] = {1.0, 1.0};
  CHECK(compute_belief(0.5, msgs, ones) == doctest::Approx(1.1));

  const double rho[] = {0.5, 1.0};
  CHECK(compute_belief(0.5, msgs, rho) == doctest::Approx(0.6));
}

TEST_CASE("noise-free input converges in one iteration") {
  const auto H = peg_construct(96, 48, 3);
  const std::vector<double> llr(96, 10.0);
  const auto res = decode(H, ReweightingVector::ones(48), llr, 30);
  CHECK(res.converged);
  CHECK(res.iterations_used == 1);
  CHECK(std::count(res.hard_bits.begin(), res.hard_bits.end(), 1) == 0);
}

TEST_CASE("converged flag always implies a zero syndrome") {
  const auto H = peg_construct(96, 48, 3);
  Rng rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> llr(96);
    for (auto& l : llr) l = rng.uniform(-4.0, 4.0);
    const auto res = decode(H, ReweightingVector::ones(48), llr, 10);
    if (res.converged) {
      const auto s = syndrome(H, res.hard_bits);
      CHECK(std::count(s.begin(), s.end(), 1) == 0);
    }
    CHECK(res.iterations_used <= 10);
    CHECK(res.extrinsic.size() == llr.size());
  }
}

TEST_CASE("rho = 1 reproduces the reference sum-product decoder bit for bit") {
  const auto H = peg_construct(96, 48, 3);
  RbpDecoder dec(H, ReweightingVector::ones(48));
  Rng rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<double> llr(96);
    for (auto& l : llr) l = rng.uniform(-5.0, 5.0);
    const auto mine = dec.decode(llr, 15);
    const auto ref = test::reference_sum_product(H, llr, 15);
    CHECK(mine.hard_bits == ref.hard_bits);
    CHECK(mine.converged == ref.converged);
    CHECK(mine.iterations_used == ref.iterations_used);
    for (std::size_t j = 0; j < llr.size(); ++j)
      CHECK(mine.beliefs[j] == ref.beliefs[j]);  // bit-identical float path
    // final messages identical in the shared edge order
    const auto& last_psi = ref.psi_history.back();
    for (std::size_t e = 0; e < last_psi.size(); ++e)
      CHECK(dec.psi()[e] == last_psi[e]);
  }
}

TEST_CASE("uniform rho matches an independent URW implementation over the whole trajectory") {
  const auto H = peg_construct(60, 30, 3);
  const double rho_v = 0.5667;
  RbpDecoder dec(H, ReweightingVector::uniform(30, rho_v));
  Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> llr(60);
    for (auto& l : llr) l = rng.uniform(-3.0, 3.0);
    DecodeOptions opt;
    opt.early_stop = false;
    const auto mine = dec.decode(llr, 8, opt);
    const auto ref = test::reference_urw(H, rho_v, llr, 8, false);
    CHECK(mine.hard_bits == ref.hard_bits);
    for (std::size_t j = 0; j < llr.size(); ++j)
      CHECK(mine.beliefs[j] == ref.beliefs[j]);
    const auto& last_psi = ref.psi_history.back();
    for (std::size_t e = 0; e < last_psi.size(); ++e)
      CHECK(dec.psi()[e] == last_psi[e]);
  }
}

TEST_CASE("beliefs on a cycle-free code equal exact marginals") {
  // tree-structured code, N = 7
  const ParityCheckMatrix H(3, 7, {{0, 1, 2}, {2, 3, 4}, {4, 5, 6}});
  REQUIRE(girth(H) == kInfiniteGirth);
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> llr(7);
    for (auto& l : llr) l = rng.uniform(-3.0, 3.0);
    DecodeOptions opt;
    opt.early_stop = false;  // run to the fixed point
    const auto res = decode(H, ReweightingVector::ones(3), llr, 20, opt);
    const auto exact = test::exact_marginal_llrs(H, llr);
    for (std::size_t j = 0; j < llr.size(); ++j)
      CHECK(std::abs(res.beliefs[j] - exact[j]) < 1e-9);
  }
}

TEST_CASE("decode validates inputs") {
  const auto H = peg_construct(12, 6, 2);
  CHECK_THROWS_AS(decode(H, ReweightingVector::ones(6), std::vector<double>(5, 0.0), 5),
                  std::invalid_argument);
  CHECK_THROWS_AS(decode(H, ReweightingVector::ones(5), std::vector<double>(12, 0.0), 5),
                  std::invalid_argument);
  CHECK_THROWS_AS(decode(H, ReweightingVector::uniform(6, 1.5), std::vector<double>(12, 0.0), 5),
                  std::invalid_argument);
  CHECK_THROWS_AS(decode(H, ReweightingVector::uniform(6, 0.0), std::vector<double>(12, 0.0), 5),
                  std::invalid_argument);
  CHECK_THROWS_AS(decode(H, ReweightingVector::ones(6), std::vector<double>(12, 0.0), 0),
                  std::invalid_argument);
}

TEST_CASE("warm start continues from retained check messages") {
  const auto H = peg_construct(96, 48, 3);
  const auto G = GeneratorMatrix::from_parity_check(H);
  Rng rng(8);
  std::vector<std::uint8_t> msg(static_cast<std::size_t>(G.message_length()));
  for (auto& b : msg) b = rng.bit();
  const auto cw = G.encode(msg);
  std::vector<double> llr(96);
  for (std::size_t j = 0; j < llr.size(); ++j)
    llr[j] = (cw[j] ? -1.0 : 1.0) * 0.8 + rng.normal();

  RbpDecoder dec(H, ReweightingVector::ones(48));
  DecodeOptions cold;
  const auto first = dec.decode(llr, 2, cold);
  DecodeOptions warm;
  warm.warm_start = true;
  const auto second = dec.decode(llr, 2, warm);
  // two warm passes of 2 iterations match one cold pass of 4 when nothing
  // converged early
  RbpDecoder dec2(H, ReweightingVector::ones(48));
  const auto straight = dec2.decode(llr, 4, cold);
  if (!first.converged && !second.converged && !straight.converged) {
    for (std::size_t j = 0; j < llr.size(); ++j)
      CHECK(second.beliefs[j] == straight.beliefs[j]);
  }
}
