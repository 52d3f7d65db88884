#include "mulink/constellation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mulink {

void Constellation::validate() const {
  if (points.size() != (std::size_t{1} << bits_per_symbol))
    throw std::invalid_argument("constellation: need 2^bits points");
  double energy = 0.0;
  for (const auto& p : points) energy += std::norm(p);
  energy /= static_cast<double>(points.size());
  if (std::abs(energy - 1.0) > 1e-12)
    throw std::invalid_argument("constellation: average energy must be 1");
}

const Constellation& qpsk_anti_gray() {
  static const Constellation c = [] {
    const double s = 1.0 / std::sqrt(2.0);
    Constellation q;
    q.bits_per_symbol = 2;
    q.points = {
        {s, s},    // 00
        {-s, -s},  // 01
        {s, -s},   // 10
        {-s, s},   // 11
    };
    q.validate();
    return q;
  }();
  return c;
}

std::vector<std::complex<double>> modulate(const Constellation& c,
                                           std::span<const std::uint8_t> bits) {
  const int bps = c.bits_per_symbol;
  if (bits.size() % static_cast<std::size_t>(bps) != 0)
    throw std::invalid_argument("modulate: bit count not divisible by bits per symbol");
  std::vector<std::complex<double>> symbols;
  symbols.reserve(bits.size() / static_cast<std::size_t>(bps));
  for (std::size_t k = 0; k < bits.size(); k += static_cast<std::size_t>(bps)) {
    std::uint32_t label = 0;
    for (int j = 0; j < bps; ++j) label = (label << 1) | (bits[k + static_cast<std::size_t>(j)] & 1u);
    symbols.push_back(c.points[label]);
  }
  return symbols;
}

namespace {

// stable log(1 + e^x)
double log1pexp(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

// probability of bit value b under an LLR log(p0/p1)
double bit_prob(double llr, int b) {
  return 1.0 / (1.0 + std::exp(b == 0 ? -llr : llr));
}

}  // namespace

SoftSymbol soft_symbol(const Constellation& c, std::span<const double> prior_llrs) {
  if (prior_llrs.size() != static_cast<std::size_t>(c.bits_per_symbol))
    throw std::invalid_argument("soft_symbol: one prior LLR per bit required");
  SoftSymbol out;
  double energy = 0.0;
  for (std::uint32_t a = 0; a < static_cast<std::uint32_t>(c.size()); ++a) {
    double p = 1.0;
    for (int j = 0; j < c.bits_per_symbol; ++j)
      p *= bit_prob(prior_llrs[static_cast<std::size_t>(j)], c.bit_of(a, j));
    out.mean += p * c.points[a];
    energy += p * std::norm(c.points[a]);
  }
  out.variance = std::max(energy - std::norm(out.mean), 0.0);
  return out;
}

std::vector<double> demap_llr(const Constellation& c, std::complex<double> y,
                              double mu, double nu2,
                              std::span<const double> prior_llrs) {
  if (prior_llrs.size() != static_cast<std::size_t>(c.bits_per_symbol))
    throw std::invalid_argument("demap_llr: one prior LLR per bit required");
  if (!(nu2 > 0.0)) throw std::invalid_argument("demap_llr: nu2 must be positive");

  std::vector<double> gauss(static_cast<std::size_t>(c.size()));
  for (std::uint32_t a = 0; a < static_cast<std::uint32_t>(c.size()); ++a)
    gauss[a] = -std::norm(y - mu * c.points[a]) / nu2;
  std::vector<double> logp0(static_cast<std::size_t>(c.bits_per_symbol));
  std::vector<double> logp1(static_cast<std::size_t>(c.bits_per_symbol));
  for (int j = 0; j < c.bits_per_symbol; ++j) {
    logp0[static_cast<std::size_t>(j)] = -log1pexp(-prior_llrs[static_cast<std::size_t>(j)]);
    logp1[static_cast<std::size_t>(j)] = -log1pexp(prior_llrs[static_cast<std::size_t>(j)]);
  }

  // per-bit sums use the priors of the other bits only, so the result is the
  // extrinsic part by construction and the demapped bit's own prior cannot
  // leak through
  std::vector<double> extrinsic(static_cast<std::size_t>(c.bits_per_symbol));
  std::vector<double> metric(static_cast<std::size_t>(c.size()));
  for (int j = 0; j < c.bits_per_symbol; ++j) {
    double max0 = -std::numeric_limits<double>::infinity();
    double max1 = max0;
    for (std::uint32_t a = 0; a < static_cast<std::uint32_t>(c.size()); ++a) {
      double m = gauss[a];
      for (int jp = 0; jp < c.bits_per_symbol; ++jp) {
        if (jp == j) continue;
        m += c.bit_of(a, jp) ? logp1[static_cast<std::size_t>(jp)]
                             : logp0[static_cast<std::size_t>(jp)];
      }
      metric[a] = m;
      (c.bit_of(a, j) ? max1 : max0) = std::max(c.bit_of(a, j) ? max1 : max0, m);
    }
    double s0 = 0.0, s1 = 0.0;
    for (std::uint32_t a = 0; a < static_cast<std::uint32_t>(c.size()); ++a) {
      if (c.bit_of(a, j))
        s1 += std::exp(metric[a] - max1);
      else
        s0 += std::exp(metric[a] - max0);
    }
    extrinsic[static_cast<std::size_t>(j)] = (max0 + std::log(s0)) - (max1 + std::log(s1));
  }
  return extrinsic;
}

}  // namespace mulink
