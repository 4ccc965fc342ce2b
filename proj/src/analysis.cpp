#include "crtnc/analysis.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace crtnc {

double expected_recovery_exact_formula(std::uint64_t k, std::uint64_t l) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  double miss = std::pow(1.0 - 1.0 / static_cast<double>(k), static_cast<double>(l));
  return (1.0 - miss) * (1.0 - miss);
}

double approx_recovery(double r) {
  if (r < 0.0) throw std::invalid_argument("r must be non-negative");
  double miss = std::pow(0.367, r);
  return (1.0 - miss) * (1.0 - miss);
}

CoverageEstimate coverage_oracle(std::uint64_t k, std::uint64_t l, std::uint64_t trials, Rng& rng) {
  if (k < 1 || trials < 1) throw std::invalid_argument("k and trials must be positive");
  const std::uint64_t elements = 2 * k;
  std::vector<char> covered(elements);
  double sum = 0.0, sum_sq = 0.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::fill(covered.begin(), covered.end(), 0);
    for (std::uint64_t draw = 0; draw < l; ++draw) {
      std::uint64_t a = rng.below(elements);
      std::uint64_t b = rng.below(elements - 1);
      if (b >= a) ++b;
      covered[a] = 1;
      covered[b] = 1;
    }
    std::uint64_t hit = 0;
    for (std::uint64_t i = 0; i < k; ++i) hit += (covered[2 * i] && covered[2 * i + 1]);
    double rate = static_cast<double>(hit) / static_cast<double>(k);
    sum += rate;
    sum_sq += rate * rate;
  }
  CoverageEstimate est;
  est.trials = trials;
  est.mean = sum / static_cast<double>(trials);
  if (trials > 1) {
    double var = (sum_sq - sum * sum / static_cast<double>(trials)) /
                 static_cast<double>(trials - 1);
    est.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(trials));
  }
  return est;
}

double coverage_exact_small(std::uint64_t k, std::uint64_t l) {
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::cpp_rational;
  if (k < 1) throw std::invalid_argument("k must be positive");
  const auto exp = static_cast<unsigned>(l);
  const cpp_int kk(k);
  cpp_int q1_num = pow(cpp_int(kk - 1), exp);
  cpp_int q1_den = pow(kk, exp);
  cpp_int q2_num = pow(cpp_int((2 * kk - 2) * (2 * kk - 3)), exp);  // zero when k = 1
  cpp_int q2_den = pow(cpp_int(2 * kk * (2 * kk - 1)), exp);
  cpp_rational e = 1 - 2 * cpp_rational(q1_num, q1_den) + cpp_rational(q2_num, q2_den);
  return e.convert_to<double>();
}

OverheadComparison compare_overhead(std::uint64_t k, std::uint64_t receivers,
                                    std::uint64_t field_size, unsigned m,
                                    std::size_t frame_bytes) {
  if (k < 1 || receivers < 1 || m < 2 || frame_bytes < 1)
    throw std::invalid_argument("overhead comparison needs positive parameters");
  if (field_size <= receivers)
    throw std::invalid_argument("coding-vector field size must exceed the receiver count");
  OverheadComparison cmp;
  cmp.k = k;
  cmp.receivers = receivers;
  cmp.field_size = field_size;
  cmp.m = m;
  cmp.frame_bytes = frame_bytes;
  const std::uint64_t symbol_bits = std::bit_width(field_size - 1);
  cmp.vector_head_bytes = static_cast<std::size_t>((k * symbol_bits + 7) / 8);
  cmp.crt_head_bytes = 2 * ((m + 7) / 8);
  cmp.vector_fraction =
      static_cast<double>(cmp.vector_head_bytes) / static_cast<double>(frame_bytes);
  cmp.crt_fraction = static_cast<double>(cmp.crt_head_bytes) / static_cast<double>(frame_bytes);
  cmp.vector_feasible = cmp.vector_head_bytes <= frame_bytes;
  cmp.crt_feasible = cmp.crt_head_bytes <= frame_bytes;
  return cmp;
}

}  // namespace crtnc
