#include "prag/numeric.h"

#include <algorithm>
#include <cmath>

#include "prag/error.h"

namespace prag {

double log_sum_exp(std::span<const double> log_weights) {
  if (log_weights.empty()) return kNegInf;
  const double max = *std::max_element(log_weights.begin(), log_weights.end());
  if (max == kNegInf) return kNegInf;
  if (std::isinf(max)) return max;
  double sum = 0.0;
  for (double w : log_weights) sum += std::exp(w - max);
  return max + std::log(sum);
}

std::vector<double> log_normalize_log(std::span<const double> log_weights) {
  if (log_weights.empty()) throw_invalid_argument("empty distribution");
  const double z = log_sum_exp(log_weights);
  if (z == kNegInf) throw_failed_precondition("degenerate distribution");
  std::vector<double> out(log_weights.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = log_weights[i] - z;
  return out;
}

std::vector<double> log_normalize(std::span<const double> log_weights) {
  if (log_weights.empty()) throw_invalid_argument("empty distribution");
  const double max = *std::max_element(log_weights.begin(), log_weights.end());
  if (max == kNegInf) throw_failed_precondition("degenerate distribution");
  std::vector<double> out(log_weights.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::exp(log_weights[i] - max);
    sum += out[i];
  }
  for (auto& p : out) p /= sum;
  return out;
}

}  // namespace prag
