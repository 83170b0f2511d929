#ifndef PRAG_NUMERIC_H_
#define PRAG_NUMERIC_H_

#include <limits>
#include <span>
#include <vector>

namespace prag {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(sum(exp(x))) with max shifting. Returns -inf for an all -inf input.
double log_sum_exp(std::span<const double> log_weights);

// Probability vector proportional to exp(log_weights). Throws
// kFailedPrecondition("degenerate distribution") when every entry is -inf
// and kInvalidArgument when the input is empty.
std::vector<double> log_normalize(std::span<const double> log_weights);

// Same normalization, but stays in log space.
std::vector<double> log_normalize_log(std::span<const double> log_weights);

}  // namespace prag

#endif  // PRAG_NUMERIC_H_
