#pragma once

#include <cstddef>
#include <vector>

#include "sdp/potentials.hpp"

namespace sdp {

// Enumeration visits 2^|edges| assignments; beyond 20 edges it is refused.
inline constexpr std::size_t kMaxExactEdges = 20;

struct ExactResult {
  double log_partition = 0.0;
  std::vector<double> marginals;      // P(X_e = 1)
  std::vector<bool> map_assignment;   // argmax; ties go to the lexicographically smallest
  double map_score = 0.0;
};

// Brute-force marginals, partition function and MAP. Throws InvalidArgument
// when the candidate set exceeds kMaxExactEdges.
ExactResult exact_infer(const LogPotentials& pot);
std::vector<bool> exact_map(const LogPotentials& pot);

}  // namespace sdp
