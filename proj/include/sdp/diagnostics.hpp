#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "sdp/inference.hpp"
#include "sdp/potentials.hpp"

namespace sdp {

// Per iteration: Q(1) of every candidate edge, and for t >= 1 one entry per
// ordered pair of edges sharing a part. Mean field messages are the terms
// Q^(t-1)(source) * s_part of the target's field; belief propagation messages
// are log(m(1) / m(0)) from source to target.
nlohmann::json message_trace(const LogPotentials& pot, const InferenceConfig& config);

struct OracleCompareConfig {
  int instances = 100;
  int n = 3;
  double coupling_scale = 0.1;  // std of the binary scores
  double unary_scale = 1.0;     // std of the unary scores
  std::vector<int> iterations{1, 2, 3};
  std::uint64_t seed = 1;
};

struct OracleErrorRow {
  InferenceKind kind = InferenceKind::MeanField;
  int iterations = 0;
  double mean_abs_error = 0.0;  // over all edges of all instances
  double max_abs_error = 0.0;
};

// Random potentials checked against exhaustive enumeration. Throws
// InvalidArgument when n exceeds the enumeration cap.
std::vector<OracleErrorRow> oracle_compare(const OracleCompareConfig& config);

nlohmann::json oracle_compare_json(const OracleCompareConfig& config,
                                   const std::vector<OracleErrorRow>& rows);

}  // namespace sdp
