#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "sdp/config.hpp"
#include "sdp/diagnostics.hpp"
#include "sdp/metrics.hpp"
#include "sdp/train.hpp"

namespace sdp {

// Library side of the command-line tool. Failures surface as ConfigError,
// DataError or NumericError; the executable maps them to exit codes.

struct TrainOutcome {
  TrainResult result;
  std::string checkpoint_path;
  std::string metrics_path;
  std::string config_path;
};

// Writes <output_dir>/model.json, metrics.jsonl (one line per epoch) and
// config.txt (the resolved config, also echoed to `log`).
TrainOutcome cmd_train(const RunConfig& config, std::ostream& log);

struct ParseOptions {
  std::string checkpoint;
  std::string input;
  std::string output;  // empty writes to `out`
  std::optional<InferenceKind> engine;
  std::optional<int> iterations;
  std::optional<double> threshold;
  std::string marginals_path;  // JSON lines of per-edge Q(1) when set
};

// Engine, T and threshold default to the values stored at training time.
void cmd_parse(const ParseOptions& options, std::ostream& out, std::ostream& log);

struct EvalOptions {
  std::string predicted;
  std::string gold;
  bool include_top = false;
  bool buckets = false;
  std::string json_path;
};

// Throws DataError naming the first misaligned sentence.
EvalReport cmd_eval(const EvalOptions& options, std::ostream& out);

struct TraceOptions {
  std::string checkpoint;
  std::string input;
  std::size_t sentence = 0;
  std::optional<InferenceKind> engine;
  std::optional<int> iterations;
};

nlohmann::json cmd_trace(const TraceOptions& options);

nlohmann::json cmd_oracle_compare(const OracleCompareConfig& config);

struct GradcheckOptions {
  std::string input;  // empty uses a built-in three-word sentence
  std::size_t sentence = 0;
  std::size_t min_coordinates = 200;
};

// Random model from `config` (dropout forced off), both engines at T = 1..3.
nlohmann::json cmd_gradcheck(const RunConfig& config, const GradcheckOptions& options);

}  // namespace sdp
