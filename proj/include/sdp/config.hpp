#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sdp/model.hpp"
#include "sdp/train.hpp"

namespace sdp {

// Everything a run needs, flattened into key=value pairs for files and
// command-line overrides.
struct RunConfig {
  ModelConfig model;
  TrainConfig train;
  int min_count = 7;
  std::string train_path;
  std::string dev_path;
  std::string embeddings_path;
  std::string output_dir;
};

// Keys in the order used by to_text().
const std::vector<std::string>& run_config_keys();

// Sets one key from its textual value. Unknown keys and unparsable values are
// ConfigErrors.
void set_value(RunConfig& config, const std::string& key, const std::string& value);
std::string get_value(const RunConfig& config, const std::string& key);

// "key=value" as given on the command line.
void apply_override(RunConfig& config, const std::string& assignment);

// UTF-8 text, one key=value per line, '#' starts a comment, blank lines are
// ignored. Errors carry the source name and line number.
RunConfig parse_run_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_run_config(const std::string& path);

// Throws ConfigError for out-of-range values.
void validate(const RunConfig& config);

// Every key with its resolved value; parse_run_config(to_text(c)) == c.
std::string to_text(const RunConfig& config);

}  // namespace sdp
