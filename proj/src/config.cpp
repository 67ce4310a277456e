#include "sdp/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "sdp/error.hpp"

namespace sdp {
namespace {

struct Key {
  std::string name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expected) {
  throw ConfigError("config key '" + key + "': expected " + expected + ", got '" + value + "'");
}

template <typename T>
T parse_number(const std::string& key, const std::string& s, const char* expected) {
  T v{};
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) bad_value(key, s, expected);
  return v;
}

bool parse_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  bad_value(key, s, "true or false");
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <typename T, typename Access>
Key numeric(const std::string& name, Access access, const char* expected) {
  return {name,
          [name, access, expected](RunConfig& c, const std::string& s) {
            access(c) = parse_number<T>(name, s, expected);
          },
          [access](const RunConfig& c) {
            const T v = access(c);
            if constexpr (std::is_floating_point_v<T>) return format_double(v);
            else return std::to_string(v);
          }};
}

template <typename Access>
Key integer(const std::string& name, Access access) {
  using T = std::remove_reference_t<decltype(access(std::declval<RunConfig&>()))>;
  return numeric<T>(name, access, "an integer");
}

template <typename Access>
Key real(const std::string& name, Access access) {
  return numeric<double>(name, access, "a number");
}

template <typename Access>
Key flag(const std::string& name, Access access) {
  return {name, [name, access](RunConfig& c, const std::string& s) { access(c) = parse_bool(name, s); },
          [access](const RunConfig& c) {
            return std::string(access(c) ? "true" : "false");
          }};
}

template <typename Access>
Key text(const std::string& name, Access access) {
  return {name, [access](RunConfig& c, const std::string& s) { access(c) = s; },
          [access](const RunConfig& c) { return access(c); }};
}

#define FIELD(expr) [](auto& c) -> auto& { return expr; }

const std::vector<Key>& keys() {
  static const std::vector<Key> k = {
      // model
      integer("word_dim", FIELD(c.model.word_dim)),
      integer("pos_dim", FIELD(c.model.pos_dim)),
      integer("pretrained_out_dim", FIELD(c.model.pretrained_out_dim)),
      integer("encoder_layers", FIELD(c.model.encoder_layers)),
      integer("encoder_hidden", FIELD(c.model.encoder_hidden)),
      integer("unary_dim", FIELD(c.model.unary_dim)),
      integer("binary_dim", FIELD(c.model.binary_dim)),
      real("fnn_negative_slope", FIELD(c.model.fnn_negative_slope)),
      flag("use_sib", FIELD(c.model.parts.sibling)),
      flag("use_cop", FIELD(c.model.parts.coparent)),
      flag("use_gp", FIELD(c.model.parts.grandparent)),
      real("unary_init_std", FIELD(c.model.unary_init_std)),
      real("binary_init_std", FIELD(c.model.binary_init_std)),
      real("dropout_embed", FIELD(c.model.dropout_embed)),
      real("dropout_lstm_input", FIELD(c.model.dropout_lstm_input)),
      real("dropout_lstm_recurrent", FIELD(c.model.dropout_lstm_recurrent)),
      real("dropout_unary_edge", FIELD(c.model.dropout_unary_edge)),
      real("dropout_unary_label", FIELD(c.model.dropout_unary_label)),
      real("dropout_binary", FIELD(c.model.dropout_binary)),
      // inference
      {"inference",
       [](RunConfig& c, const std::string& s) { c.train.inference.kind = parse_inference_kind(s); },
       [](const RunConfig& c) { return std::string(inference_name(c.train.inference.kind)); }},
      integer("iterations", FIELD(c.train.inference.iterations)),
      real("damping", FIELD(c.train.inference.damping)),
      real("logit_clamp", FIELD(c.train.inference.logit_clamp)),
      real("threshold", FIELD(c.train.threshold)),
      // objective and optimizer
      real("lambda", FIELD(c.train.objective.lambda)),
      flag("train_top_label", FIELD(c.train.objective.train_top_label)),
      real("learning_rate", FIELD(c.train.optimizer.learning_rate)),
      real("beta1", FIELD(c.train.optimizer.beta1)),
      real("beta2", FIELD(c.train.optimizer.beta2)),
      real("epsilon", FIELD(c.train.optimizer.epsilon)),
      real("lr_decay", FIELD(c.train.optimizer.lr_decay)),
      integer("decay_every_steps", FIELD(c.train.optimizer.decay_every_steps)),
      real("l2", FIELD(c.train.optimizer.l2)),
      // schedule
      integer("amsgrad_patience_steps", FIELD(c.train.amsgrad_patience_steps)),
      integer("early_stop_steps", FIELD(c.train.early_stop_steps)),
      integer("max_steps", FIELD(c.train.max_steps)),
      integer("batch_token_budget", FIELD(c.train.batch_token_budget)),
      integer("max_train_length", FIELD(c.train.max_train_length)),
      real("stop_at_dev_f1", FIELD(c.train.stop_at_dev_f1)),
      flag("include_top", FIELD(c.train.eval_include_top)),
      integer("seed", FIELD(c.train.seed)),
      integer("threads", FIELD(c.train.threads)),
      integer("min_count", FIELD(c.min_count)),
      // paths
      text("train_path", FIELD(c.train_path)),
      text("dev_path", FIELD(c.dev_path)),
      text("embeddings_path", FIELD(c.embeddings_path)),
      text("output_dir", FIELD(c.output_dir)),
  };
  return k;
}

#undef FIELD

const Key& lookup(const std::string& name) {
  static const std::map<std::string, const Key*> index = [] {
    std::map<std::string, const Key*> m;
    for (const auto& k : keys()) m[k.name] = &k;
    return m;
  }();
  auto it = index.find(name);
  if (it == index.end()) throw ConfigError("unknown config key '" + name + "'");
  return *it->second;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void check(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("invalid config: " + what);
}

}  // namespace

const std::vector<std::string>& run_config_keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& k : keys()) out.push_back(k.name);
    return out;
  }();
  return names;
}

void set_value(RunConfig& config, const std::string& key, const std::string& value) {
  lookup(key).set(config, value);
}

std::string get_value(const RunConfig& config, const std::string& key) { return lookup(key).get(config); }

void apply_override(RunConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not key=value");
  set_value(config, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

RunConfig parse_run_config(std::istream& in, const std::string& source) {
  RunConfig config;
  std::set<std::string> seen;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(number) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key=value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    if (!seen.insert(key).second) throw ConfigError(where + "duplicate key '" + key + "'");
    try {
      set_value(config, key, trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return config;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_run_config(in, path);
}

void validate(const RunConfig& c) {
  const ModelConfig& m = c.model;
  check(m.word_dim > 0 && m.pos_dim > 0, "word_dim and pos_dim must be positive");
  check(m.pretrained_out_dim > 0, "pretrained_out_dim must be positive");
  check(m.encoder_layers >= 0, "encoder_layers must be non-negative");
  check(m.encoder_hidden > 0, "encoder_hidden must be positive");
  check(m.unary_dim > 0 && m.binary_dim > 0, "unary_dim and binary_dim must be positive");
  check(m.fnn_negative_slope >= 0.0, "fnn_negative_slope must be non-negative");
  check(m.unary_init_std >= 0.0 && m.binary_init_std >= 0.0, "init stds must be non-negative");
  for (double p : {m.dropout_embed, m.dropout_lstm_input, m.dropout_lstm_recurrent, m.dropout_unary_edge,
                   m.dropout_unary_label, m.dropout_binary})
    check(p >= 0.0 && p < 1.0, "dropout rates must lie in [0,1)");
  check(c.min_count >= 1, "min_count must be at least 1");
  validate(c.train);
}

std::string to_text(const RunConfig& config) {
  std::ostringstream out;
  for (const auto& k : keys()) out << k.name << " = " << k.get(config) << '\n';
  return out.str();
}

}  // namespace sdp
