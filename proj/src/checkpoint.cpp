#include "sdp/checkpoint.hpp"

#include <fstream>
#include <functional>
#include <set>

#include "sdp/error.hpp"

namespace sdp {
namespace {

using nlohmann::json;

struct Field {
  const char* name;
  std::function<json(const ModelConfig&)> get;
  std::function<void(ModelConfig&, const json&)> set;
};

template <typename T>
Field field(const char* name, T ModelConfig::*member) {
  return {name, [member](const ModelConfig& c) { return json(c.*member); },
          [member](ModelConfig& c, const json& v) { c.*member = v.get<T>(); }};
}

Field part_field(const char* name, bool PartMask::*member) {
  return {name, [member](const ModelConfig& c) { return json(c.parts.*member); },
          [member](ModelConfig& c, const json& v) { c.parts.*member = v.get<bool>(); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> kFields = {
      field("word_dim", &ModelConfig::word_dim),
      field("pos_dim", &ModelConfig::pos_dim),
      field("pretrained_out_dim", &ModelConfig::pretrained_out_dim),
      field("encoder_layers", &ModelConfig::encoder_layers),
      field("encoder_hidden", &ModelConfig::encoder_hidden),
      field("unary_dim", &ModelConfig::unary_dim),
      field("binary_dim", &ModelConfig::binary_dim),
      field("fnn_negative_slope", &ModelConfig::fnn_negative_slope),
      part_field("use_sib", &PartMask::sibling),
      part_field("use_cop", &PartMask::coparent),
      part_field("use_gp", &PartMask::grandparent),
      field("unary_init_std", &ModelConfig::unary_init_std),
      field("binary_init_std", &ModelConfig::binary_init_std),
      field("dropout_embed", &ModelConfig::dropout_embed),
      field("dropout_lstm_input", &ModelConfig::dropout_lstm_input),
      field("dropout_lstm_recurrent", &ModelConfig::dropout_lstm_recurrent),
      field("dropout_unary_edge", &ModelConfig::dropout_unary_edge),
      field("dropout_unary_label", &ModelConfig::dropout_unary_label),
      field("dropout_binary", &ModelConfig::dropout_binary),
  };
  return kFields;
}

json matrix_json(const Eigen::MatrixXd& m) {
  std::vector<double> data(m.data(), m.data() + m.size());  // column-major
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& what) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (rows < 0 || cols < 0 || static_cast<std::size_t>(rows * cols) != data.size())
    throw DataError("checkpoint: " + what + " has " + std::to_string(data.size()) +
                    " values for shape " + std::to_string(rows) + "x" + std::to_string(cols));
  return Eigen::Map<const Eigen::MatrixXd>(data.data(), rows, cols);
}

}  // namespace

json model_config_json(const ModelConfig& config) {
  json j = json::object();
  for (const auto& f : fields()) j[f.name] = f.get(config);
  return j;
}

ModelConfig model_config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("checkpoint: model_config is not an object");
  ModelConfig c;
  std::vector<std::string> problems;
  std::set<std::string> known;
  for (const auto& f : fields()) {
    known.insert(f.name);
    if (!j.contains(f.name)) {
      problems.push_back(std::string("missing key '") + f.name + "'");
      continue;
    }
    try {
      f.set(c, j.at(f.name));
    } catch (const json::exception&) {
      problems.push_back(std::string("bad value for '") + f.name + "'");
    }
  }
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) problems.push_back("unknown key '" + key + "'");
  if (!problems.empty()) {
    std::string msg = "checkpoint config mismatch:";
    for (const auto& p : problems) msg += " " + p + ";";
    throw ConfigError(msg);
  }
  return c;
}

json checkpoint_json(const ParserModel& model, const json& extra) {
  json params = json::array();
  for (const auto& p : model.parameters()) {
    json entry = matrix_json(p.value);
    entry["name"] = p.name;
    params.push_back(std::move(entry));
  }
  const auto& v = model.vocab();
  json j = {
      {"format", "sdp-parser-checkpoint"},
      {"version", kCheckpointVersion},
      {"model_config", model_config_json(model.config())},
      {"vocab", {{"forms", v.forms()}, {"tags", v.tags()}, {"labels", v.labels()}, {"min_count", v.min_count()}}},
      {"pretrained", {{"tokens", model.pretrained().tokens}, {"table", matrix_json(model.pretrained().table)}}},
      {"parameters", std::move(params)},
  };
  if (!extra.is_null()) j["extra"] = extra;
  return j;
}

ParserModel model_from_checkpoint(const json& j) {
  try {
    if (j.value("format", std::string()) != "sdp-parser-checkpoint")
      throw DataError("not a parser checkpoint");
    if (j.at("version").get<int>() != kCheckpointVersion)
      throw DataError("unsupported checkpoint version " + j.at("version").dump());
    const ModelConfig config = model_config_from_json(j.at("model_config"));
    const json& v = j.at("vocab");
    Vocabulary vocab = Vocabulary::from_lists(v.at("forms").get<std::vector<std::string>>(),
                                              v.at("tags").get<std::vector<std::string>>(),
                                              v.at("labels").get<std::vector<std::string>>(),
                                              v.at("min_count").get<int>());
    PretrainedEmbeddings pre;
    pre.tokens = j.at("pretrained").at("tokens").get<std::vector<std::string>>();
    pre.table = matrix_from_json(j.at("pretrained").at("table"), "pretrained table");
    pre.reindex();
    ParserModel model(config, std::move(vocab), std::move(pre));

    const json& params = j.at("parameters");
    std::vector<std::string> problems;
    if (params.size() != model.parameters().size())
      problems.push_back(std::to_string(params.size()) + " parameters stored, model has " +
                         std::to_string(model.parameters().size()));
    for (std::size_t i = 0; i < std::min(params.size(), model.parameters().size()); ++i) {
      auto& p = model.parameters()[i];
      const std::string name = params[i].at("name").get<std::string>();
      Eigen::MatrixXd value = matrix_from_json(params[i], name);
      if (name != p.name)
        problems.push_back("parameter " + std::to_string(i) + " is '" + name + "', expected '" + p.name + "'");
      else if (value.rows() != p.value.rows() || value.cols() != p.value.cols())
        problems.push_back("parameter '" + name + "' has shape " + std::to_string(value.rows()) + "x" +
                           std::to_string(value.cols()) + ", expected " + std::to_string(p.value.rows()) +
                           "x" + std::to_string(p.value.cols()));
      else
        p.value = std::move(value);
    }
    if (!problems.empty()) {
      std::string msg = "checkpoint does not match its config:";
      for (const auto& p : problems) msg += " " + p + ";";
      throw ConfigError(msg);
    }
    return model;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::string& path, const ParserModel& model, const json& extra) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write checkpoint '" + path + "'");
  out << checkpoint_json(model, extra).dump() << '\n';
  if (!out) throw DataError("write failed for checkpoint '" + path + "'");
}

ParserModel load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open checkpoint '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("checkpoint '" + path + "' is not valid JSON: " + e.what());
  }
  try {
    return model_from_checkpoint(j);
  } catch (const DataError& e) {
    throw DataError("checkpoint '" + path + "': " + e.what());
  }
}

}  // namespace sdp
