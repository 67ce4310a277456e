#include "sdp/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "sdp/checkpoint.hpp"
#include "sdp/error.hpp"
#include "sdp/parser.hpp"
#include "sdp/potentials.hpp"
#include "sdp/scorer.hpp"
#include "sdp/sdp_format.hpp"

namespace sdp {
namespace {

nlohmann::json inference_json(const InferenceConfig& c) {
  return {{"kind", inference_name(c.kind)},
          {"iterations", c.iterations},
          {"damping", c.damping},
          {"logit_clamp", c.logit_clamp}};
}

// Settings stored by cmd_train, with command-line overrides on top.
InferenceConfig stored_inference(const nlohmann::json& extra, std::optional<InferenceKind> engine,
                                 std::optional<int> iterations) {
  InferenceConfig c;
  if (extra.is_object() && extra.contains("inference")) {
    const auto& j = extra.at("inference");
    c.kind = parse_inference_kind(j.value("kind", std::string("mf")));
    c.iterations = j.value("iterations", c.iterations);
    c.damping = j.value("damping", c.damping);
    c.logit_clamp = j.value("logit_clamp", c.logit_clamp);
  }
  if (engine) c.kind = *engine;
  if (iterations) {
    if (*iterations < 1) throw ConfigError("iterations must be positive");
    c.iterations = *iterations;
  }
  return c;
}

nlohmann::json read_extra(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open checkpoint '" + path + "'");
  try {
    nlohmann::json j;
    in >> j;
    return j.value("extra", nlohmann::json::object());
  } catch (const nlohmann::json::exception& e) {
    throw DataError("checkpoint '" + path + "' is not valid JSON: " + e.what());
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  return out;
}

const AnnotatedSentence& pick(const std::vector<AnnotatedSentence>& corpus, std::size_t index,
                              const std::string& path) {
  if (index >= corpus.size())
    throw DataError("'" + path + "' has " + std::to_string(corpus.size()) + " sentences; index " +
                    std::to_string(index) + " is out of range");
  return corpus[index];
}

}  // namespace

TrainOutcome cmd_train(const RunConfig& config, std::ostream& log) {
  validate(config);
  if (config.train_path.empty()) throw ConfigError("train_path is required");
  if (config.dev_path.empty()) throw ConfigError("dev_path is required");
  if (config.output_dir.empty()) throw ConfigError("output_dir is required");

  const std::string resolved = to_text(config);
  log << "# resolved config\n" << resolved << std::flush;

  const auto train_set = read_sdp_file(config.train_path);
  const auto dev_set = read_sdp_file(config.dev_path);
  PretrainedEmbeddings pretrained;
  if (!config.embeddings_path.empty()) pretrained = load_embeddings(config.embeddings_path);

  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) throw DataError("cannot create output_dir '" + config.output_dir + "': " + ec.message());
  const std::filesystem::path dir(config.output_dir);
  TrainOutcome outcome;
  outcome.checkpoint_path = (dir / "model.json").string();
  outcome.metrics_path = (dir / "metrics.jsonl").string();
  outcome.config_path = (dir / "config.txt").string();
  open_output(outcome.config_path) << resolved;

  ParserModel model(config.model, Vocabulary::build(train_set, config.min_count), std::move(pretrained));
  model.initialize(config.train.seed);
  log << "# parameters " << model.parameter_count() << ", train sentences " << train_set.size()
      << ", dev sentences " << dev_set.size() << '\n';

  std::ofstream metrics = open_output(outcome.metrics_path);
  outcome.result = train(model, train_set, dev_set, config.train, [&](const EpochRecord& r) {
    const std::string line = epoch_json(r).dump();
    metrics << line << '\n' << std::flush;
    log << line << '\n' << std::flush;
  });
  log << "# stopped: " << outcome.result.stop_reason << " after " << outcome.result.steps
      << " steps; best dev labeled F1 " << outcome.result.best_dev_f1 << " at step "
      << outcome.result.best_step << '\n';

  const nlohmann::json extra = {{"inference", inference_json(config.train.inference)},
                                {"threshold", config.train.threshold},
                                {"best_dev_labeled_f1", outcome.result.best_dev_f1},
                                {"best_step", outcome.result.best_step},
                                {"steps", outcome.result.steps},
                                {"stop_reason", outcome.result.stop_reason}};
  save_checkpoint(outcome.checkpoint_path, model, extra);
  return outcome;
}

void cmd_parse(const ParseOptions& options, std::ostream& out, std::ostream& log) {
  const ParserModel model = load_checkpoint(options.checkpoint);
  const nlohmann::json extra = read_extra(options.checkpoint);
  const InferenceConfig inference = stored_inference(extra, options.engine, options.iterations);
  const double threshold = options.threshold.value_or(extra.value("threshold", 0.5));
  if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("threshold must lie in (0,1)");
  log << "# inference engine=" << inference_name(inference.kind) << " iterations=" << inference.iterations
      << " threshold=" << threshold << '\n';

  const auto input = read_sdp_file(options.input);
  std::vector<AnnotatedSentence> parsed;
  parsed.reserve(input.size());
  std::ofstream marginals;
  if (!options.marginals_path.empty()) marginals = open_output(options.marginals_path);
  for (std::size_t i = 0; i < input.size(); ++i) {
    const Prediction p = predict(input[i].sentence, model, inference, threshold);
    parsed.push_back({input[i].sentence, p.graph});
    if (marginals.is_open()) {
      nlohmann::json edges = nlohmann::json::array();
      for (std::size_t e = 0; e < p.edges.size(); ++e)
        edges.push_back({{"head", p.edges[e].head}, {"dep", p.edges[e].dep}, {"q", p.marginals[e]}});
      marginals << nlohmann::json{{"sentence", i}, {"edges", std::move(edges)}}.dump() << '\n';
    }
  }
  if (options.output.empty()) {
    write_sdp(out, parsed);
  } else {
    write_sdp_file(options.output, parsed);
  }
}

EvalReport cmd_eval(const EvalOptions& options, std::ostream& out) {
  const auto pred = read_sdp_file(options.predicted);
  const auto gold = read_sdp_file(options.gold);
  if (pred.size() != gold.size())
    throw DataError("'" + options.predicted + "' has " + std::to_string(pred.size()) + " sentences, '" +
                    options.gold + "' has " + std::to_string(gold.size()));
  std::vector<SemGraph> pg, gg;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const auto& a = pred[i].sentence.words;
    const auto& b = gold[i].sentence.words;
    bool same = a.size() == b.size();
    for (std::size_t w = 0; same && w < a.size(); ++w) same = a[w].form == b[w].form;
    if (!same)
      throw DataError("sentence " + std::to_string(i + 1) + " differs between '" + options.predicted +
                      "' (" + std::to_string(a.size()) + " words) and '" + options.gold + "' (" +
                      std::to_string(b.size()) + " words)");
    pg.push_back(pred[i].graph);
    gg.push_back(gold[i].graph);
  }
  EvalReport report = evaluate(pg, gg, options.include_top);
  out << report_text(report, options.buckets);
  if (!options.json_path.empty()) open_output(options.json_path) << report_json(report).dump(2) << '\n';
  return report;
}

nlohmann::json cmd_trace(const TraceOptions& options) {
  const ParserModel model = load_checkpoint(options.checkpoint);
  const InferenceConfig inference =
      stored_inference(read_extra(options.checkpoint), options.engine, options.iterations);
  const auto input = read_sdp_file(options.input);
  const Sentence& sentence = pick(input, options.sentence, options.input).sentence;

  const CandidateEdgeSet edges(sentence.size());
  const PartList parts = enumerate_parts(edges, model.config().parts);
  const ScoreSet scores = score_sentence(sentence, model, edges, parts);
  const LogPotentials pot = assemble(scores, edges, parts);
  nlohmann::json trace = message_trace(pot, inference);
  nlohmann::json words = nlohmann::json::array();
  for (const auto& w : sentence.words) words.push_back(w.form);
  trace["words"] = std::move(words);
  return trace;
}

nlohmann::json cmd_oracle_compare(const OracleCompareConfig& config) {
  // The enumeration cap is a usage error here, not a library contract breach.
  try {
    return oracle_compare_json(config, oracle_compare(config));
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

nlohmann::json cmd_gradcheck(const RunConfig& config, const GradcheckOptions& options) {
  validate(config);
  std::vector<AnnotatedSentence> corpus;
  if (options.input.empty()) {
    AnnotatedSentence s;
    s.sentence.words = {{"the", "the", "DT"}, {"cat", "cat", "NN"}, {"sat", "sit", "VBD"}};
    s.graph = SemGraph(3);
    s.graph.add(0, 3, kTopLabel);
    s.graph.add(3, 2, "ARG1");
    s.graph.add(2, 1, "BV");
    corpus.push_back(std::move(s));
  } else {
    corpus = read_sdp_file(options.input);
  }
  const AnnotatedSentence& item = pick(corpus, options.sentence, options.input.empty() ? "<built-in>" : options.input);

  ModelConfig mc = config.model;
  mc.dropout_embed = mc.dropout_lstm_input = mc.dropout_lstm_recurrent = 0.0;
  mc.dropout_unary_edge = mc.dropout_unary_label = mc.dropout_binary = 0.0;
  PretrainedEmbeddings pretrained;
  if (!config.embeddings_path.empty()) pretrained = load_embeddings(config.embeddings_path);
  ParserModel model(mc, Vocabulary::build(corpus, 1), std::move(pretrained));
  model.initialize(config.train.seed);

  nlohmann::json rows = nlohmann::json::array();
  double overall = 0.0;
  for (auto kind : {InferenceKind::MeanField, InferenceKind::BeliefPropagation})
    for (int t = 1; t <= 3; ++t) {
      GradcheckConfig gc;
      gc.inference = config.train.inference;
      gc.inference.kind = kind;
      gc.inference.iterations = t;
      gc.objective = config.train.objective;
      gc.min_coordinates = options.min_coordinates;
      gc.seed = config.train.seed;
      const GradcheckResult r = gradcheck(model, item, gc);
      nlohmann::json row = gradcheck_json(r);
      row["engine"] = inference_name(kind);
      row["iterations"] = t;
      rows.push_back(std::move(row));
      overall = std::max(overall, r.max_relative_error);
    }
  return {{"words", item.sentence.size()},
          {"parameters", model.parameters().size()},
          {"perturbation", GradcheckConfig{}.perturbation},
          {"relative_floor", GradcheckConfig{}.relative_floor},
          {"max_relative_error", overall},
          {"rows", std::move(rows)}};
}

}  // namespace sdp
