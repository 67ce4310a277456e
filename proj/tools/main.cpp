#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sdp/commands.hpp"
#include "sdp/error.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

sdp::RunConfig resolve(const std::string& file, const std::vector<std::string>& overrides) {
  sdp::RunConfig c = file.empty() ? sdp::RunConfig{} : sdp::load_run_config(file);
  for (const auto& o : overrides) sdp::apply_override(c, o);
  return c;
}

std::optional<sdp::InferenceKind> engine_of(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return sdp::parse_inference_kind(s);
}

void emit_json(const nlohmann::json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw sdp::DataError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Second-order semantic dependency parser with unrolled mean field / loopy BP inference"};
  app.require_subcommand(1);

  std::string config_file;
  std::vector<std::string> overrides;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_file, "key=value config file")->check(CLI::ExistingFile);
    sub->add_option("-s,--set", overrides, "override a config key (key=value), repeatable");
  };

  // train
  auto* train = app.add_subcommand("train", "train a parser and write model.json, metrics.jsonl, config.txt");
  add_config(train);
  std::string train_path, dev_path, out_dir;
  int threads = 0;
  train->add_option("--train", train_path, "training file (SDP format)");
  train->add_option("--dev", dev_path, "dev file (SDP format)");
  train->add_option("-o,--output-dir", out_dir, "output directory");
  train->add_option("--threads", threads, "worker threads for batch gradients (default 1)");

  // parse
  sdp::ParseOptions parse_opts;
  std::string parse_engine;
  auto* parse = app.add_subcommand("parse", "parse sentences with a trained checkpoint");
  parse->add_option("-m,--model", parse_opts.checkpoint, "checkpoint (model.json)")->required();
  parse->add_option("-i,--input", parse_opts.input, "input file (SDP format; gold edges ignored)")->required();
  parse->add_option("-o,--output", parse_opts.output, "output file (default stdout)");
  parse->add_option("--engine", parse_engine, "mf or lbp (default: as trained)");
  parse->add_option("-T,--iterations", parse_opts.iterations, "inference iterations (default: as trained)");
  parse->add_option("--threshold", parse_opts.threshold, "edge probability threshold");
  parse->add_option("--marginals", parse_opts.marginals_path, "write per-edge Q(1) as JSON lines");

  // eval
  sdp::EvalOptions eval_opts;
  auto* eval = app.add_subcommand("eval", "score predicted graphs against gold");
  eval->add_option("pred", eval_opts.predicted, "predicted file")->required();
  eval->add_option("gold", eval_opts.gold, "gold file")->required();
  eval->add_flag("--buckets", eval_opts.buckets, "add the sentence-length breakdown");
  eval->add_flag("--include-top", eval_opts.include_top, "count edges out of TOP");
  eval->add_option("--json", eval_opts.json_path, "also write the report as JSON");

  // trace
  sdp::TraceOptions trace_opts;
  std::string trace_engine, trace_out;
  auto* trace = app.add_subcommand("trace", "per-iteration posteriors and messages for one sentence (JSON)");
  trace->add_option("-m,--model", trace_opts.checkpoint, "checkpoint (model.json)")->required();
  trace->add_option("-i,--input", trace_opts.input, "input file (SDP format)")->required();
  trace->add_option("--sentence", trace_opts.sentence, "zero-based sentence index");
  trace->add_option("--engine", trace_engine, "mf or lbp");
  trace->add_option("-T,--iterations", trace_opts.iterations, "inference iterations");
  trace->add_option("-o,--output", trace_out, "output file (default stdout)");

  // oracle-compare
  sdp::OracleCompareConfig oc;
  std::string oc_out;
  auto* oracle = app.add_subcommand("oracle-compare", "approximate vs exact marginals on random instances");
  oracle->add_option("--instances", oc.instances, "number of random instances");
  oracle->add_option("-n,--words", oc.n, "sentence length");
  oracle->add_option("--coupling-scale", oc.coupling_scale, "std of the binary scores");
  oracle->add_option("--unary-scale", oc.unary_scale, "std of the unary scores");
  oracle->add_option("--seed", oc.seed, "random seed");
  oracle->add_option("-o,--output", oc_out, "output file (default stdout)");

  // gradcheck
  sdp::GradcheckOptions gc_opts;
  std::string gc_out;
  auto* gradcheck = app.add_subcommand("gradcheck", "analytic vs finite-difference gradients (JSON)");
  add_config(gradcheck);
  gradcheck->add_option("-i,--input", gc_opts.input, "sentence source (default: built-in sentence)");
  gradcheck->add_option("--sentence", gc_opts.sentence, "zero-based sentence index");
  gradcheck->add_option("--coordinates", gc_opts.min_coordinates, "minimum sampled coordinates");
  gradcheck->add_option("-o,--output", gc_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*train) {
      sdp::RunConfig c = resolve(config_file, overrides);
      if (!train_path.empty()) c.train_path = train_path;
      if (!dev_path.empty()) c.dev_path = dev_path;
      if (!out_dir.empty()) c.output_dir = out_dir;
      if (threads > 0) c.train.threads = threads;
      sdp::cmd_train(c, std::cerr);
    } else if (*parse) {
      parse_opts.engine = engine_of(parse_engine);
      sdp::cmd_parse(parse_opts, std::cout, std::cerr);
    } else if (*eval) {
      sdp::cmd_eval(eval_opts, std::cout);
    } else if (*trace) {
      trace_opts.engine = engine_of(trace_engine);
      emit_json(sdp::cmd_trace(trace_opts), trace_out);
    } else if (*oracle) {
      emit_json(sdp::cmd_oracle_compare(oc), oc_out);
    } else if (*gradcheck) {
      sdp::RunConfig c = resolve(config_file, overrides);
      emit_json(sdp::cmd_gradcheck(c, gc_opts), gc_out);
    }
  } catch (const sdp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const sdp::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const sdp::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
