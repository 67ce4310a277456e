#include "sdp/sdp_format.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "sdp/error.hpp"

namespace sdp {
namespace {

struct Row {
  std::size_t line = 0;
  std::vector<std::string> cols;
};

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
  throw DataError(source + ":" + std::to_string(line) + ": " + what);
}

bool parse_flag(const std::string& v, const std::string& source, std::size_t line,
                const char* column) {
  if (v == "+") return true;
  if (v == "-") return false;
  fail(source, line, std::string("expected '+' or '-' in ") + column + " column, got '" + v + "'");
}

AnnotatedSentence build_sentence(const std::vector<Row>& rows, const std::string& source) {
  AnnotatedSentence out;
  std::vector<int> predicates;
  std::vector<bool> tops;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Row& row = rows[r];
    if (row.cols.size() < 6)
      fail(source, row.line, "expected at least 6 columns, got " + std::to_string(row.cols.size()));
    const std::string expected_id = std::to_string(r + 1);
    if (row.cols[0] != expected_id)
      fail(source, row.line, "non-contiguous token id '" + row.cols[0] + "', expected " + expected_id);
    if (row.cols[1].empty()) fail(source, row.line, "empty form");
    out.sentence.words.push_back({row.cols[1], row.cols[2], row.cols[3]});
    tops.push_back(parse_flag(row.cols[4], source, row.line, "TOP"));
    if (parse_flag(row.cols[5], source, row.line, "PRED")) predicates.push_back(static_cast<int>(r + 1));
  }

  const std::size_t plain = 6 + predicates.size();
  const std::size_t with_frame = plain + 1;
  const std::size_t width = rows.front().cols.size();
  if (width != plain && width != with_frame) {
    if (width > with_frame)
      fail(source, rows.front().line,
           "argument column " + std::to_string(width - 6) + " has no corresponding predicate (" +
               std::to_string(predicates.size()) + " predicates)");
    fail(source, rows.front().line,
         "column-count mismatch: " + std::to_string(width) + " columns for " +
             std::to_string(predicates.size()) + " predicates");
  }
  // A frame column holds senses on predicate rows and '_' elsewhere; anything
  // else in that slot means one argument column too many.
  if (width == with_frame)
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (rows[r].cols.size() == width && rows[r].cols[5] == "-" && rows[r].cols[6] != "_")
        fail(source, rows[r].line,
             "argument column " + std::to_string(predicates.size() + 1) +
                 " has no corresponding predicate (" + std::to_string(predicates.size()) +
                 " predicates)");
  const std::size_t first_arg = width == with_frame ? 7 : 6;

  const int n = static_cast<int>(rows.size());
  out.graph = SemGraph(n);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Row& row = rows[r];
    if (row.cols.size() != width)
      fail(source, row.line,
           "column-count mismatch: " + std::to_string(row.cols.size()) + " columns, expected " +
               std::to_string(width));
    const int dep = static_cast<int>(r + 1);
    if (tops[r]) out.graph.add(0, dep, kTopLabel);
    for (std::size_t k = 0; k < predicates.size(); ++k) {
      const std::string& label = row.cols[first_arg + k];
      if (label == "_") continue;
      if (label.empty()) fail(source, row.line, "empty argument label");
      if (predicates[k] == dep) fail(source, row.line, "self-loop on token " + std::to_string(dep));
      out.graph.add(predicates[k], dep, label);
    }
  }
  return out;
}

}  // namespace

std::vector<AnnotatedSentence> parse_sdp(std::istream& in, const std::string& source) {
  std::vector<AnnotatedSentence> corpus;
  std::vector<Row> block;
  std::string line;
  std::size_t line_no = 0;
  auto flush = [&] {
    if (!block.empty()) corpus.push_back(build_sentence(block, source));
    block.clear();
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    if (line.front() == '#') continue;
    block.push_back({line_no, split_tabs(line)});
  }
  flush();
  return corpus;
}

std::vector<AnnotatedSentence> read_sdp_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return parse_sdp(in, path);
}

void write_sdp(std::ostream& out, const std::vector<AnnotatedSentence>& corpus) {
  for (const auto& item : corpus) {
    const int n = item.sentence.size();
    if (item.graph.words() != n)
      throw DataError("graph has " + std::to_string(item.graph.words()) + " words, sentence has " +
                      std::to_string(n));
    std::set<int> predicate_set;
    for (const auto& [edge, label] : item.graph.edges()) {
      if (edge.head == 0) {
        if (label != kTopLabel)
          throw DataError("edge from TOP to token " + std::to_string(edge.dep) + " has label '" +
                          label + "'; only '" + kTopLabel + "' is representable");
        continue;
      }
      predicate_set.insert(edge.head);
    }
    const std::vector<int> predicates(predicate_set.begin(), predicate_set.end());
    for (int d = 1; d <= n; ++d) {
      const Token& tok = item.sentence.word(d);
      out << d << '\t' << tok.form << '\t' << tok.lemma << '\t' << tok.pos << '\t'
          << (item.graph.contains(0, d) ? '+' : '-') << '\t'
          << (predicate_set.count(d) ? '+' : '-');
      for (int p : predicates) {
        auto it = item.graph.edges().find(Edge{p, d});
        out << '\t' << (it == item.graph.edges().end() ? std::string("_") : it->second);
      }
      out << '\n';
    }
    out << '\n';
  }
}

void write_sdp_file(const std::string& path, const std::vector<AnnotatedSentence>& corpus) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  write_sdp(out, corpus);
  if (!out) throw DataError("write failed for '" + path + "'");
}

}  // namespace sdp
