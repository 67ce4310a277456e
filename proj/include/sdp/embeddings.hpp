#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sdp {

// Fixed pretrained word vectors. Column 0 of `table` is the all-zero vector
// used for forms absent from the file.
struct PretrainedEmbeddings {
  std::vector<std::string> tokens;  // tokens[c - 1] owns column c
  Eigen::MatrixXd table;            // dim x (tokens + 1)

  int dim() const { return static_cast<int>(table.rows()); }
  bool empty() const { return tokens.empty(); }
  // Exact match first, then lower-cased; 0 when absent.
  int lookup(const std::string& form) const;

  void reindex();

 private:
  std::map<std::string, int> ids_;
};

// One entry per line: a token followed by whitespace-separated decimals. The
// dimension comes from the first line; any other width is a DataError.
PretrainedEmbeddings parse_embeddings(std::istream& in, const std::string& source = "<input>");
PretrainedEmbeddings load_embeddings(const std::string& path);

}  // namespace sdp
