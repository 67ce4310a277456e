#include "sdp/embeddings.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sdp/error.hpp"

namespace sdp {

int PretrainedEmbeddings::lookup(const std::string& form) const {
  auto it = ids_.find(form);
  if (it != ids_.end()) return it->second;
  std::string lower = form;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  it = ids_.find(lower);
  return it == ids_.end() ? 0 : it->second;
}

void PretrainedEmbeddings::reindex() {
  ids_.clear();
  for (std::size_t i = 0; i < tokens.size(); ++i) ids_.emplace(tokens[i], static_cast<int>(i + 1));
}

PretrainedEmbeddings parse_embeddings(std::istream& in, const std::string& source) {
  PretrainedEmbeddings out;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) continue;
    std::vector<double> values;
    std::string field;
    while (fields >> field) {
      char* end = nullptr;
      const double v = std::strtod(field.c_str(), &end);
      if (end == field.c_str() || *end != '\0')
        throw DataError(source + ":" + std::to_string(line_no) + ": bad number '" + field + "'");
      values.push_back(v);
    }
    if (values.empty())
      throw DataError(source + ":" + std::to_string(line_no) + ": no vector values");
    if (dim == 0) dim = values.size();
    if (values.size() != dim)
      throw DataError(source + ":" + std::to_string(line_no) + ": dimension " +
                      std::to_string(values.size()) + " differs from " + std::to_string(dim));
    out.tokens.push_back(token);
    rows.push_back(std::move(values));
  }
  out.table = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                    static_cast<Eigen::Index>(rows.size() + 1));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < dim; ++c)
      out.table(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r + 1)) = rows[r][c];
  out.reindex();
  return out;
}

PretrainedEmbeddings load_embeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return parse_embeddings(in, path);
}

}  // namespace sdp
