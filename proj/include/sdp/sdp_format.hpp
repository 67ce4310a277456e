#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sdp/graph.hpp"

namespace sdp {

// Label carried by edges out of TOP. The column format has no label slot for
// them, so any other label on a head-0 edge cannot be written.
inline const std::string kTopLabel = "TOP";

struct AnnotatedSentence {
  Sentence sentence;
  SemGraph graph;

  bool operator==(const AnnotatedSentence&) const = default;
};

// Column format, one token per TAB-separated row:
//   ID FORM LEMMA POS TOP PRED [FRAME] ARG_1 .. ARG_p
// where p is the number of rows with PRED '+', and ARG_k holds the label of
// the edge from the k-th predicate (in token order) to this row, or '_'.
// Sentences are separated by blank lines; lines starting with '#' are
// comments. A FRAME column is accepted and ignored on input.
std::vector<AnnotatedSentence> parse_sdp(std::istream& in, const std::string& source = "<input>");
std::vector<AnnotatedSentence> read_sdp_file(const std::string& path);

void write_sdp(std::ostream& out, const std::vector<AnnotatedSentence>& corpus);
void write_sdp_file(const std::string& path, const std::vector<AnnotatedSentence>& corpus);

}  // namespace sdp
