#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sdp {

struct Token {
  std::string form;
  std::string lemma;
  std::string pos;

  bool operator==(const Token&) const = default;
};

// A sentence of n words. Index 0 is the virtual TOP node and is not stored;
// word i (1-based) lives at words[i - 1].
struct Sentence {
  std::vector<Token> words;

  int size() const { return static_cast<int>(words.size()); }
  const Token& word(int i) const { return words.at(static_cast<std::size_t>(i - 1)); }

  bool operator==(const Sentence&) const = default;
};

struct Edge {
  int head = 0;
  int dep = 0;

  auto operator<=>(const Edge&) const = default;
};

// All ordered pairs (h, d) with h in 0..n, d in 1..n, h != d, in head-major
// order. Ids are positions in `edges()`.
class CandidateEdgeSet {
 public:
  explicit CandidateEdgeSet(int n);

  int words() const { return n_; }
  std::size_t size() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& operator[](std::size_t id) const { return edges_[id]; }

  // -1 when (head, dep) is not a candidate edge.
  int index(int head, int dep) const;
  int index(const Edge& e) const { return index(e.head, e.dep); }

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<int> lookup_;  // (n+1) x (n+1)
};

CandidateEdgeSet build_candidate_edges(int n);

enum class PartType : int { Sibling = 0, Coparent = 1, Grandparent = 2 };
inline constexpr std::array<PartType, 3> kPartTypes = {PartType::Sibling, PartType::Coparent,
                                                       PartType::Grandparent};
const char* part_type_name(PartType t);

// A second-order part joining two candidate edges.
//   sibling     (i, j, k), j < k : first = (i, j), second = (i, k)
//   co-parent   (i, k, j), i < k : first = (i, j), second = (k, j)
//   grandparent (i, j, k)        : first = (i, j), second = (j, k)
struct Part {
  Edge first;
  Edge second;
  std::size_t first_id = 0;
  std::size_t second_id = 0;

  bool operator==(const Part&) const = default;
};

struct PartMask {
  bool sibling = true;
  bool coparent = true;
  bool grandparent = true;

  bool enabled(PartType t) const;
  static PartMask none() { return {false, false, false}; }
  bool operator==(const PartMask&) const = default;
};

class PartList {
 public:
  const std::vector<Part>& of(PartType t) const { return parts_[static_cast<int>(t)]; }
  std::vector<Part>& of(PartType t) { return parts_[static_cast<int>(t)]; }
  const std::vector<Part>& sib() const { return of(PartType::Sibling); }
  const std::vector<Part>& cop() const { return of(PartType::Coparent); }
  const std::vector<Part>& gp() const { return of(PartType::Grandparent); }
  std::size_t total() const;

 private:
  std::array<std::vector<Part>, 3> parts_;
};

PartList enumerate_parts(const CandidateEdgeSet& edges, PartMask mask = {});

// Position of the part of type `t` joining edges `a` and `b`, in either order.
std::optional<std::size_t> find_part(const PartList& parts, PartType t, Edge a, Edge b);

// A labeled graph over a sentence; head 0 is TOP. Cycles are allowed.
class SemGraph {
 public:
  SemGraph() = default;
  explicit SemGraph(int n) : n_(n) {}

  int words() const { return n_; }
  // Throws InvalidArgument on out-of-range indices, self-loops, or a second
  // label for an existing (head, dep).
  void add(int head, int dep, std::string label);
  bool contains(int head, int dep) const { return edges_.count(Edge{head, dep}) != 0; }
  const std::map<Edge, std::string>& edges() const { return edges_; }
  std::size_t size() const { return edges_.size(); }

  bool operator==(const SemGraph&) const = default;

 private:
  int n_ = 0;
  std::map<Edge, std::string> edges_;
};

// Includes every edge whose probability is strictly above `threshold`.
SemGraph decode(int n, const std::map<Edge, double>& edge_prob,
                const std::map<Edge, std::string>& label_argmax, double threshold = 0.5);

// Aligned with a CandidateEdgeSet; an empty label string counts as missing.
SemGraph decode(const CandidateEdgeSet& edges, std::span<const double> edge_prob,
                std::span<const std::string> labels, double threshold = 0.5);

bool has_cycle(const SemGraph& graph);

}  // namespace sdp
