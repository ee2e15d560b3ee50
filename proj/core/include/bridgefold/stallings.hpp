#pragma once

// Stallings subgroup graphs for finitely generated subgroups of F_n.
//
// A subgroup graph is a connected, folded, labeled digraph with a base
// vertex; the subgroup it represents is the set of words tracing closed
// loops at the base.  Graphs are built by wedging generator loops at the
// base and folding.  Folding always merges at the lowest-numbered vertex
// first and the result is relabeled by a breadth-first traversal, so two
// graphs of the same subgroup compare equal with operator==.

#include <optional>
#include <string>
#include <vector>

#include "bridgefold/word.hpp"

namespace bridgefold {

// Raised when an operation detects input that violates a documented
// structural assumption (e.g. a peripheral generating set whose folded
// graph has the wrong cycle count).
struct InconsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// g * x_index * g^-1 for a generator index in 1..n+1.
struct PeripheralConjugate {
  Word conjugator;
  int index = 1;

  Word word(int n) const;  // the element as a reduced word of F_n
  bool operator==(const PeripheralConjugate&) const = default;
};

// A cycle in the subgroup graph reading a power of x_index; length is the
// minimal z >= 1 such that x_index^z traces a closed loop at the vertex.
struct PeripheralCycle {
  int vertex = 0;
  long long length = 1;
  int index = 1;
  bool operator==(const PeripheralCycle&) const = default;
};

class SubgroupGraph {
 public:
  // Wedge of loops spelling the generators, folded and core-reduced.
  static SubgroupGraph build(const std::vector<Word>& generators, int n);

  int rank_n() const { return n_; }
  int base() const { return 0; }
  int num_vertices() const { return static_cast<int>(out_.size()); }
  int num_edges() const;  // geometric (unoriented) edge count

  // Endpoint of the single label-edge leaving (entering) v, or -1.
  int out_edge(int v, int label) const { return out_[v][label - 1]; }
  int in_edge(int v, int label) const { return in_[v][label - 1]; }

  // Follows a reduced word from a vertex; nullopt if an edge is missing.
  std::optional<int> trace(int from, const Word& w) const;
  bool contains(const Word& w) const;

  int rank() const;           // free rank: edges - vertices + 1
  bool is_whole_group() const;

  // Cycles reading powers of x_index; for index == n+1 the traced cyclic
  // word is generator_word(n+1, n).  One entry per cycle, vertex is the
  // smallest vertex of the cycle.
  std::vector<PeripheralCycle> peripheral_cycles(int index) const;

  // Reduced word along the breadth-first path base -> v (canonical).
  Word path_from_base(int v) const;

  // Line-based export: "base 0" header then "src label dst" per edge.
  std::string to_edge_list() const;

  bool operator==(const SubgroupGraph& other) const = default;

 private:
  int n_ = 1;
  std::vector<std::vector<int>> out_;  // out_[v][label-1]
  std::vector<std::vector<int>> in_;
};

struct PeripheralBasisResult {
  bool whole_group = false;
  std::vector<PeripheralConjugate> basis;  // empty when whole_group
};

// Lemma-style peripheral basis: if the conjugates in S generate a proper
// subgroup U of F_n, returns a free basis of U consisting of peripheral
// conjugates read off the subgroup graph (one per length-1 cycle), whose
// index set equals the index set of S.  Throws InconsistencyError when the
// graph contradicts those guarantees (inputs that are not honest
// peripheral conjugates).
PeripheralBasisResult peripheral_basis(const std::vector<PeripheralConjugate>& s, int n);

// Coset tracer over a folded graph: traces arbitrary reduced words from
// the base, growing hanging trees ("fringe") where the core graph has no
// edge.  Vertices >= core size are fringe vertices.  Two words lie in the
// same right coset of the subgroup iff they trace to the same vertex.
class CosetTracer {
 public:
  explicit CosetTracer(const SubgroupGraph& g);
  int coset(const Word& w);

 private:
  int step(int v, int letter);
  const SubgroupGraph& g_;
  int next_id_;
  std::vector<std::pair<std::pair<int, int>, int>> ext_out_, ext_in_;
};

// Smallest-|z| integer (ties: positive) such that s0 and (conj *
// core^z * conj^-1) lie in the same right coset of the subgroup, i.e.
// s0 * (conj core^z conj^-1)^-1 is in the subgroup.  nullopt if no such z.
std::optional<long long> exists_power_match(const SubgroupGraph& g, const Word& s0,
                                            const Word& conj, const Word& core);

// Minimal z >= 1 with conj * core^z * conj^-1 in the subgroup; nullopt if
// no such power exists.
std::optional<long long> min_positive_power_in(const SubgroupGraph& g, const Word& conj,
                                               const Word& core);

}  // namespace bridgefold
