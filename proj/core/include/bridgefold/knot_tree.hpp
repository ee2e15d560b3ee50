#pragma once

// Labeled rooted trees describing iterated satellite/connected-sum knots,
// and the bridge-number calculus on them.  Vertices come in three kinds:
//   V0 leaves (a knot with known bridge number), V1 satellite vertices
//   (one child, braid pattern), V2 composing vertices (>= 2 children).

#include <optional>
#include <string>
#include <vector>

#include "bridgefold/braid.hpp"

namespace bridgefold {

struct LeafLabel {
  enum class Kind { Torus, Opaque };
  Kind kind = Kind::Torus;
  // torus leaves
  int p = 3, q = 2;
  // opaque leaves
  std::string name;
  int bridge = 2;
  bool tame = false;

  static LeafLabel torus(int p, int q);
  static LeafLabel opaque(std::string name, int bridge, bool tame = false);
  int bridge_number() const;  // torus: min(p,q) = q
};

struct ParseError : std::runtime_error {
  int line, column;
  ParseError(int line, int column, const std::string& what);
};

enum class VertexKind { V0, V1, V2 };

class KnotTree {
 public:
  struct Node {
    int parent = -1;
    std::vector<int> children;
    std::optional<LeafLabel> leaf;   // V0 only
    std::optional<BraidWord> braid;  // V1 only
  };

  static KnotTree single_leaf(LeafLabel label);
  static KnotTree satellite(const BraidWord& braid, KnotTree companion);
  static KnotTree compose(std::vector<KnotTree> summands);

  int root() const { return 0; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const Node& node(int v) const;
  VertexKind kind(int v) const;

  // n(v): strand count at satellite vertices, 1 elsewhere.
  int n_of(int v) const;
  // h(v): product of n over the proper ancestors of v (h(root) = 1).
  long long height(int v) const;
  long long height_plus(int v) const { return height(v) * n_of(v); }

  std::vector<std::string> validate() const;

  // Closed form: sum over leaves of h*b minus sum over composing vertices
  // of h*(children-1).
  long long bridge_number() const;
  // Independent recursion over subtrees; must agree with the closed form.
  long long bridge_number_recursive() const;
  // Bridge number of the subknot described by the subtree rooted at v.
  long long bridge_number_at(int v) const { return recursive_at(v); }

  std::vector<int> vertices_of_kind(VertexKind k) const;

 private:
  long long recursive_at(int v) const;
  std::vector<Node> nodes_;
};

// Prefix DSL:  torus(3,2) | opaque(name,3[,tame])
//            | sat(braid 3 "s2 s1^-1 s2 s2", <tree>) | sum(<tree>, <tree>, ...)
// Throws ParseError with 1-based line/column; the result passes validate().
KnotTree parse_tree(const std::string& text);

std::string to_string(const KnotTree& tree);

}  // namespace bridgefold
