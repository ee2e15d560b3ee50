#pragma once

// Vertex groups attached to a knot tree and the edge-group inclusions
// between them.
//
//   * leaf vertices: the knot group of the leaf; elements are represented
//     either symbolically (peripheral m^a l^b only) or, for torus leaves in
//     exact mode, as amalgam normal forms in <u, v | u^p = v^q>.
//   * satellite vertices: the braid space F_n x| <t> (see braid.hpp).
//   * composing vertices: F_n x <t> with one free generator per child.
//
// Every edge group is Z^2 on symbolic generators (m_e, l_e); alpha_map and
// omega_map realize them inside the parent and child group respectively.

#include <string>
#include <variant>
#include <vector>

#include "bridgefold/braid.hpp"
#include "bridgefold/knot_tree.hpp"
#include "bridgefold/word.hpp"

namespace bridgefold {

// ---------------------------------------------------------------------------
// Torus knot group <u, v | u^p = v^q>, elements in amalgam normal form:
// a central power of z := u^p = v^q followed by alternating syllables
// u^a (0 < a < p) and v^b (0 < b < q).

struct TorusSyllable {
  char gen;  // 'u' or 'v'
  int exp;
  bool operator==(const TorusSyllable&) const = default;
};

struct TorusElement {
  int p = 3, q = 2;
  long long center = 0;
  std::vector<TorusSyllable> syllables;

  bool is_identity() const { return center == 0 && syllables.empty(); }
  bool is_central() const { return syllables.empty(); }
  bool operator==(const TorusElement&) const = default;
};

TorusElement torus_identity(int p, int q);
// Normalizes a raw letter sequence; letters are ('u'|'v', any exponent).
TorusElement torus_normal_form(int p, int q, const std::vector<TorusSyllable>& raw);
TorusElement torus_multiply(const TorusElement& a, const TorusElement& b);
TorusElement torus_invert(const TorusElement& a);
TorusElement torus_power(const TorusElement& a, long long k);
bool torus_equal(const TorusElement& a, const TorusElement& b);
std::string to_string(const TorusElement& a);

// Meridian u^a v^b with a q + b p = 1, |a| minimal (ties positive);
// abelianization u -> q, v -> p sends it to 1.
TorusElement torus_meridian(int p, int q);
// Longitude z * m^(-pq); null-homologous by construction.
TorusElement torus_longitude(int p, int q);

// ---------------------------------------------------------------------------
// Composing space W_n: F_n x <t>.

struct ComposingElement {
  Word w;
  long long z = 0;  // t-exponent

  bool is_identity() const { return z == 0 && w.empty(); }
  bool operator==(const ComposingElement&) const = default;
};

ComposingElement cs_multiply(const ComposingElement& a, const ComposingElement& b);
ComposingElement cs_invert(const ComposingElement& a);
std::string to_string(const ComposingElement& a);

struct CsGenerator {
  ComposingElement g;
  int index = 1;  // the conjugated generator x_index, 1 <= index <= n
};

struct CsClassification {
  bool whole_group = false;                // <S> = F_n, so U = B
  std::vector<PeripheralConjugate> basis;  // free peripheral basis of <S> otherwise
  // For each i in 1..n: true when the identity-coset peripheral subgroup
  // C_i = <x_i, t> meets U in all of C_i rather than just <t>.
  std::vector<bool> full_at_identity;
};

// Classifies U = <g x_{j} g^-1 for (g, j) in S> (x <t> when include_t) inside
// W_n.  Throws InconsistencyError when the boundary subgroup <x_{n+1}, t>
// meets <S> beyond <t>, which cannot happen for honest meridional input.
CsClassification cs_classify(const std::vector<CsGenerator>& S, int n, bool include_t = true);

// ---------------------------------------------------------------------------
// Symbolic peripheral element m^a l^b of a leaf group without a usable
// normal form (opaque leaves, and torus leaves in counting mode).

struct OpaqueElement {
  long long m = 0, l = 0;

  bool is_identity() const { return m == 0 && l == 0; }
  bool operator==(const OpaqueElement&) const = default;
};

std::string to_string(const OpaqueElement& a);

// ---------------------------------------------------------------------------

using GroupElement = std::variant<OpaqueElement, TorusElement, BraidSpaceElement, ComposingElement>;

struct VertexGroupDescriptor {
  VertexKind kind = VertexKind::V0;
  LeafLabel leaf;     // V0
  BraidContext braid; // V1
  int fanout = 0;     // V2: free rank = number of children
  bool exact = false; // V0 torus leaf represented by TorusElement
};

GroupElement identity_element(const VertexGroupDescriptor& d);
GroupElement multiply(const VertexGroupDescriptor& d, const GroupElement& a,
                      const GroupElement& b);
GroupElement invert(const VertexGroupDescriptor& d, const GroupElement& a);
bool is_identity(const GroupElement& a);
bool equal(const GroupElement& a, const GroupElement& b);
std::string to_string(const GroupElement& a);

// Comma-separated letter list: x3,X1,t^2 for braid/composing elements,
// m^2,l^-1 for symbolic leaf elements, c/u/v/m/l items for exact torus
// elements; "1" is the identity.  Throws std::invalid_argument.
GroupElement parse_element(const VertexGroupDescriptor& d, const std::string& text);

// ---------------------------------------------------------------------------

class TreeOfGroups {
 public:
  struct Edge {
    int parent, child;
    int j_index;  // position (1-based) among the parent's children
  };

  // exact_torus: represent torus leaf elements exactly instead of counting.
  static TreeOfGroups build(const KnotTree& tree, bool exact_torus = false);

  const KnotTree& tree() const { return tree_; }
  int num_vertices() const { return static_cast<int>(vertex_.size()); }
  const VertexGroupDescriptor& vertex(int v) const { return vertex_.at(v); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const Edge& edge(int e) const { return edges_.at(e); }
  int edge_of_child(int child_vertex) const;  // -1 for the root

  // Inclusion of the edge group element m_e^{z1} l_e^{z2} into the parent
  // group (alpha) and the child group (omega).  omega at a satellite child
  // requires z2 = 0: braid-space longitudes are out of scope.
  GroupElement alpha_map(int e, long long z1, long long z2) const;
  GroupElement omega_map(int e, long long z1, long long z2) const;

  std::string presentation() const;

 private:
  KnotTree tree_;
  std::vector<VertexGroupDescriptor> vertex_;
  std::vector<Edge> edges_;
  std::vector<int> edge_of_child_;
};

// ---------------------------------------------------------------------------
// Paths through the tree of groups, used to seed the fold engine.

struct APath {
  // elements[0], edge[0], elements[1], ..., edge[k-1], elements[k]
  std::vector<GroupElement> elements;
  std::vector<int> edges;        // edge ids of the tree of groups
  std::vector<bool> descending;  // per step: parent -> child?
};

// One path per non-empty line. Tokens alternate  a:<element>  and
// e:d<child-vertex> / e:u<child-vertex>;  a:1  is the identity.  Every path
// must start and end at the root. Throws ParseError with line positions.
std::vector<APath> parse_paths(const TreeOfGroups& tg, const std::string& text);

}  // namespace bridgefold
