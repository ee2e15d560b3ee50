#pragma once

// Labeled graphs over a tree of groups ("A-graphs"), the tame-state
// bookkeeping, the two-component complexity, and the elementary folds.
//
// The underlying graph B is a finite tree together with a morphism onto the
// underlying tree of the TreeOfGroups: every B-edge maps to an A-edge, one
// endpoint onto the A-parent and the other onto the A-child.  Edges are
// stored in that "down" direction; the positively oriented edge set EB+
// consists exactly of the stored directions.  Every oriented edge carries a
// label pair; for a stored edge the oriented label of the down direction is
// (top_label, e, bottom_label) and of the up direction its formal inverse.
//
// Vertex and edge groups are not arbitrary subgroups: they are restricted
// to the tagged states below, which are exactly the forms the fold
// calculus produces and keeps decidable.

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "bridgefold/tree_of_groups.hpp"

namespace bridgefold {

// Raised when deciding a fold guard would require solving a word problem
// the chosen leaf representation cannot answer.
struct UndecidableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Subgroup of the edge group Z^2 = <m_e, l_e>: trivial, the meridian
// factor, or everything.  Only these arise on tame graphs.
enum class EdgeState { Trivial = 0, MeridianZ = 1, FullZ2 = 2 };

std::string to_string(EdgeState s);

// Vertex over a leaf: a subgroup generated by `count` meridian conjugates
// (full once count reaches the leaf's bridge number).  In exact mode the
// generators are additionally kept as torus normal forms, which upgrades
// fold guards from bookkeeping to genuine decisions.
struct LeafState {
  bool full = false;
  long long count = 0;
  bool exact = false;
  std::vector<TorusElement> gens;  // exact mode only, dropped when full
};

// Vertex over a satellite vertex: a subgroup of F_n x| <t> generated by
// meridian conjugates.  Either free on the stored peripheral basis, or the
// whole normal closure <<x1>> = F_n, or the whole vertex group.
struct BraidState {
  enum class Kind { Free, NormalClosure, Full };
  Kind kind = Kind::Free;
  std::vector<PeripheralConjugate> basis;  // Kind::Free only
};

// One entry of the S_u set of a composing-vertex product state: the edge f
// (stored id, down direction) with full edge group contributing the free
// factor generator conjugator * x_index * conjugator^-1.
struct CsEntry {
  Word conjugator;
  int index = 1;
  int edge = -1;
};

// Vertex over a composing vertex: trivial, or F_u x <t> with F_u free on
// the S_u entries, or the whole vertex group.
struct ComposingState {
  enum class Kind { Trivial, Product, Full };
  Kind kind = Kind::Trivial;
  std::vector<CsEntry> entries;  // Kind::Product only
};

using VertexState = std::variant<LeafState, BraidState, ComposingState>;

struct Complexity {
  long long c1 = 0, c2 = 0;
  bool operator==(const Complexity&) const = default;
  bool operator<(const Complexity& o) const { return c1 != o.c1 ? c1 < o.c1 : c2 < o.c2; }
};

std::string to_string(const Complexity& c);

class AGraph {
 public:
  struct Vertex {
    int avertex = 0;  // image in the tree of groups
    bool alive = true;
    VertexState state;
  };
  struct Edge {
    int top = -1, bottom = -1;  // B-vertices; [top] is the A-parent side
    int aedge = -1;             // image edge in the tree of groups
    GroupElement top_label, bottom_label;
    EdgeState state = EdgeState::Trivial;
    bool alive = true;
  };

  // Star-of-paths initial graph: one branch per meridian path, terminal
  // vertices carrying a single meridian of the root group, all other
  // groups trivial.  c1 of the result equals paths.size().
  static AGraph build_initial(const TreeOfGroups& tg, const std::vector<APath>& paths);

  const TreeOfGroups& groups() const { return *tg_; }
  int base() const { return 0; }
  int num_vertices() const { return static_cast<int>(verts_.size()); }  // slots incl. dead
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const Vertex& vertex(int u) const { return verts_.at(u); }
  const Edge& edge(int f) const { return edges_.at(f); }
  int alive_vertex_count() const;
  int alive_edge_count() const;  // geometric edges

  // true iff every outgoing positively oriented edge at u is trivial.
  bool is_isolated(int u) const;
  // Full-vertex recursion: the state is the Full variant and full edges
  // with full heads cover all A-edges below [u].
  bool is_full(int u) const;
  // Meridian weight of the vertex state used by c1.
  long long state_weight(int u) const;
  // Count of positively oriented edges at u with nontrivial group.
  int val_plus_1(int u) const;

  long long c1() const;
  long long c2() const;
  Complexity complexity() const { return {c1(), c2()}; }

  std::vector<std::string> tameness_violations() const;
  bool is_tame() const { return tameness_violations().empty(); }

  // true iff the morphism is bijective onto the tree of groups and every
  // vertex and edge state is the Full variant.
  bool is_complete() const;

  struct FoldWitness {
    enum class Kind { IA, IIAForward, IIABackward };
    Kind kind = Kind::IA;
    int f1 = -1, f2 = -1;  // IA: the pair (f2 merges into f1); IIA: f1 only
    bool up = false;       // IA: both edges oriented away from their common
                           // bottom endpoint; IIA: direction of the fold
  };

  // Deterministic scan: IA sites first (vertices ascending, edge pairs
  // ascending), then IIA (edges ascending, forward pass before backward).
  std::optional<FoldWitness> fold_witness() const;
  bool is_folded() const { return !fold_witness().has_value(); }

  // Guaranteed IA site at a single vertex: a normal-closure origin with
  // two positive edges, or a product origin whose group already contains
  // the boundary conjugate of a non-full positive edge.
  std::optional<FoldWitness> ia_shortcut(int u) const;

  // Elementary folds; all return a new graph.  Preconditions are the
  // witness conditions; violations throw std::logic_error.
  AGraph fold_IA(int f1, int f2) const;
  AGraph fold_IIA_forward(int f) const;
  AGraph fold_IIA_backward(int f) const;
  AGraph fold(const FoldWitness& w) const;

 private:
  friend struct AGraphOps;
  const TreeOfGroups* tg_ = nullptr;
  std::vector<Vertex> verts_;
  std::vector<Edge> edges_;
};

struct FoldStep {
  std::string move;  // "IA" | "IIA+" | "IIA-"
  int f1 = -1, f2 = -1;
  Complexity before, after;
  bool tame_after = false;
  bool decreased = false;
};

struct FoldTrace {
  std::vector<FoldStep> steps;
  AGraph final_graph;
  bool ok = true;      // every step tame and strictly decreasing
  bool folded = false; // terminated because no fold applies
};

// Folds to a fixed point, IA before IIA, lowest sites first.  Asserts
// tameness and strict lexicographic complexity decrease after every step
// (recorded per step; ok reflects them).  steps stop at max_steps when the
// diagnostic bound is exceeded (folded stays false).
FoldTrace run_folds(const AGraph& g, long long max_steps = -1);

// One row per move, tab separated: move, f1, f2, c1 before, c1 after,
// c2 before, c2 after, tame flag.
std::string to_tsv(const FoldTrace& trace);

// Graph dump with vertices (id, image, state) and edges (id, image,
// labels, state).
std::string to_json(const AGraph& g);

}  // namespace bridgefold
