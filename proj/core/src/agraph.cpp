#include "bridgefold/agraph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

namespace bridgefold {

namespace {

const BraidSpaceElement& as_bs(const GroupElement& g) { return std::get<BraidSpaceElement>(g); }
const ComposingElement& as_cs(const GroupElement& g) { return std::get<ComposingElement>(g); }
const OpaqueElement& as_op(const GroupElement& g) { return std::get<OpaqueElement>(g); }
const TorusElement& as_torus(const GroupElement& g) { return std::get<TorusElement>(g); }

SubgroupGraph graph_of(const std::vector<PeripheralConjugate>& pcs, int n) {
  std::vector<Word> words;
  for (const PeripheralConjugate& pc : pcs) words.push_back(pc.word(n));
  return SubgroupGraph::build(words, n);
}

std::vector<PeripheralConjugate> entry_pcs(const std::vector<CsEntry>& entries) {
  std::vector<PeripheralConjugate> out;
  for (const CsEntry& e : entries) out.push_back({e.conjugator, e.index});
  return out;
}

// delta * (g x_i g^-1) * delta^-1 rewritten as a peripheral conjugate.
PeripheralConjugate bs_conjugate_pc(const BraidContext& ctx, const BraidSpaceElement& delta,
                                    const PeripheralConjugate& pc) {
  Word moved = ctx.apply_power(pc.conjugator, delta.t);
  auto [inner, target] = decompose_image(ctx.apply_power(Word({pc.index}), delta.t));
  return {multiply(delta.w, multiply(moved, inner)), target};
}

// Coordinates (z1, z2) with d = m^{z1} l^{z2} in the peripheral subgroup of
// the torus group, if d lies in it.  Uses the fact that powers of the
// meridian have syllable length exactly twice the exponent.
std::optional<std::pair<long long, long long>> peripheral_coords(int p, int q,
                                                                 const TorusElement& d) {
  TorusElement m = torus_meridian(p, q);
  long long window = static_cast<long long>(d.syllables.size()) / 2 + 2;
  for (long long k = 0; k <= window; ++k)
    for (long long a : {k, -k}) {
      TorusElement rest = torus_multiply(torus_power(m, -a), d);
      if (rest.is_central()) {
        long long z2 = rest.center;
        return std::make_pair(a + static_cast<long long>(p) * q * z2, z2);
      }
      if (k == 0) break;
    }
  return std::nullopt;
}

// Subgroup of Z^2 spanned by integer vectors, named by the tagged edge
// states; anything that is neither trivial, <m>, nor everything reports an
// inconsistency because tame graphs cannot produce it.
EdgeState classify_lattice(std::vector<std::pair<long long, long long>> vs, bool origin_full) {
  std::pair<long long, long long> r1{0, 0};  // second coordinate nonzero
  long long r2 = 0;                          // generator of the (z1, 0) line
  for (auto v : vs) {
    while (v.second != 0) {
      if (r1.second == 0) {
        std::swap(r1, v);
        break;
      }
      if (std::llabs(v.second) < std::llabs(r1.second)) std::swap(r1, v);
      long long k = v.second / r1.second;
      v.first -= k * r1.first;
      v.second -= k * r1.second;
    }
    if (v.first != 0) r2 = std::gcd(r2, std::llabs(v.first));
  }
  if (r1.second == 0 && r2 == 0) return EdgeState::Trivial;
  if (r1.second == 0) {
    if (r2 == 1) return EdgeState::MeridianZ;
    throw InconsistencyError("peripheral intersection is a proper meridian power");
  }
  if (r2 != 0 && std::llabs(r1.second) == 1 && r2 == 1) {
    if (origin_full) return EdgeState::FullZ2;
    throw InconsistencyError("peripheral intersection of a proper subgroup is everything");
  }
  throw InconsistencyError("peripheral intersection is not of a tame shape");
}

long long leaf_bridge(const VertexGroupDescriptor& d) { return d.leaf.bridge_number(); }

}  // namespace

std::string to_string(EdgeState s) {
  switch (s) {
    case EdgeState::Trivial: return "trivial";
    case EdgeState::MeridianZ: return "meridian";
    case EdgeState::FullZ2: return "full";
  }
  return "?";
}

std::string to_string(const Complexity& c) {
  return "(" + std::to_string(c.c1) + ", " + std::to_string(c.c2) + ")";
}

// ---------------------------------------------------------------------------
// construction

AGraph AGraph::build_initial(const TreeOfGroups& tg, const std::vector<APath>& paths) {
  AGraph g;
  g.tg_ = &tg;
  const KnotTree& tree = tg.tree();
  int root = tree.root();

  auto trivial_state = [&](int av) -> VertexState {
    switch (tree.kind(av)) {
      case VertexKind::V0: {
        LeafState s;
        s.exact = tg.vertex(av).exact;
        return s;
      }
      case VertexKind::V1: return BraidState{};
      case VertexKind::V2: return ComposingState{};
    }
    return LeafState{};
  };
  auto meridian_state = [&](int av) -> VertexState {
    switch (tree.kind(av)) {
      case VertexKind::V0: {
        LeafState s;
        s.count = 1;
        s.exact = tg.vertex(av).exact;
        if (s.exact) s.gens.push_back(torus_meridian(tg.vertex(av).leaf.p, tg.vertex(av).leaf.q));
        if (s.count >= leaf_bridge(tg.vertex(av))) {
          s.full = true;
          s.gens.clear();
        }
        return s;
      }
      case VertexKind::V1:
        return BraidState{BraidState::Kind::Free, {PeripheralConjugate{Word{}, 1}}};
      case VertexKind::V2:
        return ComposingState{ComposingState::Kind::Product, {}};
    }
    return LeafState{};
  };

  g.verts_.push_back({root, true, trivial_state(root)});
  for (const APath& path : paths) {
    if (path.edges.empty()) throw std::invalid_argument("meridian path without edges");
    int at = g.base();
    int avertex = root;
    for (std::size_t j = 0; j < path.edges.size(); ++j) {
      const TreeOfGroups::Edge& ae = tg.edge(path.edges[j]);
      bool down = path.descending[j];
      int next_av = down ? ae.child : ae.parent;
      bool last = j + 1 == path.edges.size();
      int next = static_cast<int>(g.verts_.size());
      g.verts_.push_back({next_av, true, last ? meridian_state(next_av) : trivial_state(next_av)});

      Edge ed;
      ed.aedge = path.edges[j];
      const GroupElement& origin_elt = path.elements[j];
      GroupElement head_elt =
          last ? path.elements[j + 1] : identity_element(tg.vertex(next_av));
      if (down) {
        ed.top = at;
        ed.bottom = next;
        ed.top_label = origin_elt;
        ed.bottom_label = head_elt;
      } else {
        ed.top = next;
        ed.bottom = at;
        ed.bottom_label = invert(tg.vertex(avertex), origin_elt);
        ed.top_label = invert(tg.vertex(next_av), head_elt);
      }
      g.edges_.push_back(ed);
      at = next;
      avertex = next_av;
    }
    if (avertex != root) throw std::invalid_argument("meridian path does not return to the root");
  }
  return g;
}

int AGraph::alive_vertex_count() const {
  int n = 0;
  for (const Vertex& v : verts_) n += v.alive;
  return n;
}

int AGraph::alive_edge_count() const {
  int n = 0;
  for (const Edge& e : edges_) n += e.alive;
  return n;
}

// ---------------------------------------------------------------------------
// complexity

bool AGraph::is_isolated(int u) const {
  for (const Edge& e : edges_)
    if (e.alive && e.top == u && e.state != EdgeState::Trivial) return false;
  return true;
}

int AGraph::val_plus_1(int u) const {
  int n = 0;
  for (const Edge& e : edges_)
    if (e.alive && e.top == u && e.state != EdgeState::Trivial) ++n;
  return n;
}

bool AGraph::is_full(int u) const {
  std::map<int, bool> memo;
  // recursion strictly descends the group tree: heads of positive edges map
  // to children of [u]
  auto rec = [&](auto&& self, int x) -> bool {
    auto it = memo.find(x);
    if (it != memo.end()) return it->second;
    const Vertex& vx = verts_[x];
    bool state_full = std::visit(
        [](const auto& s) -> bool {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, LeafState>) return s.full;
          else if constexpr (std::is_same_v<T, BraidState>) return s.kind == BraidState::Kind::Full;
          else return s.kind == ComposingState::Kind::Full;
        },
        vx.state);
    if (!state_full) return memo[x] = false;
    bool ok = true;
    for (int e = 0; e < tg_->num_edges() && ok; ++e) {
      if (tg_->edge(e).parent != vx.avertex) continue;
      bool covered = false;
      for (int f = 0; f < num_edges() && !covered; ++f) {
        const Edge& ed = edges_[f];
        if (ed.alive && ed.top == x && ed.aedge == e && ed.state == EdgeState::FullZ2)
          covered = self(self, ed.bottom);
      }
      ok = covered;
    }
    return memo[x] = ok;
  };
  return rec(rec, u);
}

long long AGraph::state_weight(int u) const {
  const Vertex& v = verts_[u];
  const VertexGroupDescriptor& d = tg_->vertex(v.avertex);
  const KnotTree& tree = tg_->tree();
  return std::visit(
      [&](const auto& s) -> long long {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LeafState>) {
          return s.full ? leaf_bridge(d) : s.count;
        } else if constexpr (std::is_same_v<T, BraidState>) {
          if (s.kind == BraidState::Kind::Free) return static_cast<long long>(s.basis.size());
          // the normal closure <<x1>> = F_n is generated by the n meridian
          // conjugates x_1..x_n and no fewer
          if (s.kind == BraidState::Kind::NormalClosure) return d.braid.n;
          return tree.bridge_number_at(v.avertex);
        } else {
          if (s.kind == ComposingState::Kind::Trivial) return 0;
          if (s.kind == ComposingState::Kind::Product)
            return static_cast<long long>(s.entries.size()) + 1;
          return tree.bridge_number_at(v.avertex);
        }
      },
      v.state);
}

long long AGraph::c1() const {
  const KnotTree& tree = tg_->tree();
  long long total = 0;
  for (int u = 0; u < num_vertices(); ++u) {
    if (!verts_[u].alive) continue;
    if (is_isolated(u)) {
      total += tree.height(verts_[u].avertex) * state_weight(u);
    } else {
      total -= tree.height_plus(verts_[u].avertex) * (val_plus_1(u) - 1);
    }
  }
  return total;
}

long long AGraph::c2() const {
  long long geo = 0, fullz = 0, merid = 0;
  for (const Edge& e : edges_) {
    if (!e.alive) continue;
    ++geo;
    if (e.state == EdgeState::FullZ2) ++fullz;
    if (e.state == EdgeState::MeridianZ) ++merid;
  }
  return 4 * geo - 2 * fullz - merid;
}

// ---------------------------------------------------------------------------
// tameness

std::vector<std::string> AGraph::tameness_violations() const {
  std::vector<std::string> out;
  auto note = [&](const std::string& s) { out.push_back(s); };
  for (int f = 0; f < num_edges(); ++f) {
    const Edge& e = edges_[f];
    if (!e.alive) continue;
    if (e.state == EdgeState::FullZ2 && !is_full(e.bottom))
      note("edge " + std::to_string(f) + " has a full group but its lower endpoint is not full");
  }
  for (int u = 0; u < num_vertices(); ++u) {
    const Vertex& v = verts_[u];
    if (!v.alive) continue;
    const VertexGroupDescriptor& d = tg_->vertex(v.avertex);
    if (const auto* ls = std::get_if<LeafState>(&v.state)) {
      if (!ls->full && ls->count >= leaf_bridge(d))
        note("vertex " + std::to_string(u) + " counts a bridge number of meridians but is not full");
      if (ls->count < 0) note("vertex " + std::to_string(u) + " has a negative meridian count");
    } else if (const auto* bs = std::get_if<BraidState>(&v.state)) {
      if (bs->kind == BraidState::Kind::Full && !is_full(u))
        note("vertex " + std::to_string(u) + " claims the whole group but is not full");
    } else if (const auto* cs = std::get_if<ComposingState>(&v.state)) {
      if (cs->kind == ComposingState::Kind::Full && !is_full(u))
        note("vertex " + std::to_string(u) + " claims the whole group but is not full");
      if (cs->kind == ComposingState::Kind::Product) {
        SubgroupGraph fu = graph_of(entry_pcs(cs->entries), d.fanout);
        std::set<int> seen;
        for (const CsEntry& en : cs->entries) {
          if (en.edge < 0 || en.edge >= num_edges() || !edges_[en.edge].alive ||
              edges_[en.edge].top != u) {
            note("product entry at vertex " + std::to_string(u) + " names a missing edge");
            continue;
          }
          const Edge& fe = edges_[en.edge];
          if (!seen.insert(en.edge).second)
            note("product entry at vertex " + std::to_string(u) + " repeats an edge");
          if (fe.state != EdgeState::FullZ2)
            note("product entry edge " + std::to_string(en.edge) + " is not full");
          if (tg_->edge(fe.aedge).j_index != en.index)
            note("product entry edge " + std::to_string(en.edge) + " has a mismatched index");
          const Word& sigma = as_cs(fe.top_label).w;
          if (!fu.contains(conjugate(sigma, Word({en.index}))))
            note("product entry edge " + std::to_string(en.edge) +
                 " carries a boundary conjugate outside the free factor");
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// fold site search

namespace {

struct IASolution {
  long long z1 = 0, z2 = 0;
};

// Solve  o1 = s * o2 * map_e(m^{z1} l^{z2})  for s in the origin's vertex
// state and integers (z1, z2); map_e is the parent-side inclusion for
// down-pairs and the child-side inclusion for up-pairs.  nullopt when no
// such pair exists (the edges are not IA-foldable at this origin).
std::optional<IASolution> solve_ia(const AGraph& g, int u, int aedge, bool up,
                                   const GroupElement& o1, const GroupElement& o2,
                                   bool require_z2_zero) {
  const TreeOfGroups& tg = g.groups();
  const AGraph::Vertex& vu = g.vertex(u);
  const VertexGroupDescriptor& d = tg.vertex(vu.avertex);

  if (!up) {
    // origin on the parent side of the group-tree edge
    if (d.kind == VertexKind::V1) {
      const auto& st = std::get<BraidState>(vu.state);
      const BraidSpaceElement &a1 = as_bs(o1), &a2 = as_bs(o2);
      if (st.kind == BraidState::Kind::Full) return IASolution{0, 0};
      long long z2 = a1.t - a2.t;  // s has no t part below the full state
      if (require_z2_zero && z2 != 0) return std::nullopt;
      if (st.kind == BraidState::Kind::NormalClosure) return IASolution{0, z2};
      SubgroupGraph ug = graph_of(st.basis, d.braid.n);
      auto z = exists_power_match(ug, multiply(a2.w, invert(a1.w)), a1.w,
                                  positive_product(d.braid.n));
      if (!z) return std::nullopt;
      return IASolution{-*z, z2};
    }
    if (d.kind == VertexKind::V2) {
      const auto& st = std::get<ComposingState>(vu.state);
      const ComposingElement &a1 = as_cs(o1), &a2 = as_cs(o2);
      if (st.kind == ComposingState::Kind::Full) return IASolution{0, 0};
      long long z1 = a1.z - a2.z;
      Word core({tg.edge(aedge).j_index});
      SubgroupGraph ug = st.kind == ComposingState::Kind::Trivial
                             ? SubgroupGraph::build({}, d.fanout)
                             : graph_of(entry_pcs(st.entries), d.fanout);
      if (require_z2_zero) {
        if (!ug.contains(multiply(a1.w, invert(a2.w)))) return std::nullopt;
        return IASolution{z1, 0};
      }
      auto z = exists_power_match(ug, multiply(a2.w, invert(a1.w)), a1.w, core);
      if (!z) return std::nullopt;
      return IASolution{z1, -*z};
    }
    throw std::logic_error("a leaf vertex cannot be the parent side of an edge");
  }

  // origin on the child side
  switch (d.kind) {
    case VertexKind::V0: {
      const auto& st = std::get<LeafState>(vu.state);
      if (!st.exact) {
        const OpaqueElement &a1 = as_op(o1), &a2 = as_op(o2);
        return IASolution{a1.m - a2.m, a1.l - a2.l};
      }
      const TorusElement &a1 = as_torus(o1), &a2 = as_torus(o2);
      if (st.full) return IASolution{0, 0};
      TorusElement dlt = torus_multiply(torus_invert(a2), a1);
      auto coords = peripheral_coords(d.leaf.p, d.leaf.q, dlt);
      if (coords) return IASolution{coords->first, coords->second};
      // the difference is not peripheral; a nontrivial correcting s would
      // be needed.  Decidable refusals, otherwise give up honestly.
      bool gens_peripheral = true, gens_central = true;
      for (const TorusElement& t : st.gens) {
        if (!peripheral_coords(d.leaf.p, d.leaf.q, t)) gens_peripheral = false;
        if (!t.is_central()) gens_central = false;
      }
      if (gens_peripheral &&
          (gens_central || peripheral_coords(d.leaf.p, d.leaf.q, a1).has_value() ||
           peripheral_coords(d.leaf.p, d.leaf.q, a2).has_value()))
        return std::nullopt;
      throw UndecidableError(
          "leaf fold guard needs a subgroup membership test outside the peripheral lattice");
    }
    case VertexKind::V1: {
      const auto& st = std::get<BraidState>(vu.state);
      const BraidSpaceElement &a1 = as_bs(o1), &a2 = as_bs(o2);
      if (st.kind == BraidState::Kind::Full) return IASolution{0, 0};
      if (a1.t != a2.t) return std::nullopt;  // would need an unrepresentable longitude
      if (st.kind == BraidState::Kind::NormalClosure) return IASolution{0, 0};
      auto [inner, target] = decompose_image(d.braid.apply_power(Word({1}), a2.t));
      SubgroupGraph ug = graph_of(st.basis, d.braid.n);
      auto z = exists_power_match(ug, multiply(a2.w, invert(a1.w)), multiply(a1.w, inner),
                                  Word({target}));
      if (!z) return std::nullopt;
      return IASolution{-*z, 0};
    }
    case VertexKind::V2: {
      const auto& st = std::get<ComposingState>(vu.state);
      const ComposingElement &a1 = as_cs(o1), &a2 = as_cs(o2);
      if (st.kind == ComposingState::Kind::Full) return IASolution{0, 0};
      long long z1 = a1.z - a2.z;
      Word gw = generator_word(d.fanout + 1, d.fanout);
      SubgroupGraph ug = st.kind == ComposingState::Kind::Trivial
                             ? SubgroupGraph::build({}, d.fanout)
                             : graph_of(entry_pcs(st.entries), d.fanout);
      auto z = exists_power_match(ug, multiply(a2.w, invert(a1.w)), a1.w, gw);
      if (!z) return std::nullopt;
      return IASolution{z1, -*z};
    }
  }
  return std::nullopt;
}

GroupElement oriented_origin_label(const TreeOfGroups& tg, const AGraph::Edge& e, bool up) {
  if (!up) return e.top_label;
  return invert(tg.vertex(tg.edge(e.aedge).child), e.bottom_label);
}

// Classifies the subgroup of the edge group pulled back through the origin
// label from the origin's vertex state: {trivial, <m_e>, all of Z^2}.
EdgeState preimage_class(const AGraph& g, int f, bool up) {
  const TreeOfGroups& tg = g.groups();
  const AGraph::Edge& ed = g.edge(f);
  int x = up ? ed.bottom : ed.top;
  const AGraph::Vertex& vx = g.vertex(x);
  const VertexGroupDescriptor& d = tg.vertex(vx.avertex);
  int j = tg.edge(ed.aedge).j_index;

  if (!up) {
    if (d.kind == VertexKind::V1) {
      const auto& st = std::get<BraidState>(vx.state);
      if (st.kind == BraidState::Kind::Free) return EdgeState::Trivial;
      if (st.kind == BraidState::Kind::NormalClosure) return EdgeState::MeridianZ;
      return EdgeState::FullZ2;
    }
    const auto& st = std::get<ComposingState>(vx.state);
    if (st.kind == ComposingState::Kind::Trivial) return EdgeState::Trivial;
    if (st.kind == ComposingState::Kind::Full) return EdgeState::FullZ2;
    SubgroupGraph fu = graph_of(entry_pcs(st.entries), d.fanout);
    auto z = min_positive_power_in(fu, as_cs(ed.top_label).w, Word({j}));
    if (!z) return EdgeState::MeridianZ;
    if (*z != 1)
      throw InconsistencyError("free factor meets a boundary conjugate in a proper power");
    return EdgeState::FullZ2;
  }

  switch (d.kind) {
    case VertexKind::V0: {
      const auto& st = std::get<LeafState>(vx.state);
      if (st.full) return EdgeState::FullZ2;
      if (!st.exact) return st.count == 0 ? EdgeState::Trivial : EdgeState::MeridianZ;
      const TorusElement& beta = as_torus(ed.bottom_label);
      std::vector<std::pair<long long, long long>> coords;
      for (const TorusElement& t : st.gens) {
        TorusElement moved = torus_multiply(torus_multiply(beta, t), torus_invert(beta));
        auto c = peripheral_coords(d.leaf.p, d.leaf.q, moved);
        if (!c)
          throw UndecidableError(
              "leaf edge guard needs a peripheral intersection outside the lattice case");
        coords.push_back(*c);
      }
      return classify_lattice(coords, st.full);
    }
    case VertexKind::V1: {
      const auto& st = std::get<BraidState>(vx.state);
      if (st.kind == BraidState::Kind::Full) return EdgeState::FullZ2;
      if (st.kind == BraidState::Kind::NormalClosure) return EdgeState::MeridianZ;
      const BraidSpaceElement beta = as_bs(ed.bottom_label);
      Word wpart = d.braid.apply_power(multiply(invert(beta.w), multiply(Word({1}), beta.w)),
                                       -beta.t);
      auto [inner, target] = decompose_image(wpart);
      SubgroupGraph ug = graph_of(st.basis, d.braid.n);
      auto z = min_positive_power_in(ug, inner, Word({target}));
      if (!z) return EdgeState::Trivial;
      if (*z != 1)
        throw InconsistencyError("meridional subgroup meets a peripheral line in a proper power");
      return EdgeState::MeridianZ;
    }
    case VertexKind::V2: {
      const auto& st = std::get<ComposingState>(vx.state);
      if (st.kind == ComposingState::Kind::Trivial) return EdgeState::Trivial;
      if (st.kind == ComposingState::Kind::Full) return EdgeState::FullZ2;
      Word gw = generator_word(d.fanout + 1, d.fanout);
      SubgroupGraph fu = graph_of(entry_pcs(st.entries), d.fanout);
      if (min_positive_power_in(fu, invert(as_cs(ed.bottom_label).w), gw))
        throw InconsistencyError("free factor meets the boundary subgroup");
      return EdgeState::MeridianZ;
    }
  }
  return EdgeState::Trivial;
}

}  // namespace

std::optional<AGraph::FoldWitness> AGraph::fold_witness() const {
  // IA: lowest origin, then lowest edge pair, same group-tree edge and
  // orientation
  for (int u = 0; u < num_vertices(); ++u) {
    if (!verts_[u].alive) continue;
    struct Inc {
      int f;
      bool up;
      int aedge;
    };
    std::vector<Inc> inc;
    for (int f = 0; f < num_edges(); ++f) {
      if (!edges_[f].alive) continue;
      if (edges_[f].top == u) inc.push_back({f, false, edges_[f].aedge});
      else if (edges_[f].bottom == u) inc.push_back({f, true, edges_[f].aedge});
    }
    for (std::size_t i = 0; i < inc.size(); ++i)
      for (std::size_t k = i + 1; k < inc.size(); ++k) {
        if (inc[i].up != inc[k].up || inc[i].aedge != inc[k].aedge) continue;
        bool up = inc[i].up;
        bool head_is_braid =
            !up && tg_->tree().kind(tg_->edge(inc[i].aedge).child) == VertexKind::V1;
        auto sol = solve_ia(*this, u, inc[i].aedge, up,
                            oriented_origin_label(*tg_, edges_[inc[i].f], up),
                            oriented_origin_label(*tg_, edges_[inc[k].f], up), head_is_braid);
        if (sol) return FoldWitness{FoldWitness::Kind::IA, inc[i].f, inc[k].f, up};
      }
  }
  // IIA forward, then backward, lowest edge first
  for (int f = 0; f < num_edges(); ++f)
    if (edges_[f].alive && edges_[f].state < preimage_class(*this, f, false))
      return FoldWitness{FoldWitness::Kind::IIAForward, f, -1, false};
  for (int f = 0; f < num_edges(); ++f)
    if (edges_[f].alive && edges_[f].state < preimage_class(*this, f, true))
      return FoldWitness{FoldWitness::Kind::IIABackward, f, -1, true};
  return std::nullopt;
}

std::optional<AGraph::FoldWitness> AGraph::ia_shortcut(int u) const {
  const Vertex& v = verts_.at(u);
  if (!v.alive) return std::nullopt;
  const VertexGroupDescriptor& d = tg_->vertex(v.avertex);
  if (d.kind == VertexKind::V1) {
    const auto* st = std::get_if<BraidState>(&v.state);
    if (!st || st->kind == BraidState::Kind::Free) return std::nullopt;
    std::vector<int> down;
    for (int f = 0; f < num_edges(); ++f)
      if (edges_[f].alive && edges_[f].top == u) down.push_back(f);
    if (down.size() < 2) return std::nullopt;
    return FoldWitness{FoldWitness::Kind::IA, down[0], down[1], false};
  }
  if (d.kind == VertexKind::V2) {
    const auto* st = std::get_if<ComposingState>(&v.state);
    if (!st || st->kind != ComposingState::Kind::Product) return std::nullopt;
    SubgroupGraph fu = graph_of(entry_pcs(st->entries), d.fanout);
    for (int f = 0; f < num_edges(); ++f) {
      const Edge& ed = edges_[f];
      if (!ed.alive || ed.top != u || ed.state == EdgeState::FullZ2) continue;
      const Word& sigma = as_cs(ed.top_label).w;
      int j = tg_->edge(ed.aedge).j_index;
      if (!fu.contains(conjugate(sigma, Word({j})))) continue;
      auto at = fu.trace(fu.base(), sigma);
      for (const CsEntry& en : st->entries) {
        if (en.index != j) continue;
        auto bt = fu.trace(fu.base(), en.conjugator);
        if (at && bt && *at == *bt)
          return FoldWitness{FoldWitness::Kind::IA, std::min(f, en.edge), std::max(f, en.edge),
                             false};
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// fold IA

namespace {

GroupElement mulv(const VertexGroupDescriptor& d, const GroupElement& a, const GroupElement& b) {
  return multiply(d, a, b);
}

LeafState join_leaf(const VertexGroupDescriptor& d, const LeafState& x, const LeafState& y,
                    const GroupElement& delta, bool both_edges_nontrivial) {
  LeafState z;
  z.exact = x.exact;
  z.full = x.full || y.full;
  z.count = x.count + y.count - (both_edges_nontrivial ? 1 : 0);
  if (z.count >= leaf_bridge(d)) z.full = true;
  if (z.exact && !z.full) {
    z.gens = x.gens;
    const TorusElement& dl = as_torus(delta);
    for (const TorusElement& t : y.gens)
      z.gens.push_back(torus_multiply(torus_multiply(dl, t), torus_invert(dl)));
  }
  return z;
}

BraidState join_braid(const VertexGroupDescriptor& d, const BraidState& x, const BraidState& y,
                      const GroupElement& delta) {
  if (x.kind == BraidState::Kind::Full || y.kind == BraidState::Kind::Full)
    return {BraidState::Kind::Full, {}};
  if (x.kind == BraidState::Kind::NormalClosure || y.kind == BraidState::Kind::NormalClosure)
    return {BraidState::Kind::NormalClosure, {}};
  std::vector<PeripheralConjugate> all = x.basis;
  for (const PeripheralConjugate& pc : y.basis)
    all.push_back(bs_conjugate_pc(d.braid, as_bs(delta), pc));
  auto pb = peripheral_basis(all, d.braid.n);
  if (pb.whole_group) return {BraidState::Kind::NormalClosure, {}};
  return {BraidState::Kind::Free, std::move(pb.basis)};
}

// Rebuilds a product state from a generating entry set: canonical free
// basis, each basis element matched to the lowest contributing edge.
ComposingState canon_product(std::vector<CsEntry> all, int n) {
  auto pb = peripheral_basis(entry_pcs(all), n);
  if (pb.whole_group) return {ComposingState::Kind::Full, {}};
  SubgroupGraph fu = graph_of(entry_pcs(all), n);
  ComposingState out{ComposingState::Kind::Product, {}};
  for (const PeripheralConjugate& b : pb.basis) {
    auto bv = fu.trace(fu.base(), b.conjugator);
    int best = -1;
    for (const CsEntry& en : all) {
      if (en.index != b.index) continue;
      auto ev = fu.trace(fu.base(), en.conjugator);
      if (ev && bv && *ev == *bv && (best < 0 || en.edge < best)) best = en.edge;
    }
    if (best < 0)
      throw InconsistencyError("free factor basis element without a contributing full edge");
    out.entries.push_back({b.conjugator, b.index, best});
  }
  return out;
}

// Whether the vertex state already contains the holonomy element delta;
// needed when an IA pair shares both endpoints, so no vertex merge happens
// and delta must be redundant for the fold to preserve the presented
// subgroup.
bool state_absorbs(const VertexGroupDescriptor& d, const VertexState& state,
                   const GroupElement& delta) {
  if (is_identity(delta)) return true;
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LeafState>) {
          return s.full;
        } else if constexpr (std::is_same_v<T, BraidState>) {
          if (s.kind == BraidState::Kind::Full) return true;
          const BraidSpaceElement& b = as_bs(delta);
          if (b.t != 0) return false;
          if (s.kind == BraidState::Kind::NormalClosure) return true;
          return graph_of(s.basis, d.braid.n).contains(b.w);
        } else {
          if (s.kind == ComposingState::Kind::Full) return true;
          const ComposingElement& c = as_cs(delta);
          if (s.kind == ComposingState::Kind::Trivial) return c.w.empty();
          return graph_of(entry_pcs(s.entries), d.fanout).contains(c.w);
        }
      },
      state);
}

ComposingState join_composing(const VertexGroupDescriptor& d, const ComposingState& x,
                              const ComposingState& y, const GroupElement& delta) {
  if (x.kind == ComposingState::Kind::Full || y.kind == ComposingState::Kind::Full)
    return {ComposingState::Kind::Full, {}};
  if (x.kind == ComposingState::Kind::Trivial && y.kind == ComposingState::Kind::Trivial)
    return {ComposingState::Kind::Trivial, {}};
  std::vector<CsEntry> all;
  if (x.kind == ComposingState::Kind::Product) all = x.entries;
  const Word& dw = as_cs(delta).w;
  if (y.kind == ComposingState::Kind::Product)
    for (const CsEntry& en : y.entries) all.push_back({multiply(dw, en.conjugator), en.index, en.edge});
  return canon_product(std::move(all), d.fanout);
}

}  // namespace

AGraph AGraph::fold_IA(int f1, int f2) const {
  if (f1 == f2 || !edges_.at(f1).alive || !edges_.at(f2).alive)
    throw std::logic_error("IA fold needs two distinct live edges");
  bool up;
  int u;
  if (edges_[f1].top == edges_[f2].top) {
    up = false;
    u = edges_[f1].top;
  } else if (edges_[f1].bottom == edges_[f2].bottom) {
    up = true;
    u = edges_[f1].bottom;
  } else {
    throw std::logic_error("IA fold edges do not share an origin");
  }
  if (edges_[f1].aedge != edges_[f2].aedge)
    throw std::logic_error("IA fold edges map to different edges of the group tree");
  int y1 = up ? edges_[f1].top : edges_[f1].bottom;
  int y2 = up ? edges_[f2].top : edges_[f2].bottom;
  if (y2 == base()) {
    std::swap(f1, f2);
    std::swap(y1, y2);
  }

  int e = edges_[f1].aedge;
  const TreeOfGroups::Edge& ae = tg_->edge(e);
  int head_av = up ? ae.parent : ae.child;
  const VertexGroupDescriptor& head_d = tg_->vertex(head_av);
  bool head_is_braid = !up && tg_->tree().kind(ae.child) == VertexKind::V1;

  auto sol = solve_ia(*this, u, e, up, oriented_origin_label(*tg_, edges_[f1], up),
                      oriented_origin_label(*tg_, edges_[f2], up), head_is_braid);
  if (!sol) throw std::logic_error("IA fold labels do not match");

  GroupElement mapped = up ? tg_->alpha_map(e, sol->z1, sol->z2)
                           : tg_->omega_map(e, sol->z1, sol->z2);
  GroupElement h1 = up ? invert(head_d, edges_[f1].top_label) : edges_[f1].bottom_label;
  GroupElement h2 = up ? invert(head_d, edges_[f2].top_label) : edges_[f2].bottom_label;
  GroupElement delta =
      mulv(head_d, invert(head_d, h1), mulv(head_d, invert(head_d, mapped), h2));

  AGraph g = *this;
  bool both_nontrivial =
      edges_[f1].state != EdgeState::Trivial && edges_[f2].state != EdgeState::Trivial;
  g.edges_[f1].state = std::max(edges_[f1].state, edges_[f2].state);
  g.edges_[f2].alive = false;

  if (y1 == y2) {
    // both endpoints coincide: just drop the duplicate edge; the holonomy
    // must already live in the head's group or the move changes the
    // presented subgroup
    if (!state_absorbs(head_d, verts_[y1].state, delta))
      throw InconsistencyError("edge identification with holonomy outside the vertex state");
    for (Vertex& v : g.verts_) {
      if (!v.alive) continue;
      if (auto* cs = std::get_if<ComposingState>(&v.state))
        for (CsEntry& en : cs->entries)
          if (en.edge == f2) en.edge = f1;
    }
    return g;
  }

  // carry the merged head's frame over to the surviving head
  for (int f = 0; f < g.num_edges(); ++f) {
    if (!g.edges_[f].alive || f == f1) continue;
    Edge& ed = g.edges_[f];
    if (ed.top == y2) {
      ed.top = y1;
      ed.top_label = mulv(head_d, delta, ed.top_label);
    }
    if (ed.bottom == y2) {
      ed.bottom = y1;
      ed.bottom_label = mulv(head_d, ed.bottom_label, invert(head_d, delta));
    }
  }

  const VertexState &sx = verts_[y1].state, &sy = verts_[y2].state;
  if (head_d.kind == VertexKind::V0)
    g.verts_[y1].state = join_leaf(head_d, std::get<LeafState>(sx), std::get<LeafState>(sy),
                                   delta, both_nontrivial);
  else if (head_d.kind == VertexKind::V1)
    g.verts_[y1].state =
        join_braid(head_d, std::get<BraidState>(sx), std::get<BraidState>(sy), delta);
  else
    g.verts_[y1].state =
        join_composing(head_d, std::get<ComposingState>(sx), std::get<ComposingState>(sy), delta);
  g.verts_[y2].alive = false;

  for (Vertex& v : g.verts_) {
    if (!v.alive) continue;
    if (auto* cs = std::get_if<ComposingState>(&v.state))
      for (CsEntry& en : cs->entries)
        if (en.edge == f2) en.edge = f1;
  }
  return g;
}

// ---------------------------------------------------------------------------
// fold IIA

namespace {

void augment_with_meridian(AGraph::Vertex& v, const VertexGroupDescriptor& d,
                           const GroupElement& head_label_inv_side, const TreeOfGroups& tg) {
  // adjoin  b^-1 m b  where b is the oriented label entering the head
  if (auto* ls = std::get_if<LeafState>(&v.state)) {
    if (ls->full) return;
    ls->count += 1;
    if (ls->exact) {
      TorusElement b = as_torus(head_label_inv_side);
      TorusElement m = torus_meridian(d.leaf.p, d.leaf.q);
      ls->gens.push_back(torus_multiply(torus_multiply(torus_invert(b), m), b));
    }
    if (ls->count >= leaf_bridge(d)) {
      ls->full = true;
      ls->gens.clear();
    }
    return;
  }
  if (auto* bs = std::get_if<BraidState>(&v.state)) {
    if (bs->kind != BraidState::Kind::Free) return;
    BraidSpaceElement b = as_bs(head_label_inv_side);
    std::vector<PeripheralConjugate> all = bs->basis;
    all.push_back(rewrite_meridian_conjugate(d.braid, bs_invert(d.braid, b)));
    auto pb = peripheral_basis(all, d.braid.n);
    if (pb.whole_group) *bs = {BraidState::Kind::NormalClosure, {}};
    else *bs = {BraidState::Kind::Free, std::move(pb.basis)};
    return;
  }
  auto& cs = std::get<ComposingState>(v.state);
  if (cs.kind == ComposingState::Kind::Trivial) cs = {ComposingState::Kind::Product, {}};
  (void)tg;
}

}  // namespace

AGraph AGraph::fold_IIA_forward(int f) const {
  const Edge& ed = edges_.at(f);
  if (!ed.alive) throw std::logic_error("fold on a dead edge");
  EdgeState p = preimage_class(*this, f, false);
  if (!(ed.state < p)) throw std::logic_error("forward fold without a larger preimage");
  if (ed.state != EdgeState::Trivial || p != EdgeState::MeridianZ)
    throw std::logic_error(
        "forward fold outside the trivial-to-meridian case: an IA site was missed");
  AGraph g = *this;
  g.edges_[f].state = EdgeState::MeridianZ;
  augment_with_meridian(g.verts_[ed.bottom], tg_->vertex(verts_[ed.bottom].avertex),
                        ed.bottom_label, *tg_);
  return g;
}

AGraph AGraph::fold_IIA_backward(int f) const {
  const Edge& ed = edges_.at(f);
  if (!ed.alive) throw std::logic_error("fold on a dead edge");
  EdgeState p = preimage_class(*this, f, true);
  if (!(ed.state < p)) throw std::logic_error("backward fold without a larger preimage");
  int w = ed.top;
  const VertexGroupDescriptor& d = tg_->vertex(verts_[w].avertex);
  AGraph g = *this;
  g.edges_[f].state = p;
  if (p == EdgeState::MeridianZ) {
    // the head gains the conjugated companion meridian a alpha(m) a^-1
    if (auto* bs = std::get_if<BraidState>(&g.verts_[w].state)) {
      if (bs->kind != BraidState::Kind::Full) *bs = {BraidState::Kind::NormalClosure, {}};
    } else if (auto* cs = std::get_if<ComposingState>(&g.verts_[w].state)) {
      if (cs->kind == ComposingState::Kind::Trivial) *cs = {ComposingState::Kind::Product, {}};
    } else {
      throw std::logic_error("backward fold into a leaf head");
    }
    return g;
  }
  // whole edge group: the head gains a full peripheral subgroup
  if (auto* bs = std::get_if<BraidState>(&g.verts_[w].state)) {
    *bs = {BraidState::Kind::Full, {}};
  } else if (auto* cs = std::get_if<ComposingState>(&g.verts_[w].state)) {
    std::vector<CsEntry> all;
    if (cs->kind == ComposingState::Kind::Product) all = cs->entries;
    all.push_back({as_cs(ed.top_label).w, tg_->edge(ed.aedge).j_index, f});
    *cs = canon_product(std::move(all), d.fanout);
  } else {
    throw std::logic_error("backward fold into a leaf head");
  }
  return g;
}

AGraph AGraph::fold(const FoldWitness& w) const {
  switch (w.kind) {
    case FoldWitness::Kind::IA: return fold_IA(w.f1, w.f2);
    case FoldWitness::Kind::IIAForward: return fold_IIA_forward(w.f1);
    case FoldWitness::Kind::IIABackward: return fold_IIA_backward(w.f1);
  }
  throw std::logic_error("unknown fold witness");
}

// ---------------------------------------------------------------------------
// driver

bool AGraph::is_complete() const {
  if (alive_vertex_count() != tg_->num_vertices()) return false;
  if (alive_edge_count() != tg_->num_edges()) return false;
  std::set<int> avs, aes;
  for (const Vertex& v : verts_)
    if (v.alive) avs.insert(v.avertex);
  for (const Edge& e : edges_)
    if (e.alive) {
      aes.insert(e.aedge);
      if (e.state != EdgeState::FullZ2) return false;
    }
  if (static_cast<int>(avs.size()) != tg_->num_vertices()) return false;
  if (static_cast<int>(aes.size()) != tg_->num_edges()) return false;
  for (int u = 0; u < num_vertices(); ++u)
    if (verts_[u].alive && !is_full(u)) return false;
  return true;
}

FoldTrace run_folds(const AGraph& g, long long max_steps) {
  FoldTrace tr;
  AGraph cur = g;
  long long max_h = 1;
  for (int v = 0; v < g.groups().tree().size(); ++v)
    max_h = std::max(max_h, g.groups().tree().height_plus(v));
  long long bound =
      max_steps >= 0 ? max_steps : 4 * cur.alive_edge_count() + cur.c1() * max_h + 8;
  while (true) {
    auto w = cur.fold_witness();
    if (!w) {
      tr.folded = true;
      break;
    }
    if (static_cast<long long>(tr.steps.size()) >= bound) {
      tr.ok = false;
      break;
    }
    FoldStep st;
    st.move = w->kind == AGraph::FoldWitness::Kind::IA
                  ? "IA"
                  : (w->kind == AGraph::FoldWitness::Kind::IIAForward ? "IIA+" : "IIA-");
    st.f1 = w->f1;
    st.f2 = w->f2;
    st.before = cur.complexity();
    cur = cur.fold(*w);
    st.after = cur.complexity();
    st.tame_after = cur.is_tame();
    st.decreased = st.after < st.before;
    tr.ok = tr.ok && st.tame_after && st.decreased;
    tr.steps.push_back(std::move(st));
  }
  tr.final_graph = std::move(cur);
  return tr;
}

std::string to_tsv(const FoldTrace& trace) {
  std::ostringstream out;
  for (const FoldStep& s : trace.steps)
    out << s.move << '\t' << s.f1 << '\t' << s.f2 << '\t' << s.before.c1 << '\t' << s.after.c1
        << '\t' << s.before.c2 << '\t' << s.after.c2 << '\t' << (s.tame_after ? 1 : 0) << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// serialization

std::string to_json(const AGraph& g) {
  nlohmann::json j;
  j["vertices"] = nlohmann::json::array();
  j["edges"] = nlohmann::json::array();
  for (int u = 0; u < g.num_vertices(); ++u) {
    const AGraph::Vertex& v = g.vertex(u);
    if (!v.alive) continue;
    nlohmann::json s;
    if (const auto* ls = std::get_if<LeafState>(&v.state)) {
      s["tag"] = ls->full ? "leaf_full" : "meridional_count";
      s["count"] = ls->count;
      s["exact"] = ls->exact;
      if (ls->exact) {
        s["gens"] = nlohmann::json::array();
        for (const TorusElement& t : ls->gens) s["gens"].push_back(to_string(t));
      }
    } else if (const auto* bs = std::get_if<BraidState>(&v.state)) {
      s["tag"] = bs->kind == BraidState::Kind::Free
                     ? "free_meridional"
                     : (bs->kind == BraidState::Kind::NormalClosure ? "normal_closure"
                                                                    : "braid_full");
      s["basis"] = nlohmann::json::array();
      for (const PeripheralConjugate& pc : bs->basis)
        s["basis"].push_back(to_string(pc.conjugator) + " @ x" + std::to_string(pc.index));
    } else if (const auto* cs = std::get_if<ComposingState>(&v.state)) {
      s["tag"] = cs->kind == ComposingState::Kind::Trivial
                     ? "trivial"
                     : (cs->kind == ComposingState::Kind::Product ? "product" : "composing_full");
      s["entries"] = nlohmann::json::array();
      for (const CsEntry& en : cs->entries)
        s["entries"].push_back({{"conjugator", to_string(en.conjugator)},
                                {"index", en.index},
                                {"edge", en.edge}});
    }
    j["vertices"].push_back({{"id", u}, {"image", v.avertex}, {"state", s}});
  }
  for (int f = 0; f < g.num_edges(); ++f) {
    const AGraph::Edge& e = g.edge(f);
    if (!e.alive) continue;
    j["edges"].push_back({{"id", f},
                          {"image", e.aedge},
                          {"top", e.top},
                          {"bottom", e.bottom},
                          {"top_label", to_string(e.top_label)},
                          {"bottom_label", to_string(e.bottom_label)},
                          {"state", to_string(e.state)}});
  }
  return j.dump(2);
}

}  // namespace bridgefold
