#include "bridgefold/tree_of_groups.hpp"

#include <cctype>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace bridgefold {

namespace {

long long floor_div(long long a, long long b) {
  long long d = a / b, r = a % b;
  return r != 0 && (r < 0) != (b < 0) ? d - 1 : d;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// Incremental normal-form builder over <u, v | u^p = v^q>.
class TorusBuilder {
 public:
  TorusBuilder(int p, int q) : p_(p), q_(q) {}

  void push(char gen, long long exp) {
    if (exp == 0) return;
    if (!st_.empty() && st_.back().first == gen) {
      exp += st_.back().second;
      st_.pop_back();
    }
    long long mod = gen == 'u' ? p_ : q_;
    long long c = floor_div(exp, mod);
    center_ += c;
    exp -= c * mod;
    if (exp != 0) st_.emplace_back(gen, exp);
  }

  void push_center(long long c) { center_ += c; }

  TorusElement take() {
    TorusElement out;
    out.p = p_;
    out.q = q_;
    out.center = center_;
    for (const auto& [gen, exp] : st_) out.syllables.push_back({gen, static_cast<int>(exp)});
    return out;
  }

 private:
  int p_, q_;
  long long center_ = 0;
  std::vector<std::pair<char, long long>> st_;
};

}  // namespace

TorusElement torus_identity(int p, int q) {
  TorusElement out;
  out.p = p;
  out.q = q;
  return out;
}

TorusElement torus_normal_form(int p, int q, const std::vector<TorusSyllable>& raw) {
  TorusBuilder b(p, q);
  for (const TorusSyllable& s : raw) {
    require(s.gen == 'u' || s.gen == 'v', "torus letters are u and v");
    b.push(s.gen, s.exp);
  }
  return b.take();
}

TorusElement torus_multiply(const TorusElement& a, const TorusElement& b) {
  require(a.p == b.p && a.q == b.q, "mismatched torus parameters");
  TorusBuilder acc(a.p, a.q);
  acc.push_center(a.center + b.center);
  for (const TorusSyllable& s : a.syllables) acc.push(s.gen, s.exp);
  for (const TorusSyllable& s : b.syllables) acc.push(s.gen, s.exp);
  return acc.take();
}

TorusElement torus_invert(const TorusElement& a) {
  TorusBuilder acc(a.p, a.q);
  acc.push_center(-a.center);
  for (auto it = a.syllables.rbegin(); it != a.syllables.rend(); ++it) acc.push(it->gen, -it->exp);
  return acc.take();
}

TorusElement torus_power(const TorusElement& a, long long k) {
  const TorusElement base = k < 0 ? torus_invert(a) : a;
  TorusBuilder acc(a.p, a.q);
  long long reps = k < 0 ? -k : k;
  acc.push_center(base.center * reps);
  for (long long i = 0; i < reps; ++i)
    for (const TorusSyllable& s : base.syllables) acc.push(s.gen, s.exp);
  return acc.take();
}

bool torus_equal(const TorusElement& a, const TorusElement& b) { return a == b; }

std::string to_string(const TorusElement& a) {
  if (a.is_identity()) return "1";
  std::string out;
  auto item = [&](char gen, long long exp) {
    if (!out.empty()) out += ',';
    out += gen;
    if (exp != 1) out += "^" + std::to_string(exp);
  };
  if (a.center != 0) item('c', a.center);
  for (const TorusSyllable& s : a.syllables) item(s.gen, s.exp);
  return out;
}

TorusElement torus_meridian(int p, int q) {
  // solve a*q + b*p = 1 with |a| minimal, ties toward a > 0
  long long a0 = 0;
  for (long long a = 1; a < p; ++a)
    if ((a * q) % p == 1) {
      a0 = a;
      break;
    }
  long long a = a0, alt = a0 - p;
  if (std::llabs(alt) < std::llabs(a)) a = alt;
  long long b = (1 - a * q) / p;
  TorusBuilder acc(p, q);
  acc.push('u', a);
  acc.push('v', b);
  return acc.take();
}

TorusElement torus_longitude(int p, int q) {
  TorusElement z = torus_identity(p, q);
  z.center = 1;
  return torus_multiply(z, torus_power(torus_meridian(p, q), -static_cast<long long>(p) * q));
}

ComposingElement cs_multiply(const ComposingElement& a, const ComposingElement& b) {
  return {multiply(a.w, b.w), a.z + b.z};
}

ComposingElement cs_invert(const ComposingElement& a) { return {invert(a.w), -a.z}; }

std::string to_string(const ComposingElement& a) {
  std::string out = to_string(a.w);
  if (a.z != 0) {
    if (a.w.empty()) out.clear();
    else out += ' ';
    out += "t^" + std::to_string(a.z);
  }
  return out.empty() ? "1" : out;
}

CsClassification cs_classify(const std::vector<CsGenerator>& S, int n, bool include_t) {
  (void)include_t;  // the t factor is central and never affects the classification
  std::vector<PeripheralConjugate> s;
  std::vector<Word> words;
  for (const CsGenerator& gen : S) {
    require(gen.index >= 1 && gen.index <= n, "conjugated generator index out of range");
    s.push_back({gen.g.w, gen.index});
    words.push_back(s.back().word(n));
  }
  SubgroupGraph graph = SubgroupGraph::build(words, n);
  CsClassification out;
  if (graph.is_whole_group()) {
    out.whole_group = true;
    out.full_at_identity.assign(n, true);
    return out;
  }
  if (!graph.peripheral_cycles(n + 1).empty())
    throw InconsistencyError(
        "boundary subgroup meets the generated subgroup beyond the circle factor");
  out.basis = peripheral_basis(s, n).basis;
  out.full_at_identity.assign(n, false);
  for (int i = 1; i <= n; ++i) {
    int v = graph.base();
    for (int step = 0; step < graph.num_vertices(); ++step) {
      auto next = graph.trace(v, Word({i}));
      if (!next) break;
      v = *next;
      if (v == graph.base()) {
        out.full_at_identity[i - 1] = true;
        break;
      }
    }
  }
  return out;
}

std::string to_string(const OpaqueElement& a) {
  if (a.is_identity()) return "1";
  std::string out;
  auto item = [&](char gen, long long exp) {
    if (exp == 0) return;
    if (!out.empty()) out += ',';
    out += gen;
    if (exp != 1) out += "^" + std::to_string(exp);
  };
  item('m', a.m);
  item('l', a.l);
  return out;
}

GroupElement identity_element(const VertexGroupDescriptor& d) {
  switch (d.kind) {
    case VertexKind::V0:
      if (d.exact) return torus_identity(d.leaf.p, d.leaf.q);
      return OpaqueElement{};
    case VertexKind::V1:
      return BraidSpaceElement{};
    case VertexKind::V2:
      return ComposingElement{};
  }
  return OpaqueElement{};
}

GroupElement multiply(const VertexGroupDescriptor& d, const GroupElement& a,
                      const GroupElement& b) {
  if (std::holds_alternative<OpaqueElement>(a)) {
    const auto &x = std::get<OpaqueElement>(a), &y = std::get<OpaqueElement>(b);
    return OpaqueElement{x.m + y.m, x.l + y.l};
  }
  if (std::holds_alternative<TorusElement>(a))
    return torus_multiply(std::get<TorusElement>(a), std::get<TorusElement>(b));
  if (std::holds_alternative<BraidSpaceElement>(a))
    return bs_multiply(d.braid, std::get<BraidSpaceElement>(a), std::get<BraidSpaceElement>(b));
  return cs_multiply(std::get<ComposingElement>(a), std::get<ComposingElement>(b));
}

GroupElement invert(const VertexGroupDescriptor& d, const GroupElement& a) {
  if (std::holds_alternative<OpaqueElement>(a)) {
    const auto& x = std::get<OpaqueElement>(a);
    return OpaqueElement{-x.m, -x.l};
  }
  if (std::holds_alternative<TorusElement>(a)) return torus_invert(std::get<TorusElement>(a));
  if (std::holds_alternative<BraidSpaceElement>(a))
    return bs_invert(d.braid, std::get<BraidSpaceElement>(a));
  return cs_invert(std::get<ComposingElement>(a));
}

bool is_identity(const GroupElement& a) {
  return std::visit([](const auto& x) { return x.is_identity(); }, a);
}

bool equal(const GroupElement& a, const GroupElement& b) { return a == b; }

std::string to_string(const GroupElement& a) {
  return std::visit([](const auto& x) { return to_string(x); }, a);
}

namespace {

struct ElementToken {
  char letter;     // 'x', 't', 'u', 'v', 'c', 'm', 'l'
  int index;       // for x letters
  long long exp;
};

std::vector<ElementToken> lex_element(const std::string& text) {
  std::vector<ElementToken> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    require(!item.empty(), "empty element item");
    if (item == "1") continue;
    ElementToken tok{};
    std::size_t pos = 0;
    char c = item[0];
    if (c == 'x' || c == 'X') {
      tok.letter = 'x';
      pos = 1;
      std::size_t start = pos;
      while (pos < item.size() && std::isdigit(static_cast<unsigned char>(item[pos]))) ++pos;
      require(pos > start, "bad element item: " + item);
      tok.index = std::atoi(item.substr(start, pos - start).c_str());
      tok.exp = c == 'x' ? 1 : -1;
    } else if (c == 't' || c == 'u' || c == 'v' || c == 'c' || c == 'm' || c == 'l') {
      tok.letter = c;
      tok.exp = 1;
      pos = 1;
    } else {
      throw std::invalid_argument("bad element item: " + item);
    }
    if (pos < item.size()) {
      require(item[pos] == '^', "bad element item: " + item);
      char* end = nullptr;
      long long e = std::strtoll(item.c_str() + pos + 1, &end, 10);
      require(end && *end == '\0' && end != item.c_str() + pos + 1, "bad exponent: " + item);
      tok.exp *= e;
    }
    out.push_back(tok);
  }
  return out;
}

}  // namespace

GroupElement parse_element(const VertexGroupDescriptor& d, const std::string& text) {
  std::vector<ElementToken> toks = lex_element(text);
  switch (d.kind) {
    case VertexKind::V0: {
      if (!d.exact) {
        OpaqueElement out;
        for (const ElementToken& t : toks) {
          if (t.letter == 'm') out.m += t.exp;
          else if (t.letter == 'l') out.l += t.exp;
          else throw std::invalid_argument("leaf elements admit only m and l symbols");
        }
        return out;
      }
      int p = d.leaf.p, q = d.leaf.q;
      TorusElement acc = torus_identity(p, q);
      for (const ElementToken& t : toks) {
        TorusElement factor = torus_identity(p, q);
        switch (t.letter) {
          case 'u': factor = torus_normal_form(p, q, {{'u', 1}}); break;
          case 'v': factor = torus_normal_form(p, q, {{'v', 1}}); break;
          case 'c': factor.center = 1; break;
          case 'm': factor = torus_meridian(p, q); break;
          case 'l': factor = torus_longitude(p, q); break;
          default: throw std::invalid_argument("torus elements admit c, u, v, m, l symbols");
        }
        acc = torus_multiply(acc, torus_power(factor, t.exp));
      }
      return acc;
    }
    case VertexKind::V1: {
      BraidSpaceElement acc;
      for (const ElementToken& t : toks) {
        BraidSpaceElement factor;
        if (t.letter == 't') {
          factor.t = t.exp;
        } else {
          require(t.letter == 'x', "braid-space elements admit x letters and t");
          require(t.index >= 1 && t.index <= d.braid.n, "generator index out of range");
          factor.w = power(Word({t.index}), t.exp);
        }
        acc = bs_multiply(d.braid, acc, factor);
      }
      return acc;
    }
    case VertexKind::V2: {
      ComposingElement out;
      std::vector<int> letters;
      for (const ElementToken& t : toks) {
        if (t.letter == 't') {
          out.z += t.exp;
          continue;
        }
        require(t.letter == 'x', "composing elements admit x letters and t");
        require(t.index >= 1 && t.index <= d.fanout + 1, "generator index out of range");
        Word g = generator_word(t.index, d.fanout);
        Word powed = power(g, t.exp);
        for (int l : powed.letters()) letters.push_back(l);
      }
      out.w = Word(letters);
      return out;
    }
  }
  throw std::invalid_argument("unreachable");
}

TreeOfGroups TreeOfGroups::build(const KnotTree& tree, bool exact_torus) {
  auto violations = tree.validate();
  if (!violations.empty()) throw std::invalid_argument(violations.front());
  TreeOfGroups tg;
  tg.tree_ = tree;
  tg.vertex_.resize(tree.size());
  tg.edge_of_child_.assign(tree.size(), -1);
  for (int v = 0; v < tree.size(); ++v) {
    VertexGroupDescriptor& d = tg.vertex_[v];
    d.kind = tree.kind(v);
    switch (d.kind) {
      case VertexKind::V0:
        d.leaf = *tree.node(v).leaf;
        d.exact = exact_torus && d.leaf.kind == LeafLabel::Kind::Torus;
        break;
      case VertexKind::V1:
        d.braid = BraidContext::make(*tree.node(v).braid);
        break;
      case VertexKind::V2:
        d.fanout = static_cast<int>(tree.node(v).children.size());
        break;
    }
  }
  for (int v = 0; v < tree.size(); ++v) {
    int parent = tree.node(v).parent;
    if (parent < 0) continue;
    const auto& siblings = tree.node(parent).children;
    int j = 0;
    for (std::size_t i = 0; i < siblings.size(); ++i)
      if (siblings[i] == v) j = static_cast<int>(i) + 1;
    tg.edge_of_child_[v] = static_cast<int>(tg.edges_.size());
    tg.edges_.push_back({parent, v, j});
  }
  return tg;
}

int TreeOfGroups::edge_of_child(int child_vertex) const { return edge_of_child_.at(child_vertex); }

GroupElement TreeOfGroups::alpha_map(int e, long long z1, long long z2) const {
  const Edge& ed = edge(e);
  const VertexGroupDescriptor& d = vertex(ed.parent);
  if (d.kind == VertexKind::V1)
    return BraidSpaceElement{power(positive_product(d.braid.n), z1), z2};
  if (d.kind == VertexKind::V2) return ComposingElement{power(Word({ed.j_index}), z2), z1};
  throw std::invalid_argument("edge parent cannot be a leaf");
}

GroupElement TreeOfGroups::omega_map(int e, long long z1, long long z2) const {
  const Edge& ed = edge(e);
  const VertexGroupDescriptor& d = vertex(ed.child);
  switch (d.kind) {
    case VertexKind::V0:
      if (d.exact)
        return torus_multiply(torus_power(torus_meridian(d.leaf.p, d.leaf.q), z1),
                              torus_power(torus_longitude(d.leaf.p, d.leaf.q), z2));
      return OpaqueElement{z1, z2};
    case VertexKind::V1:
      require(z2 == 0, "satellite-space longitudes are not representable");
      return BraidSpaceElement{power(Word({1}), z1), 0};
    case VertexKind::V2:
      return ComposingElement{power(generator_word(d.fanout + 1, d.fanout), z2), z1};
  }
  throw std::invalid_argument("unreachable");
}

std::string TreeOfGroups::presentation() const {
  std::ostringstream out;
  for (int v = 0; v < num_vertices(); ++v) {
    const VertexGroupDescriptor& d = vertex(v);
    out << "vertex " << v << ": ";
    switch (d.kind) {
      case VertexKind::V0:
        if (d.leaf.kind == LeafLabel::Kind::Torus) {
          out << "< u, v | u^" << d.leaf.p << " = v^" << d.leaf.q << " >"
              << "  meridian " << to_string(torus_meridian(d.leaf.p, d.leaf.q)) << "  longitude "
              << to_string(torus_longitude(d.leaf.p, d.leaf.q));
        } else {
          out << "G(" << d.leaf.name << ")  meridian m  longitude l";
        }
        break;
      case VertexKind::V1: {
        int n = d.braid.n;
        out << "< x1..x" << n << ", t | t xi t^-1 = phi(xi) >  phi: ";
        for (int i = 1; i <= n; ++i) {
          if (i > 1) out << ", ";
          out << "x" << i << " -> " << to_string(d.braid.phi.images[i - 1]);
        }
        break;
      }
      case VertexKind::V2:
        out << "< x1..x" << d.fanout << ", t | [xi, t] = 1 >";
        break;
    }
    out << "\n";
  }
  for (int e = 0; e < num_edges(); ++e) {
    const Edge& ed = edge(e);
    out << "edge " << e << ": " << ed.parent << " -> " << ed.child << "  into parent: m_e -> "
        << to_string(alpha_map(e, 1, 0)) << ", l_e -> " << to_string(alpha_map(e, 0, 1))
        << "  into child: m_e -> " << to_string(omega_map(e, 1, 0)) << ", l_e -> ";
    const VertexGroupDescriptor& child = vertex(ed.child);
    if (child.kind == VertexKind::V1) out << "(not represented)";
    else out << to_string(omega_map(e, 0, 1));
    out << "\n";
  }
  return out.str();
}

std::vector<APath> parse_paths(const TreeOfGroups& tg, const std::string& text) {
  std::vector<APath> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
    if (tokens.empty() || tokens.front()[0] == '#') continue;
    APath path;
    int at = tg.tree().root();
    bool expect_element = true;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const std::string& t = tokens[i];
      int col = static_cast<int>(i) + 1;
      if (expect_element) {
        if (t.rfind("a:", 0) != 0) throw ParseError(lineno, col, "expected an a:<element> token");
        try {
          path.elements.push_back(parse_element(tg.vertex(at), t.substr(2)));
        } catch (const std::invalid_argument& err) {
          throw ParseError(lineno, col, err.what());
        }
      } else {
        if (t.rfind("e:", 0) != 0 || t.size() < 4 || (t[2] != 'd' && t[2] != 'u'))
          throw ParseError(lineno, col, "expected an e:d<vertex> or e:u<vertex> token");
        bool down = t[2] == 'd';
        int child = std::atoi(t.c_str() + 3);
        if (child <= 0 || child >= tg.tree().size())
          throw ParseError(lineno, col, "unknown edge vertex in " + t);
        int e = tg.edge_of_child(child);
        const TreeOfGroups::Edge& ed = tg.edge(e);
        if (down ? ed.parent != at : ed.child != at)
          throw ParseError(lineno, col, "edge " + t + " does not continue the path");
        path.edges.push_back(e);
        path.descending.push_back(down);
        at = down ? ed.child : ed.parent;
      }
      expect_element = !expect_element;
    }
    if (expect_element) throw ParseError(lineno, 1, "path must end with an element token");
    if (at != tg.tree().root()) throw ParseError(lineno, 1, "path must return to the root");
    out.push_back(std::move(path));
  }
  return out;
}

}  // namespace bridgefold
