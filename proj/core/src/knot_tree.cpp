#include "bridgefold/knot_tree.hpp"

#include <cctype>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace bridgefold {

LeafLabel LeafLabel::torus(int p, int q) {
  LeafLabel l;
  l.kind = Kind::Torus;
  l.p = p;
  l.q = q;
  return l;
}

LeafLabel LeafLabel::opaque(std::string name, int bridge, bool tame) {
  LeafLabel l;
  l.kind = Kind::Opaque;
  l.name = std::move(name);
  l.bridge = bridge;
  l.tame = tame;
  return l;
}

int LeafLabel::bridge_number() const {
  return kind == Kind::Torus ? std::min(p, q) : bridge;
}

ParseError::ParseError(int line, int column, const std::string& what)
    : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                         std::to_string(column) + ": " + what),
      line(line),
      column(column) {}

KnotTree KnotTree::single_leaf(LeafLabel label) {
  KnotTree t;
  Node n;
  n.leaf = std::move(label);
  t.nodes_.push_back(std::move(n));
  return t;
}

namespace {

// Appends the nodes of `sub` under `parent`, remapping indices.
int graft(std::vector<KnotTree::Node>& nodes, const KnotTree& sub, int parent) {
  int offset = static_cast<int>(nodes.size());
  for (int v = 0; v < sub.size(); ++v) {
    KnotTree::Node n = sub.node(v);
    n.parent = n.parent < 0 ? parent : n.parent + offset;
    for (int& c : n.children) c += offset;
    nodes.push_back(std::move(n));
  }
  return offset;
}

}  // namespace

KnotTree KnotTree::satellite(const BraidWord& braid, KnotTree companion) {
  KnotTree t;
  Node root;
  root.braid = braid;
  t.nodes_.push_back(std::move(root));
  int child = graft(t.nodes_, companion, 0);
  t.nodes_[0].children.push_back(child);
  return t;
}

KnotTree KnotTree::compose(std::vector<KnotTree> summands) {
  KnotTree t;
  t.nodes_.emplace_back();
  for (const KnotTree& s : summands) {
    int child = graft(t.nodes_, s, 0);
    t.nodes_[0].children.push_back(child);
  }
  return t;
}

const KnotTree::Node& KnotTree::node(int v) const {
  if (v < 0 || v >= size()) throw std::out_of_range("unknown vertex " + std::to_string(v));
  return nodes_[v];
}

VertexKind KnotTree::kind(int v) const {
  std::size_t c = node(v).children.size();
  if (c == 0) return VertexKind::V0;
  return c == 1 ? VertexKind::V1 : VertexKind::V2;
}

int KnotTree::n_of(int v) const {
  return kind(v) == VertexKind::V1 ? node(v).braid->strands : 1;
}

long long KnotTree::height(int v) const {
  long long h = 1;
  for (int p = node(v).parent; p >= 0; p = nodes_[p].parent) h *= n_of(p);
  return h;
}

std::vector<std::string> KnotTree::validate() const {
  std::vector<std::string> out;
  auto complain = [&](int v, const std::string& msg) {
    out.push_back("vertex " + std::to_string(v) + ": " + msg);
  };
  for (int v = 0; v < size(); ++v) {
    const Node& n = nodes_[v];
    switch (kind(v)) {
      case VertexKind::V0:
        if (!n.leaf) {
          complain(v, "leaf without a knot label");
          break;
        }
        if (n.braid) complain(v, "leaf carries a braid label");
        if (n.leaf->kind == LeafLabel::Kind::Torus) {
          int p = n.leaf->p, q = n.leaf->q;
          if (!(p > q && q >= 2)) complain(v, "torus parameters need p > q >= 2");
          else if (std::gcd(p, q) != 1) complain(v, "torus parameters must be coprime");
        } else if (n.leaf->bridge < 2) {
          complain(v, "opaque leaf needs bridge number >= 2");
        }
        break;
      case VertexKind::V1:
        if (!n.braid) {
          complain(v, "satellite vertex without a braid label");
          break;
        }
        if (n.leaf) complain(v, "satellite vertex carries a knot label");
        if (n.braid->strands < 2) complain(v, "braid needs at least 2 strands");
        else if (!is_knot_pattern(*n.braid)) complain(v, "closed braid is not a knot");
        break;
      case VertexKind::V2:
        if (n.leaf || n.braid) complain(v, "composing vertex carries a label");
        break;
    }
  }
  return out;
}

long long KnotTree::bridge_number() const {
  long long total = 0;
  for (int v = 0; v < size(); ++v) {
    if (kind(v) == VertexKind::V0) total += height(v) * nodes_[v].leaf->bridge_number();
    else if (kind(v) == VertexKind::V2)
      total -= height(v) * (static_cast<long long>(nodes_[v].children.size()) - 1);
  }
  return total;
}

long long KnotTree::recursive_at(int v) const {
  switch (kind(v)) {
    case VertexKind::V0:
      return nodes_[v].leaf->bridge_number();
    case VertexKind::V1:
      return n_of(v) * recursive_at(nodes_[v].children[0]);
    case VertexKind::V2: {
      long long sum = 0;
      for (int c : nodes_[v].children) sum += recursive_at(c);
      return sum - (static_cast<long long>(nodes_[v].children.size()) - 1);
    }
  }
  return 0;
}

long long KnotTree::bridge_number_recursive() const { return recursive_at(root()); }

std::vector<int> KnotTree::vertices_of_kind(VertexKind k) const {
  std::vector<int> out;
  for (int v = 0; v < size(); ++v)
    if (kind(v) == k) out.push_back(v);
  return out;
}

namespace {

class TreeParser {
 public:
  explicit TreeParser(const std::string& text) : text_(text) {}

  KnotTree parse() {
    KnotTree t = tree();
    skip_ws();
    if (pos_ < text_.size()) fail("trailing input");
    auto violations = t.validate();
    if (!violations.empty()) fail(violations.front());
    return t;
  }

 private:
  KnotTree tree() {
    std::string head = ident();
    if (head == "torus") {
      expect('(');
      int p = integer();
      expect(',');
      int q = integer();
      expect(')');
      return KnotTree::single_leaf(LeafLabel::torus(p, q));
    }
    if (head == "opaque") {
      expect('(');
      std::string name = ident();
      expect(',');
      int b = integer();
      bool tame = false;
      skip_ws();
      if (peek() == ',') {
        ++pos_;
        if (ident() != "tame") fail("expected 'tame'");
        tame = true;
      }
      expect(')');
      return KnotTree::single_leaf(LeafLabel::opaque(name, b, tame));
    }
    if (head == "sat") {
      expect('(');
      if (ident() != "braid") fail("expected 'braid'");
      int strands = integer();
      std::string word = quoted();
      BraidWord b;
      try {
        b = parse_braid(word, strands);
      } catch (const std::invalid_argument& e) {
        fail(e.what());
      }
      expect(',');
      KnotTree companion = tree();
      expect(')');
      return KnotTree::satellite(b, std::move(companion));
    }
    if (head == "sum") {
      expect('(');
      std::vector<KnotTree> parts;
      parts.push_back(tree());
      skip_ws();
      while (peek() == ',') {
        ++pos_;
        parts.push_back(tree());
        skip_ws();
      }
      expect(')');
      if (parts.size() < 2) fail("sum needs at least two summands");
      return KnotTree::compose(std::move(parts));
    }
    fail("expected torus, opaque, sat or sum");
    return KnotTree::single_leaf(LeafLabel::torus(3, 2));  // unreachable
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
            text_[pos_] == '-'))
      ++pos_;
    if (pos_ == start) fail("expected a name");
    return text_.substr(start, pos_ - start);
  }

  int integer() {
    skip_ws();
    std::size_t start = pos_;
    if (peek() == '-') ++pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start || (text_[start] == '-' && pos_ == start + 1)) fail("expected an integer");
    return std::atoi(text_.substr(start, pos_ - start).c_str());
  }

  std::string quoted() {
    skip_ws();
    if (peek() != '"') fail("expected a quoted braid word");
    std::size_t start = ++pos_;
    while (pos_ < text_.size() && text_[pos_] != '"') ++pos_;
    if (pos_ == text_.size()) fail("unterminated quote");
    return text_.substr(start, pos_++ - start);
  }

  [[noreturn]] void fail(const std::string& msg) const {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(line, col, msg);
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

void print_tree(const KnotTree& t, int v, std::ostream& out) {
  const KnotTree::Node& n = t.node(v);
  switch (t.kind(v)) {
    case VertexKind::V0:
      if (n.leaf->kind == LeafLabel::Kind::Torus)
        out << "torus(" << n.leaf->p << "," << n.leaf->q << ")";
      else {
        out << "opaque(" << n.leaf->name << "," << n.leaf->bridge;
        if (n.leaf->tame) out << ",tame";
        out << ")";
      }
      break;
    case VertexKind::V1:
      out << "sat(braid " << n.braid->strands << " \"" << to_string(*n.braid) << "\", ";
      print_tree(t, n.children[0], out);
      out << ")";
      break;
    case VertexKind::V2:
      out << "sum(";
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) out << ", ";
        print_tree(t, n.children[i], out);
      }
      out << ")";
      break;
  }
}

}  // namespace

KnotTree parse_tree(const std::string& text) { return TreeParser(text).parse(); }

std::string to_string(const KnotTree& tree) {
  std::ostringstream out;
  print_tree(tree, tree.root(), out);
  return out.str();
}

}  // namespace bridgefold
