#include "bridgefold/stallings.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace bridgefold {

Word PeripheralConjugate::word(int n) const {
  return conjugate(conjugator, generator_word(index, n));
}

namespace {

using Edge = std::array<int, 3>;  // src, label, dst

struct RawGraph {
  int n = 1;
  int num_vertices = 1;
  std::set<Edge> edges;

  // Merge vertex b into a (a < b), dropping duplicate parallel edges.
  void merge(int a, int b) {
    std::set<Edge> next;
    for (const Edge& e : edges) {
      Edge f = e;
      if (f[0] == b) f[0] = a;
      if (f[2] == b) f[2] = a;
      next.insert(f);
    }
    edges.swap(next);
  }

  // One folding step at the lowest-numbered vertex admitting one.
  bool fold_step() {
    // For each alive vertex in ascending order look for two edges with the
    // same label leaving it, then two entering it.
    std::map<std::pair<int, int>, std::vector<int>> outs, ins;
    for (const Edge& e : edges) {
      outs[{e[0], e[1]}].push_back(e[2]);
      ins[{e[2], e[1]}].push_back(e[0]);
    }
    std::optional<std::pair<int, int>> pick;  // vertices to merge
    int pick_at = -1;
    auto consider = [&](const std::map<std::pair<int, int>, std::vector<int>>& m) {
      for (const auto& [key, targets] : m) {
        if (targets.size() < 2) continue;
        if (pick_at != -1 && key.first >= pick_at) continue;
        std::vector<int> t = targets;
        std::sort(t.begin(), t.end());
        pick = {t[0], t[1]};
        pick_at = key.first;
      }
    };
    consider(outs);
    consider(ins);
    if (!pick) return false;
    if (pick->first == pick->second) {
      // Two parallel identical edges cannot happen (set dedupes); equal
      // targets with distinct edges means a genuine merge of endpoints is
      // not needed, but the duplicate edge already collapsed.  Nothing to
      // do; report no change.
      return false;
    }
    merge(pick->first, pick->second);
    return true;
  }

  int degree(int v) const {
    int d = 0;
    for (const Edge& e : edges) {
      if (e[0] == v) ++d;
      if (e[2] == v) ++d;
    }
    return d;
  }

  std::set<int> vertices() const {
    std::set<int> vs{0};
    for (const Edge& e : edges) {
      vs.insert(e[0]);
      vs.insert(e[2]);
    }
    return vs;
  }

  void prune_leaves() {
    for (;;) {
      int victim = -1;
      for (int v : vertices()) {
        if (v != 0 && degree(v) <= 1) {
          victim = v;
          break;
        }
      }
      if (victim < 0) return;
      std::set<Edge> next;
      for (const Edge& e : edges)
        if (e[0] != victim && e[2] != victim) next.insert(e);
      edges.swap(next);
    }
  }
};

}  // namespace

SubgroupGraph SubgroupGraph::build(const std::vector<Word>& generators, int n) {
  if (n < 1) throw std::invalid_argument("ambient rank must be positive");
  RawGraph raw;
  raw.n = n;
  int next = 1;
  for (const Word& g : generators) {
    if (max_index(g) > n) throw std::invalid_argument("word uses a generator beyond the rank");
    if (g.empty()) continue;
    // Loop at the base spelling g: intermediate vertices are fresh.
    int prev = 0;
    for (std::size_t i = 0; i < g.length(); ++i) {
      int here = (i + 1 == g.length()) ? 0 : next++;
      int l = g.letter(i);
      if (l > 0)
        raw.edges.insert({prev, l, here});
      else
        raw.edges.insert({here, -l, prev});
      prev = here;
    }
  }
  while (raw.fold_step()) {
  }
  raw.prune_leaves();

  // Canonical breadth-first relabeling from the base: out-edges by label,
  // then in-edges by label.  In a folded graph this order is unambiguous.
  std::map<std::pair<int, int>, int> out_map, in_map;
  for (const Edge& e : raw.edges) {
    out_map[{e[0], e[1]}] = e[2];
    in_map[{e[2], e[1]}] = e[0];
  }
  std::map<int, int> relabel{{0, 0}};
  std::queue<int> bfs;
  bfs.push(0);
  int fresh = 1;
  while (!bfs.empty()) {
    int v = bfs.front();
    bfs.pop();
    for (int l = 1; l <= n; ++l) {
      for (int dir = 0; dir < 2; ++dir) {
        const auto& m = dir == 0 ? out_map : in_map;
        auto it = m.find({v, l});
        if (it == m.end()) continue;
        if (relabel.emplace(it->second, fresh).second) {
          bfs.push(it->second);
          ++fresh;
        }
      }
    }
  }

  SubgroupGraph g;
  g.n_ = n;
  g.out_.assign(fresh, std::vector<int>(n, -1));
  g.in_.assign(fresh, std::vector<int>(n, -1));
  for (const Edge& e : raw.edges) {
    int a = relabel.at(e[0]);
    int b = relabel.at(e[2]);
    g.out_[a][e[1] - 1] = b;
    g.in_[b][e[1] - 1] = a;
  }
  return g;
}

int SubgroupGraph::num_edges() const {
  int c = 0;
  for (const auto& row : out_)
    for (int t : row)
      if (t >= 0) ++c;
  return c;
}

std::optional<int> SubgroupGraph::trace(int from, const Word& w) const {
  int v = from;
  for (int l : w.letters()) {
    v = l > 0 ? out_[v][l - 1] : in_[v][-l - 1];
    if (v < 0) return std::nullopt;
  }
  return v;
}

bool SubgroupGraph::contains(const Word& w) const {
  auto end = trace(0, w);
  return end && *end == 0;
}

int SubgroupGraph::rank() const { return num_edges() - num_vertices() + 1; }

bool SubgroupGraph::is_whole_group() const {
  if (num_vertices() != 1) return false;
  for (int l = 1; l <= n_; ++l)
    if (out_[0][l - 1] != 0) return false;
  return true;
}

namespace {

// Cycles of a partial function next: V -> V.  Returns (smallest vertex on
// the cycle, period) pairs, sorted by vertex.
std::vector<std::pair<int, long long>> partial_function_cycles(
    int num_vertices, const std::vector<int>& next) {
  std::vector<int> state(num_vertices, 0);  // 0 unvisited, 1 in-progress id+2, 2 done
  std::vector<std::pair<int, long long>> cycles;
  std::vector<int> mark(num_vertices, -1);
  for (int start = 0; start < num_vertices; ++start) {
    if (state[start] != 0) continue;
    std::vector<int> path;
    int v = start;
    while (v >= 0 && state[v] == 0) {
      state[v] = 1;
      mark[v] = start;
      path.push_back(v);
      v = next[v];
    }
    if (v >= 0 && state[v] == 1 && mark[v] == start) {
      // Found a new cycle: the tail of `path` starting at v.
      auto it = std::find(path.begin(), path.end(), v);
      int mn = *std::min_element(it, path.end());
      cycles.push_back({mn, static_cast<long long>(path.end() - it)});
    }
    for (int u : path) state[u] = 2;
  }
  std::sort(cycles.begin(), cycles.end());
  return cycles;
}

}  // namespace

std::vector<PeripheralCycle> SubgroupGraph::peripheral_cycles(int index) const {
  if (index < 1 || index > n_ + 1) throw std::invalid_argument("peripheral index out of range");
  std::vector<int> next(num_vertices(), -1);
  if (index <= n_) {
    for (int v = 0; v < num_vertices(); ++v) next[v] = out_[v][index - 1];
  } else {
    Word w = generator_word(n_ + 1, n_);
    for (int v = 0; v < num_vertices(); ++v) {
      auto end = trace(v, w);
      next[v] = end ? *end : -1;
    }
  }
  std::vector<PeripheralCycle> out;
  for (auto [v, z] : partial_function_cycles(num_vertices(), next))
    out.push_back({v, z, index});
  return out;
}

Word SubgroupGraph::path_from_base(int v) const {
  // Parent pointers along the canonical BFS.
  std::vector<int> parent(num_vertices(), -2);
  std::vector<int> via(num_vertices(), 0);  // signed letter used to reach
  parent[0] = -1;
  std::queue<int> bfs;
  bfs.push(0);
  while (!bfs.empty()) {
    int u = bfs.front();
    bfs.pop();
    if (u == v) break;
    for (int l = 1; l <= n_; ++l) {
      int w = out_[u][l - 1];
      if (w >= 0 && parent[w] == -2) {
        parent[w] = u;
        via[w] = l;
        bfs.push(w);
      }
      w = in_[u][l - 1];
      if (w >= 0 && parent[w] == -2) {
        parent[w] = u;
        via[w] = -l;
        bfs.push(w);
      }
    }
  }
  if (parent[v] == -2) throw std::logic_error("vertex unreachable from base");
  std::vector<int> letters;
  for (int u = v; u != 0; u = parent[u]) letters.push_back(via[u]);
  std::reverse(letters.begin(), letters.end());
  return Word(std::move(letters));
}

std::string SubgroupGraph::to_edge_list() const {
  std::ostringstream out;
  out << "base 0\n";
  for (int v = 0; v < num_vertices(); ++v)
    for (int l = 1; l <= n_; ++l)
      if (out_[v][l - 1] >= 0) out << v << ' ' << l << ' ' << out_[v][l - 1] << '\n';
  return out.str();
}

PeripheralBasisResult peripheral_basis(const std::vector<PeripheralConjugate>& s, int n) {
  std::vector<Word> gens;
  std::set<int> s_indices;
  for (const PeripheralConjugate& pc : s) {
    if (pc.index < 1 || pc.index > n + 1)
      throw std::invalid_argument("peripheral index out of range");
    gens.push_back(pc.word(n));
    s_indices.insert(pc.index);
  }
  SubgroupGraph g = SubgroupGraph::build(gens, n);
  if (g.is_whole_group()) return {true, {}};

  PeripheralBasisResult res;
  std::set<int> t_indices;
  for (int i = 1; i <= n + 1; ++i) {
    for (const PeripheralCycle& c : g.peripheral_cycles(i)) {
      if (c.length != 1)
        throw InconsistencyError(
            "peripheral cycle of length > 1: generators are not a set of peripheral "
            "conjugates of a proper subgroup");
      res.basis.push_back({g.path_from_base(c.vertex), i});
      t_indices.insert(i);
    }
  }
  if (static_cast<int>(res.basis.size()) != g.rank())
    throw InconsistencyError("peripheral cycle count does not match subgroup rank");
  if (t_indices != s_indices)
    throw InconsistencyError("peripheral basis index set differs from input index set");
  return res;
}

CosetTracer::CosetTracer(const SubgroupGraph& g) : g_(g), next_id_(g.num_vertices()) {}

int CosetTracer::step(int v, int letter) {
  int label = letter > 0 ? letter : -letter;
  if (v < g_.num_vertices()) {
    int w = letter > 0 ? g_.out_edge(v, label) : g_.in_edge(v, label);
    if (w >= 0) return w;
  }
  auto& fwd = letter > 0 ? ext_out_ : ext_in_;
  auto& bwd = letter > 0 ? ext_in_ : ext_out_;
  for (const auto& [key, w] : fwd)
    if (key == std::make_pair(v, label)) return w;
  int w = next_id_++;
  fwd.push_back({{v, label}, w});
  bwd.push_back({{w, label}, v});
  return w;
}

int CosetTracer::coset(const Word& w) {
  int v = g_.base();
  for (int l : w.letters()) v = step(v, l);
  return v;
}

std::optional<long long> exists_power_match(const SubgroupGraph& g, const Word& s0,
                                            const Word& conj, const Word& core) {
  if (core.empty()) throw std::invalid_argument("power core must be nontrivial");
  CosetTracer tracer(g);
  int target = tracer.coset(s0);
  long long bound = g.num_vertices() + static_cast<long long>(s0.length()) +
                    2 * static_cast<long long>(conj.length()) +
                    static_cast<long long>(core.length()) + 4;
  for (long long k = 0; k <= bound; ++k) {
    for (long long z : {k, -k}) {
      if (z == 0 && k != 0) continue;
      Word pz = conjugate(conj, power(core, z));
      if (tracer.coset(pz) == target) return z;
    }
  }
  return std::nullopt;
}

std::optional<long long> min_positive_power_in(const SubgroupGraph& g, const Word& conj,
                                               const Word& core) {
  if (core.empty()) throw std::invalid_argument("power core must be nontrivial");
  long long bound = g.num_vertices() + static_cast<long long>(conj.length()) + 2;
  for (long long z = 1; z <= bound; ++z) {
    if (g.contains(conjugate(conj, power(core, z)))) return z;
  }
  return std::nullopt;
}

}  // namespace bridgefold
