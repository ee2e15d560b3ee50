// Command line front end: bridge numbers of labeled satellite trees,
// subgroup graph reports, presentations, fold traces, torus certificates.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "bridgefold/agraph.hpp"
#include "bridgefold/knot_tree.hpp"
#include "bridgefold/stallings.hpp"
#include "bridgefold/toruskit.hpp"
#include "bridgefold/tree_of_groups.hpp"

namespace {

using nlohmann::json;
using namespace bridgefold;

constexpr int kOk = 0, kAssertionFailure = 1, kInputError = 2;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string rational_str(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

int cmd_bridge(const std::string& file, const std::string& format) {
  KnotTree tree = parse_tree(slurp(file));
  long long closed = tree.bridge_number();
  long long rec = tree.bridge_number_recursive();
  bool agree = closed == rec;
  json partition;
  for (auto [kind, key] : {std::pair{VertexKind::V0, "V0"}, {VertexKind::V1, "V1"},
                           {VertexKind::V2, "V2"}}) {
    partition[key] = json::array();
    for (int v : tree.vertices_of_kind(kind)) partition[key].push_back(v);
  }
  json heights = json::array();
  for (int v = 0; v < tree.size(); ++v) heights.push_back(tree.height(v));
  if (format == "json") {
    json out{{"bridge", closed},
             {"recursive", rec},
             {"agreement", agree},
             {"heights", heights},
             {"partition", partition}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "tree        " << to_string(tree) << "\n"
              << "bridge      " << closed << "\n"
              << "recursive   " << rec << "\n"
              << "agreement   " << (agree ? "yes" : "NO") << "\n"
              << "heights    ";
    for (int v = 0; v < tree.size(); ++v) std::cout << " " << tree.height(v);
    std::cout << "\n";
  }
  return agree ? kOk : kAssertionFailure;
}

int cmd_presentation(const std::string& file, bool exact, const std::string& format) {
  KnotTree tree = parse_tree(slurp(file));
  TreeOfGroups tg = TreeOfGroups::build(tree, exact);
  std::string text = tg.presentation();
  if (format == "json") {
    json lines = json::array();
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    std::cout << json{{"presentation", lines}}.dump(2) << "\n";
  } else {
    std::cout << text;
  }
  return kOk;
}

int cmd_stallings(const std::string& file, const std::string& format) {
  std::istringstream in(slurp(file));
  int n = 0;
  std::vector<PeripheralConjugate> gens;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    for (std::string tok; ls >> tok;) toks.push_back(tok);
    if (toks.empty()) continue;
    if (n == 0) {
      if (toks.size() == 2 && toks[0] == "n") {
        n = std::atoi(toks[1].c_str());
        if (n < 1)
          throw std::invalid_argument("line " + std::to_string(lineno) + ": expected n <rank>");
        continue;
      }
      throw std::invalid_argument("line " + std::to_string(lineno) +
                                  ": first entry must declare the rank, e.g. `n 3`");
    }
    // last token is the generator index, the rest spell the conjugator
    int index = 0;
    try {
      std::size_t pos = 0;
      index = std::stoi(toks.back(), &pos);
      if (pos != toks.back().size()) throw std::invalid_argument(toks.back());
    } catch (const std::exception&) {
      throw std::invalid_argument("line " + std::to_string(lineno) +
                                  ": expected `<conjugator-word> <index>`");
    }
    std::string word_text;
    for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
      if (i) word_text += ' ';
      word_text += toks[i];
    }
    if (word_text.empty())
      throw std::invalid_argument("line " + std::to_string(lineno) +
                                  ": expected `<conjugator-word> <index>`");
    gens.push_back({parse_word(word_text), index});
  }
  if (n == 0) throw std::invalid_argument("missing rank declaration `n <rank>`");

  auto res = peripheral_basis(gens, n);
  if (format == "json") {
    json basis = json::array();
    for (const auto& pc : res.basis)
      basis.push_back({{"conjugator", to_string(pc.conjugator)}, {"index", pc.index}});
    std::cout << json{{"whole_group", res.whole_group},
                      {"rank", res.whole_group ? n : static_cast<int>(res.basis.size())},
                      {"basis", basis}}
                     .dump(2)
              << "\n";
  } else {
    if (res.whole_group) {
      std::cout << "whole group (rank " << n << ")\n";
    } else {
      std::cout << "free basis, rank " << res.basis.size() << "\n";
      for (const auto& pc : res.basis)
        std::cout << "  " << to_string(pc.conjugator) << " @ x" << pc.index << "\n";
    }
  }
  return kOk;
}

int cmd_fold(const std::string& tree_file, const std::string& paths_file, bool exact,
             long long max_steps, const std::string& format) {
  KnotTree tree = parse_tree(slurp(tree_file));
  TreeOfGroups tg = TreeOfGroups::build(tree, exact);
  std::vector<APath> paths = parse_paths(tg, slurp(paths_file));
  AGraph g = AGraph::build_initial(tg, paths);
  FoldTrace trace = run_folds(g, max_steps);
  bool complete = trace.final_graph.is_complete();
  bool ok = trace.ok && trace.folded;
  if (format == "json") {
    json steps = json::array();
    for (const FoldStep& s : trace.steps)
      steps.push_back({{"move", s.move},
                       {"f1", s.f1},
                       {"f2", s.f2},
                       {"before", {s.before.c1, s.before.c2}},
                       {"after", {s.after.c1, s.after.c2}},
                       {"tame", s.tame_after},
                       {"decreased", s.decreased}});
    json out{{"steps", steps},
             {"verdict",
              {{"folded", trace.folded},
               {"complete", complete},
               {"monotone", trace.ok},
               {"tame_throughout", trace.ok},
               {"final_complexity", {trace.final_graph.c1(), trace.final_graph.c2()}}}},
             {"final", json::parse(to_json(trace.final_graph))}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << to_tsv(trace);
    std::cout << "folded      " << (trace.folded ? "yes" : "NO") << "\n"
              << "complete    " << (complete ? "yes" : "no") << "\n"
              << "monotone    " << (trace.ok ? "yes" : "NO") << "\n"
              << "complexity  " << to_string(trace.final_graph.complexity()) << "\n";
  }
  return ok ? kOk : kAssertionFailure;
}

int cmd_torus_check(int p, int q, int r, const std::string& format) {
  std::vector<TamenessCertificate> certs;
  if (r >= 0) {
    certs.push_back(tameness_certificate(p, q, r));
  } else {
    for (int ri = 0; ri < q; ++ri) certs.push_back(tameness_certificate(p, q, ri));
  }
  bool all = true;
  if (format == "json") {
    json out = json::array();
    for (const auto& c : certs) {
      all = all && c.holds;
      out.push_back({{"p", c.p},
                     {"q", c.q},
                     {"r", c.r},
                     {"orbifold_euler", rational_str(c.orbifold)},
                     {"index_bound", c.index_bound},
                     {"cover_euler", c.cover},
                     {"holds", c.holds}});
    }
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& c : certs) {
      all = all && c.holds;
      std::cout << c.chain << "\n";
    }
  }
  return all ? kOk : kAssertionFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bridge numbers, meridional subgroup graphs, and certified folds"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  std::string format = "text";
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));

  std::string tree_file, paths_file, gens_file;
  bool exact = false;
  long long max_steps = -1;
  int p = 0, q = 0, r = -1;

  CLI::App* bridge = app.add_subcommand("bridge", "bridge number of a labeled tree");
  bridge->add_option("tree", tree_file, "tree file")->required();

  CLI::App* pres = app.add_subcommand("presentation", "group presentation of the tree");
  pres->add_option("tree", tree_file, "tree file")->required();
  pres->add_flag("--exact-torus", exact, "exact amalgam arithmetic at torus leaves");

  CLI::App* stal = app.add_subcommand("stallings", "basis report for meridional generators");
  stal->add_option("generators", gens_file, "generators file: `n <rank>`, then `<word> <index>` lines")
      ->required();

  CLI::App* fold = app.add_subcommand("fold", "fold a star of meridian paths to a fixed point");
  fold->add_option("tree", tree_file, "tree file")->required();
  fold->add_option("paths", paths_file, "paths file, one path per line")->required();
  fold->add_flag("--exact-torus", exact, "exact amalgam arithmetic at torus leaves");
  fold->add_option("--max-steps", max_steps, "diagnostic bound on fold steps");

  CLI::App* torus = app.add_subcommand("torus-check", "coset tameness certificate chain");
  torus->add_option("p", p, "torus parameter p")->required();
  torus->add_option("q", q, "torus parameter q")->required();
  torus->add_option("-r,--r", r, "single meridian count (default: all r < q)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*bridge) return cmd_bridge(tree_file, format);
    if (*pres) return cmd_presentation(tree_file, exact, format);
    if (*stal) return cmd_stallings(gens_file, format);
    if (*fold) return cmd_fold(tree_file, paths_file, exact, max_steps, format);
    if (*torus) return cmd_torus_check(p, q, r, format);
  } catch (const ParseError& e) {
    std::cerr << "parse error at line " << e.line << ", token " << e.column << ": " << e.what()
              << "\n";
    return kInputError;
  } catch (const InconsistencyError& e) {
    std::cerr << "inconsistency: " << e.what() << "\n";
    return kAssertionFailure;
  } catch (const UndecidableError& e) {
    std::cerr << "undecidable: " << e.what() << "\n";
    return kAssertionFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
