#pragma once

// Test-only reference unifier. Works on an explicit node graph with
// equivalence classes kept as plain sets and merged to a fixpoint; shares
// no code with the workspace unifier. Handles atoms, variables and AVMs.

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gramwb/featstruct.hpp"

namespace oracle {

struct NaiveGraph {
  struct N {
    enum { Atom, Var, Avm } kind = Var;
    std::string atom;
    std::map<std::string, int> arcs;
  };
  std::vector<N> nodes;

  int add(const gramwb::fs::FeatureStructure& fs, std::map<int, int>& seen) {
    if (auto it = seen.find(fs.root()); it != seen.end()) return it->second;
    int me = static_cast<int>(nodes.size());
    nodes.emplace_back();
    seen[fs.root()] = me;
    if (fs.is_atom()) {
      nodes[me].kind = N::Atom;
      nodes[me].atom = fs.atom_name();
    } else if (fs.is_avm()) {
      nodes[me].kind = N::Avm;
      for (const auto& [name, child] : fs.features()) {
        int c = add(child, seen);
        nodes[me].arcs[name] = c;
      }
    }
    return me;
  }
};

/// Returns the unified structure printed in canonical form, or nullopt.
inline std::optional<std::string> naive_unify(const gramwb::fs::FeatureStructure& a,
                                              const gramwb::fs::FeatureStructure& b) {
  NaiveGraph g;
  std::map<int, int> sa, sb;
  int ra = g.add(a, sa);
  int rb = a.same_graph(b) ? g.add(b, sa) : g.add(b, sb);

  // class id per node; merge until congruent
  std::vector<int> cls(g.nodes.size());
  for (std::size_t i = 0; i < cls.size(); ++i) cls[i] = static_cast<int>(i);
  auto merge = [&](int x, int y) {
    int cx = cls[x], cy = cls[y];
    if (cx == cy) return false;
    for (auto& c : cls)
      if (c == cy) c = cx;
    return true;
  };
  merge(ra, rb);
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<int, std::map<std::string, int>> arcs;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      for (const auto& [f, t] : g.nodes[i].arcs) {
        auto& slot = arcs[cls[i]];
        auto it = slot.find(f);
        if (it == slot.end()) slot[f] = t;
        else if (merge(it->second, t)) changed = true;
      }
    }
  }

  // consistency per class
  std::map<int, std::set<std::string>> atoms;
  std::map<int, bool> has_avm;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto& n = g.nodes[i];
    if (n.kind == NaiveGraph::N::Atom) atoms[cls[i]].insert(n.atom);
    if (n.kind == NaiveGraph::N::Avm && !n.arcs.empty()) has_avm[cls[i]] = true;
  }
  for (const auto& [c, s] : atoms)
    if (s.size() > 1 || has_avm[c]) return std::nullopt;

  // rebuild a graph over classes and print it with the library printer
  std::map<int, int> index;
  auto out = std::make_shared<gramwb::fs::Graph>();
  std::map<int, std::map<std::string, int>> class_arcs;
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    for (const auto& [f, t] : g.nodes[i].arcs) class_arcs[cls[i]][f] = cls[t];
  std::set<int> on_path;
  bool cyclic = false;
  std::function<int(int)> build = [&](int c) -> int {
    if (on_path.count(c)) {
      cyclic = true;
      return 0;
    }
    if (auto it = index.find(c); it != index.end()) return it->second;
    int me = static_cast<int>(out->nodes.size());
    out->nodes.emplace_back();
    index[c] = me;
    gramwb::fs::Node node;
    if (atoms.count(c)) {
      node.kind = gramwb::fs::Kind::Atom;
      node.atom = gramwb::Symbol(*atoms[c].begin());
    } else {
      bool avm = class_arcs.count(c) > 0;
      for (std::size_t i = 0; i < g.nodes.size(); ++i)
        if (cls[i] == c && g.nodes[i].kind == NaiveGraph::N::Avm) avm = true;
      node.kind = avm ? gramwb::fs::Kind::Avm : gramwb::fs::Kind::Var;
      on_path.insert(c);
      for (const auto& [f, t] : class_arcs[c]) node.features.emplace_back(gramwb::Symbol(f), build(t));
      on_path.erase(c);
    }
    out->nodes[me] = node;
    return me;
  };
  int root = build(cls[ra]);
  if (cyclic) return std::nullopt;
  return gramwb::fs::fs_print(gramwb::fs::FeatureStructure(out, root));
}

}  // namespace oracle
