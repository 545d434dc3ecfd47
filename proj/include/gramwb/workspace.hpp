#pragma once

// Destructive union-find unification over a scratch store, and the pure
// fs_unify built on top of it. Callers import immutable structures, unify
// inside the workspace, then extract a fresh immutable result.

#include <algorithm>
#include <unordered_set>
#include <variant>

#include "gramwb/featstruct.hpp"

namespace gramwb::fs {

/// Why a unification failed. `cyclic` marks an occurs-check violation.
struct Clash {
  Path path;
  bool cyclic = false;
};

class Workspace {
public:
  /// Copies `fs`'s graph into the store (once per graph) and returns the
  /// store index of its root.
  int import(const FeatureStructure& fs) {
    const Graph* g = fs.graph().get();
    auto it = offsets_.find(g);
    int base;
    if (it != offsets_.end()) {
      base = it->second;
    } else {
      base = static_cast<int>(cells_.size());
      offsets_.emplace(g, base);
      keep_.push_back(fs.graph());
      for (const Node& n : g->nodes) {
        Cell c;
        c.kind = n.kind;
        c.atom = n.atom;
        c.features.reserve(n.features.size());
        for (const auto& [name, child] : n.features) c.features.emplace_back(name, child + base);
        c.elements.reserve(n.elements.size());
        for (int e : n.elements) c.elements.push_back(e + base);
        c.tail = n.tail < 0 ? -1 : n.tail + base;
        cells_.push_back(std::move(c));
      }
    }
    return fs.root() + base;
  }

  int new_var() { return push(Cell{}); }
  int new_avm() {
    Cell c;
    c.kind = Kind::Avm;
    return push(std::move(c));
  }
  int new_atom(Symbol name) {
    Cell c;
    c.kind = Kind::Atom;
    c.atom = name;
    return push(std::move(c));
  }
  int new_list(std::vector<int> elements, int tail = -1) {
    Cell c;
    c.kind = Kind::List;
    c.elements = std::move(elements);
    c.tail = tail;
    return push(std::move(c));
  }

  int find(int n) {
    int root = n;
    while (cells_[idx(root)].fwd >= 0) root = cells_[idx(root)].fwd;
    while (cells_[idx(n)].fwd >= 0) {
      int next = cells_[idx(n)].fwd;
      cells_[idx(n)].fwd = root;
      n = next;
    }
    return root;
  }

  Kind kind(int n) { return cells_[idx(find(n))].kind; }
  Symbol atom(int n) { return cells_[idx(find(n))].atom; }

  /// Follows `path` from `n`. With `create`, missing features are added
  /// (a Var or `[]` is promoted to an AVM); otherwise returns nullopt.
  std::optional<int> locate(int n, const Path& path, bool create = false) {
    for (const auto& step : path) {
      n = find(n);
      Cell* c = &cells_[idx(n)];
      if (c->kind == Kind::Var && create) c->kind = Kind::Avm;
      if (c->kind == Kind::Avm) {
        Symbol key(step);
        int next = -1;
        for (const auto& [name, child] : c->features)
          if (name == key) next = child;
        if (next < 0) {
          if (!create) return std::nullopt;
          next = new_var();
          cells_[idx(n)].features.emplace_back(key, next);
        }
        n = next;
      } else if (c->kind == Kind::List && is_index_step(step)) {
        auto items = list_items(n);
        auto i = std::stoul(step);
        if (i >= items.first.size()) return std::nullopt;
        n = items.first[i];
      } else {
        return std::nullopt;
      }
    }
    return n;
  }

  /// Flattened elements of a list node and its final tail (-1 when closed,
  /// otherwise an unbound Var).
  std::pair<std::vector<int>, int> list_items(int n) {
    std::vector<int> out;
    std::unordered_set<int> seen;
    n = find(n);
    while (cells_[idx(n)].kind == Kind::List && seen.insert(n).second) {
      const Cell& c = cells_[idx(n)];
      out.insert(out.end(), c.elements.begin(), c.elements.end());
      if (c.tail < 0) return {out, -1};
      n = find(c.tail);
    }
    return {out, n};  // a List here means the tail chain is cyclic
  }

  /// Destructive unification. On failure the workspace is left in an
  /// unspecified state and `last_clash()` describes the first conflict.
  bool unify(int a, int b) {
    Path path;
    return unify_rec(a, b, path);
  }

  const Clash& last_clash() const { return clash_; }

  /// Snapshot of everything reachable from `root`, or nullopt if that part
  /// of the store is cyclic.
  std::optional<FeatureStructure> extract(int root) {
    auto g = std::make_shared<Graph>();
    Extractor ex{*this, *g};
    int r = ex.visit(root);
    if (ex.cyclic) {
      clash_ = Clash{{}, true};
      return std::nullopt;
    }
    return FeatureStructure(std::move(g), r);
  }

private:
  struct Cell {
    Kind kind = Kind::Var;
    int fwd = -1;
    Symbol atom;
    std::vector<std::pair<Symbol, int>> features;
    std::vector<int> elements;
    int tail = -1;
  };

  static std::size_t idx(int n) { return static_cast<std::size_t>(n); }

  int push(Cell c) {
    cells_.push_back(std::move(c));
    return static_cast<int>(cells_.size()) - 1;
  }

  bool fail(const Path& path) {
    clash_ = Clash{path, false};
    return false;
  }

  bool is_top(int n) {
    const Cell& c = cells_[idx(n)];
    return c.kind == Kind::Avm && c.features.empty();
  }

  bool unify_rec(int a, int b, Path& path) {
    a = find(a);
    b = find(b);
    if (a == b) return true;
    if (cells_[idx(a)].kind == Kind::Var) {
      cells_[idx(a)].fwd = b;
      return true;
    }
    if (cells_[idx(b)].kind == Kind::Var || is_top(b)) {
      cells_[idx(b)].fwd = a;
      return true;
    }
    if (is_top(a)) {
      cells_[idx(a)].fwd = b;
      return true;
    }
    Kind ka = cells_[idx(a)].kind;
    if (ka != cells_[idx(b)].kind) return fail(path);

    if (ka == Kind::Atom) {
      if (cells_[idx(a)].atom != cells_[idx(b)].atom) return fail(path);
      cells_[idx(b)].fwd = a;
      return true;
    }

    if (ka == Kind::Avm) {
      auto theirs = std::move(cells_[idx(b)].features);
      cells_[idx(b)].features.clear();
      cells_[idx(b)].fwd = a;
      for (const auto& [name, child] : theirs) {
        int mine = -1;
        for (const auto& [n2, c2] : cells_[idx(a)].features)
          if (n2 == name) mine = c2;
        if (mine < 0) {
          cells_[idx(a)].features.emplace_back(name, child);
          continue;
        }
        path.push_back(name.str());
        bool ok = unify_rec(mine, child, path);
        path.pop_back();
        if (!ok) return false;
      }
      return true;
    }

    // Lists: pairwise over the common prefix, then the longer remainder
    // binds the shorter list's open tail.
    auto [xs, xt] = list_items(a);
    auto [ys, yt] = list_items(b);
    cells_[idx(b)].fwd = a;
    std::size_t common = std::min(xs.size(), ys.size());
    for (std::size_t i = 0; i < common; ++i) {
      path.push_back(std::to_string(i));
      bool ok = unify_rec(xs[i], ys[i], path);
      path.pop_back();
      if (!ok) return false;
    }
    auto rest = [&](const std::vector<int>& items, int tail) {
      if (items.size() == common && tail >= 0) return tail;
      return new_list(std::vector<int>(items.begin() + static_cast<long>(common), items.end()), tail);
    };
    if (xs.size() == ys.size()) {
      if (xt < 0 && yt < 0) return true;
      path.push_back("|");
      bool ok = unify_rec(rest(xs, xt), rest(ys, yt), path);
      path.pop_back();
      return ok;
    }
    bool x_shorter = xs.size() < ys.size();
    int short_tail = x_shorter ? xt : yt;
    if (short_tail < 0) return fail(path);
    int remainder = x_shorter ? rest(ys, yt) : rest(xs, xt);
    path.push_back("|");
    bool ok = unify_rec(short_tail, remainder, path);
    path.pop_back();
    return ok;
  }

  struct Extractor {
    Workspace& ws;
    Graph& out;
    std::unordered_map<int, int> done;
    std::unordered_map<int, bool> active;
    bool cyclic = false;

    int visit(int n) {
      n = ws.find(n);
      if (auto it = done.find(n); it != done.end()) {
        if (active[n]) cyclic = true;
        return it->second;
      }
      int me = static_cast<int>(out.nodes.size());
      out.nodes.emplace_back();
      done.emplace(n, me);
      active[n] = true;
      Node node;
      const Cell& c = ws.cells_[idx(n)];
      node.kind = c.kind;
      node.atom = c.atom;
      if (c.kind == Kind::Avm) {
        auto feats = c.features;
        std::sort(feats.begin(), feats.end(),
                  [](const auto& x, const auto& y) { return x.first.str() < y.first.str(); });
        for (const auto& [name, child] : feats) node.features.emplace_back(name, visit(child));
      } else if (c.kind == Kind::List) {
        auto [items, tail] = ws.list_items(n);
        if (tail >= 0 && ws.cells_[idx(tail)].kind != Kind::Var) {
          cyclic = true;  // tail chain loops back into a list
          tail = -1;
        }
        for (int e : items) node.elements.push_back(visit(e));
        node.tail = tail < 0 ? -1 : visit(tail);
      }
      active[n] = false;
      out.nodes[idx(me)] = std::move(node);
      return me;
    }
  };

  std::vector<Cell> cells_;
  std::unordered_map<const Graph*, int> offsets_;
  std::vector<std::shared_ptr<const Graph>> keep_;
  Clash clash_;
};

/// Most general unifier, or the first clash. Inputs are untouched.
inline std::variant<FeatureStructure, Clash> fs_unify_explain(const FeatureStructure& a,
                                                              const FeatureStructure& b) {
  Workspace ws;
  int x = ws.import(a);
  int y = ws.import(b);
  if (!ws.unify(x, y)) return ws.last_clash();
  auto out = ws.extract(x);
  if (!out) return ws.last_clash();
  return *out;
}

inline std::optional<FeatureStructure> fs_unify(const FeatureStructure& a, const FeatureStructure& b) {
  auto r = fs_unify_explain(a, b);
  if (auto* fs = std::get_if<FeatureStructure>(&r)) return *fs;
  return std::nullopt;
}

/// Unifies the substructures of `fs` at `p` and `q`; returns the updated whole.
inline std::optional<FeatureStructure> fs_unify_paths(const FeatureStructure& fs, const Path& p,
                                                      const Path& q) {
  Workspace ws;
  int root = ws.import(fs);
  auto x = ws.locate(root, p, true);
  auto y = ws.locate(root, q, true);
  if (!x || !y || !ws.unify(*x, *y)) return std::nullopt;
  return ws.extract(root);
}

/// `[p1:[p2:...value]]`.
inline FeatureStructure fs_embed(const Path& path, const FeatureStructure& value) {
  Workspace ws;
  int root = ws.new_avm();
  int v = ws.import(value);
  auto slot = ws.locate(root, path, true);
  ws.unify(*slot, v);
  return *ws.extract(root);
}

}  // namespace gramwb::fs
