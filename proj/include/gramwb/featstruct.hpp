#pragma once

// Immutable feature structures.
//
// A FeatureStructure is a view onto a shared, immutable node graph plus a
// root index. Re-entrancy is node sharing inside one graph; a graph is the
// scope of variable identity, so two structures taken from the same graph
// (e.g. the top and bottom of two nodes of one elementary tree) keep their
// shared variables when unified together.

#include <cctype>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gramwb/symbol.hpp"

namespace gramwb::fs {

enum class Kind : std::uint8_t { Atom, Var, Avm, List };

struct Node {
  Kind kind = Kind::Var;
  Symbol atom;
  std::vector<std::pair<Symbol, int>> features;  // sorted by name
  std::vector<int> elements;
  int tail = -1;  // -1: closed list; otherwise a Var node
};

struct Graph {
  std::vector<Node> nodes;
};

using Path = std::vector<std::string>;

inline std::string path_string(const Path& path) {
  std::string out;
  for (const auto& step : path) {
    if (!out.empty()) out += '.';
    out += step;
  }
  return out;
}

class FeatureStructure {
public:
  /// The unconstrained structure `[]`.
  FeatureStructure() : FeatureStructure(make_single(Node{Kind::Avm, {}, {}, {}, -1})) {}

  FeatureStructure(std::shared_ptr<const Graph> graph, int root)
      : graph_(std::move(graph)), root_(root) {}

  static FeatureStructure atom(std::string_view name) {
    return make_single(Node{Kind::Atom, Symbol(name), {}, {}, -1});
  }
  static FeatureStructure variable() { return make_single(Node{}); }
  static FeatureStructure empty_list() { return make_single(Node{Kind::List, {}, {}, {}, -1}); }

  Kind kind() const { return node().kind; }
  bool is_atom() const { return kind() == Kind::Atom; }
  bool is_var() const { return kind() == Kind::Var; }
  bool is_avm() const { return kind() == Kind::Avm; }
  bool is_list() const { return kind() == Kind::List; }
  /// `[]` with no features; acts as the top element.
  bool is_top() const { return is_avm() && node().features.empty(); }

  const std::string& atom_name() const { return node().atom.str(); }
  Symbol atom_symbol() const { return node().atom; }

  std::size_t feature_count() const { return node().features.size(); }
  std::vector<std::pair<std::string, FeatureStructure>> features() const {
    std::vector<std::pair<std::string, FeatureStructure>> out;
    for (const auto& [name, child] : node().features) out.emplace_back(name.str(), at(child));
    return out;
  }
  std::optional<FeatureStructure> feature(std::string_view name) const {
    Symbol key(name);
    for (const auto& [f, child] : node().features)
      if (f == key) return at(child);
    return std::nullopt;
  }

  std::size_t list_size() const { return node().elements.size(); }
  FeatureStructure element(std::size_t i) const { return at(node().elements.at(i)); }
  std::vector<FeatureStructure> elements() const {
    std::vector<FeatureStructure> out;
    for (int e : node().elements) out.push_back(at(e));
    return out;
  }
  bool list_closed() const { return node().tail < 0; }
  std::optional<FeatureStructure> list_tail() const {
    if (node().tail < 0) return std::nullopt;
    return at(node().tail);
  }

  const std::shared_ptr<const Graph>& graph() const { return graph_; }
  int root() const { return root_; }
  bool same_graph(const FeatureStructure& other) const { return graph_ == other.graph_; }
  /// Identity of the underlying node (re-entrancy test within one graph).
  bool same_node(const FeatureStructure& other) const {
    return graph_ == other.graph_ && root_ == other.root_;
  }

private:
  static FeatureStructure make_single(Node n) {
    auto g = std::make_shared<Graph>();
    g->nodes.push_back(std::move(n));
    return {std::move(g), 0};
  }
  const Node& node() const { return graph_->nodes[static_cast<std::size_t>(root_)]; }
  FeatureStructure at(int idx) const { return {graph_, idx}; }

  std::shared_ptr<const Graph> graph_;
  int root_ = 0;
};

// --------------------------------------------------------------------------
// fs_get

inline bool is_index_step(const std::string& step) {
  if (step.empty()) return false;
  for (char c : step)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

/// Value at `path`, or nullopt when a step is missing. Numeric steps index
/// into lists.
inline std::optional<FeatureStructure> fs_get(const FeatureStructure& fs, const Path& path) {
  FeatureStructure cur = fs;
  for (const auto& step : path) {
    if (cur.is_avm()) {
      auto next = cur.feature(step);
      if (!next) return std::nullopt;
      cur = *next;
    } else if (cur.is_list() && is_index_step(step)) {
      auto idx = std::stoul(step);
      if (idx >= cur.list_size()) return std::nullopt;
      cur = cur.element(idx);
    } else {
      return std::nullopt;
    }
  }
  return cur;
}

// --------------------------------------------------------------------------
// Printing

namespace detail {

class Printer {
public:
  explicit Printer(const Graph& g) : g_(g) {}

  std::string run(int root) {
    count(root);
    print(root);
    return out_.str();
  }

  // Substructures of `root`, numbered as one document.
  std::vector<std::string> parts(int root, const std::vector<int>& subs) {
    count(root);
    std::vector<std::string> out;
    for (int n : subs) {
      out_.str("");
      print(n);
      out.push_back(out_.str());
    }
    return out;
  }

private:
  void count(int n) {
    if (++refs_[n] > 1) return;
    const Node& node = g_.nodes[static_cast<std::size_t>(n)];
    for (const auto& f : node.features) count(f.second);
    for (int e : node.elements) count(e);
    if (node.tail >= 0) count(node.tail);
  }

  void print(int n) {
    const Node& node = g_.nodes[static_cast<std::size_t>(n)];
    if (node.kind == Kind::Atom) {
      out_ << node.atom.str();
      return;
    }
    if (node.kind == Kind::Var) {
      auto [it, fresh] = vars_.try_emplace(n, static_cast<int>(vars_.size()) + 1);
      out_ << '?' << it->second;
      return;
    }
    if (refs_[n] > 1) {
      auto [it, fresh] = tags_.try_emplace(n, static_cast<int>(tags_.size()) + 1);
      out_ << '#' << it->second;
      if (!fresh) return;
    }
    if (node.kind == Kind::Avm) {
      out_ << '[';
      bool first = true;
      for (const auto& [name, child] : node.features) {
        if (!first) out_ << ", ";
        first = false;
        out_ << name.str() << ':';
        print(child);
      }
      out_ << ']';
      return;
    }
    out_ << '<';
    bool first = true;
    for (int e : node.elements) {
      if (!first) out_ << ", ";
      first = false;
      print(e);
    }
    if (node.tail >= 0) {
      out_ << '|';
      print(node.tail);
    }
    out_ << '>';
  }

  const Graph& g_;
  std::ostringstream out_;
  std::unordered_map<int, int> refs_;
  std::unordered_map<int, int> tags_;
  std::unordered_map<int, int> vars_;
};

}  // namespace detail

/// Prints the values at `paths` with tags and variables numbered across all
/// of them, so sharing between parts stays visible. Missing paths print "-".
inline std::vector<std::string> fs_print_parts(const FeatureStructure& fs, const std::vector<Path>& paths) {
  std::vector<int> subs;
  std::vector<std::size_t> where;
  for (std::size_t i = 0; i < paths.size(); ++i)
    if (auto v = fs_get(fs, paths[i])) {
      subs.push_back(v->root());
      where.push_back(i);
    }
  auto printed = detail::Printer(*fs.graph()).parts(fs.root(), subs);
  std::vector<std::string> out(paths.size(), "-");
  for (std::size_t k = 0; k < where.size(); ++k) out[where[k]] = printed[k];
  return out;
}

/// Canonical text. Alphabetic variants print identically.
/// Same structure on a private graph: variables no longer shared with `fs`
/// when both are imported into one workspace.
inline FeatureStructure fs_fresh(const FeatureStructure& fs) {
  return {std::make_shared<Graph>(*fs.graph()), fs.root()};
}

inline std::string fs_print(const FeatureStructure& fs) {
  return detail::Printer(*fs.graph()).run(fs.root());
}

inline bool alphabetic_variant(const FeatureStructure& a, const FeatureStructure& b) {
  return fs_print(a) == fs_print(b);
}

inline std::ostream& operator<<(std::ostream& os, const FeatureStructure& fs) {
  return os << fs_print(fs);
}

// --------------------------------------------------------------------------
// Subsumption

namespace detail {

class Subsumption {
public:
  Subsumption(const Graph& general, const Graph& specific) : a_(general), b_(specific) {}

  // b positions are (node, offset); offset > 0 only for list suffixes.
  bool check(int an, int bn, std::size_t boff) {
    const Node& a = a_.nodes[static_cast<std::size_t>(an)];
    const Node& b = b_.nodes[static_cast<std::size_t>(bn)];
    // Atoms are values; sharing an atom node carries no information.
    if (a.kind != Kind::Atom) {
      auto key = std::make_pair(bn, boff);
      if (auto it = map_.find(an); it != map_.end()) return it->second == key;
      map_.emplace(an, key);
    }
    switch (a.kind) {
      case Kind::Var:
        return true;
      case Kind::Atom:
        return boff == 0 && b.kind == Kind::Atom && b.atom == a.atom;
      case Kind::Avm: {
        if (a.features.empty()) return true;
        if (boff != 0 || b.kind != Kind::Avm) return false;
        for (const auto& [name, child] : a.features) {
          int match = -1;
          for (const auto& [bname, bchild] : b.features)
            if (bname == name) match = bchild;
          if (match < 0 || !check(child, match, 0)) return false;
        }
        return true;
      }
      case Kind::List: {
        if (b.kind != Kind::List) return false;
        std::size_t avail = b.elements.size() - boff;
        std::size_t need = a.elements.size();
        if (a.tail < 0) {
          if (b.tail >= 0 || avail != need) return false;
        } else if (avail < need) {
          return false;
        }
        for (std::size_t i = 0; i < need; ++i)
          if (!check(a.elements[i], b.elements[boff + i], 0)) return false;
        if (a.tail >= 0) {
          // Remainder of b; if b's suffix is exhausted and open, map to b's tail.
          if (boff + need == b.elements.size() && b.tail >= 0) return check(a.tail, b.tail, 0);
          return check(a.tail, bn, boff + need);
        }
        return true;
      }
    }
    return false;
  }

private:
  const Graph& a_;
  const Graph& b_;
  std::unordered_map<int, std::pair<int, std::size_t>> map_;
};

}  // namespace detail

/// True iff `b` carries at least the information in `a`.
inline bool fs_subsumes(const FeatureStructure& a, const FeatureStructure& b) {
  return detail::Subsumption(*a.graph(), *b.graph()).check(a.root(), b.root(), 0);
}

}  // namespace gramwb::fs
