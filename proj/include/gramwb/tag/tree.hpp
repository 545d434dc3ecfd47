#pragma once

// Feature-based TAG: elementary trees with top/bottom structures,
// substitution, adjunction and the final top/bottom unification.
//
// Every elementary tree owns one feature structure `[n0:[t:..,b:..], ...]`
// keyed by preorder node index, so tags written across node lines share
// variables. A derived tree owns `[i0:<tree fs>, i1:..., ...]`, one entry
// per tree instance; its nodes hold paths into that structure.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <variant>

#include "gramwb/channel.hpp"
#include "gramwb/fs_text.hpp"

namespace gramwb::tag {

using fs::FeatureStructure;

enum class NodeKind { internal, anchor, substitution, foot };
enum class TreeKind { initial, auxiliary };

/// A push (filler introduction) or pop (trace) on one channel; the filler
/// pattern lives at `n<j>.push.<channel>` / `n<j>.pop.<channel>`.
struct GapOp {
  Channel channel;
  bool push;
};

struct TreeNode {
  Symbol label;
  NodeKind kind = NodeKind::internal;
  std::string word;  // anchors; empty for a trace anchor
  bool na = false;   // null adjunction
  int index = 0;     // preorder
  std::vector<GapOp> gaps;
  std::vector<TreeNode> children;

  bool empty_anchor() const { return kind == NodeKind::anchor && word.empty(); }
};

struct ElementaryTree {
  std::string name;
  TreeKind kind = TreeKind::initial;
  TreeNode root;
  FeatureStructure fs;
  std::vector<std::string> addresses;  // Gorn address by node index

  template <class F>
  void each_node(F&& f) const {
    std::vector<const TreeNode*> stack{&root};
    while (!stack.empty()) {
      const TreeNode* n = stack.back();
      stack.pop_back();
      f(*n);
      for (auto it = n->children.rbegin(); it != n->children.rend(); ++it) stack.push_back(&*it);
    }
  }

  /// Lexical anchors in surface order (trace anchors excluded).
  std::vector<std::string> anchors() const {
    std::vector<std::string> out;
    each_node([&](const TreeNode& n) {
      if (n.kind == NodeKind::anchor && !n.word.empty()) out.push_back(n.word);
    });
    return out;
  }
  bool lexical() const { return !anchors().empty(); }
  bool has_gap_ops() const {
    bool any = false;
    each_node([&](const TreeNode& n) { any = any || !n.gaps.empty(); });
    return any;
  }
};

struct TAGGrammar {
  std::string name;
  Symbol start{"S"};
  std::set<std::string> features;
  std::set<std::string> sorts;
  std::vector<Channel> channels;
  std::vector<ElementaryTree> trees;
  bool threaded = false;

  const ElementaryTree* find(const std::string& n) const {
    for (const auto& t : trees)
      if (t.name == n) return &t;
    return nullptr;
  }
  bool knows(const std::string& word) const {
    for (const auto& t : trees)
      for (const auto& a : t.anchors())
        if (a == word) return true;
    return false;
  }
};

// --------------------------------------------------------------------------
// Addresses: root "0", then 1-based child indices, "2.1".

using Gorn = std::vector<std::size_t>;

inline std::string gorn_string(const Gorn& g) {
  if (g.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(g[i] + 1);
  }
  return out;
}

inline Gorn parse_gorn(const std::string& s) {
  Gorn g;
  if (s == "0" || s.empty()) return g;
  std::istringstream in(s);
  for (std::string part; std::getline(in, part, '.');) {
    std::size_t v = std::stoul(part);
    if (v == 0) throw std::invalid_argument("bad address " + s);
    g.push_back(v - 1);
  }
  return g;
}

/// Assigns preorder indices and Gorn addresses.
inline void index_tree(ElementaryTree& t) {
  t.addresses.clear();
  int next = 0;
  std::function<void(TreeNode&, Gorn&)> walk = [&](TreeNode& n, Gorn& g) {
    n.index = next++;
    t.addresses.push_back(gorn_string(g));
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      g.push_back(i);
      walk(n.children[i], g);
      g.pop_back();
    }
  };
  Gorn g;
  walk(t.root, g);
}

// --------------------------------------------------------------------------
// Errors

struct TagError : std::logic_error {
  std::string address;
  TagError(const std::string& what, std::string addr) : std::logic_error(what + " at " + addr), address(std::move(addr)) {}
};
struct NotSubstitutionNode : TagError {
  explicit NotSubstitutionNode(std::string a) : TagError("not a substitution node", std::move(a)) {}
};
struct NotAdjoinable : TagError {
  explicit NotAdjoinable(std::string a) : TagError("adjunction not allowed", std::move(a)) {}
};
struct LabelMismatch : TagError {
  LabelMismatch(std::string a, const std::string& want, const std::string& got)
      : TagError("label mismatch (" + want + " vs " + got + ")", std::move(a)) {}
};
struct UnfilledSubstitution : TagError {
  explicit UnfilledSubstitution(std::string a) : TagError("unfilled substitution node", std::move(a)) {}
};
struct BadAddress : TagError {
  explicit BadAddress(std::string a) : TagError("no such node", std::move(a)) {}
};

// --------------------------------------------------------------------------
// Derived trees

struct DNode {
  Symbol label;
  NodeKind kind = NodeKind::internal;
  std::string word;
  bool na = false;
  bool adjoined = false;  // already used as an adjunction site
  int instance = 0;
  std::string origin;  // address in the instance's elementary tree
  fs::Path top, bot;
  std::vector<DNode> children;
};

enum class OpKind { substitute, adjoin };

/// `tree` (instance `instance`) attached at `address` of instance `target`'s
/// elementary tree.
struct Operation {
  OpKind op;
  std::string tree;
  int instance;
  int target;
  std::string address;
};

struct DerivedTree {
  DNode root;
  FeatureStructure fs;
  std::vector<std::string> instances;  // tree name by instance id
  std::vector<Operation> ops;
};

/// A top/bottom or attachment clash: derived-tree address and feature path.
struct Failure {
  std::string address;
  fs::Path path;
  bool cyclic = false;
};

template <class T>
using Outcome = std::variant<T, Failure>;

namespace detail {

inline DNode instantiate(const ElementaryTree& t, const TreeNode& n, int k) {
  DNode d;
  d.label = n.label;
  d.kind = n.kind;
  d.word = n.word;
  d.na = n.na;
  d.instance = k;
  d.origin = t.addresses.at(static_cast<std::size_t>(n.index));
  std::string ik = "i" + std::to_string(k), nj = "n" + std::to_string(n.index);
  d.top = {ik, nj, "t"};
  d.bot = {ik, nj, "b"};
  for (const auto& c : n.children) d.children.push_back(instantiate(t, c, k));
  return d;
}

inline DNode* locate(DNode& root, const Gorn& g, const std::string& addr) {
  DNode* n = &root;
  for (std::size_t i : g) {
    if (i >= n->children.size()) throw BadAddress(addr);
    n = &n->children[i];
  }
  return n;
}

inline DNode* find_foot(DNode& n) {
  if (n.kind == NodeKind::foot) return &n;
  for (auto& c : n.children)
    if (auto* f = find_foot(c)) return f;
  return nullptr;
}

}  // namespace detail

inline DerivedTree start_derivation(const ElementaryTree& t) {
  if (t.kind != TreeKind::initial) throw std::invalid_argument("derivations start from an initial tree: " + t.name);
  DerivedTree d;
  d.root = detail::instantiate(t, t.root, 0);
  d.fs = fs::fs_embed({"i0"}, fs::fs_fresh(t.fs));
  d.instances.push_back(t.name);
  return d;
}

/// Plugs initial tree `init` into the substitution node at `address`.
/// Failure when the node's top does not unify with the root's top.
inline Outcome<DerivedTree> substitute(const DerivedTree& host, const std::string& address, const ElementaryTree& init) {
  DerivedTree out = host;
  DNode* n = detail::locate(out.root, parse_gorn(address), address);
  if (n->kind != NodeKind::substitution) throw NotSubstitutionNode(address);
  if (init.kind != TreeKind::initial) throw std::invalid_argument(init.name + " is not an initial tree");
  if (n->label != init.root.label) throw LabelMismatch(address, n->label.str(), init.root.label.str());

  int k = static_cast<int>(out.instances.size());
  std::string ik = "i" + std::to_string(k);
  fs::Workspace ws;
  int r = ws.import(out.fs);
  ws.unify(*ws.locate(r, {ik}, true), ws.import(fs::fs_fresh(init.fs)));
  if (!ws.unify(*ws.locate(r, n->top, true), *ws.locate(r, {ik, "n0", "t"}, true)))
    return Failure{address, ws.last_clash().path};
  auto fs = ws.extract(r);
  if (!fs) return Failure{address, {}, true};

  out.fs = *fs;
  out.ops.push_back({OpKind::substitute, init.name, k, n->instance, n->origin});
  *n = detail::instantiate(init, init.root, k);
  out.instances.push_back(init.name);
  return out;
}

/// Splices auxiliary tree `aux` in at the internal node at `address`; the
/// excised subtree hangs under the foot.
inline Outcome<DerivedTree> adjoin(const DerivedTree& host, const std::string& address, const ElementaryTree& aux) {
  DerivedTree out = host;
  DNode* n = detail::locate(out.root, parse_gorn(address), address);
  if (n->kind != NodeKind::internal || n->na || n->adjoined) throw NotAdjoinable(address);
  if (aux.kind != TreeKind::auxiliary) throw std::invalid_argument(aux.name + " is not an auxiliary tree");
  if (n->label != aux.root.label) throw LabelMismatch(address, n->label.str(), aux.root.label.str());

  int k = static_cast<int>(out.instances.size());
  DNode spliced = detail::instantiate(aux, aux.root, k);
  DNode* foot = detail::find_foot(spliced);
  std::string ik = "i" + std::to_string(k);
  fs::Workspace ws;
  int r = ws.import(out.fs);
  ws.unify(*ws.locate(r, {ik}, true), ws.import(fs::fs_fresh(aux.fs)));
  if (!ws.unify(*ws.locate(r, n->top, true), *ws.locate(r, spliced.top, true)) ||
      !ws.unify(*ws.locate(r, n->bot, true), *ws.locate(r, foot->bot, true)))
    return Failure{address, ws.last_clash().path};
  auto fs = ws.extract(r);
  if (!fs) return Failure{address, {}, true};

  out.fs = *fs;
  out.ops.push_back({OpKind::adjoin, aux.name, k, n->instance, n->origin});
  DNode excised = std::move(*n);
  foot->kind = NodeKind::internal;
  foot->label = excised.label;
  foot->adjoined = true;
  foot->bot = excised.bot;
  foot->instance = excised.instance;
  foot->origin = excised.origin;
  foot->children = std::move(excised.children);
  *n = std::move(spliced);
  out.instances.push_back(aux.name);
  return out;
}

/// Unifies top and bottom at every node, children before parents. The
/// first clash is reported with its derived-tree address and feature path.
inline Outcome<DerivedTree> finalize(const DerivedTree& tree) {
  fs::Workspace ws;
  int r = ws.import(tree.fs);
  std::optional<Failure> failure;
  std::function<void(const DNode&, Gorn&)> visit = [&](const DNode& n, Gorn& g) {
    for (std::size_t i = 0; i < n.children.size() && !failure; ++i) {
      g.push_back(i);
      visit(n.children[i], g);
      g.pop_back();
    }
    if (failure) return;
    if (n.kind == NodeKind::substitution) throw UnfilledSubstitution(gorn_string(g));
    if (!ws.unify(*ws.locate(r, n.top, true), *ws.locate(r, n.bot, true)))
      failure = Failure{gorn_string(g), ws.last_clash().path};
  };
  Gorn g;
  visit(tree.root, g);
  if (failure) return *failure;
  auto fs = ws.extract(r);
  if (!fs) return Failure{"0", {}, true};
  DerivedTree out = tree;
  out.fs = *fs;
  return out;
}

/// Root closure for threaded grammars: every channel's lists empty at the
/// root's top.
inline Outcome<DerivedTree> close_root(const DerivedTree& tree, const std::vector<Channel>& channels) {
  fs::Workspace ws;
  int r = ws.import(tree.fs);
  for (Channel c : channels)
    for (const char* end : {"in", "out"}) {
      fs::Path p = tree.root.top;
      p.insert(p.end(), {"gaps", channel_name(c), end});
      if (!ws.unify(*ws.locate(r, p, true), ws.new_list({})))
        return Failure{"0", {"gaps", channel_name(c), end}};
    }
  auto fs = ws.extract(r);
  if (!fs) return Failure{"0", {}, true};
  DerivedTree out = tree;
  out.fs = *fs;
  return out;
}

// --------------------------------------------------------------------------
// Output

namespace detail {

inline void bracket(const DNode& n, std::ostringstream& os) {
  switch (n.kind) {
    case NodeKind::anchor:
      if (n.word.empty()) os << '[' << n.label.str() << " t]";
      else os << n.word;
      return;
    case NodeKind::substitution: os << '[' << n.label.str() << "!]"; return;
    case NodeKind::foot: os << '[' << n.label.str() << "*]"; return;
    case NodeKind::internal: break;
  }
  os << '[' << n.label.str();
  for (const auto& c : n.children) {
    os << ' ';
    bracket(c, os);
  }
  os << ']';
}

inline void yield(const DNode& n, std::vector<std::string>& out) {
  if (n.kind == NodeKind::anchor && !n.word.empty()) out.push_back(n.word);
  for (const auto& c : n.children) yield(c, out);
}

}  // namespace detail

inline std::string bracketed(const DerivedTree& t) {
  std::ostringstream os;
  detail::bracket(t.root, os);
  return os.str();
}

inline std::vector<std::string> yield(const DerivedTree& t) {
  std::vector<std::string> out;
  detail::yield(t.root, out);
  return out;
}

inline std::string op_string(const DerivedTree& t, const Operation& op) {
  std::ostringstream os;
  os << '(' << (op.op == OpKind::adjoin ? "adjoin " : "substitute ") << op.tree << " @" << op.address << " into "
     << t.instances.at(static_cast<std::size_t>(op.target)) << ')';
  return os.str();
}

inline std::string ops_string(const DerivedTree& t) {
  std::string out;
  for (const auto& op : t.ops) {
    if (!out.empty()) out += ' ';
    out += op_string(t, op);
  }
  return out;
}

/// Canonical derivation tree: `name{addr op child, ...}` with attachments
/// sorted, so operation order does not matter.
inline std::string derivation_key(const DerivedTree& t) {
  std::map<int, std::vector<const Operation*>> kids;
  for (const auto& op : t.ops) kids[op.target].push_back(&op);
  std::function<std::string(int)> rec = [&](int k) {
    std::vector<std::string> parts;
    for (const auto* op : kids[k])
      parts.push_back(op->address + (op->op == OpKind::adjoin ? "+" : "=") + rec(op->instance));
    std::sort(parts.begin(), parts.end());
    std::string s = t.instances.at(static_cast<std::size_t>(k));
    if (parts.empty()) return s;
    s += '{';
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + parts[i];
    return s + '}';
  };
  return rec(0);
}

}  // namespace gramwb::tag
