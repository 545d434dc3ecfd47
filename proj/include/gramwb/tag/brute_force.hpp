#pragma once

// Exhaustive enumeration of derivation trees, independent of the parser's
// left-to-right search: every attachment site of every tree instance is
// either left alone or filled, in instance order, and only complete
// derivations are assembled into derived trees and checked.

#include "gramwb/tag/parser.hpp"

namespace gramwb::tag {

namespace detail {

inline bool find_site(const DNode& n, int instance, const std::string& origin, Gorn& g) {
  if (n.instance == instance && n.origin == origin && n.kind != NodeKind::foot) return true;
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    g.push_back(i);
    if (find_site(n.children[i], instance, origin, g)) return true;
    g.pop_back();
  }
  return false;
}

class BruteForce {
public:
  BruteForce(const TAGGrammar& g, const std::vector<std::string>& tokens, std::size_t op_bound, TagLimits lim)
      : g_(g), tokens_(tokens), bound_(op_bound), lim_(lim), budget_(word_counts(tokens)) {
    for (const auto& t : g.trees) {
      bool fits = true;
      for (const auto& [w, n] : word_counts(t.anchors())) fits = fits && budget_.count(w) && budget_.at(w) >= n;
      if (fits) usable_.push_back(&t);
    }
  }

  std::map<std::string, TagParse> run() {
    for (const auto* t : usable_) {
      if (t->kind != TreeKind::initial || t->root.label != g_.start) continue;
      Plan p;
      if (!add(p, *t)) continue;
      expand(p, 0);
    }
    return std::move(found_);
  }

private:
  struct Site {
    int instance;
    std::string origin;
    Symbol label;
    bool subst;
  };
  struct Step {
    const ElementaryTree* tree;
    int target;
    std::string origin;
  };
  struct Plan {
    std::vector<const ElementaryTree*> instances;
    std::vector<Site> sites;
    std::vector<Step> steps;
    std::map<std::string, std::size_t> used;
    std::size_t empties = 0;
  };

  bool add(Plan& p, const ElementaryTree& t) {
    if (empty_tree(t) && ++p.empties > lim_.max_empty) return false;
    for (const auto& w : t.anchors())
      if (++p.used[w] > budget_.at(w)) return false;
    int k = static_cast<int>(p.instances.size());
    p.instances.push_back(&t);
    t.each_node([&](const TreeNode& n) {
      std::string a = t.addresses.at(static_cast<std::size_t>(n.index));
      if (n.kind == NodeKind::substitution) p.sites.push_back({k, a, n.label, true});
      if (n.kind == NodeKind::internal && !n.na) p.sites.push_back({k, a, n.label, false});
    });
    return true;
  }

  void expand(const Plan& p, std::size_t i) {
    if (i == p.sites.size()) {
      assemble(p);
      return;
    }
    const Site& s = p.sites[i];
    if (!s.subst) expand(p, i + 1);
    if (p.steps.size() >= bound_) return;
    for (const auto* t : usable_) {
      if ((t->kind == TreeKind::initial) != s.subst || t->root.label != s.label) continue;
      Plan next = p;
      if (!add(next, *t)) continue;
      next.steps.push_back({t, s.instance, s.origin});
      expand(next, i + 1);
    }
  }

  void assemble(const Plan& p) {
    std::size_t words = 0;
    for (const auto& [w, n] : p.used) words += n;
    if (words != tokens_.size()) return;
    DerivedTree d = start_derivation(*p.instances[0]);
    for (const auto& st : p.steps) {
      Gorn g;
      if (!find_site(d.root, st.target, st.origin, g)) return;
      auto r = st.tree->kind == TreeKind::initial ? substitute(d, gorn_string(g), *st.tree)
                                                   : adjoin(d, gorn_string(g), *st.tree);
      if (std::holds_alternative<Failure>(r)) return;
      d = std::get<DerivedTree>(std::move(r));
    }
    if (yield(d) != tokens_) return;
    if (auto t = accept(g_, d)) record(found_, std::move(*t));
  }

  const TAGGrammar& g_;
  const std::vector<std::string>& tokens_;
  std::size_t bound_;
  TagLimits lim_;
  std::map<std::string, std::size_t> budget_;
  std::vector<const ElementaryTree*> usable_;
  std::map<std::string, TagParse> found_;
};

}  // namespace detail

/// Every derivation of at most `op_bound` operations that yields `tokens`
/// and finalizes, using only trees anchored by input tokens (plus at most
/// `lim.max_empty` trace-anchored trees). Root closure applies when the
/// grammar is threaded.
inline std::vector<TagParse> brute_force_derive(const TAGGrammar& g, const std::vector<std::string>& tokens,
                                                std::size_t op_bound, TagLimits lim = {}) {
  return detail::sorted(detail::BruteForce(g, tokens, op_bound, lim).run());
}

}  // namespace gramwb::tag
