#pragma once

// Left-to-right TAG parser. The derived tree is built top-down in preorder:
// at each internal node we choose to adjoin (then revisit the new root, so
// auxiliary trees stack on each other's spines) or move on; at each
// substitution node we choose an initial tree; at each anchor the next
// token must match. Unifications run as trees attach, so clashes prune.

#include <algorithm>
#include <map>

#include "gramwb/tag/threading.hpp"

namespace gramwb::tag {

enum class TagConfig { baseline, gap_ext };

inline std::string config_name(TagConfig c) { return c == TagConfig::baseline ? "baseline" : "gap-ext"; }

inline std::optional<TagConfig> config_from_name(const std::string& s) {
  if (s == "baseline") return TagConfig::baseline;
  if (s == "gap-ext") return TagConfig::gap_ext;
  return std::nullopt;
}

/// Baseline drops every gap tree; gap-ext threads all channels.
inline TAGGrammar configure(const TAGGrammar& g, TagConfig c) {
  return c == TagConfig::baseline ? baseline_grammar(g) : enable_adjunct_gap_threading(g);
}

struct TagParse {
  std::string key;        // derivation_key
  std::string ops;        // ops_string
  std::string bracketed;
  DerivedTree tree;
};

struct TagLimits {
  std::size_t max_empty = 2;  // trees without a lexical anchor
};

/// Trees with no lexical anchor (verb traces).
inline bool empty_tree(const ElementaryTree& t) { return !t.lexical(); }

namespace detail {

inline std::map<std::string, std::size_t> word_counts(const std::vector<std::string>& ws) {
  std::map<std::string, std::size_t> m;
  for (const auto& w : ws) ++m[w];
  return m;
}

/// Accepts a completed derived tree: finalize, plus root closure when the
/// grammar is threaded.
inline std::optional<DerivedTree> accept(const TAGGrammar& g, const DerivedTree& d) {
  auto f = finalize(d);
  if (std::holds_alternative<Failure>(f)) return std::nullopt;
  DerivedTree t = std::get<DerivedTree>(std::move(f));
  if (g.threaded) {
    auto c = close_root(t, g.channels);
    if (std::holds_alternative<Failure>(c)) return std::nullopt;
    t = std::get<DerivedTree>(std::move(c));
  }
  return t;
}

inline void record(std::map<std::string, TagParse>& out, DerivedTree t) {
  std::string key = derivation_key(t);
  if (out.count(key)) return;
  TagParse p{key, ops_string(t), bracketed(t), std::move(t)};
  out.emplace(p.key, std::move(p));
}

class TagSearch {
public:
  TagSearch(const TAGGrammar& g, const std::vector<std::string>& tokens, TagLimits lim)
      : g_(g), tokens_(tokens), lim_(lim), budget_(word_counts(tokens)) {
    for (const auto& t : g.trees) {
      bool fits = true;
      for (const auto& [w, n] : word_counts(t.anchors()))
        fits = fits && budget_.count(w) && budget_.at(w) >= n;
      if (fits) usable_.push_back(&t);
    }
  }

  std::map<std::string, TagParse> run() {
    for (const auto* t : usable_) {
      if (t->kind != TreeKind::initial || t->root.label != g_.start) continue;
      State s{start_derivation(*t), {}, 0, 0, {}};
      if (!charge(s, *t)) continue;
      step(s);
    }
    return std::move(found_);
  }

private:
  struct State {
    DerivedTree d;
    Gorn cursor;
    std::size_t pos;
    std::size_t empties;
    std::map<std::string, std::size_t> used;  // anchored words in d
  };

  bool charge(State& s, const ElementaryTree& t) {
    if (empty_tree(t) && ++s.empties > lim_.max_empty) return false;
    for (const auto& w : t.anchors())
      if (++s.used[w] > budget_.at(w)) return false;
    return true;
  }

  /// The derived tree's words must still fit the sentence in order.
  bool viable(const DerivedTree& d) const {
    auto ws = yield(d);
    std::size_t j = 0;
    for (const auto& w : ws) {
      while (j < tokens_.size() && tokens_[j] != w) ++j;
      if (j++ >= tokens_.size()) return false;
    }
    return true;
  }

  static DNode& at(DNode& root, const Gorn& g) {
    DNode* n = &root;
    for (std::size_t i : g) n = &n->children[i];
    return *n;
  }

  void step(State& s) {
    DNode& n = at(s.d.root, s.cursor);
    switch (n.kind) {
      case NodeKind::anchor:
        if (!n.word.empty()) {
          if (s.pos >= tokens_.size() || tokens_[s.pos] != n.word) return;
          ++s.pos;
        }
        advance(s);
        return;
      case NodeKind::substitution: {
        std::string addr = gorn_string(s.cursor);
        for (const auto* t : usable_) {
          if (t->kind != TreeKind::initial || t->root.label != n.label) continue;
          State next = s;
          if (!charge(next, *t)) continue;
          auto r = substitute(s.d, addr, *t);
          if (std::holds_alternative<Failure>(r)) continue;
          next.d = std::get<DerivedTree>(std::move(r));
          if (viable(next.d)) step(next);
        }
        return;
      }
      case NodeKind::foot:
        advance(s);
        return;
      case NodeKind::internal: break;
    }
    if (!n.na && !n.adjoined) {
      std::string addr = gorn_string(s.cursor);
      for (const auto* t : usable_) {
        if (t->kind != TreeKind::auxiliary || t->root.label != n.label) continue;
        State next = s;
        if (!charge(next, *t)) continue;
        auto r = adjoin(s.d, addr, *t);
        if (std::holds_alternative<Failure>(r)) continue;
        next.d = std::get<DerivedTree>(std::move(r));
        if (viable(next.d)) step(next);
      }
    }
    // no (further) adjunction here: descend
    State next = s;
    next.cursor.push_back(0);
    step(next);
  }

  void advance(State& s) {
    while (!s.cursor.empty()) {
      std::size_t i = s.cursor.back();
      s.cursor.pop_back();
      const DNode& parent = at(s.d.root, s.cursor);
      if (i + 1 < parent.children.size()) {
        s.cursor.push_back(i + 1);
        step(s);
        return;
      }
    }
    if (s.pos != tokens_.size()) return;
    if (auto t = accept(g_, s.d)) record(found_, std::move(*t));
  }

  const TAGGrammar& g_;
  const std::vector<std::string>& tokens_;
  TagLimits lim_;
  std::map<std::string, std::size_t> budget_;
  std::vector<const ElementaryTree*> usable_;
  std::map<std::string, TagParse> found_;
};

inline std::vector<TagParse> sorted(std::map<std::string, TagParse> m) {
  std::vector<TagParse> out;
  for (auto& [k, v] : m) out.push_back(std::move(v));
  return out;
}

}  // namespace detail

/// All derivations of `tokens`, sorted by derivation key.
inline std::vector<TagParse> tag_parse(const TAGGrammar& grammar, const std::vector<std::string>& tokens,
                                       TagConfig config = TagConfig::baseline, TagLimits lim = {}) {
  TAGGrammar g = configure(grammar, config);
  for (std::size_t i = 0; i < tokens.size(); ++i)
    if (!g.knows(tokens[i])) throw UnknownToken(tokens[i], i);
  return detail::sorted(detail::TagSearch(g, tokens, lim).run());
}

}  // namespace gramwb::tag
