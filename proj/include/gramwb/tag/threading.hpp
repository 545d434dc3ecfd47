#pragma once

// Gap threading for TAG: every node carries `gaps:[<chan>:[in:L, out:L]]`
// on top and bottom. Lists flow left to right through the children of each
// node; a push node prepends its filler before its own subtree sees the
// list, a trace anchor pops the front.

#include <algorithm>

#include "gramwb/tag/tree.hpp"

namespace gramwb::tag {

namespace detail {

inline bool has_op(const TreeNode& n, Channel c, bool push) {
  return std::any_of(n.gaps.begin(), n.gaps.end(), [&](const GapOp& g) { return g.channel == c && g.push == push; });
}

inline ElementaryTree thread_tree(const ElementaryTree& t, const std::vector<Channel>& channels) {
  fs::Workspace ws;
  int r = ws.import(fs::fs_fresh(t.fs));
  auto at = [&](const TreeNode& n, const char* side, Channel c, const char* end) {
    return *ws.locate(r, {"n" + std::to_string(n.index), side, "gaps", channel_name(c), end}, true);
  };
  auto filler = [&](const TreeNode& n, const char* op, Channel c) {
    return *ws.locate(r, {"n" + std::to_string(n.index), op, channel_name(c)}, true);
  };
  bool ok = true;

  for (Channel c : channels) {
    std::function<void(const TreeNode&)> wire = [&](const TreeNode& n) {
      if (n.kind == NodeKind::anchor) {
        int in = at(n, "t", c, "in"), out = at(n, "t", c, "out");
        if (has_op(n, c, false)) ok = ok && ws.unify(in, ws.new_list({filler(n, "pop", c)}, out));
        else ok = ok && ws.unify(in, out);
        return;
      }
      if (n.children.empty()) return;  // substitution and foot nodes
      int cur = at(n, "b", c, "in");
      for (const auto& k : n.children) {
        int kin = at(k, "t", c, "in"), kout = at(k, "t", c, "out");
        if (has_op(k, c, true)) {
          ok = ok && ws.unify(cur, kout);
          ok = ok && ws.unify(kin, ws.new_list({filler(k, "push", c)}, kout));
        } else {
          ok = ok && ws.unify(cur, kin);
        }
        cur = at(k, "t", c, "out");
        wire(k);
      }
      ok = ok && ws.unify(cur, at(n, "b", c, "out"));
    };
    wire(t.root);
  }
  auto fs = ok ? ws.extract(r) : std::nullopt;
  if (!fs) throw std::logic_error("gap threading does not fit tree " + t.name);
  ElementaryTree out = t;
  out.fs = *fs;
  return out;
}

}  // namespace detail

/// Threads gap lists through every tree for each declared channel.
/// Idempotent.
inline TAGGrammar enable_adjunct_gap_threading(const TAGGrammar& g) {
  if (g.threaded) return g;
  TAGGrammar out = g;
  if (out.channels.empty()) out.channels.assign(kAllChannels.begin(), kAllChannels.end());
  for (auto& t : out.trees) t = detail::thread_tree(t, out.channels);
  out.features.insert({"gaps", "in", "out", "push", "pop"});
  for (Channel c : out.channels) out.features.insert(channel_name(c));
  out.threaded = true;
  return out;
}

/// The grammar without any tree that introduces or discharges a gap.
inline TAGGrammar baseline_grammar(const TAGGrammar& g) {
  TAGGrammar out = g;
  out.trees.erase(std::remove_if(out.trees.begin(), out.trees.end(), [](const auto& t) { return t.has_gap_ops(); }),
                  out.trees.end());
  return out;
}

}  // namespace gramwb::tag
