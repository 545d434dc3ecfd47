#pragma once

// Tree-adjoining grammar files.
//
//   :version 1
//   :include tag-base
//   :start S
//   :channels vmove wh
//   :features agr num ...
//   :sorts place ...
//   :trees
//   tree a_intrans initial
//     S bot=[displ_const:#x]
//       NP! top=[agr:#a]
//       VP top=[displ_const:#x] bot=[displ_const:-]
//         V^@ top=[agr:#a]
//   :lexicon        word template [avm]    -> tree template/word
//
// Node heads: `X` internal, `X!` substitution, `X*` foot, `X^word` anchor,
// `X^_` trace anchor, `X^@` template anchor. Attributes: top=AVM, bot=AVM,
// na, push=chan:AVM, pop=chan:AVM. Tags are shared across a tree's lines.
// A `:= AVM` line gives the whole tree structure in `[n0:[t:..,b:..],...]`
// form (used by the printer).

#include <algorithm>
#include <map>

#include "gramwb/dsl/common.hpp"
#include "gramwb/tag/threading.hpp"

namespace gramwb::dsl {

using tag::TAGGrammar;

namespace detail {

struct NodeSpec {
  Line line;
  int depth;
  tag::TreeNode node;
  std::string top, bot;  // AVM text
  std::vector<std::pair<tag::GapOp, std::string>> fillers;
};

struct TreeSpec {
  Line line;
  std::string name;
  tag::TreeKind kind;
  std::vector<NodeSpec> nodes;
  std::string whole;  // `:=` AVM text
  Line whole_line;
};

/// End (exclusive) of the bracketed AVM starting at `i`.
inline std::size_t avm_end(const std::string& s, std::size_t i) {
  int depth = 0;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c == '[' || c == '<') ++depth;
    else if (c == ']' || c == '>') {
      if (--depth == 0) return i + 1;
    } else if (depth == 0 && (c == ' ' || c == '\t')) {
      return i;
    }
  }
  return i;
}

class TagLoader {
public:
  TAGGrammar load(const std::filesystem::path& path) {
    g_.name = path.stem().string();
    load_file(path, 0);
    finish();
    return std::move(g_);
  }

  TAGGrammar load_text(const std::string& text, const std::string& name) {
    g_.name = name;
    std::vector<Line> lines;
    std::istringstream in(text);
    std::string raw;
    int n = 0;
    while (std::getline(in, raw)) {
      ++n;
      std::string t = strip_comment(raw);
      auto end = t.find_last_not_of(" \t\r");
      if (end != std::string::npos) lines.push_back(Line{name, n, t.substr(0, end + 1)});
    }
    load_lines(lines, {}, 0);
    finish();
    return std::move(g_);
  }

private:
  void load_file(const std::filesystem::path& path, int depth) {
    if (depth > 8) throw GrammarError("include nesting too deep at " + path.string());
    load_lines(read_lines(path), path.parent_path(), depth);
  }

  static SyntaxError error(const Line& l, const std::string& what, int col = 1) {
    return SyntaxError(l.file, l.number, col, what);
  }

  void load_lines(const std::vector<Line>& lines, const std::filesystem::path& dir, int depth) {
    std::string section;
    std::optional<TreeSpec> cur;
    auto close = [&] {
      if (cur) build(*cur);
      cur.reset();
    };
    for (const auto& line : lines) {
      std::string text = trim(line.text);
      if (text[0] == ':' && text.rfind(":=", 0) != 0) {
        close();
        auto words = split_ws(text);
        std::string head = words[0].substr(1);
        std::vector<std::string> args(words.begin() + 1, words.end());
        if (head == "version") {
          if (args.size() != 1 || args[0] != "1") throw error(line, "unsupported version");
        } else if (head == "include") {
          if (args.size() != 1) throw error(line, ":include takes one name");
          load_file(resolve_grammar(args[0], dir), depth + 1);
        } else if (head == "name") {
          if (args.size() != 1) throw error(line, ":name takes one word");
          g_.name = args[0];
        } else if (head == "start") {
          if (args.size() != 1) throw error(line, ":start takes one category");
          g_.start = Symbol(args[0]);
        } else if (head == "channels") {
          for (const auto& a : args) {
            auto c = channel_from_name(a);
            if (!c) throw error(line, "unknown channel '" + a + "'");
            if (std::find(g_.channels.begin(), g_.channels.end(), *c) == g_.channels.end()) g_.channels.push_back(*c);
          }
        } else if (head == "features") {
          g_.features.insert(args.begin(), args.end());
        } else if (head == "sorts") {
          sorts_.insert(args.begin(), args.end());
        } else if (head == "threaded") {
          threaded_ = true;
        } else if (head == "trees" || head == "lexicon") {
          section = head;
        } else {
          throw error(line, "unknown directive :" + head);
        }
        continue;
      }
      if (section == "trees") {
        if (text.rfind("tree ", 0) == 0) {
          close();
          auto w = split_ws(text);
          if (w.size() != 3 || (w[2] != "initial" && w[2] != "auxiliary"))
            throw error(line, "expected 'tree NAME initial|auxiliary'");
          cur = TreeSpec{line, w[1], w[2] == "initial" ? tag::TreeKind::initial : tag::TreeKind::auxiliary, {}, {}, {}};
        } else if (!cur) {
          throw error(line, "node line outside a tree");
        } else if (text.rfind(":=", 0) == 0) {
          cur->whole = trim(text.substr(2));
          cur->whole_line = line;
          parse_avm_at(line, line.text.find_first_not_of(" \t", line.text.find(":=") + 2), cur->whole);
        } else {
          cur->nodes.push_back(node_line(line));
        }
      } else if (section == "lexicon") {
        lexicon_line(line, text);
      } else {
        throw error(line, "line outside any section");
      }
    }
    close();
  }

  NodeSpec node_line(const Line& line) {
    NodeSpec s{line, static_cast<int>(line.text.find_first_not_of(" \t")), {}, {}, {}, {}};
    const std::string& t = line.text;
    std::size_t i = static_cast<std::size_t>(s.depth);
    std::size_t head_end = t.find_first_of(" \t", i);
    if (head_end == std::string::npos) head_end = t.size();
    std::string head = t.substr(i, head_end - i);
    auto& n = s.node;
    std::size_t caret = head.find('^');
    std::string label = head;
    if (caret != std::string::npos) {
      n.kind = tag::NodeKind::anchor;
      label = head.substr(0, caret);
      n.word = head.substr(caret + 1);
      if (n.word.empty()) throw error(line, "anchor needs a word, _ or @", static_cast<int>(i + caret) + 2);
      if (n.word == "_") n.word.clear();
    } else if (!head.empty() && head.back() == '!') {
      n.kind = tag::NodeKind::substitution;
      label.pop_back();
    } else if (!head.empty() && head.back() == '*') {
      n.kind = tag::NodeKind::foot;
      label.pop_back();
    }
    if (label.empty() || !std::all_of(label.begin(), label.end(), is_name_char))
      throw error(line, "bad node label '" + head + "'", static_cast<int>(i) + 1);
    n.label = Symbol(label);

    i = head_end;
    while (true) {
      i = t.find_first_not_of(" \t", i);
      if (i == std::string::npos) break;
      std::size_t eq = t.find('=', i);
      std::size_t sp = t.find_first_of(" \t", i);
      if (eq == std::string::npos || (sp != std::string::npos && sp < eq)) {
        std::string word = t.substr(i, sp == std::string::npos ? std::string::npos : sp - i);
        if (word != "na") throw error(line, "unknown attribute '" + word + "'", static_cast<int>(i) + 1);
        n.na = true;
        i = sp == std::string::npos ? t.size() : sp;
        continue;
      }
      std::string key = t.substr(i, eq - i);
      std::size_t v = eq + 1;
      if (key == "top" || key == "bot") {
        std::size_t e = avm_end(t, v);
        std::string avm = t.substr(v, e - v);
        parse_avm_at(line, v, avm);
        (key == "top" ? s.top : s.bot) = avm;
        i = e;
      } else if (key == "push" || key == "pop") {
        std::size_t colon = t.find(':', v);
        std::size_t stop = t.find_first_of(" \t", v);
        std::string chan = t.substr(v, std::min(colon, stop) - v);
        auto c = channel_from_name(chan);
        if (!c) throw error(line, "unknown channel '" + chan + "'", static_cast<int>(v) + 1);
        std::string avm = "[]";
        std::size_t e = std::min(stop, t.size());
        if (colon != std::string::npos && colon < stop) {
          e = avm_end(t, colon + 1);
          avm = t.substr(colon + 1, e - colon - 1);
          parse_avm_at(line, colon + 1, avm);
        }
        tag::GapOp op{*c, key == "push"};
        n.gaps.push_back(op);
        s.fillers.push_back({op, avm});
        i = e;
      } else {
        throw error(line, "unknown attribute '" + key + "'", static_cast<int>(i) + 1);
      }
    }
    return s;
  }

  void build(const TreeSpec& spec) {
    if (spec.nodes.empty()) throw error(spec.line, "tree '" + spec.name + "' has no nodes");
    // Indentation to structure.
    std::vector<std::pair<int, tag::TreeNode*>> stack;
    tag::ElementaryTree t;
    t.name = spec.name;
    t.kind = spec.kind;
    std::vector<const NodeSpec*> order;
    for (const auto& ns : spec.nodes) {
      if (stack.empty()) {
        if (!order.empty()) throw error(ns.line, "second root in tree '" + spec.name + "'");
        t.root = ns.node;
        stack.push_back({ns.depth, &t.root});
      } else {
        while (!stack.empty() && stack.back().first >= ns.depth) stack.pop_back();
        if (stack.empty()) throw error(ns.line, "second root in tree '" + spec.name + "'");
        tag::TreeNode* parent = stack.back().second;
        if (parent->kind != tag::NodeKind::internal)
          throw error(ns.line, "only internal nodes have children");
        parent->children.push_back(ns.node);
        stack.push_back({ns.depth, &parent->children.back()});
      }
      order.push_back(&ns);
    }
    tag::index_tree(t);

    std::size_t feet = 0, anchors = 0;
    bool templ = false;
    t.each_node([&](const tag::TreeNode& n) {
      if (n.kind == tag::NodeKind::foot) {
        ++feet;
        if (n.label != t.root.label)
          throw error(spec.line, "foot " + n.label.str() + " does not match root " + t.root.label.str());
      }
      if (n.kind == tag::NodeKind::anchor) {
        ++anchors;
        templ = templ || n.word == "@";
      }
      if (n.kind == tag::NodeKind::internal && n.children.empty())
        throw error(spec.line, "internal node " + n.label.str() + " without children in '" + spec.name + "'");
      for (const auto& op : n.gaps)
        if (!op.push && !n.empty_anchor()) throw error(spec.line, "pop only on a trace anchor in '" + spec.name + "'");
    });
    if (spec.kind == tag::TreeKind::auxiliary && feet != 1) throw TwoFootNodes(spec.name, feet);
    if (spec.kind == tag::TreeKind::initial && feet != 0) throw error(spec.line, "initial tree with a foot node");
    if (anchors == 0) throw NoAnchor(spec.name);

    // One structure for the whole tree, so tags are shared across lines.
    std::string text = "[";
    for (std::size_t j = 0; j < order.size(); ++j) {
      const auto& ns = *order[j];
      if (j) text += ", ";
      text += "n" + std::to_string(j) + ":[t:" + (ns.top.empty() ? "[]" : ns.top) +
              ", b:" + (ns.bot.empty() ? "[]" : ns.bot);
      for (const auto& [op, avm] : ns.fillers) {
        text += std::string(", ") + (op.push ? "push" : "pop") + ":[" + channel_name(op.channel) + ":" + avm + "]";
      }
      text += "]";
    }
    text += "]";
    FeatureStructure f;
    try {
      f = fs::fs_parse(text);
    } catch (const fs::ParseError& e) {
      throw error(spec.line, std::string("inconsistent tree structure: ") + e.what());
    }
    if (!spec.whole.empty()) {
      auto w = parse_avm_at(spec.whole_line, 0, spec.whole);
      auto u = fs::fs_unify(f, w);
      if (!u) throw error(spec.whole_line, "tree structure clashes with node attributes");
      f = *u;
    }
    // anchors share top and bottom
    fs::Workspace ws;
    int r = ws.import(f);
    t.each_node([&](const tag::TreeNode& n) {
      if (n.kind != tag::NodeKind::anchor) return;
      std::string nj = "n" + std::to_string(n.index);
      if (!ws.unify(*ws.locate(r, {nj, "t"}, true), *ws.locate(r, {nj, "b"}, true)))
        throw error(spec.line, "anchor " + n.label.str() + " has clashing top and bottom");
    });
    t.fs = *ws.extract(r);
    check_features(t.fs, spec.name);

    if (templ) {
      templates_[spec.name] = t;
    } else {
      add(std::move(t), spec.line);
    }
  }

  void add(tag::ElementaryTree t, const Line& line) {
    for (auto& old : g_.trees)
      if (old.name == t.name) {
        old = std::move(t);  // later definitions (overlays) replace
        return;
      }
    (void)line;
    g_.trees.push_back(std::move(t));
  }

  void lexicon_line(const Line& line, const std::string& text) {
    auto w = split_ws(text);
    if (w.size() < 2) throw error(line, "expected 'word template [avm]'");
    auto it = templates_.find(w[1]);
    if (it == templates_.end()) throw error(line, "unknown template '" + w[1] + "'");
    tag::ElementaryTree t = it->second;
    t.name = w[1] + "/" + w[0];
    FeatureStructure extra = fs::fs_parse("[]");
    std::size_t at = line.text.find('[');
    if (w.size() > 2) {
      if (at == std::string::npos) throw error(line, "expected an AVM after the template");
      extra = parse_avm_at(line, at, line.text.substr(at));
    }
    check_features(extra, t.name);
    fs::Workspace ws;
    int r = ws.import(t.fs);
    int e = ws.import(extra);
    bool ok = true;
    std::function<void(tag::TreeNode&)> fill = [&](tag::TreeNode& n) {
      if (n.kind == tag::NodeKind::anchor && n.word == "@") {
        n.word = w[0];
        ok = ok && ws.unify(*ws.locate(r, {"n" + std::to_string(n.index), "t"}, true), e);
      }
      for (auto& c : n.children) fill(c);
    };
    fill(t.root);
    auto f = ok ? ws.extract(r) : std::nullopt;
    if (!f) throw error(line, "entry does not fit template '" + w[1] + "'");
    t.fs = *f;
    add(std::move(t), line);
  }

  void check_features(const FeatureStructure& f, const std::string& where) {
    std::set<std::string> used;
    collect_features(f, used);
    for (const auto& name : used) {
      if (name == "t" || name == "b" || name == "push" || name == "pop" || name == "gaps" || name == "in" ||
          name == "out" || channel_from_name(name))
        continue;
      if (name.size() > 1 && name[0] == 'n' && std::all_of(name.begin() + 1, name.end(), ::isdigit)) continue;
      if (!g_.features.count(name)) throw UndeclaredFeature(name, "tree '" + where + "'");
    }
  }

  void finish() {
    g_.sorts = sorts_;
    if (threaded_) g_.threaded = true;
  }

  TAGGrammar g_;
  std::map<std::string, tag::ElementaryTree> templates_;
  std::set<std::string> sorts_;
  bool threaded_ = false;
};

inline void print_node(const tag::TreeNode& n, int depth, std::ostringstream& os) {
  os << std::string(static_cast<std::size_t>(2 + 2 * depth), ' ') << n.label.str();
  switch (n.kind) {
    case tag::NodeKind::anchor: os << '^' << (n.word.empty() ? "_" : n.word); break;
    case tag::NodeKind::substitution: os << '!'; break;
    case tag::NodeKind::foot: os << '*'; break;
    case tag::NodeKind::internal: break;
  }
  if (n.na) os << " na";
  for (const auto& op : n.gaps) os << ' ' << (op.push ? "push=" : "pop=") << channel_name(op.channel);
  os << '\n';
  for (const auto& c : n.children) print_node(c, depth + 1, os);
}

}  // namespace detail

inline TAGGrammar load_tag_grammar(const std::string& name_or_path) {
  return detail::TagLoader().load(resolve_grammar(name_or_path));
}

inline TAGGrammar load_tag_grammar_text(const std::string& text, const std::string& name = "inline") {
  return detail::TagLoader().load_text(text, name);
}

/// Self-contained text that reloads to an identical grammar.
inline std::string print_tag_grammar(const TAGGrammar& g) {
  std::ostringstream os;
  os << ":version 1\n:name " << g.name << "\n:start " << g.start.str() << "\n:channels";
  for (auto c : g.channels) os << ' ' << channel_name(c);
  os << "\n:features";
  for (const auto& f : g.features) os << ' ' << f;
  os << '\n';
  if (!g.sorts.empty()) {
    os << ":sorts";
    for (const auto& s : g.sorts) os << ' ' << s;
    os << '\n';
  }
  if (g.threaded) os << ":threaded\n";
  os << "\n:trees\n";
  for (const auto& t : g.trees) {
    os << "tree " << t.name << (t.kind == tag::TreeKind::initial ? " initial\n" : " auxiliary\n");
    detail::print_node(t.root, 0, os);
    os << "  := " << fs::fs_print(t.fs) << '\n';
  }
  return os.str();
}

/// Advisory findings; an empty list means the grammar is clean.
inline std::vector<std::string> validate(const TAGGrammar& g) {
  std::vector<std::string> warnings;
  std::set<Symbol> substituted{g.start}, adjoinable, initial_roots;
  for (const auto& t : g.trees) {
    if (t.kind == tag::TreeKind::initial) initial_roots.insert(t.root.label);
    t.each_node([&](const tag::TreeNode& n) {
      if (n.kind == tag::NodeKind::substitution) substituted.insert(n.label);
      bool own_root = t.kind == tag::TreeKind::auxiliary && &n == &t.root;
      if (n.kind == tag::NodeKind::internal && !n.na && !own_root) adjoinable.insert(n.label);
    });
  }
  for (const auto& t : g.trees) {
    bool used = t.kind == tag::TreeKind::initial ? substituted.count(t.root.label) > 0
                                                  : adjoinable.count(t.root.label) > 0;
    if (!used) warnings.push_back("unreachable tree '" + t.name + "' (nowhere to attach " + t.root.label.str() + ")");
  }
  for (Symbol s : substituted)
    if (!initial_roots.count(s)) warnings.push_back("no initial tree for substitution label " + s.str());
  if (!g.sorts.empty()) {
    std::set<std::string> bad;
    std::function<void(const FeatureStructure&)> walk = [&](const FeatureStructure& f) {
      if (f.is_avm()) {
        for (const auto& [name, v] : f.features()) {
          if (name == "sort" && v.is_atom() && !g.sorts.count(v.atom_name())) bad.insert(v.atom_name());
          walk(v);
        }
      } else if (f.is_list()) {
        for (const auto& e : f.elements()) walk(e);
      }
    };
    for (const auto& t : g.trees) walk(t.fs);
    for (const auto& s : bad) warnings.push_back("undeclared sort '" + s + "'");
  }
  return warnings;
}

}  // namespace gramwb::dsl
