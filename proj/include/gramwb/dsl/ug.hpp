#pragma once

// Unification-grammar files.
//
//   :version 1
//   :include ug-base
//   :start S
//   :channels vmove wh tough rextra
//   :features agr num ...
//   :sorts place music ...
//   :traces         NP wh tough
//   :rules          name Mother -> D1 D2 COMPS D3 ; push wh 0 1
//                   name := [m:..., d0:...] ; comps 1 ; push ...
//   :lexicon        word Cat [avm]      (!word replaces included entries)
//   :percolate      poss NP <- D
//   :idioms         had way

#include <algorithm>
#include <map>

#include "gramwb/dsl/common.hpp"
#include "gramwb/ug/percolation.hpp"

namespace gramwb::dsl {

using ug::UGGrammar;

namespace detail {

inline const std::set<std::string>& ug_builtin_features() {
  static const std::set<std::string> s = {"cat", "subcat", "push", "span", "gaps_in", "gaps_out", "m"};
  return s;
}

struct CatToken {
  std::string cat;
  std::string tag;
  std::string avm;  // with brackets, or empty
  std::size_t col = 0;
  std::size_t avm_col = 0;
};

/// `NP`, `NP[wh:+]`, `NP#s[wh:-]`, `COMPS`.
inline std::vector<CatToken> split_categories(const Line& line, std::size_t from, std::size_t to) {
  const std::string& s = line.text;
  std::vector<CatToken> out;
  std::size_t i = from;
  auto skip = [&] {
    while (i < to && (s[i] == ' ' || s[i] == '\t')) ++i;
  };
  auto name = [&] {
    std::size_t b = i;
    while (i < to && is_name_char(s[i])) ++i;
    return s.substr(b, i - b);
  };
  for (skip(); i < to; skip()) {
    CatToken t;
    t.col = i;
    t.cat = name();
    if (t.cat.empty()) throw SyntaxError(line.file, line.number, static_cast<int>(i) + 1, "expected category");
    if (i < to && s[i] == '#') {
      ++i;
      t.tag = name();
      if (t.tag.empty()) throw SyntaxError(line.file, line.number, static_cast<int>(i) + 1, "expected tag");
    }
    std::size_t save = i;
    skip();
    if (i < to && s[i] == '[') {
      t.avm_col = i;
      int depth = 0;
      std::size_t b = i;
      for (; i < to; ++i) {
        if (s[i] == '[') ++depth;
        if (s[i] == ']' && --depth == 0) break;
      }
      if (i == to) throw SyntaxError(line.file, line.number, static_cast<int>(b) + 1, "unbalanced '['");
      ++i;
      t.avm = s.substr(b, i - b);
    } else {
      i = save;
      if (i < to && s[i] != ' ' && s[i] != '\t')
        throw SyntaxError(line.file, line.number, static_cast<int>(i) + 1, "unexpected character");
    }
    out.push_back(std::move(t));
  }
  return out;
}

inline std::string category_text(const CatToken& t) {
  std::string inner;
  if (!t.avm.empty()) inner = trim(std::string_view(t.avm).substr(1, t.avm.size() - 2));
  std::string out = t.tag.empty() ? "" : "#" + t.tag + " ";
  out += "[cat:" + t.cat + (inner.empty() ? "" : ", " + inner) + "]";
  return out;
}

/// Explicitly written gap features must form a complete chain.
inline void check_threading(const ug::UGRule& r) {
  std::vector<std::string> cats{"m"};
  for (std::size_t i = 0; i < r.arity; ++i) cats.push_back("d" + std::to_string(i));
  bool explicit_gaps = false;
  for (const auto& c : cats)
    explicit_gaps = explicit_gaps || fs::fs_get(r.fs, {c, "gaps_in"}) || fs::fs_get(r.fs, {c, "gaps_out"});
  if (!explicit_gaps) return;
  for (const auto& c : cats)
    if (!fs::fs_get(r.fs, {c, "gaps_in"}) || !fs::fs_get(r.fs, {c, "gaps_out"}))
      throw BadThreading(r.name, (c == "m" ? std::string("mother") : "daughter " + c.substr(1)) +
                                     " omits gap variables");
  auto same = [&](const std::string& a, const char* fa, const std::string& b, const char* fb) {
    return fs::fs_get(r.fs, {a, fa})->same_node(*fs::fs_get(r.fs, {b, fb}));
  };
  if (r.arity == 0) return;
  if (!same("m", "gaps_in", "d0", "gaps_in")) throw BadThreading(r.name, "first daughter gaps_in is not the mother's");
  for (std::size_t i = 0; i + 1 < r.arity; ++i)
    if (!same("d" + std::to_string(i), "gaps_out", "d" + std::to_string(i + 1), "gaps_in"))
      throw BadThreading(r.name, "chain broken after daughter " + std::to_string(i));
  if (!same("d" + std::to_string(r.arity - 1), "gaps_out", "m", "gaps_out"))
    throw BadThreading(r.name, "last daughter gaps_out is not the mother's");
}

class UgLoader {
public:
  UGGrammar load(const std::filesystem::path& path) {
    g_.name = path.stem().string();
    load_file(path, 0);
    finish();
    return std::move(g_);
  }

  /// Loads from in-memory text (tests, round-trip).
  UGGrammar load_text(const std::string& text, const std::string& name) {
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

  void load_lines(const std::vector<Line>& lines, const std::filesystem::path& dir, int depth) {
    std::string section;
    std::set<std::string> replaced;  // words overridden by `!word` in this file
    for (const auto& line : lines) {
      std::string text = trim(line.text);
      if (text[0] == ':') {
        auto words = split_ws(text);
        std::string head = words[0].substr(1);
        std::vector<std::string> args(words.begin() + 1, words.end());
        if (head == "version") {
          if (args.size() != 1 || args[0] != "1") throw SyntaxError(line.file, line.number, 1, "unsupported version");
        } else if (head == "include") {
          if (args.size() != 1) throw SyntaxError(line.file, line.number, 1, ":include takes one name");
          load_file(resolve_grammar(args[0], dir), depth + 1);
        } else if (head == "name") {
          if (args.size() != 1) throw SyntaxError(line.file, line.number, 1, ":name takes one word");
          g_.name = args[0];
        } else if (head == "start") {
          if (args.size() != 1) throw SyntaxError(line.file, line.number, 1, ":start takes one category");
          g_.start = Symbol(args[0]);
        } else if (head == "channels") {
          for (const auto& a : args) {
            auto c = ug::channel_from_name(a);
            if (!c) throw SyntaxError(line.file, line.number, 1, "unknown channel '" + a + "'");
            if (std::find(g_.channels.begin(), g_.channels.end(), *c) == g_.channels.end()) g_.channels.push_back(*c);
          }
        } else if (head == "features") {
          g_.features.insert(args.begin(), args.end());
        } else if (head == "sorts") {
          g_.sorts.insert(args.begin(), args.end());
        } else if (head == "traces" || head == "rules" || head == "lexicon" || head == "percolate" ||
                   head == "idioms") {
          if (!args.empty()) throw SyntaxError(line.file, line.number, 1, "section header takes no arguments");
          section = head;
        } else {
          throw SyntaxError(line.file, line.number, 1, "unknown directive ':" + head + "'");
        }
        continue;
      }
      if (section.empty()) throw SyntaxError(line.file, line.number, 1, "content outside a section");
      if (section == "traces") trace_line(line);
      else if (section == "rules") rule_line(line);
      else if (section == "lexicon") lexicon_line(line, replaced);
      else if (section == "percolate") percolate_line(line);
      else idiom_line(line);
    }
  }

  void trace_line(const Line& line) {
    auto w = split_ws(line.text);
    if (w.size() < 2) throw SyntaxError(line.file, line.number, 1, "trace needs a category and channels");
    ug::TraceDecl t{Symbol(w[0]), {}};
    for (std::size_t i = 1; i < w.size(); ++i) {
      auto c = ug::channel_from_name(w[i]);
      if (!c) throw SyntaxError(line.file, line.number, 1, "unknown channel '" + w[i] + "'");
      t.channels.push_back(*c);
    }
    g_.traces.push_back(std::move(t));
  }

  void rule_line(const Line& line) {
    const std::string& s = line.text;
    std::size_t semi = s.find(';');
    std::size_t body_end = semi == std::string::npos ? s.size() : semi;
    std::size_t b = s.find_first_not_of(" \t");
    std::size_t e = s.find_first_of(" \t", b);
    if (e == std::string::npos || e > body_end) throw SyntaxError(line.file, line.number, 1, "rule needs a body");
    ug::UGRule r;
    r.name = s.substr(b, e - b);
    if (std::any_of(g_.rules.begin(), g_.rules.end(), [&](const auto& x) { return x.name == r.name; }))
      throw SyntaxError(line.file, line.number, static_cast<int>(b) + 1, "duplicate rule '" + r.name + "'");

    std::string rest = trim(s.substr(e, body_end - e));
    std::vector<std::string> clauses;
    if (semi != std::string::npos) {
      std::string tail = s.substr(semi + 1);
      std::size_t p = 0;
      while (p <= tail.size()) {
        auto q = tail.find(';', p);
        clauses.push_back(trim(tail.substr(p, q == std::string::npos ? std::string::npos : q - p)));
        if (q == std::string::npos) break;
        p = q + 1;
      }
    }

    if (rest.rfind(":=", 0) == 0) {
      std::size_t col = s.find(":=") + 2;
      r.fs = parse_avm_at(line, col, s.substr(col, body_end - col));
      while (fs::fs_get(r.fs, {"d" + std::to_string(r.arity)})) ++r.arity;
    } else {
      std::size_t arrow = s.find("->", e);
      if (arrow == std::string::npos || arrow > body_end)
        throw SyntaxError(line.file, line.number, static_cast<int>(e) + 2, "expected '->'");
      auto mother = split_categories(line, e, arrow);
      if (mother.size() != 1)
        throw SyntaxError(line.file, line.number, static_cast<int>(e) + 2, "expected one mother category");
      auto daughters = split_categories(line, arrow + 2, body_end);
      std::string text = "[m:" + category_text(mother[0]);
      for (const auto& d : daughters) {
        if (d.cat == "COMPS" && d.tag.empty() && d.avm.empty()) {
          if (r.comps_at || r.arity == 0)
            throw SyntaxError(line.file, line.number, static_cast<int>(d.col) + 1, "COMPS must follow a head daughter");
          r.comps_at = r.arity;
          continue;
        }
        text += ", d" + std::to_string(r.arity++) + ":" + category_text(d);
      }
      text += "]";
      for (const auto& c : mother)
        if (!c.avm.empty()) parse_avm_at(line, c.avm_col, c.avm);
      for (const auto& c : daughters)
        if (!c.avm.empty()) parse_avm_at(line, c.avm_col, c.avm);
      try {
        r.fs = fs::fs_parse(text);
      } catch (const fs::ParseError& err) {
        throw SyntaxError(line.file, line.number, static_cast<int>(e) + 2, err.what());
      }
    }
    if (r.arity == 0) throw SyntaxError(line.file, line.number, 1, "rule '" + r.name + "' has no daughters");
    if (!fs::fs_get(r.fs, {"m", "cat"}))
      throw SyntaxError(line.file, line.number, 1, "rule '" + r.name + "' has no mother category");

    for (const auto& c : clauses) {
      auto w = split_ws(c);
      if (w.size() == 2 && w[0] == "comps") {
        r.comps_at = std::stoul(w[1]);
        continue;
      }
      if (w.size() != 4 || w[0] != "push")
        throw SyntaxError(line.file, line.number, static_cast<int>(semi) + 1, "expected 'push CHANNEL FROM ONTO'");
      auto ch = ug::channel_from_name(w[1]);
      if (!ch) throw SyntaxError(line.file, line.number, static_cast<int>(semi) + 1, "unknown channel '" + w[1] + "'");
      std::size_t from = 0, onto = 0;
      try {
        from = std::stoul(w[2]);
        onto = std::stoul(w[3]);
      } catch (const std::exception&) {
        throw SyntaxError(line.file, line.number, static_cast<int>(semi) + 1, "push indices must be numbers");
      }
      if (from >= r.arity || onto >= r.arity || from == onto)
        throw SyntaxError(line.file, line.number, static_cast<int>(semi) + 1, "push indices out of range");
      r.fillers.push_back({*ch, from, onto});
    }
    check_threading(r);
    lines_[r.name] = line;
    g_.rules.push_back(std::move(r));
  }

  void lexicon_line(const Line& line, std::set<std::string>& replaced) {
    const std::string& s = line.text;
    std::size_t b = s.find_first_not_of(" \t");
    std::size_t e = s.find_first_of(" \t", b);
    if (e == std::string::npos) throw SyntaxError(line.file, line.number, 1, "lexical entry needs a category");
    std::string word = s.substr(b, e - b);
    bool replace = word[0] == '!';
    if (replace) word = word.substr(1);
    std::size_t cb = s.find_first_not_of(" \t", e);
    std::size_t ce = s.find_first_of(" \t[", cb);
    std::string cat = s.substr(cb, ce == std::string::npos ? std::string::npos : ce - cb);
    FeatureStructure fs;
    if (ce != std::string::npos) {
      std::size_t ab = s.find_first_not_of(" \t", ce);
      if (ab != std::string::npos) fs = parse_avm_at(line, ab, s.substr(ab));
    }
    auto full = fs::fs_unify(fs, fs::fs_embed({"cat"}, FeatureStructure::atom(cat)));
    if (!full) throw SyntaxError(line.file, line.number, static_cast<int>(cb) + 1, "category clashes with AVM");
    if (auto sc = fs::fs_get(*full, {"subcat"}); sc && (!sc->is_list() || !sc->list_closed()))
      throw SyntaxError(line.file, line.number, static_cast<int>(cb) + 1, "subcat must be a closed list");
    Symbol w(word);
    if (replace && replaced.insert(word).second)
      g_.lexicon.erase(std::remove_if(g_.lexicon.begin(), g_.lexicon.end(), [&](const auto& x) { return x.word == w; }),
                       g_.lexicon.end());
    g_.lexicon.push_back({w, *full});
  }

  void percolate_line(const Line& line) {
    auto w = split_ws(line.text);
    auto arrow = std::find(w.begin(), w.end(), "<-");
    if (w.size() < 4 || arrow == w.end() || arrow - w.begin() < 2 || arrow + 1 == w.end())
      throw SyntaxError(line.file, line.number, 1, "expected 'feature Over... <- From...'");
    ug::Percolation p{w[0], {}, {}};
    for (auto it = w.begin() + 1; it != arrow; ++it) p.over.emplace_back(*it);
    for (auto it = arrow + 1; it != w.end(); ++it) p.from.emplace_back(*it);
    g_.percolations.push_back(std::move(p));
  }

  void idiom_line(const Line& line) {
    auto w = split_ws(line.text);
    if (w.size() != 2) throw SyntaxError(line.file, line.number, 1, "expected 'verb noun'");
    g_.idioms.push_back({Symbol(w[0]), Symbol(w[1])});
  }

  void finish() {
    std::set<std::string> allowed = ug_builtin_features();
    allowed.insert(g_.features.begin(), g_.features.end());
    for (Channel c : ug::kAllChannels) allowed.insert(ug::channel_name(c));
    auto check = [&](const FeatureStructure& fs, const std::string& where) {
      std::set<std::string> used;
      collect_features(fs, used);
      for (const auto& f : used) {
        if (allowed.count(f)) continue;
        if (f.size() > 1 && f[0] == 'd' && std::all_of(f.begin() + 1, f.end(), ::isdigit)) continue;
        throw UndeclaredFeature(f, where);
      }
    };
    for (const auto& r : g_.rules) {
      const Line& l = lines_.at(r.name);
      check(r.fs, l.file + ":" + std::to_string(l.number) + " rule " + r.name);
    }
    for (const auto& e : g_.lexicon) check(e.fs, "lexical entry '" + e.word.str() + "'");
    for (const auto& p : g_.percolations)
      if (!allowed.count(p.feature)) throw UndeclaredFeature(p.feature, "percolation");
    for (const auto& t : g_.traces)
      for (Channel c : t.channels)
        if (std::find(g_.channels.begin(), g_.channels.end(), c) == g_.channels.end())
          throw GrammarError(std::string("trace uses undeclared channel '") + ug::channel_name(c) + "'");
    for (const auto& r : g_.rules)
      for (const auto& f : r.fillers)
        if (std::find(g_.channels.begin(), g_.channels.end(), f.channel) == g_.channels.end())
          throw BadThreading(r.name, std::string("push on undeclared channel '") + ug::channel_name(f.channel) + "'");
    if (!g_.percolations.empty() || !g_.idioms.empty()) g_ = ug::enable_possessive_percolation(std::move(g_));
  }

  using Channel = ug::Channel;
  UGGrammar g_;
  std::map<std::string, Line> lines_;
};

}  // namespace detail

inline UGGrammar load_ug_grammar(const std::string& name_or_path) {
  return detail::UgLoader().load(resolve_grammar(name_or_path));
}

inline UGGrammar load_ug_grammar_text(const std::string& text, const std::string& name = "inline") {
  return detail::UgLoader().load_text(text, name);
}

/// Self-contained text that reloads to an identical grammar.
inline std::string print_ug_grammar(const UGGrammar& g) {
  std::ostringstream os;
  os << ":version 1\n:name " << g.name << "\n:start " << g.start.str() << "\n:channels";
  for (auto c : g.channels) os << ' ' << ug::channel_name(c);
  os << "\n:features";
  for (const auto& f : g.features) os << ' ' << f;
  os << '\n';
  if (!g.sorts.empty()) {
    os << ":sorts";
    for (const auto& s : g.sorts) os << ' ' << s;
    os << '\n';
  }
  os << "\n:traces\n";
  for (const auto& t : g.traces) {
    os << t.cat.str();
    for (auto c : t.channels) os << ' ' << ug::channel_name(c);
    os << '\n';
  }
  os << "\n:rules\n";
  for (const auto& r : g.rules) {
    os << r.name << " := " << fs::fs_print(r.fs);
    if (r.comps_at) os << " ; comps " << *r.comps_at;
    for (const auto& f : r.fillers) os << " ; push " << ug::channel_name(f.channel) << ' ' << f.from << ' ' << f.onto;
    os << '\n';
  }
  os << "\n:lexicon\n";
  for (const auto& e : g.lexicon) os << e.word.str() << ' ' << e.cat().str() << ' ' << fs::fs_print(e.fs) << '\n';
  if (!g.percolations.empty()) {
    os << "\n:percolate\n";
    for (const auto& p : g.percolations) {
      os << p.feature;
      for (auto s : p.over) os << ' ' << s.str();
      os << " <-";
      for (auto s : p.from) os << ' ' << s.str();
      os << '\n';
    }
  }
  if (!g.idioms.empty()) {
    os << "\n:idioms\n";
    for (const auto& i : g.idioms) os << i.verb.str() << ' ' << i.lex.str() << '\n';
  }
  return os.str();
}

/// Advisory findings; an empty list means the grammar is clean.
inline std::vector<std::string> validate(const UGGrammar& g) {
  std::vector<std::string> warnings;
  std::set<Symbol> consumed{g.start};
  std::set<Symbol> built;
  for (const auto& r : g.rules) {
    built.insert(r.mother_cat());
    for (std::size_t i = 0; i < r.arity; ++i) consumed.insert(r.daughter_cat(i));
  }
  for (const auto& e : g.lexicon) {
    built.insert(e.cat());
    if (auto sc = fs::fs_get(e.fs, {"subcat"}); sc && sc->is_list())
      for (const auto& c : sc->elements())
        if (auto cat = c.feature("cat"); cat && cat->is_atom()) consumed.insert(cat->atom_symbol());
  }
  for (const auto& t : g.traces) built.insert(t.cat);

  std::set<std::string> reported;
  for (const auto& e : g.lexicon)
    if (!consumed.count(e.cat()) && reported.insert(e.word.str()).second)
      warnings.push_back("unreachable entry '" + e.word.str() + "' (category " + e.cat().str() + " used by no rule)");
  for (Symbol c : consumed)
    if (!built.count(c)) warnings.push_back("category " + c.str() + " is required but never built");

  for (const auto& i : g.idioms) {
    bool found = std::any_of(g.lexicon.begin(), g.lexicon.end(), [&](const auto& e) {
      auto lex = fs::fs_get(e.fs, {"lex"});
      return e.cat().str() == "N" && lex && lex->is_atom() && lex->atom_symbol() == i.lex;
    });
    if (!found) warnings.push_back("idiom '" + i.verb.str() + " ... " + i.lex.str() + "': no noun with lex " + i.lex.str());
  }

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
    for (const auto& e : g.lexicon) walk(e.fs);
    for (const auto& r : g.rules) walk(r.fs);
    for (const auto& s : bad) warnings.push_back("undeclared sort '" + s + "'");
  }
  return warnings;
}

}  // namespace gramwb::dsl
