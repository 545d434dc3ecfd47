#pragma once

// Judgment corpus: sentences with expected accept/reject verdicts, run
// against (engine, grammar, config) triples.
//
//   id | engine | grammar | config | expected | sentence | bindings | cite
//
// `id` is `phenomenon/label`. `bindings` is empty or a space-separated list
// of `filler>gap` pairs (`0-2>6`: the filler spanning tokens 0-2 binds the
// trace before token 6). `#` starts a comment line.

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <map>
#include <memory>

#include "gramwb/dsl/tag.hpp"
#include "gramwb/dsl/ug.hpp"
#include "gramwb/tag/parser.hpp"
#include "gramwb/ug/parser.hpp"

namespace gramwb::corpus {

enum class Engine { ug, tag };

inline std::string engine_name(Engine e) { return e == Engine::ug ? "ug" : "tag"; }
inline std::optional<Engine> engine_from_name(const std::string& s) {
  if (s == "ug") return Engine::ug;
  if (s == "tag") return Engine::tag;
  return std::nullopt;
}

struct JudgmentEntry {
  std::string id;
  std::vector<std::string> tokens;
  Engine engine = Engine::ug;
  std::string grammar;
  std::string config;
  bool accept = true;
  std::optional<std::set<std::string>> bindings;
  std::string cite;
  int line = 0;

  std::string phenomenon() const { return id.substr(0, id.find('/')); }
  std::string sentence() const {
    std::string s;
    for (const auto& t : tokens) s += (s.empty() ? "" : " ") + t;
    return s;
  }
};

using Corpus = std::vector<JudgmentEntry>;

class CorpusError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class UnknownFormat : public std::invalid_argument {
public:
  explicit UnknownFormat(const std::string& f) : std::invalid_argument("unknown report format '" + f + "'") {}
};

inline std::string binding_string(const ug::Binding& b) { return b.filler + ">" + std::to_string(b.gap); }

inline std::string join(const std::set<std::string>& s) {
  std::string out;
  for (const auto& x : s) out += (out.empty() ? "" : " ") + x;
  return out;
}

// --------------------------------------------------------------------------
// Reading

inline JudgmentEntry parse_entry(const std::string& text, const std::string& file, int line) {
  std::vector<std::string> f;
  std::istringstream in(text);
  for (std::string part; std::getline(in, part, '|');) f.push_back(dsl::trim(part));
  if (f.size() != 8) throw CorpusError(file + ":" + std::to_string(line) + ": expected 8 fields, got " + std::to_string(f.size()));
  auto bad = [&](const std::string& what) { return CorpusError(file + ":" + std::to_string(line) + ": " + what); };
  JudgmentEntry e;
  e.id = f[0];
  e.line = line;
  auto eng = engine_from_name(f[1]);
  if (!eng) throw bad("unknown engine '" + f[1] + "'");
  e.engine = *eng;
  e.grammar = f[2];
  e.config = f[3];
  bool known = e.engine == Engine::ug ? ug::ChannelConfig::by_name(e.config).has_value()
                                      : tag::config_from_name(e.config).has_value();
  if (!known) throw bad("config '" + e.config + "' does not apply to engine " + f[1]);
  if (f[4] != "accept" && f[4] != "reject") throw bad("expected must be accept or reject");
  e.accept = f[4] == "accept";
  e.tokens = dsl::split_ws(f[5]);
  if (e.tokens.empty()) throw bad("empty sentence");
  if (!f[6].empty()) {
    if (!e.accept) throw bad("bindings given for a rejected sentence");
    auto bs = dsl::split_ws(f[6]);
    e.bindings = std::set<std::string>(bs.begin(), bs.end());
  }
  e.cite = f[7];
  return e;
}

inline Corpus read_corpus_text(const std::string& text, const std::string& name = "corpus") {
  Corpus c;
  std::istringstream in(text);
  int n = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++n;
    std::string t = dsl::trim(raw);
    if (t.empty() || t[0] == '#') continue;
    c.push_back(parse_entry(t, name, n));
  }
  return c;
}

inline Corpus read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot read corpus " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return read_corpus_text(ss.str(), path.filename().string());
}

/// The bundled corpus.
inline std::filesystem::path bundled_corpus() { return dsl::data_dir() / "judgments.corpus"; }

// --------------------------------------------------------------------------
// Grammars by name, loaded once.

class GrammarSet {
public:
  const ug::UGGrammar& ug(const std::string& name) {
    auto& slot = ug_[name];
    if (!slot) slot = std::make_unique<ug::UGGrammar>(dsl::load_ug_grammar(name));
    return *slot;
  }
  const tag::TAGGrammar& tag(const std::string& name, tag::TagConfig c) {
    auto& slot = tag_[{name, c}];
    if (!slot) {
      const auto& raw = raw_tag(name);
      slot = std::make_unique<tag::TAGGrammar>(tag::configure(raw, c));
    }
    return *slot;
  }
  const tag::TAGGrammar& raw_tag(const std::string& name) {
    auto& slot = raw_[name];
    if (!slot) slot = std::make_unique<tag::TAGGrammar>(dsl::load_tag_grammar(name));
    return *slot;
  }

private:
  std::map<std::string, std::unique_ptr<ug::UGGrammar>> ug_;
  std::map<std::pair<std::string, tag::TagConfig>, std::unique_ptr<tag::TAGGrammar>> tag_;
  std::map<std::string, std::unique_ptr<tag::TAGGrammar>> raw_;
};

// --------------------------------------------------------------------------
// Running

/// One sentence under one (engine, grammar, config).
struct Target {
  Engine engine = Engine::ug;
  std::string grammar;
  std::string config;
};

struct Analysis {
  std::size_t parses = 0;
  std::vector<std::set<std::string>> bindings;  // per parse (UG); empty sets for TAG
  std::vector<std::string> trees;
  std::string error;  // unknown token etc.
};

inline Analysis analyze(GrammarSet& gs, const Target& t, const std::vector<std::string>& tokens) {
  Analysis a;
  try {
    if (t.engine == Engine::ug) {
      auto c = ug::ChannelConfig::by_name(t.config);
      if (!c) throw std::invalid_argument("config " + t.config + " does not apply to ug");
      for (const auto& p : ug::ug_parse(gs.ug(t.grammar), tokens, *c)) {
        std::set<std::string> b;
        for (const auto& x : p.bindings) b.insert(binding_string(x));
        a.bindings.push_back(std::move(b));
        a.trees.push_back(p.bracketed);
      }
    } else {
      auto c = tag::config_from_name(t.config);
      if (!c) throw std::invalid_argument("config " + t.config + " does not apply to tag");
      // configured once per grammar; tag_parse's own configure is then a no-op copy
      const auto& g = gs.tag(t.grammar, *c);
      for (const auto& p : tag::tag_parse(g, tokens, *c)) {
        a.bindings.emplace_back();
        a.trees.push_back(p.bracketed);
      }
    }
  } catch (const UnknownToken& e) {
    a.error = e.what();
  }
  a.parses = a.trees.size();
  return a;
}

struct EntryOutcome {
  std::string id;
  Engine engine;
  std::string grammar, config;
  bool expected_accept;
  bool passed = false;
  std::size_t parses = 0;
  std::string bindings;  // of the first parse matching the expectation, else the first parse
  std::string error;
  double elapsed_ms = 0;
};

struct RunReport {
  std::vector<EntryOutcome> entries;
  std::size_t passed = 0, failed = 0;
};

struct RunOptions {
  std::set<Engine> engines;  // empty: all
};

inline EntryOutcome run_entry(GrammarSet& gs, const JudgmentEntry& e) {
  EntryOutcome o{e.id, e.engine, e.grammar, e.config, e.accept};
  auto t0 = std::chrono::steady_clock::now();
  Analysis a = analyze(gs, Target{e.engine, e.grammar, e.config}, e.tokens);
  o.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  o.parses = a.parses;
  o.error = a.error;
  if (!a.bindings.empty()) o.bindings = join(a.bindings.front());
  if (e.accept) {
    o.passed = a.parses > 0;
    if (o.passed && e.bindings) {
      auto hit = std::find(a.bindings.begin(), a.bindings.end(), *e.bindings);
      o.passed = hit != a.bindings.end();
      if (o.passed) o.bindings = join(*hit);
    }
  } else {
    o.passed = a.parses == 0 && a.error.empty();
  }
  return o;
}

/// Runs every entry (of the selected engines); the report is ordered by id.
inline RunReport run_corpus(const Corpus& corpus, GrammarSet& gs, const RunOptions& opt = {}) {
  RunReport r;
  for (const auto& e : corpus) {
    if (!opt.engines.empty() && !opt.engines.count(e.engine)) continue;
    r.entries.push_back(run_entry(gs, e));
  }
  std::stable_sort(r.entries.begin(), r.entries.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (const auto& o : r.entries) (o.passed ? r.passed : r.failed)++;
  return r;
}

inline RunReport run_corpus(const Corpus& corpus, const RunOptions& opt = {}) {
  GrammarSet gs;
  return run_corpus(corpus, gs, opt);
}

// --------------------------------------------------------------------------
// Comparing configurations

struct EngineDiff {
  Target a, b;
  Analysis left, right;
  bool accept_a() const { return left.parses > 0; }
  bool accept_b() const { return right.parses > 0; }
  bool delta() const { return accept_a() != accept_b(); }
  std::set<std::string> binding_sets(const Analysis& x) const {
    std::set<std::string> out;
    for (const auto& b : x.bindings) out.insert("{" + join(b) + "}");
    return out;
  }
};

inline EngineDiff diff_engines(GrammarSet& gs, const std::vector<std::string>& tokens, const Target& a, const Target& b) {
  return EngineDiff{a, b, analyze(gs, a, tokens), analyze(gs, b, tokens)};
}

inline EngineDiff diff_engines(const std::vector<std::string>& tokens, const Target& a, const Target& b) {
  GrammarSet gs;
  return diff_engines(gs, tokens, a, b);
}

// --------------------------------------------------------------------------
// Reports

/// `text`: fixed-width table; `records`: one tab-separated line per entry.
/// Both start with a header; timing is the last column and can be left out.
inline std::string export_report(const RunReport& r, const std::string& format, bool timing = true) {
  std::ostringstream os;
  if (format == "text") {
    std::size_t idw = 4;
    for (const auto& o : r.entries) idw = std::max(idw, o.id.size() + 2);
    const int w = static_cast<int>(idw);
    os << std::left << std::setw(w) << "id" << std::setw(5) << "eng" << std::setw(10) << "grammar" << std::setw(13)
       << "config" << std::setw(8) << "expect" << std::setw(8) << "result" << std::setw(7) << "parses"
       << "bindings";
    if (timing) os << "  ms";
    os << '\n';
    for (const auto& o : r.entries) {
      os << std::left << std::setw(w) << o.id << std::setw(5) << engine_name(o.engine) << std::setw(10) << o.grammar
         << std::setw(13) << o.config << std::setw(8) << (o.expected_accept ? "accept" : "reject") << std::setw(8)
         << (o.passed ? "PASS" : "FAIL") << std::setw(7) << o.parses << (o.bindings.empty() ? "-" : o.bindings);
      if (!o.error.empty()) os << "  (" << o.error << ")";
      if (timing) os << "  " << std::fixed << std::setprecision(1) << o.elapsed_ms;
      os << '\n';
    }
    if (!r.entries.empty()) os << "total " << r.entries.size() << "  pass " << r.passed << "  fail " << r.failed << '\n';
  } else if (format == "records") {
    os << "id\toutcome\tparses\tbindings" << (timing ? "\tms" : "") << '\n';
    for (const auto& o : r.entries) {
      os << o.id << '\t' << (o.passed ? "pass" : "fail") << '\t' << o.parses << '\t' << o.bindings;
      if (timing) os << '\t' << std::fixed << std::setprecision(3) << o.elapsed_ms;
      os << '\n';
    }
  } else {
    throw UnknownFormat(format);
  }
  return os.str();
}

}  // namespace gramwb::corpus
