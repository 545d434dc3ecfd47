// Acceptance run: one PASS/FAIL line per criterion, exit 0 iff all pass.

#include <iostream>
#include <random>

#include "gramwb/corpus.hpp"
#include "gramwb/tag/brute_force.hpp"
#include "oracle/naive_unify.hpp"
#include "oracle/ug_enumerator.hpp"
#include "random_fs.hpp"

using namespace gramwb;
using namespace gramwb::corpus;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

GrammarSet& grammars() {
  static GrammarSet gs;
  return gs;
}

const Corpus& bundled() {
  static const Corpus c = read_corpus(bundled_corpus());
  return c;
}

const RunReport& first_run() {
  static const RunReport r = run_corpus(bundled(), grammars());
  return r;
}

std::vector<std::string> words(const std::string& s) { return dsl::split_ws(s); }

// 1 ------------------------------------------------------------------------

Verdict judgments() {
  Verdict v;
  const auto& r = first_run();
  for (const auto& o : r.entries)
    if (!o.passed) v.fail(o.id + " failed (" + std::to_string(o.parses) + " parses)");
  struct Need {
    Engine e;
    const char* grammar;
    const char* config;
    const char* sentence;
    bool accept;
    const char* bindings;
  };
  const std::vector<Need> needs = {
      {Engine::ug, "ug-base", "merged", "which lake did you swim in", true, "0-2>6 2-3>4"},
      {Engine::ug, "ug-base", "merged", "which violin are these sonatas hard to play on", true, nullptr},
      {Engine::ug, "ug-base", "merged", "which sonatas is this violin hard to play on", false, nullptr},
      {Engine::ug, "ug-base", "channelized", "which articles are men most fun to shop for with", true, nullptr},
      {Engine::ug, "ug-base", "channelized", "which articles are men most fun to shop with for", true, nullptr},
      {Engine::tag, "tag-base", "baseline", "john had his way", true, nullptr},
      {Engine::tag, "tag-base", "baseline", "he shook his pretty head", true, nullptr},
      {Engine::tag, "tag-base", "baseline", "she shrugged her powerful shoulders", true, nullptr},
      {Engine::tag, "tag-base", "baseline", "john had her way", false, nullptr},
      {Engine::tag, "tag-gap", "baseline", "which lake did you swim in", false, nullptr},
      {Engine::tag, "tag-base", "baseline", "which lake did you swim in", false, nullptr},
      {Engine::tag, "tag-gap", "gap-ext", "which lake did you swim in", true, nullptr},
  };
  for (const auto& n : needs) {
    bool found = false;
    for (const auto& e : bundled()) {
      if (e.engine != n.e || e.grammar != n.grammar || e.config != n.config || e.sentence() != n.sentence ||
          e.accept != n.accept)
        continue;
      if (n.bindings && (!e.bindings || join(*e.bindings) != n.bindings)) continue;
      found = true;
    }
    if (!found) v.fail(std::string("corpus lacks ") + n.config + " entry for '" + n.sentence + "'");
  }
  v.detail = v.pass ? std::to_string(r.passed) + "/" + std::to_string(r.entries.size()) + " entries pass" : v.detail;
  return v;
}

// 2 ------------------------------------------------------------------------

bool is_inv(const std::string& name) { return name.rfind("b_inv/", 0) == 0; }
bool is_trace(const std::string& name) { return name == "b_vtrace"; }

/// Replays `d` without the operation that introduced instance `drop`.
std::optional<tag::DerivedTree> replay_without(const tag::TAGGrammar& g, const tag::DerivedTree& d, int drop) {
  tag::DerivedTree out = tag::start_derivation(*g.find(d.instances[0]));
  std::map<int, int> renumber{{0, 0}};
  for (const auto& op : d.ops) {
    if (op.instance == drop) continue;
    if (op.target == drop) return std::nullopt;  // something hangs off the dropped tree
    tag::Gorn site;
    if (!tag::detail::find_site(out.root, renumber.at(op.target), op.address, site)) return std::nullopt;
    const auto& t = *g.find(op.tree);
    auto r = op.op == tag::OpKind::substitute ? tag::substitute(out, tag::gorn_string(site), t)
                                              : tag::adjoin(out, tag::gorn_string(site), t);
    if (std::holds_alternative<tag::Failure>(r)) return std::nullopt;
    renumber[op.instance] = static_cast<int>(out.instances.size());
    out = std::get<tag::DerivedTree>(std::move(r));
  }
  return out;
}

Verdict pairing() {
  Verdict v;
  const auto& g = grammars().raw_tag("tag-base");
  std::size_t valid = 0, paired = 0, halves = 0;
  for (const char* s : {"did you swim", "you swim", "did john have his way", "did he shake his pretty head",
                        "did she shake her head", "you did swim", "is john swim"}) {
    auto bf = tag::brute_force_derive(g, words(s), 10);
    auto tp = tag::tag_parse(g, words(s));
    if (bf.size() != tp.size()) v.fail(std::string("parser and enumerator disagree on '") + s + "'");
    for (const auto& p : bf) {
      ++valid;
      int inv = -1, trace = -1;
      for (std::size_t i = 0; i < p.tree.instances.size(); ++i) {
        if (is_inv(p.tree.instances[i])) inv = static_cast<int>(i);
        if (is_trace(p.tree.instances[i])) trace = static_cast<int>(i);
      }
      if ((inv < 0) != (trace < 0)) v.fail(std::string("unpaired derivation for '") + s + "': " + p.ops);
      if (inv < 0) continue;
      ++paired;
      for (int drop : {inv, trace}) {
        auto half = replay_without(g, p.tree, drop);
        if (!half) {
          v.fail("could not rebuild " + p.ops + " without instance " + std::to_string(drop));
          continue;
        }
        ++halves;
        auto f = tag::finalize(*half);
        auto* bad = std::get_if<tag::Failure>(&f);
        if (!bad)
          v.fail("single inversion tree finalizes: " + tag::ops_string(*half));
        else if (bad->path != fs::Path{"displ_const"})
          v.fail("single-tree clash at <" + fs::path_string(bad->path) + ">");
      }
    }
  }
  if (paired == 0) v.fail("no inverted derivations found");
  if (v.pass)
    v.detail = std::to_string(valid) + " derivations, " + std::to_string(paired) + " paired, " +
               std::to_string(halves) + " single-tree variants clash at <displ_const>";
  return v;
}

// 3 ------------------------------------------------------------------------

Verdict algebra() {
  Verdict v;
  std::mt19937 rng(7);
  testsupport::RandomFs gen{rng};
  const int n = 1000;
  int unified = 0, failures = 0;
  auto P = [](const std::string& s) { return fs::fs_parse(s); };
  for (int i = 0; i < n; ++i) {
    auto a = gen.structure();
    auto b = gen.structure();
    auto c = gen.structure();
    auto aa = fs::fs_unify(a, P(fs::fs_print(a)));
    if (!aa || !fs::alphabetic_variant(*aa, a)) ++failures;  // idempotence
    auto ab = fs::fs_unify(a, b);
    auto ba = fs::fs_unify(b, a);
    if (ab.has_value() != ba.has_value() || (ab && !fs::alphabetic_variant(*ab, *ba))) ++failures;
    std::optional<fs::FeatureStructure> left, right;
    if (ab) left = fs::fs_unify(*ab, c);
    if (auto bc = fs::fs_unify(b, c)) right = fs::fs_unify(a, *bc);
    if (left.has_value() != right.has_value() || (left && !fs::alphabetic_variant(*left, *right))) ++failures;
    if (ab) {
      ++unified;
      if (!fs::fs_subsumes(a, *ab) || !fs::fs_subsumes(b, *ab)) ++failures;  // monotonicity
    }
    // list-free pairs against the naive oracle
    auto x = gen.structure(false);
    auto y = gen.structure(false);
    auto mine = fs::fs_unify(x, y);
    auto theirs = oracle::naive_unify(x, y);
    if (mine.has_value() != theirs.has_value() || (mine && fs::fs_print(*mine) != *theirs)) ++failures;
  }
  if (failures) v.fail(std::to_string(failures) + " law violations");
  if (unified < 100) v.fail("too few unifiable triples (" + std::to_string(unified) + ")");
  if (v.pass) v.detail = std::to_string(n) + " triples, " + std::to_string(unified) + " unifiable, 0 violations";
  return v;
}

// 4 ------------------------------------------------------------------------

Verdict oracles() {
  Verdict v;
  std::size_t checked = 0;
  for (const auto& e : bundled()) {
    if (e.tokens.size() > 8) continue;
    std::set<std::string> mine, theirs;
    if (e.engine == Engine::ug) {
      const auto& g = grammars().ug(e.grammar);
      auto c = *ug::ChannelConfig::by_name(e.config);
      for (const auto& p : ug::ug_parse(g, e.tokens, c)) mine.insert(p.derivation);
      theirs = oracle::ug_enumerate(g, e.tokens, c, 12);
    } else {
      auto c = *tag::config_from_name(e.config);
      const auto& g = grammars().tag(e.grammar, c);
      for (const auto& p : tag::tag_parse(g, e.tokens, c)) mine.insert(p.key);
      for (const auto& p : tag::brute_force_derive(g, e.tokens, 10)) theirs.insert(p.key);
    }
    ++checked;
    if (mine != theirs) v.fail(e.id + ": " + std::to_string(mine.size()) + " vs " + std::to_string(theirs.size()));
  }
  if (v.pass) v.detail = std::to_string(checked) + " sentences of <= 8 tokens, parse sets equal";
  return v;
}

// 5 ------------------------------------------------------------------------

/// Sentences the ug-base fragment accepts, built from fixed frames.
std::vector<std::string> random_sentences(std::size_t n, std::mt19937& rng) {
  auto any = [&](const std::vector<std::string>& xs) {
    return xs[std::uniform_int_distribution<std::size_t>(0, xs.size() - 1)(rng)];
  };
  const std::vector<std::string> subj = {"you", "he", "she", "they", "john", "mary", "men", "we"};
  const std::vector<std::string> sg_human = {"he", "she", "john", "mary"}, pl_human = {"men", "we", "they", "you"};
  const std::vector<std::string> place = {"lake", "river"}, tough = {"hard", "fun", "most hard", "most fun"};
  std::vector<std::string> out;
  while (out.size() < n) {
    std::string s;
    bool sg = rng() % 2;
    switch (rng() % 7) {
      case 0: s = "which " + any(place) + " did " + any(subj) + " swim in"; break;
      case 1: s = "did " + any(subj) + " swim in the " + any(place); break;
      case 2:
        s = "which " + any({"violin", "violins"}) + (sg ? " is this sonata " : " are these sonatas ") + any(tough) +
            " to play on";
        break;
      case 3:
        s = "which " + any({"article", "articles"}) + (sg ? " is " + any(sg_human) : " are " + any(pl_human)) + " " +
            any(tough) + " to shop with for";
        break;
      case 4: s = (sg ? "this sonata is " : "these sonatas are ") + any(tough) + " to play"; break;
      case 5: s = any(subj) + " swam in " + any({"the", "a"}) + " " + any(place); break;
      default: s = "which " + any(place) + " did " + any(subj) + " swim in with " + any(subj); break;
    }
    out.push_back(s);
  }
  return out;
}

Verdict ncd() {
  Verdict v;
  const auto merged = ug::ChannelConfig::merged();
  const auto chan = ug::ChannelConfig::channelized();
  std::size_t merged_parses = 0, chan_parses = 0, crossing = 0;
  auto check = [&](const ug::UGGrammar& g, const std::vector<std::string>& toks, const std::string& label,
                   bool corpus_four) {
    for (const auto& p : ug::ug_parse(g, toks, merged)) {
      ++merged_parses;
      if (!ug::check_ncd(p.bindings, merged).pass) v.fail("merged crossing in '" + label + "'");
    }
    for (const auto& p : ug::ug_parse(g, toks, chan)) {
      ++chan_parses;
      if (!ug::check_ncd(p.bindings, chan).pass) v.fail("same-channel crossing in '" + label + "'");
      if (corpus_four && !ug::check_ncd(p.bindings, merged).pass) ++crossing;
    }
  };
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& e : bundled()) {
    if (e.engine != Engine::ug || !seen.insert({e.grammar, e.sentence()}).second) continue;
    check(grammars().ug(e.grammar), e.tokens, e.sentence(), e.sentence() == "which articles are men most fun to shop for with");
  }
  std::mt19937 rng(50);
  std::size_t generated = 0;
  for (const auto& s : random_sentences(50, rng)) {
    auto toks = words(s);
    if (ug::ug_parse(grammars().ug("ug-base"), toks, merged).empty()) v.fail("generated sentence rejected: " + s);
    check(grammars().ug("ug-base"), toks, s, false);
    ++generated;
  }
  if (crossing == 0) v.fail("no cross-channel crossing parse for the shop for/with sentence");
  if (v.pass)
    v.detail = std::to_string(merged_parses) + " merged and " + std::to_string(chan_parses) + " channelized parses (" +
               std::to_string(generated) + " generated sentences) nested; " + std::to_string(crossing) +
               " cross-channel crossings";
  return v;
}

// 6 ------------------------------------------------------------------------

Verdict determinism() {
  Verdict v;
  const auto& a = first_run();
  auto b = run_corpus(bundled());  // fresh grammar cache
  for (const char* f : {"text", "records"})
    if (export_report(a, f, false) != export_report(b, f, false)) v.fail(std::string(f) + " reports differ");
  if (v.pass) v.detail = "two runs, text and records reports identical without timing";
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    int n;
    const char* name;
    Verdict (*run)();
  };
  const Criterion all[] = {{1, "judgment corpus", judgments},   {2, "inversion pairing", pairing},
                           {3, "unification algebra", algebra}, {4, "oracle equivalence", oracles},
                           {5, "no crossing dependencies", ncd}, {6, "determinism", determinism}};
  int failed = 0;
  for (const auto& c : all) {
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << ' ' << c.n << ' ' << c.name << ": " << v.detail << std::endl;
  }
  return failed ? 1 : 0;
}
