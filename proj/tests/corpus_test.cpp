#include <gtest/gtest.h>

#include <regex>

#include "gramwb/corpus.hpp"
#include "gramwb/tag/brute_force.hpp"
#include "oracle/ug_enumerator.hpp"

using namespace gramwb;
using namespace gramwb::corpus;

namespace {

const Corpus& bundled() {
  static const Corpus c = read_corpus(bundled_corpus());
  return c;
}

GrammarSet& grammars() {
  static GrammarSet gs;
  return gs;
}

const RunReport& bundled_run() {
  static const RunReport r = run_corpus(bundled(), grammars());
  return r;
}

std::string strip_ms(const std::string& s) { return std::regex_replace(s, std::regex(R"(\d+\.\d+\n)"), "\n"); }

}  // namespace

TEST(CorpusFile, ParsesAndCovers) {
  const auto& c = bundled();
  EXPECT_GE(c.size(), 16u);
  std::set<std::string> ids, phen;
  for (const auto& e : c) {
    EXPECT_TRUE(ids.insert(e.id).second) << e.id;
    phen.insert(e.phenomenon());
    if (e.bindings) {
      EXPECT_TRUE(e.accept);
    }
  }
  for (const char* p : {"wh-adjunct", "ncd", "idiom", "inversion"}) EXPECT_TRUE(phen.count(p)) << p;
  const auto& first = c.front();
  EXPECT_EQ(first.id, "wh-adjunct/1-ug");
  EXPECT_EQ(first.tokens.size(), 6u);
  EXPECT_EQ(*first.bindings, (std::set<std::string>{"0-2>6", "2-3>4"}));
}

TEST(CorpusFile, RejectsMalformedRows) {
  EXPECT_THROW(read_corpus_text("a | ug | ug-base | merged | accept | you swim | "), CorpusError);
  EXPECT_THROW(read_corpus_text("a | lfg | ug-base | merged | accept | you swim | | x"), CorpusError);
  EXPECT_THROW(read_corpus_text("a | ug | ug-base | gap-ext | accept | you swim | | x"), CorpusError);
  EXPECT_THROW(read_corpus_text("a | tag | tag-base | merged | accept | you swim | | x"), CorpusError);
  EXPECT_THROW(read_corpus_text("a | ug | ug-base | merged | maybe | you swim | | x"), CorpusError);
  EXPECT_THROW(read_corpus_text("a | ug | ug-base | merged | reject | you swim | 0-1>2 | x"), CorpusError);
  EXPECT_THROW(read_corpus_text("a | ug | ug-base | merged | accept |  | | x"), CorpusError);
  EXPECT_THROW(read_corpus(bundled_corpus().parent_path() / "nothing.corpus"), CorpusError);
  EXPECT_TRUE(read_corpus_text("# only a comment\n\n").empty());
}

TEST(Run, BundledCorpusAllPass) {
  const auto& r = bundled_run();
  EXPECT_EQ(r.entries.size(), bundled().size());
  EXPECT_EQ(r.passed + r.failed, r.entries.size());
  for (const auto& o : r.entries) EXPECT_TRUE(o.passed) << o.id << " parses=" << o.parses << " " << o.error;
  auto one = std::find_if(r.entries.begin(), r.entries.end(), [](const auto& o) { return o.id == "wh-adjunct/1-ug"; });
  ASSERT_NE(one, r.entries.end());
  EXPECT_EQ(one->bindings, "0-2>6 2-3>4");
  EXPECT_TRUE(std::is_sorted(r.entries.begin(), r.entries.end(), [](const auto& a, const auto& b) { return a.id < b.id; }));
}

TEST(Run, EmptyCorpus) {
  auto r = run_corpus({});
  EXPECT_TRUE(r.entries.empty());
  EXPECT_EQ(r.passed, 0u);
  EXPECT_EQ(r.failed, 0u);
  EXPECT_EQ(export_report(r, "text"), "id  eng  grammar   config       expect  result  parses bindings  ms\n");
  EXPECT_EQ(export_report(r, "records"), "id\toutcome\tparses\tbindings\tms\n");
}

TEST(Run, EngineFilterAndFailures) {
  auto c = read_corpus_text(
      "x/1 | ug | ug-base | merged | reject | you swim | | inverted on purpose\n"
      "x/2 | tag | tag-base | baseline | accept | you swim | | fine\n"
      "x/3 | ug | ug-base | merged | accept | which lake did you swim in | 0-2>4 | wrong gap\n"
      "x/4 | ug | ug-base | merged | accept | you flew | | not in the lexicon\n");
  auto r = run_corpus(c, grammars());
  ASSERT_EQ(r.entries.size(), 4u);
  EXPECT_FALSE(r.entries[0].passed);
  EXPECT_EQ(r.entries[0].parses, 1u);
  EXPECT_TRUE(r.entries[1].passed);
  EXPECT_FALSE(r.entries[2].passed);
  EXPECT_EQ(r.entries[2].parses, 1u);
  EXPECT_FALSE(r.entries[3].passed);
  EXPECT_NE(r.entries[3].error.find("flew"), std::string::npos);
  EXPECT_EQ(r.failed, 3u);
  auto only_tag = run_corpus(c, grammars(), {{Engine::tag}});
  ASSERT_EQ(only_tag.entries.size(), 1u);
  EXPECT_EQ(only_tag.entries[0].id, "x/2");
  auto text = export_report(r, "text");
  EXPECT_NE(text.find("x/1  ug   ug-base   merged       reject  FAIL"), std::string::npos) << text;
  EXPECT_NE(text.find("total 4  pass 1  fail 3"), std::string::npos);
}

TEST(Run, MissingGrammar) {
  auto c = read_corpus_text("x/1 | ug | ug-nowhere | merged | accept | you swim | | x\n");
  EXPECT_THROW(run_corpus(c), dsl::MissingGrammar);
}

TEST(Report, DeterministicModuloTiming) {
  const auto& a = bundled_run();
  auto b = run_corpus(bundled());  // fresh grammar cache
  for (const char* f : {"text", "records"}) {
    EXPECT_EQ(export_report(a, f, false), export_report(b, f, false)) << f;
    EXPECT_EQ(strip_ms(export_report(a, f)), strip_ms(export_report(b, f))) << f;
  }
  auto rec = export_report(a, "records", false);
  EXPECT_EQ(std::count(rec.begin(), rec.end(), '\n'), static_cast<long>(a.entries.size() + 1));
  EXPECT_NE(rec.find("ncd/4-chan\tpass\t3\t0-2>9 2-3>4 3-4>10\n"), std::string::npos) << rec;
  EXPECT_THROW(export_report(a, "xml"), UnknownFormat);
}

TEST(Diff, AdjunctExtractionNeedsThreading) {
  auto d = diff_engines(grammars(), dsl::split_ws("which lake did you swim in"), {Engine::tag, "tag-gap", "baseline"},
                        {Engine::tag, "tag-gap", "gap-ext"});
  EXPECT_EQ(d.left.parses, 0u);
  EXPECT_GE(d.right.parses, 1u);
  EXPECT_TRUE(d.delta());
}

TEST(Diff, NoFillersNoDelta) {
  auto toks = dsl::split_ws("you swim");
  for (auto [a, b] : std::vector<std::pair<Target, Target>>{
           {{Engine::ug, "ug-base", "merged"}, {Engine::ug, "ug-base", "channelized"}},
           {{Engine::tag, "tag-base", "baseline"}, {Engine::tag, "tag-base", "gap-ext"}},
           {{Engine::ug, "ug-base", "merged"}, {Engine::tag, "tag-base", "baseline"}}}) {
    auto d = diff_engines(grammars(), toks, a, b);
    EXPECT_EQ(d.left.parses, 1u);
    EXPECT_EQ(d.right.parses, 1u);
    EXPECT_FALSE(d.delta());
    EXPECT_EQ(d.binding_sets(d.left), std::set<std::string>{"{}"});
  }
}

TEST(Diff, IdiomVersusLiteralHave) {
  auto toks = dsl::split_ws("john had her way");
  auto d = diff_engines(grammars(), toks, {Engine::ug, "ug-poss", "merged"}, {Engine::ug, "ug-base", "merged"});
  // counts come from the independent enumerator on each fragment
  auto& gs = grammars();
  EXPECT_EQ(d.left.parses, oracle::ug_enumerate(gs.ug("ug-poss"), toks, ug::ChannelConfig::merged()).size());
  EXPECT_EQ(d.right.parses, oracle::ug_enumerate(gs.ug("ug-base"), toks, ug::ChannelConfig::merged()).size());
  EXPECT_EQ(d.left.parses, 0u);
  EXPECT_EQ(d.right.parses, 1u);
  EXPECT_TRUE(d.delta());
}

TEST(Oracle, ShortCorpusSentencesMatchEnumerators) {
  auto& gs = grammars();
  std::size_t checked = 0;
  for (const auto& e : bundled()) {
    if (e.tokens.size() > 8) continue;
    ++checked;
    std::set<std::string> mine, theirs;
    if (e.engine == Engine::ug) {
      const auto& g = gs.ug(e.grammar);
      auto c = *ug::ChannelConfig::by_name(e.config);
      for (const auto& p : ug::ug_parse(g, e.tokens, c)) mine.insert(p.derivation);
      theirs = oracle::ug_enumerate(g, e.tokens, c, 12);
    } else {
      auto c = *tag::config_from_name(e.config);
      const auto& g = gs.tag(e.grammar, c);
      for (const auto& p : tag::tag_parse(g, e.tokens, c)) mine.insert(p.key);
      for (const auto& p : tag::brute_force_derive(g, e.tokens, 10)) theirs.insert(p.key);
    }
    EXPECT_EQ(mine, theirs) << e.id;
  }
  EXPECT_GE(checked, 16u);
}
