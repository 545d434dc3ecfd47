#include <gtest/gtest.h>

#include <random>

#include "gramwb/fs_text.hpp"
#include "oracle/naive_unify.hpp"
#include "random_fs.hpp"

using namespace gramwb::fs;

namespace {

FeatureStructure P(std::string_view t) { return fs_parse(t); }

std::string U(std::string_view a, std::string_view b) {
  auto r = fs_unify(P(a), P(b));
  return r ? fs_print(*r) : "FAIL";
}

}  // namespace

TEST(Unify, TopIsIdentity) {
  EXPECT_EQ(U("[]", "[agr:[num:sg]]"), "[agr:[num:sg]]");
  EXPECT_EQ(U("[agr:[num:sg]]", "[]"), "[agr:[num:sg]]");
  EXPECT_EQ(U("[]", "sg"), "sg");
}

TEST(Unify, AtomClashReportsPath) {
  auto r = fs_unify_explain(P("[num:sg]"), P("[num:pl]"));
  ASSERT_TRUE(std::holds_alternative<Clash>(r));
  EXPECT_EQ(path_string(std::get<Clash>(r).path), "num");

  auto deep = fs_unify_explain(P("[agr:[num:sg]]"), P("[agr:[num:pl]]"));
  EXPECT_EQ(path_string(std::get<Clash>(deep).path), "agr.num");
}

TEST(Unify, ReentrancyExample) {
  // Expected value computed by the naive oracle before the workspace unifier.
  auto a = P("[a:#1[x:p], b:#1]");
  auto b = P("[b:[y:q]]");
  auto expected = oracle::naive_unify(a, b);
  ASSERT_TRUE(expected);
  EXPECT_EQ(*expected, "[a:#1[x:p, y:q], b:#1]");

  auto u = fs_unify(a, b);
  ASSERT_TRUE(u);
  EXPECT_EQ(fs_print(*u), "[a:#1[x:p, y:q], b:#1]");
  EXPECT_EQ(fs_get(*u, {"a", "y"})->atom_name(), "q");
  EXPECT_TRUE(fs_get(*u, {"a"})->same_node(*fs_get(*u, {"b"})));
}

TEST(Unify, OccursCheckFails) {
  EXPECT_EQ(U("[f:?x, g:?x]", "[f:[h:?y], g:?y]"), "FAIL");
  auto r = fs_unify_explain(P("[f:?x, g:?x]"), P("[f:[h:?y], g:?y]"));
  EXPECT_TRUE(std::get<Clash>(r).cyclic);
}

TEST(Unify, InputsNotMutated) {
  auto a = P("[a:?x]");
  auto b = P("[a:sg]");
  std::string before = fs_print(a);
  ASSERT_TRUE(fs_unify(a, b));
  EXPECT_EQ(fs_print(a), before);
}

TEST(Unify, SharedGraphKeepsVariableIdentity) {
  auto whole = P("[top:[agr:?a], bot:[agr:?a]]");
  auto top = *fs_get(whole, {"top"});
  auto bot = *fs_get(whole, {"bot"});
  auto u = fs_unify(top, P("[agr:sg]"));
  ASSERT_TRUE(u);
  auto both = fs_unify_paths(whole, {"top", "agr"}, {"bot", "agr"});
  ASSERT_TRUE(both);
  EXPECT_TRUE(fs_unify(top, bot));
}

TEST(Lists, ClosedLengthMismatchFails) {
  EXPECT_EQ(U("<a, b>", "<a>"), "FAIL");
  EXPECT_EQ(U("<a>", "<a>"), "<a>");
  EXPECT_EQ(U("<>", "<>"), "<>");
  EXPECT_EQ(U("<>", "<a>"), "FAIL");
}

TEST(Lists, OpenTailBindsRemainder) {
  EXPECT_EQ(U("[l:<a|?t>, r:?t]", "[l:<a, b, c>]"), "[l:<a, b, c>, r:<b, c>]");
  EXPECT_EQ(U("[l:<?x|?t>, r:?t]", "[l:<a>]"), "[l:<a>, r:<>]");
  EXPECT_EQ(U("<a|?t>", "<?x, b|?u>"), "<a, b|?1>");
  EXPECT_EQ(U("<a|?t>", "<b|?u>"), "FAIL");
}

TEST(Lists, CyclicTailTerminates) {
  // a list equated with its own tail: unification must stop, extract refuses it
  Workspace ws;
  int t = ws.new_var();
  int l = ws.new_list({ws.new_atom(gramwb::Symbol("a"))}, t);
  EXPECT_TRUE(ws.unify(t, l));
  int u = ws.new_var();
  int m = ws.new_list({ws.new_atom(gramwb::Symbol("a"))}, u);
  EXPECT_TRUE(ws.unify(m, u));
  EXPECT_TRUE(ws.unify(l, m));
  EXPECT_FALSE(ws.unify(l, ws.new_list({ws.new_atom(gramwb::Symbol("a"))})));
  EXPECT_FALSE(ws.extract(l));
}

TEST(Get, PathsAndAbsence) {
  auto fs = P("[agr:[num:sg]]");
  EXPECT_EQ(fs_get(fs, {"agr", "num"})->atom_name(), "sg");
  EXPECT_FALSE(fs_get(fs, {"case"}));
  EXPECT_EQ(fs_get(P("[l:<a, b>]"), {"l", "1"})->atom_name(), "b");
}

TEST(Subsumes, Basics) {
  EXPECT_TRUE(fs_subsumes(P("[]"), P("[a:b]")));
  EXPECT_TRUE(fs_subsumes(P("[]"), P("sg")));
  EXPECT_FALSE(fs_subsumes(P("[num:sg]"), P("[num:pl]")));
  EXPECT_TRUE(fs_subsumes(P("[a:?x, b:?y]"), P("[a:#1[], b:#1]")));
  EXPECT_FALSE(fs_subsumes(P("[a:#1[], b:#1]"), P("[a:[], b:[]]")));
  EXPECT_TRUE(fs_subsumes(P("<a|?t>"), P("<a, b>")));
  EXPECT_FALSE(fs_subsumes(P("<a, b>"), P("<a|?t>")));
}

TEST(Text, ParseAndPrint) {
  auto fs = P("[num:sg]");
  EXPECT_TRUE(fs.is_avm());
  EXPECT_EQ(fs.feature_count(), 1u);
  EXPECT_EQ(fs_print(P("  [ b : x ,a:<?v , c | ?t> ] ")), "[a:<?1, c|?2>, b:x]");
  auto shared = P("[a:#1 [x:p], b:#1]");
  EXPECT_TRUE(fs_get(shared, {"a"})->same_node(*fs_get(shared, {"b"})));
  auto use_before_def = P("[b:#1, a:#1[x:p]]");
  EXPECT_EQ(fs_print(use_before_def), "[a:#1[x:p], b:#1]");
}

TEST(Text, SyntaxErrorsCarryPosition) {
  try {
    P("[num:sg");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 7u);
  }
  EXPECT_THROW(P("[a:b, a:c]"), ParseError);
  EXPECT_THROW(P("<a|b>"), ParseError);
  EXPECT_THROW(P("#1[a:#1]"), ParseError);
  EXPECT_THROW(P("[a:b] x"), ParseError);
}

// --------------------------------------------------------------------------
// Properties over random structures.

class Algebra : public ::testing::Test {
protected:
  std::mt19937 rng{20261018};
  testsupport::RandomFs gen{rng};
};

TEST_F(Algebra, RoundTripIsVariant) {
  for (int i = 0; i < 1000; ++i) {
    auto fs = gen.structure();
    auto again = P(fs_print(fs));
    EXPECT_TRUE(alphabetic_variant(fs, again)) << fs_print(fs);
  }
}

TEST_F(Algebra, AgreesWithNaiveOracleOnAvms) {
  int successes = 0;
  for (int i = 0; i < 1000; ++i) {
    auto a = gen.structure(false);
    auto b = gen.structure(false);
    auto mine = fs_unify(a, b);
    auto theirs = oracle::naive_unify(a, b);
    ASSERT_EQ(mine.has_value(), theirs.has_value()) << fs_print(a) << " | " << fs_print(b);
    if (mine) {
      ++successes;
      EXPECT_EQ(fs_print(*mine), *theirs);
    }
  }
  EXPECT_GT(successes, 100);
}

TEST_F(Algebra, LatticeLaws) {
  int failures = 0, unified = 0;
  for (int i = 0; i < 1000; ++i) {
    auto a = gen.structure();
    auto b = gen.structure();
    auto c = gen.structure();

    auto aa = fs_unify(a, P(fs_print(a)));
    if (!aa || !alphabetic_variant(*aa, a)) ++failures;

    auto ab = fs_unify(a, b);
    auto ba = fs_unify(b, a);
    if (ab.has_value() != ba.has_value() || (ab && !alphabetic_variant(*ab, *ba))) ++failures;

    std::optional<FeatureStructure> left, right;
    if (ab) left = fs_unify(*ab, c);
    if (auto bc = fs_unify(b, c)) right = fs_unify(a, *bc);
    if (left.has_value() != right.has_value() || (left && !alphabetic_variant(*left, *right)))
      ++failures;

    if (ab) {
      ++unified;
      if (!fs_subsumes(a, *ab) || !fs_subsumes(b, *ab)) ++failures;
    }
  }
  EXPECT_EQ(failures, 0);
  EXPECT_GT(unified, 100);
}
