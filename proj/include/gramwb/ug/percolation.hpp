#pragma once

// Possessive head features on NP, and idiom verb entries that use them.

#include "gramwb/ug/grammar.hpp"

namespace gramwb::ug {

inline std::vector<Percolation> default_percolations() {
  return {{"poss", {Symbol("NP")}, {Symbol("D")}},
          {"poss_agr", {Symbol("NP")}, {Symbol("D")}},
          {"lex", {Symbol("NP")}, {Symbol("N")}}};
}

inline std::vector<IdiomSpec> default_idioms() {
  std::vector<IdiomSpec> out;
  for (auto [v, n] : {std::pair{"had", "way"}, {"have", "way"}, {"shook", "head"}, {"shake", "head"},
                      {"shrugged", "shoulders"}, {"closed", "eyes"}, {"took", "time"}})
    out.push_back({Symbol(v), Symbol(n)});
  return out;
}

namespace detail {

inline bool plain_transitive(const UGLexEntry& e) {
  auto sc = fs::fs_get(e.fs, {"subcat"});
  if (!sc || !sc->is_list() || sc->list_size() != 1) return false;
  auto obj = sc->element(0);
  auto cat = obj.feature("cat");
  return cat && cat->is_atom() && cat->atom_name() == "NP" && !obj.feature("lex");
}

}  // namespace detail

/// Threads poss/poss_agr/lex from D and N up to NP, and replaces the plain
/// transitive entries of idiom verbs with entries whose object must be a
/// possessive NP agreeing with the subject and headed by the pinned noun.
/// Idempotent.
inline UGGrammar enable_possessive_percolation(UGGrammar g) {
  if (g.percolations.empty()) g.percolations = default_percolations();
  if (g.idioms.empty()) g.idioms = default_idioms();

  for (auto& rule : g.rules) {
    for (const auto& p : g.percolations) {
      Symbol m = rule.mother_cat();
      if (std::find(p.over.begin(), p.over.end(), m) == p.over.end()) continue;
      for (std::size_t i = 0; i < rule.arity; ++i) {
        if (std::find(p.from.begin(), p.from.end(), rule.daughter_cat(i)) == p.from.end()) continue;
        if (auto fs = fs::fs_unify_paths(rule.fs, {"m", p.feature}, {"d" + std::to_string(i), p.feature}))
          rule.fs = *fs;
        break;
      }
    }
  }

  for (const auto& idiom : g.idioms) {
    auto templ = fs::fs_parse("[subj:[agr:#a], subcat:<[cat:NP, poss:+, poss_agr:#a, lex:" + idiom.lex.str() + "]>]");
    std::vector<UGLexEntry> added;
    for (auto it = g.lexicon.begin(); it != g.lexicon.end();) {
      if (it->word != idiom.verb || !detail::plain_transitive(*it)) {
        ++it;
        continue;
      }
      if (auto fs = fs::fs_unify(it->fs, templ)) added.push_back({it->word, *fs});
      it = g.lexicon.erase(it);
    }
    for (auto& e : added) g.lexicon.push_back(std::move(e));
  }
  g.percolation_enabled = true;
  return g;
}

}  // namespace gramwb::ug
