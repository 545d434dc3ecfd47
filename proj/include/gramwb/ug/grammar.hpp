#pragma once

// Unification-grammar data: lexicon, context-free backbone rules with
// feature constraints, subcat schemas and gap-threading declarations.

#include <array>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "gramwb/channel.hpp"
#include "gramwb/fs_text.hpp"

namespace gramwb::ug {

using fs::FeatureStructure;

using gramwb::Channel;
using gramwb::channel_from_name;
using gramwb::channel_name;
using gramwb::kAllChannels;
using gramwb::kChannels;

/// Maps logical channels onto physical gap lists.
struct ChannelConfig {
  std::string name;
  std::array<std::size_t, kChannels> list_of{};

  std::size_t list(Channel c) const { return list_of[static_cast<std::size_t>(c)]; }

  /// wh and tough share one list; verb movement is always separate.
  static ChannelConfig merged() { return {"merged", {0, 1, 1, 3}}; }
  static ChannelConfig channelized() { return {"channelized", {0, 1, 2, 3}}; }

  static std::optional<ChannelConfig> by_name(std::string_view n) {
    if (n == "merged") return merged();
    if (n == "channelized") return channelized();
    return std::nullopt;
  }
};

/// A displaced constituent waiting for its trace.
struct GapSpec {
  Channel channel = Channel::wh;
  Symbol filler_cat;
  FeatureStructure filler_fs;
  std::string index;  // filler span "i-j"
};

struct FillerIntro {
  Channel channel;
  std::size_t from;  // daughter supplying the filler
  std::size_t onto;  // daughter whose gapsIn receives it
};

/// Rule FS layout: `[m:Mother, d0:..., d1:..., ...]`. For schema rules the
/// complements are read from `subcat` of the daughter just before the
/// COMPS marker and are parsed in its place.
struct UGRule {
  std::string name;
  FeatureStructure fs;
  std::size_t arity = 0;  // explicit daughters
  std::optional<std::size_t> comps_at;  // position of COMPS among the daughters
  std::vector<FillerIntro> fillers;

  bool schema() const { return comps_at.has_value(); }
  std::size_t head() const { return *comps_at - 1; }

  Symbol mother_cat() const { return fs::fs_get(fs, {"m", "cat"})->atom_symbol(); }
  Symbol daughter_cat(std::size_t i) const {
    auto c = fs::fs_get(fs, {"d" + std::to_string(i), "cat"});
    return c && c->is_atom() ? c->atom_symbol() : Symbol();
  }
};

struct UGLexEntry {
  Symbol word;
  FeatureStructure fs;  // includes cat; verbs carry subcat

  Symbol cat() const { return fs::fs_get(fs, {"cat"})->atom_symbol(); }
};

struct TraceDecl {
  Symbol cat;
  std::vector<Channel> channels;
};

/// Head-feature percolation through NP-building rules.
struct Percolation {
  std::string feature;
  std::vector<Symbol> over;  // mother categories
  std::vector<Symbol> from;  // first matching daughter supplies the value
};

/// Light-verb / idiom entry: verb form + pinned object noun.
struct IdiomSpec {
  Symbol verb;
  Symbol lex;
};

struct UGGrammar {
  std::string name;
  Symbol start{"S"};
  std::vector<UGRule> rules;
  std::vector<UGLexEntry> lexicon;
  std::vector<TraceDecl> traces;
  std::set<std::string> features;
  std::set<std::string> sorts;
  std::vector<Channel> channels;
  std::vector<Percolation> percolations;
  std::vector<IdiomSpec> idioms;
  bool percolation_enabled = false;

  std::vector<const UGLexEntry*> entries(Symbol word) const {
    std::vector<const UGLexEntry*> out;
    for (const auto& e : lexicon)
      if (e.word == word) out.push_back(&e);
    return out;
  }
  bool knows(Symbol word) const {
    for (const auto& e : lexicon)
      if (e.word == word) return true;
    return false;
  }
  bool traceable(Symbol cat) const {
    for (const auto& t : traces)
      if (t.cat == cat) return true;
    return false;
  }
};

using gramwb::UnknownToken;

}  // namespace gramwb::ug
