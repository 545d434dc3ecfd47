#pragma once

// Top-down, left-to-right unification parser with memoised goals.
//
// Gap lists are threaded positionally: gapsIn of the first daughter is the
// mother's gapsIn, each daughter's gapsOut feeds the next, and the last
// daughter's gapsOut is the mother's. Because threading runs left to right
// from a closed root, every list is fully known when a daughter is
// predicted, so a trace is proposed only against a non-empty list.

#include <unordered_map>
#include <unordered_set>

#include "gramwb/ug/parse_tree.hpp"

namespace gramwb::ug {

// --------------------------------------------------------------------------
// Traces

struct TraceProposal {
  FeatureStructure fs;  // slot unified with the filler
  GapSpec filler;
  std::vector<GapSpec> gaps_out;
};

/// Pops the front of `gaps_in` into an empty constituent at `slot`, if the
/// front filler unifies with the slot. No trace on an empty list.
inline std::optional<TraceProposal> propose_trace(const std::vector<GapSpec>& gaps_in,
                                                  const FeatureStructure& slot) {
  if (gaps_in.empty()) return std::nullopt;
  const GapSpec& front = gaps_in.front();
  auto fs = fs::fs_unify(slot, front.filler_fs);
  if (!fs) return std::nullopt;
  return TraceProposal{*fs, front, std::vector<GapSpec>(gaps_in.begin() + 1, gaps_in.end())};
}

// --------------------------------------------------------------------------
// Subcat schemas

/// Concrete rule for one head: the schema's COMPS splice replaced by the
/// entry's subcat list.
inline UGRule expand_subcat_schema(const UGRule& schema, const UGLexEntry& entry) {
  if (!schema.schema()) throw std::invalid_argument("rule '" + schema.name + "' is not a schema");
  std::size_t head = schema.head();
  fs::Workspace ws;
  int r = ws.import(schema.fs);
  int e = ws.import(entry.fs);
  if (!ws.unify(*ws.locate(r, {"d" + std::to_string(head)}, true), e))
    throw std::invalid_argument("entry '" + entry.word.str() + "' does not fit schema '" + schema.name + "'");
  auto subcat = ws.locate(r, {"d" + std::to_string(head), "subcat"});
  if (!subcat || ws.kind(*subcat) != fs::Kind::List)
    throw std::invalid_argument("entry '" + entry.word.str() + "' has no subcat list");
  auto [comps, tail] = ws.list_items(*subcat);
  if (tail >= 0) throw std::invalid_argument("open subcat list on '" + entry.word.str() + "'");

  // Rebuild [m, d0..] with the complements in place.
  int out = ws.new_avm();
  ws.unify(*ws.locate(out, {"m"}, true), *ws.locate(r, {"m"}));
  std::size_t k = 0;
  auto place = [&](int node) { ws.unify(*ws.locate(out, {"d" + std::to_string(k++)}, true), node); };
  for (std::size_t i = 0; i <= head; ++i) place(*ws.locate(r, {"d" + std::to_string(i)}));
  for (int c : comps) place(c);
  for (std::size_t i = head + 1; i < schema.arity; ++i) place(*ws.locate(r, {"d" + std::to_string(i)}));

  UGRule rule;
  rule.name = schema.name + "/" + entry.word.str();
  rule.fs = *ws.extract(out);
  rule.arity = k;
  for (auto f : schema.fillers) {
    if (f.from > head) f.from += comps.size();
    if (f.onto > head) f.onto += comps.size();
    rule.fillers.push_back(f);
  }
  return rule;
}

/// The smallest schema whose head category matches the entry.
inline UGRule expand_subcat_schema(const UGGrammar& g, const UGLexEntry& entry) {
  const UGRule* best = nullptr;
  for (const auto& r : g.rules)
    if (r.schema() && r.daughter_cat(r.head()) == entry.cat() && (!best || r.arity < best->arity)) best = &r;
  if (!best) throw std::invalid_argument("no schema for category " + entry.cat().str());
  return expand_subcat_schema(*best, entry);
}

// --------------------------------------------------------------------------
// Parser

struct ParseOptions {
  std::size_t max_depth = 64;  // guard against grammars with unary cycles
};

class Parser {
public:
  Parser(const UGGrammar& grammar, ChannelConfig config, std::vector<std::string> tokens,
         ParseOptions options = {})
      : g_(grammar), config_(std::move(config)), words_(std::move(tokens)), opts_(options) {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      Symbol w(words_[i]);
      if (!g_.knows(w)) throw UnknownToken(words_[i], i);
      tokens_.push_back(w);
    }
  }

  std::vector<UGParse> run() {
    FeatureStructure goal = fs::fs_embed({"cat"}, FeatureStructure::atom(g_.start.str()));
    std::map<std::string, UGParse> unique;
    for (const auto& r : solve(goal, 0, GapLists{}, 0)) {
      if (r.end != tokens_.size()) continue;
      bool closed = true;
      for (const auto& l : r.gaps) closed = closed && l.empty();
      if (!closed) continue;
      auto p = make_parse(r.tree);
      unique.emplace(p.derivation, std::move(p));
    }
    std::vector<UGParse> out;
    for (auto& [k, p] : unique) out.push_back(std::move(p));
    return out;
  }

private:
  struct Result {
    FeatureStructure fs;
    std::size_t end;
    GapLists gaps;
    std::shared_ptr<const ParseTree> tree;
  };

  struct Slot {
    fs::Path path;
    std::vector<GapSpec> pushes;  // prepended to gapsIn, must be discharged inside
  };

  static std::string gaps_key(const GapLists& gaps) {
    std::string key;
    for (const auto& l : gaps) {
      key += '{';
      for (const auto& g : l) key += g.index + ":" + fs::fs_print(g.filler_fs) + ";";
      key += '}';
    }
    return key;
  }

  Symbol cat_of(const FeatureStructure& fs) const {
    auto c = fs::fs_get(fs, {"cat"});
    return c && c->is_atom() ? c->atom_symbol() : Symbol();
  }

  FeatureStructure stamp(const FeatureStructure& fs, std::size_t from, std::size_t to) const {
    if (!g_.traceable(cat_of(fs)) || fs::fs_get(fs, {"span"})) return fs;
    auto span = fs::fs_embed({"span"}, FeatureStructure::atom(std::to_string(from) + "-" + std::to_string(to)));
    auto out = fs::fs_unify(fs, span);
    return out ? *out : fs;
  }

  const std::vector<Result>& solve(const FeatureStructure& goal, std::size_t pos, const GapLists& gaps,
                                   std::size_t depth) {
    std::string key = fs::fs_print(goal) + "@" + std::to_string(pos) + gaps_key(gaps);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    static const std::vector<Result> none;
    if (depth > opts_.max_depth || active_.count(key)) return none;
    active_.insert(key);

    std::vector<Result> out;
    Symbol cat = cat_of(goal);

    if (pos < tokens_.size()) {
      for (const auto* e : g_.entries(tokens_[pos])) {
        auto fs = fs::fs_unify(goal, e->fs);
        if (!fs) continue;
        auto leaf = std::make_shared<ParseTree>();
        leaf->label = e->cat();
        leaf->word = words_[pos];
        leaf->start = pos;
        leaf->end = pos + 1;
        leaf->fs = stamp(*fs, pos, pos + 1);
        leaf->gaps_in = leaf->gaps_out = gaps;
        out.push_back(Result{leaf->fs, pos + 1, gaps, leaf});
      }
    }

    for (const auto& t : g_.traces) {
      if (t.cat != cat) continue;
      std::set<std::size_t> tried;
      for (Channel c : t.channels) {
        std::size_t list = config_.list(c);
        if (!tried.insert(list).second) continue;
        auto proposal = propose_trace(gaps[list], goal);
        if (!proposal) continue;
        auto leaf = std::make_shared<ParseTree>();
        leaf->label = cat;
        leaf->trace = true;
        leaf->filler = proposal->filler.index;
        leaf->channel = proposal->filler.channel;
        leaf->start = leaf->end = pos;
        leaf->fs = proposal->fs;
        leaf->gaps_in = gaps;
        leaf->gaps_out = gaps;
        leaf->gaps_out[list] = proposal->gaps_out;
        out.push_back(Result{leaf->fs, pos, leaf->gaps_out, leaf});
      }
    }

    for (const auto& rule : g_.rules) {
      if (rule.mother_cat() != cat) continue;
      fs::Workspace ws;
      int r = ws.import(rule.fs);
      int q = ws.import(goal);
      if (!ws.unify(*ws.locate(r, {"m"}), q)) continue;
      auto inst = ws.extract(r);
      if (!inst) continue;
      std::vector<Slot> plan;
      for (std::size_t i = 0; i < rule.arity; ++i) plan.push_back(Slot{{"d" + std::to_string(i)}, {}});
      extend(rule, *inst, std::move(plan), 0, pos, pos, gaps, gaps, {}, depth, out);
    }

    active_.erase(key);
    return memo_[key] = std::move(out);
  }

  void extend(const UGRule& rule, const FeatureStructure& inst, std::vector<Slot> plan, std::size_t k,
              std::size_t start, std::size_t pos, const GapLists& mother_in, const GapLists& gaps,
              std::vector<std::shared_ptr<const ParseTree>> kids, std::size_t depth, std::vector<Result>& out) {
    if (k == plan.size()) {
      fs::Workspace ws;
      auto m = ws.extract(*ws.locate(ws.import(inst), {"m"}));
      if (!m) return;
      auto node = std::make_shared<ParseTree>();
      node->label = rule.mother_cat();
      node->rule = rule.name;
      node->start = start;
      node->end = pos;
      node->fs = stamp(*m, start, pos);
      node->gaps_in = mother_in;
      node->gaps_out = gaps;
      node->children = std::move(kids);
      out.push_back(Result{node->fs, pos, gaps, node});
      return;
    }

    // Filler introductions onto this explicit daughter.
    GapLists in = gaps;
    std::array<std::size_t, kChannels> baseline{};
    for (std::size_t l = 0; l < kChannels; ++l) baseline[l] = in[l].size();
    std::vector<GapSpec> pushes = plan[k].pushes;
    if (auto idx = explicit_index(rule, plan[k].path))
      for (const auto& f : rule.fillers)
        if (f.onto == *idx) pushes.push_back(filler(rule, inst, f));
    for (auto it = pushes.rbegin(); it != pushes.rend(); ++it) {
      auto& list = in[config_.list(it->channel)];
      list.insert(list.begin(), *it);
    }

    auto goal = *fs::fs_get(inst, plan[k].path);
    // copy: solve() may rehash the memo
    std::vector<Result> results = solve(goal, pos, in, depth + 1);
    for (const auto& res : results) {
      bool discharged = true;
      for (const auto& p : pushes) {
        std::size_t l = config_.list(p.channel);
        if (res.gaps[l].size() > baseline[l]) discharged = false;
      }
      if (!discharged) continue;

      fs::Workspace ws;
      int r = ws.import(inst);
      int d = ws.import(res.fs);
      if (!ws.unify(*ws.locate(r, plan[k].path, true), d)) continue;
      auto next = ws.extract(r);
      if (!next) continue;

      auto next_plan = plan;
      if (rule.schema() && plan[k].path.size() == 1 && explicit_index(rule, plan[k].path) == rule.head()) {
        if (!splice_complements(*next, rule, next_plan, k)) continue;
      }
      auto next_kids = kids;
      next_kids.push_back(res.tree);
      extend(rule, *next, std::move(next_plan), k + 1, start, res.end, mother_in, res.gaps, std::move(next_kids),
             depth, out);
    }
  }

  static std::optional<std::size_t> explicit_index(const UGRule& rule, const fs::Path& path) {
    if (path.size() != 1) return std::nullopt;
    auto i = std::stoul(path[0].substr(1));
    return i < rule.arity ? std::optional<std::size_t>(i) : std::nullopt;
  }

  GapSpec filler(const UGRule& rule, const FeatureStructure& inst, const FillerIntro& f) const {
    auto fs = *fs::fs_get(inst, {"d" + std::to_string(f.from)});
    auto span = fs::fs_get(fs, {"span"});
    return GapSpec{f.channel, rule.daughter_cat(f.from), fs, span && span->is_atom() ? span->atom_name() : "?"};
  }

  /// Inserts the head's subcat elements as slots after it; a `push` AVM on
  /// the head (`push:[tough:X]`) introduces X onto the first complement.
  bool splice_complements(const FeatureStructure& inst, const UGRule& rule, std::vector<Slot>& plan,
                          std::size_t k) const {
    std::string head = "d" + std::to_string(rule.head());
    auto subcat = fs::fs_get(inst, {head, "subcat"});
    if (!subcat || !subcat->is_list() || !subcat->list_closed()) return false;
    std::vector<Slot> comps;
    for (std::size_t i = 0; i < subcat->list_size(); ++i)
      comps.push_back(Slot{{head, "subcat", std::to_string(i)}, {}});
    if (auto push = fs::fs_get(inst, {head, "push"}); push && push->is_avm()) {
      for (const auto& [chan, value] : push->features()) {
        auto c = channel_from_name(chan);
        if (!c || value.is_var() || value.is_top()) continue;
        if (comps.empty()) return false;
        auto span = fs::fs_get(value, {"span"});
        comps.front().pushes.push_back(GapSpec{*c, cat_of(value), value,
                                               span && span->is_atom() ? span->atom_name() : "?"});
      }
    }
    plan.insert(plan.begin() + static_cast<long>(k) + 1, comps.begin(), comps.end());
    return true;
  }

  const UGGrammar& g_;
  ChannelConfig config_;
  std::vector<std::string> words_;
  std::vector<Symbol> tokens_;
  ParseOptions opts_;
  std::unordered_map<std::string, std::vector<Result>> memo_;
  std::unordered_set<std::string> active_;
};

/// All complete parses with closed gap lists at the root, ordered by
/// canonical derivation string.
inline std::vector<UGParse> ug_parse(const UGGrammar& grammar, const std::vector<std::string>& tokens,
                                     const ChannelConfig& config, ParseOptions options = {}) {
  return Parser(grammar, config, tokens, options).run();
}

}  // namespace gramwb::ug
