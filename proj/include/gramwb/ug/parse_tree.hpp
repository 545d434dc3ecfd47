#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <sstream>

#include "gramwb/ug/grammar.hpp"

namespace gramwb::ug {

/// Physical gap lists, front of each vector = front of the list.
using GapLists = std::array<std::vector<GapSpec>, kChannels>;

struct ParseTree {
  Symbol label;
  std::string rule;  // internal nodes
  std::string word;  // lexical leaves
  bool trace = false;
  std::string filler;  // trace leaves: span of the bound filler
  Channel channel = Channel::wh;
  std::size_t start = 0;
  std::size_t end = 0;
  FeatureStructure fs;
  GapLists gaps_in;
  GapLists gaps_out;
  std::vector<std::shared_ptr<const ParseTree>> children;

  bool lexical() const { return !word.empty(); }
};

/// One filler-gap arc.
struct Binding {
  std::string filler;  // span "i-j"
  std::size_t filler_start = 0;
  std::size_t gap = 0;  // token position of the trace
  Channel channel = Channel::wh;
  Symbol cat;
};

struct UGParse {
  std::shared_ptr<const ParseTree> tree;
  std::vector<Binding> bindings;
  std::string derivation;  // canonical; parse sets are ordered by this
  std::string bracketed;
};

inline std::size_t span_start(const std::string& span) { return std::stoul(span.substr(0, span.find('-'))); }

namespace detail {

inline void collect_traces(const ParseTree& t, std::vector<Binding>& out) {
  if (t.trace) {
    out.push_back(Binding{t.filler, span_start(t.filler), t.start, t.channel, t.label});
    return;
  }
  for (const auto& c : t.children) collect_traces(*c, out);
}

inline void derivation_string(const ParseTree& t, std::ostringstream& os) {
  if (t.trace) {
    os << t.label.str() << ":t<" << t.filler << ">";
  } else if (t.lexical()) {
    os << t.label.str() << ':' << t.word;
  } else {
    os << '(' << t.rule;
    for (const auto& c : t.children) {
      os << ' ';
      derivation_string(*c, os);
    }
    os << ')';
  }
}

inline void bracket(const ParseTree& t, const std::map<std::string, int>& numbers, std::ostringstream& os) {
  if (t.trace) {
    os << '[' << t.label.str() << " t#" << numbers.at(t.filler) << ']';
  } else if (t.lexical()) {
    os << t.word;
  } else {
    os << '[' << t.label.str();
    for (const auto& c : t.children) {
      os << ' ';
      bracket(*c, numbers, os);
    }
    os << ']';
  }
}

}  // namespace detail

/// Filler -> gap arcs of a complete parse, ordered by filler position.
inline std::vector<Binding> extract_bindings(const ParseTree& tree) {
  std::vector<Binding> out;
  detail::collect_traces(tree, out);
  std::sort(out.begin(), out.end(), [](const Binding& a, const Binding& b) {
    return std::tie(a.filler_start, a.gap) < std::tie(b.filler_start, b.gap);
  });
  return out;
}

/// Trace numbering: fillers in order of their position, from 1.
inline std::map<std::string, int> filler_numbers(const std::vector<Binding>& bindings) {
  std::map<std::string, int> numbers;
  for (const auto& b : bindings) numbers.try_emplace(b.filler, static_cast<int>(numbers.size()) + 1);
  return numbers;
}

/// `[S [NP which lake] [S did you [VP [V t#2] ...]]]`.
inline std::string bracketed(const ParseTree& tree) {
  std::ostringstream os;
  detail::bracket(tree, filler_numbers(extract_bindings(tree)), os);
  return os.str();
}

inline std::string derivation_string(const ParseTree& tree) {
  std::ostringstream os;
  detail::derivation_string(tree, os);
  return os.str();
}

inline UGParse make_parse(std::shared_ptr<const ParseTree> tree) {
  UGParse p;
  p.bindings = extract_bindings(*tree);
  p.derivation = derivation_string(*tree);
  p.bracketed = bracketed(*tree);
  p.tree = std::move(tree);
  return p;
}

/// Surface text of a filler span, e.g. "which lake".
inline std::string span_text(const std::string& span, const std::vector<std::string>& tokens) {
  auto dash = span.find('-');
  auto from = std::stoul(span.substr(0, dash));
  auto to = std::stoul(span.substr(dash + 1));
  std::string out;
  for (auto i = from; i < to && i < tokens.size(); ++i) {
    if (!out.empty()) out += ' ';
    out += tokens[i];
  }
  return out;
}

// --------------------------------------------------------------------------
// No-crossing-dependencies check

struct NcdResult {
  bool pass = true;
  std::optional<std::pair<Binding, Binding>> violation;
};

inline bool arcs_cross(const Binding& a, const Binding& b) {
  auto [a1, a2] = std::minmax(a.filler_start, a.gap);
  auto [b1, b2] = std::minmax(b.filler_start, b.gap);
  return (a1 < b1 && b1 < a2 && a2 < b2) || (b1 < a1 && a1 < b2 && b2 < a2);
}

/// Arcs threaded on the same physical list must nest. Under the merged
/// configuration wh and tough share a list; verb movement never does.
inline NcdResult check_ncd(const std::vector<Binding>& bindings, const ChannelConfig& config) {
  for (std::size_t i = 0; i < bindings.size(); ++i)
    for (std::size_t j = i + 1; j < bindings.size(); ++j) {
      const auto& a = bindings[i];
      const auto& b = bindings[j];
      if (config.list(a.channel) != config.list(b.channel)) continue;
      if (arcs_cross(a, b)) return {false, std::make_pair(a, b)};
    }
  return {};
}

}  // namespace gramwb::ug
