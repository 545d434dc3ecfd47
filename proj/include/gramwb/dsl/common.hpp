#pragma once

// Line-oriented grammar files: `:section` headers, `#` comments, includes.

#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gramwb/fs_text.hpp"

#ifndef GRAMWB_DATA_DIR
#define GRAMWB_DATA_DIR "grammars"
#endif

namespace gramwb::dsl {

using fs::FeatureStructure;
using fs::is_name_char;

class GrammarError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public GrammarError {
public:
  SyntaxError(std::string file, int line, int col, const std::string& what)
      : GrammarError(file + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what),
        file_(std::move(file)),
        line_(line),
        col_(col) {}
  const std::string& file() const { return file_; }
  int line() const { return line_; }
  int column() const { return col_; }

private:
  std::string file_;
  int line_;
  int col_;
};

class UndeclaredFeature : public GrammarError {
public:
  UndeclaredFeature(std::string name, const std::string& where)
      : GrammarError(where + ": undeclared feature '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

private:
  std::string name_;
};

class BadThreading : public GrammarError {
public:
  BadThreading(std::string rule, const std::string& why)
      : GrammarError("rule '" + rule + "': " + why), rule_(std::move(rule)) {}
  const std::string& rule() const { return rule_; }

private:
  std::string rule_;
};

class TwoFootNodes : public GrammarError {
public:
  TwoFootNodes(std::string tree, std::size_t feet)
      : GrammarError("tree '" + tree + "' has " + std::to_string(feet) + " foot nodes"),
        tree_(std::move(tree)),
        feet_(feet) {}
  const std::string& tree() const { return tree_; }
  std::size_t feet() const { return feet_; }

private:
  std::string tree_;
  std::size_t feet_;
};

class NoAnchor : public GrammarError {
public:
  explicit NoAnchor(std::string tree) : GrammarError("tree '" + tree + "' has no anchor"), tree_(std::move(tree)) {}
  const std::string& tree() const { return tree_; }

private:
  std::string tree_;
};

class MissingGrammar : public GrammarError {
public:
  explicit MissingGrammar(const std::string& name) : GrammarError("grammar not found: " + name) {}
};

struct Line {
  std::string file;
  int number = 0;
  std::string text;  // comment stripped, right-trimmed; indentation kept
};

/// `#` starts a comment when it begins the (indented) line or follows
/// whitespace and is followed by whitespace; `#1` inside AVMs is a tag.
inline std::string strip_comment(const std::string& raw) {
  std::size_t first = raw.find_first_not_of(" \t");
  if (first != std::string::npos && raw[first] == '#' &&
      (first + 1 == raw.size() || !is_name_char(raw[first + 1])))
    return "";
  for (std::size_t i = 1; i < raw.size(); ++i) {
    if (raw[i] != '#' || (raw[i - 1] != ' ' && raw[i - 1] != '\t')) continue;
    if (i + 1 == raw.size() || raw[i + 1] == ' ' || raw[i + 1] == '\t') return raw.substr(0, i);
  }
  return raw;
}

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

inline std::vector<Line> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingGrammar(path.string());
  std::vector<Line> out;
  std::string raw;
  int n = 0;
  while (std::getline(in, raw)) {
    ++n;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::string text = strip_comment(raw);
    auto end = text.find_last_not_of(" \t");
    text = end == std::string::npos ? "" : text.substr(0, end + 1);
    if (!text.empty()) out.push_back(Line{path.filename().string(), n, text});
  }
  return out;
}

inline std::filesystem::path data_dir() { return GRAMWB_DATA_DIR; }

/// A grammar by file path, or by bundled name (`ug-base`, `tag-gap`, ...).
inline std::filesystem::path resolve_grammar(const std::string& name_or_path,
                                             const std::filesystem::path& relative_to = {}) {
  namespace fsys = std::filesystem;
  std::vector<fsys::path> tries;
  for (const auto& dir : {relative_to, data_dir()}) {
    if (dir.empty()) continue;
    for (const char* ext : {"", ".ug", ".tag"}) tries.push_back(dir / (name_or_path + ext));
  }
  if (relative_to.empty()) tries.insert(tries.begin(), fsys::path(name_or_path));
  for (const auto& p : tries)
    if (fsys::is_regular_file(p)) return p;
  throw MissingGrammar(name_or_path);
}

/// Parses an AVM embedded in a line, translating parse positions to columns.
inline FeatureStructure parse_avm_at(const Line& line, std::size_t col0, std::string_view text) {
  try {
    return fs::fs_parse(text);
  } catch (const fs::ParseError& e) {
    throw SyntaxError(line.file, line.number, static_cast<int>(col0 + e.position()) + 1, e.what());
  }
}

/// Every feature name occurring anywhere in `fs`.
inline void collect_features(const FeatureStructure& fs, std::set<std::string>& out) {
  std::set<std::pair<const void*, int>> seen;
  std::function<void(const FeatureStructure&)> walk = [&](const FeatureStructure& f) {
    if (!seen.insert({f.graph().get(), f.root()}).second) return;
    if (f.is_avm()) {
      for (const auto& [name, v] : f.features()) {
        out.insert(name);
        walk(v);
      }
    } else if (f.is_list()) {
      for (const auto& e : f.elements()) walk(e);
    }
  };
  walk(fs);
}

}  // namespace gramwb::dsl
