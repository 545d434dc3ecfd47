#pragma once

// AVM text syntax:
//   FS := atom | ?var | #n | #n FS | [ feat:FS, ... ] | [] | < FS, ... (| ?var)? > | <>
// Whitespace is insignificant. Tags and variables are scoped to one text.

#include <stdexcept>
#include <string>
#include <string_view>

#include "gramwb/workspace.hpp"

namespace gramwb::fs {

class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t pos, const std::string& what)
      : std::runtime_error("AVM syntax error at " + std::to_string(pos) + ": " + what), pos_(pos) {}
  std::size_t position() const { return pos_; }

private:
  std::size_t pos_;
};

inline bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '+' || c == '-' ||
         c == '.' || c == '\'' || static_cast<unsigned char>(c) >= 0x80;
}

namespace detail {

class AvmReader {
public:
  AvmReader(std::string_view text, Workspace& ws) : text_(text), ws_(ws) {}

  int read_whole() {
    int n = read();
    skip();
    if (pos_ != text_.size()) throw ParseError(pos_, "trailing input");
    return n;
  }

  /// Reads one FS and leaves the cursor after it.
  int read() {
    skip();
    if (pos_ >= text_.size()) throw ParseError(pos_, "unexpected end of input");
    char c = text_[pos_];
    if (c == '[') return read_avm();
    if (c == '<') return read_list();
    if (c == '?') return read_var();
    if (c == '#') return read_tag();
    if (is_name_char(c)) return ws_.new_atom(Symbol(read_name()));
    throw ParseError(pos_, std::string("unexpected '") + c + "'");
  }

  std::size_t position() const { return pos_; }

private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip();
    if (pos_ >= text_.size() || text_[pos_] != c)
      throw ParseError(pos_, std::string("expected '") + c + "'");
    ++pos_;
  }

  bool peek(char c) {
    skip();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  std::string read_name() {
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
    if (start == pos_) throw ParseError(pos_, "expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }

  int read_avm() {
    expect('[');
    int node = ws_.new_avm();
    if (peek(']')) {
      ++pos_;
      return node;
    }
    std::vector<std::string> seen;
    while (true) {
      std::size_t at = pos_;
      std::string feat = read_name();
      for (const auto& s : seen)
        if (s == feat) throw ParseError(at, "duplicate feature '" + feat + "'");
      seen.push_back(feat);
      expect(':');
      int value = read();
      int slot = *ws_.locate(node, {feat}, true);
      ws_.unify(slot, value);
      if (peek(',')) {
        ++pos_;
        continue;
      }
      expect(']');
      return node;
    }
  }

  int read_list() {
    expect('<');
    if (peek('>')) {
      ++pos_;
      return ws_.new_list({});
    }
    std::vector<int> items;
    int tail = -1;
    while (true) {
      items.push_back(read());
      if (peek(',')) {
        ++pos_;
        continue;
      }
      if (peek('|')) {
        ++pos_;
        skip();
        std::size_t at = pos_;
        tail = read();
        if (ws_.kind(tail) != Kind::Var) throw ParseError(at, "list tail must be a variable");
      }
      expect('>');
      return ws_.new_list(std::move(items), tail);
    }
  }

  int read_var() {
    expect('?');
    std::string name = read_name();
    auto [it, fresh] = vars_.try_emplace(name, -1);
    if (fresh) it->second = ws_.new_var();
    return it->second;
  }

  int read_tag() {
    expect('#');
    std::string name = read_name();
    auto [it, fresh] = tags_.try_emplace(name, -1);
    if (fresh) it->second = ws_.new_var();
    int tag = it->second;
    skip();
    if (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '[' || c == '<' || c == '?' || c == '#' || is_name_char(c)) {
        std::size_t at = pos_;
        int body = read();
        if (!ws_.unify(tag, body)) throw ParseError(at, "inconsistent definitions of #" + name);
      }
    }
    return tag;
  }

  std::string_view text_;
  Workspace& ws_;
  std::size_t pos_ = 0;
  std::unordered_map<std::string, int> tags_;
  std::unordered_map<std::string, int> vars_;
};

}  // namespace detail

inline FeatureStructure fs_parse(std::string_view text) {
  Workspace ws;
  detail::AvmReader reader(text, ws);
  int root = reader.read_whole();
  auto out = ws.extract(root);
  if (!out) throw ParseError(0, "cyclic structure");
  return *out;
}

}  // namespace gramwb::fs
