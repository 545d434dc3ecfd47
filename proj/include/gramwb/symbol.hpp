#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>

namespace gramwb {

/// Interned, case-sensitive name. Comparison is by id; ordering by text.
class Symbol {
public:
  Symbol() = default;
  explicit Symbol(std::string_view text) : id_(table().intern(text)) {}

  const std::string& str() const { return table().name(id_); }
  std::uint32_t id() const { return id_; }
  bool empty() const { return id_ == 0; }

  friend bool operator==(Symbol a, Symbol b) { return a.id_ == b.id_; }
  friend bool operator!=(Symbol a, Symbol b) { return a.id_ != b.id_; }
  friend bool operator<(Symbol a, Symbol b) { return a.str() < b.str(); }

private:
  class Table {
  public:
    Table() { intern(""); }

    std::uint32_t intern(std::string_view text) {
      std::lock_guard lock(mutex_);
      auto it = index_.find(std::string(text));
      if (it != index_.end()) return it->second;
      auto id = static_cast<std::uint32_t>(names_.size());
      names_.emplace_back(text);
      index_.emplace(names_.back(), id);
      return id;
    }

    const std::string& name(std::uint32_t id) {
      std::lock_guard lock(mutex_);
      return names_[id];
    }

  private:
    std::mutex mutex_;
    std::deque<std::string> names_;  // stable references
    std::unordered_map<std::string, std::uint32_t> index_;
  };

  static Table& table() {
    static Table t;
    return t;
  }

  std::uint32_t id_ = 0;
};

}  // namespace gramwb

template <>
struct std::hash<gramwb::Symbol> {
  std::size_t operator()(gramwb::Symbol s) const noexcept { return s.id(); }
};
