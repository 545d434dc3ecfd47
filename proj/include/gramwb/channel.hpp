#pragma once

// The four movement channels: verb movement, wh/topicalization, tough
// movement, right extraposition.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gramwb {

enum class Channel : std::uint8_t { vmove = 0, wh = 1, tough = 2, rextra = 3 };
inline constexpr std::size_t kChannels = 4;
inline constexpr std::array<Channel, kChannels> kAllChannels = {Channel::vmove, Channel::wh, Channel::tough,
                                                                Channel::rextra};

inline const char* channel_name(Channel c) {
  switch (c) {
    case Channel::vmove: return "vmove";
    case Channel::wh: return "wh";
    case Channel::tough: return "tough";
    case Channel::rextra: return "rextra";
  }
  return "?";
}

inline std::optional<Channel> channel_from_name(std::string_view name) {
  for (Channel c : kAllChannels)
    if (name == channel_name(c)) return c;
  return std::nullopt;
}

/// A token with no lexical entry (UG) or anchored tree (TAG).
class UnknownToken : public std::runtime_error {
public:
  UnknownToken(std::string word, std::size_t position)
      : std::runtime_error("unknown token '" + word + "' at position " + std::to_string(position)),
        word_(std::move(word)),
        position_(position) {}
  const std::string& word() const { return word_; }
  std::size_t position() const { return position_; }

private:
  std::string word_;
  std::size_t position_;
};

}  // namespace gramwb
