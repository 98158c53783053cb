#pragma once

// Internal helpers for the line-oriented text formats: whitespace
// tokenization, locale-free number parsing and shortest round-trip
// formatting of doubles (keeps saved files byte-stable).

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "jobroute/error.hpp"

namespace jobroute::text {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' ||
                               line[i] == '\r')) {
      ++i;
    }
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' &&
           line[i] != '\r') {
      ++i;
    }
    if (i > start) {
      out.push_back(line.substr(start, i - start));
    }
  }
  return out;
}

template <typename T>
T parse_number(std::string_view token, const std::string& context) {
  T value{};
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw Error(context + ": cannot parse '" + std::string(token) + "'");
  }
  return value;
}

inline double parse_double(std::string_view token, const std::string& context) {
  return parse_number<double>(token, context);
}

inline std::int64_t parse_i64(std::string_view token, const std::string& context) {
  return parse_number<std::int64_t>(token, context);
}

inline std::uint64_t parse_u64(std::string_view token, const std::string& context) {
  return parse_number<std::uint64_t>(token, context);
}

inline int parse_int(std::string_view token, const std::string& context) {
  return parse_number<int>(token, context);
}

inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

} // namespace jobroute::text
