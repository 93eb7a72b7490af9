#include "resp_internal.hpp"

#include <charconv>

namespace cypherforge::resp {

std::string encode_command(const std::vector<std::string>& parts) {
  std::string out = "*" + std::to_string(parts.size()) + "\r\n";
  for (const auto& part : parts) {
    out += "$" + std::to_string(part.size()) + "\r\n";
    out += part;
    out += "\r\n";
  }
  return out;
}

namespace {

// Line terminated by CRLF starting at `pos`; returns npos when incomplete.
std::size_t find_crlf(const char* data, std::size_t len, std::size_t pos) {
  for (std::size_t i = pos; i + 1 < len; ++i)
    if (data[i] == '\r' && data[i + 1] == '\n') return i;
  return std::string::npos;
}

long parse_at(const char* data, std::size_t len, std::size_t pos, Value& out) {
  if (pos >= len) return 0;
  std::size_t eol = find_crlf(data, len, pos + 1);
  if (eol == std::string::npos) return 0;
  std::string line(data + pos + 1, eol - pos - 1);
  std::size_t after = eol + 2;
  auto as_int = [&](long long& value) {
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(),
                                     value);
    return ec == std::errc() && ptr == line.data() + line.size();
  };
  switch (data[pos]) {
    case '+':
      out.type = Value::Type::Simple;
      out.text = line;
      return static_cast<long>(after - pos);
    case '-':
      out.type = Value::Type::Error;
      out.text = line;
      return static_cast<long>(after - pos);
    case ':': {
      out.type = Value::Type::Integer;
      if (!as_int(out.integer)) return -1;
      return static_cast<long>(after - pos);
    }
    case '$': {
      long long size;
      if (!as_int(size)) return -1;
      if (size < 0) {
        out.type = Value::Type::Nil;
        return static_cast<long>(after - pos);
      }
      if (after + static_cast<std::size_t>(size) + 2 > len) return 0;
      out.type = Value::Type::Bulk;
      out.text.assign(data + after, static_cast<std::size_t>(size));
      return static_cast<long>(after + static_cast<std::size_t>(size) + 2 -
                               pos);
    }
    case '*': {
      long long count;
      if (!as_int(count)) return -1;
      if (count < 0) {
        out.type = Value::Type::Nil;
        return static_cast<long>(after - pos);
      }
      out.type = Value::Type::Array;
      std::size_t cursor = after;
      for (long long i = 0; i < count; ++i) {
        Value item;
        long used = parse_at(data, len, cursor, item);
        if (used <= 0) return used;
        out.items.push_back(std::move(item));
        cursor += static_cast<std::size_t>(used);
      }
      return static_cast<long>(cursor - pos);
    }
    default:
      return -1;
  }
}

}  // namespace

long parse(const char* data, std::size_t len, Value& out) {
  out = Value{};
  return parse_at(data, len, 0, out);
}

}  // namespace cypherforge::resp
