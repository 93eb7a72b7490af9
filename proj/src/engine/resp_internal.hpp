#pragma once

// RESP2 wire codec (the subset RedisGraph speaks).

#include <string>
#include <vector>

namespace cypherforge::resp {

struct Value {
  enum class Type { Simple, Error, Integer, Bulk, Array, Nil };
  Type type = Type::Nil;
  std::string text;        // Simple / Error / Bulk
  long long integer = 0;   // Integer
  std::vector<Value> items;  // Array
};

// Encodes a command as an array of bulk strings.
std::string encode_command(const std::vector<std::string>& parts);

// Parses one value from data[0..len). Returns bytes consumed, 0 when the
// buffer holds only a prefix of a value, -1 on malformed input.
long parse(const char* data, std::size_t len, Value& out);

}  // namespace cypherforge::resp
