#pragma once

// PostgreSQL v3 wire codec (simple-query subset, enough for AGE).

#include <cstdint>
#include <string>
#include <vector>

namespace cypherforge::pgwire {

std::string startup_message(const std::string& user,
                            const std::string& database);
std::string password_message(const std::string& password);
// Empty when MD5 support is compiled out.
std::string md5_password_message(const std::string& user,
                                 const std::string& password,
                                 const unsigned char salt[4]);
std::string query_message(const std::string& sql);

struct ErrorFields {
  std::string severity;
  std::string sqlstate;
  std::string message;
};

// Payload of an ErrorResponse / NoticeResponse.
ErrorFields parse_error_fields(const std::string& payload);

std::uint32_t read_u32(const unsigned char* p);

}  // namespace cypherforge::pgwire
