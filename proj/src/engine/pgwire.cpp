#include "pgwire_internal.hpp"

#ifdef CYPHERFORGE_HAVE_OPENSSL
#include <openssl/evp.h>
#endif

namespace cypherforge::pgwire {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v >> 24));
  out.push_back(static_cast<char>(v >> 16));
  out.push_back(static_cast<char>(v >> 8));
  out.push_back(static_cast<char>(v));
}

// type byte + length-prefixed payload
std::string frame(char type, const std::string& payload) {
  std::string out(1, type);
  put_u32(out, static_cast<std::uint32_t>(payload.size() + 4));
  out += payload;
  return out;
}

std::string md5_hex(const std::string& data) {
#ifdef CYPHERFORGE_HAVE_OPENSSL
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), digest, &len, EVP_md5(), nullptr))
    return "";
  static const char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
#else
  (void)data;
  return "";
#endif
}

}  // namespace

std::uint32_t read_u32(const unsigned char* p) {
  return (static_cast<std::uint32_t>(p[0]) << 24) |
         (static_cast<std::uint32_t>(p[1]) << 16) |
         (static_cast<std::uint32_t>(p[2]) << 8) |
         static_cast<std::uint32_t>(p[3]);
}

std::string startup_message(const std::string& user,
                            const std::string& database) {
  std::string payload;
  put_u32(payload, 196608);  // protocol 3.0
  payload += "user";
  payload.push_back('\0');
  payload += user;
  payload.push_back('\0');
  payload += "database";
  payload.push_back('\0');
  payload += database;
  payload.push_back('\0');
  payload += "client_encoding";
  payload.push_back('\0');
  payload += "UTF8";
  payload.push_back('\0');
  payload.push_back('\0');
  std::string out;
  put_u32(out, static_cast<std::uint32_t>(payload.size() + 4));
  return out + payload;
}

std::string password_message(const std::string& password) {
  std::string payload = password;
  payload.push_back('\0');
  return frame('p', payload);
}

std::string md5_password_message(const std::string& user,
                                 const std::string& password,
                                 const unsigned char salt[4]) {
  std::string inner = md5_hex(password + user);
  if (inner.empty()) return "";
  std::string salted = inner;
  salted.append(reinterpret_cast<const char*>(salt), 4);
  std::string outer = md5_hex(salted);
  if (outer.empty()) return "";
  std::string payload = "md5" + outer;
  payload.push_back('\0');
  return frame('p', payload);
}

std::string query_message(const std::string& sql) {
  std::string payload = sql;
  payload.push_back('\0');
  return frame('Q', payload);
}

ErrorFields parse_error_fields(const std::string& payload) {
  ErrorFields out;
  std::size_t pos = 0;
  while (pos < payload.size() && payload[pos] != '\0') {
    char code = payload[pos++];
    std::size_t end = payload.find('\0', pos);
    if (end == std::string::npos) break;
    std::string value = payload.substr(pos, end - pos);
    pos = end + 1;
    switch (code) {
      case 'S':
        out.severity = value;
        break;
      case 'C':
        out.sqlstate = value;
        break;
      case 'M':
        out.message = value;
        break;
      default:
        break;
    }
  }
  return out;
}

}  // namespace cypherforge::pgwire
