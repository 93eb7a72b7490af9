#pragma once

// Minimal blocking TCP client with per-call deadlines, shared by the RESP
// and pgwire transports. POSIX only.

#include <cstdint>
#include <string>

namespace cypherforge::net {

class Socket {
 public:
  Socket() = default;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket() { close(); }

  bool connect(const std::string& host, std::uint16_t port,
               unsigned timeout_ms);
  bool send_all(const void* data, std::size_t len, unsigned timeout_ms);
  // >0 bytes read, 0 peer closed, -1 error, -2 deadline passed.
  long recv_some(void* buf, std::size_t len, unsigned timeout_ms);
  bool recv_exact(void* buf, std::size_t len, unsigned timeout_ms);
  void close();
  bool ok() const { return fd_ >= 0; }

 private:
  int fd_ = -1;
};

struct Url {
  std::string scheme;
  std::string user;
  std::string password;
  std::string host = "localhost";
  std::uint16_t port = 0;
  std::string path;  // without the leading slash
};

bool parse_url(const std::string& text, Url& out);

}  // namespace cypherforge::net
