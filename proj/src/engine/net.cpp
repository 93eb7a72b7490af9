#include "net_internal.hpp"

#include <cerrno>
#include <cstring>

#ifdef CYPHERFORGE_POSIX_SOCKETS
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>
#endif

namespace cypherforge::net {

#ifdef CYPHERFORGE_POSIX_SOCKETS

namespace {

bool wait_fd(int fd, short events, unsigned timeout_ms) {
  pollfd p{fd, events, 0};
  int rc;
  do {
    rc = ::poll(&p, 1, static_cast<int>(timeout_ms));
  } while (rc < 0 && errno == EINTR);
  return rc > 0 && (p.revents & (events | POLLERR | POLLHUP));
}

}  // namespace

bool Socket::connect(const std::string& host, std::uint16_t port,
                     unsigned timeout_ms) {
  close();
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints,
                    &res) != 0)
    return false;
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL, 0) | O_NONBLOCK);
    int rc = ::connect(fd, ai->ai_addr, ai->ai_addrlen);
    if (rc != 0 && errno == EINPROGRESS) {
      if (wait_fd(fd, POLLOUT, timeout_ms)) {
        int err = 0;
        socklen_t len = sizeof(err);
        ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
        rc = err == 0 ? 0 : -1;
      } else {
        rc = -1;
      }
    }
    if (rc == 0) {
      int one = 1;
      ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
      fd_ = fd;
      break;
    }
    ::close(fd);
  }
  ::freeaddrinfo(res);
  return fd_ >= 0;
}

bool Socket::send_all(const void* data, std::size_t len, unsigned timeout_ms) {
  const char* p = static_cast<const char*>(data);
  while (len > 0) {
    if (!wait_fd(fd_, POLLOUT, timeout_ms)) return false;
    long n = ::send(fd_, p, len, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EAGAIN || errno == EWOULDBLOCK || errno == EINTR) continue;
      return false;
    }
    p += n;
    len -= static_cast<std::size_t>(n);
  }
  return true;
}

long Socket::recv_some(void* buf, std::size_t len, unsigned timeout_ms) {
  if (!wait_fd(fd_, POLLIN, timeout_ms)) return -2;
  long n;
  do {
    n = ::recv(fd_, buf, len, 0);
  } while (n < 0 && errno == EINTR);
  if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) return -2;
  return n;
}

bool Socket::recv_exact(void* buf, std::size_t len, unsigned timeout_ms) {
  char* p = static_cast<char*>(buf);
  while (len > 0) {
    long n = recv_some(p, len, timeout_ms);
    if (n <= 0) return false;
    p += n;
    len -= static_cast<std::size_t>(n);
  }
  return true;
}

void Socket::close() {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
}

#else  // !CYPHERFORGE_POSIX_SOCKETS

bool Socket::connect(const std::string&, std::uint16_t, unsigned) {
  return false;
}
bool Socket::send_all(const void*, std::size_t, unsigned) { return false; }
long Socket::recv_some(void*, std::size_t, unsigned) { return -1; }
bool Socket::recv_exact(void*, std::size_t, unsigned) { return false; }
void Socket::close() {}

#endif

bool parse_url(const std::string& text, Url& out) {
  std::string rest = text;
  auto scheme_end = rest.find("://");
  if (scheme_end != std::string::npos) {
    out.scheme = rest.substr(0, scheme_end);
    rest = rest.substr(scheme_end + 3);
  }
  auto slash = rest.find('/');
  if (slash != std::string::npos) {
    out.path = rest.substr(slash + 1);
    rest = rest.substr(0, slash);
  }
  auto at = rest.rfind('@');
  if (at != std::string::npos) {
    std::string cred = rest.substr(0, at);
    rest = rest.substr(at + 1);
    auto colon = cred.find(':');
    if (colon == std::string::npos) {
      out.user = cred;
    } else {
      out.user = cred.substr(0, colon);
      out.password = cred.substr(colon + 1);
    }
  }
  auto colon = rest.rfind(':');
  if (colon != std::string::npos) {
    std::string port = rest.substr(colon + 1);
    if (port.empty() ||
        port.find_first_not_of("0123456789") != std::string::npos)
      return false;
    unsigned long value = std::stoul(port);
    if (value == 0 || value > 65535) return false;
    out.port = static_cast<std::uint16_t>(value);
    rest = rest.substr(0, colon);
  }
  if (!rest.empty()) out.host = rest;
  return true;
}

}  // namespace cypherforge::net
