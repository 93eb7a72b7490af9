#include <stdexcept>

#include "cypherforge/engine.hpp"
#include "cypherforge/render.hpp"
#include "engines_internal.hpp"
#include "net_internal.hpp"
#include "pgwire_internal.hpp"

namespace cypherforge {

namespace {

constexpr unsigned kConnectTimeoutMs = 5000;

class AgeEngine : public EngineAdapter {
 public:
  AgeEngine(net::Url url, std::string graph)
      : url_(std::move(url)), graph_(std::move(graph)) {}

  std::string name() const override { return "age"; }

  Outcome submit(const std::string& query, unsigned timeout_ms,
                 std::size_t result_columns) override {
    if (!ensure_session(timeout_ms)) return Outcome::connection_lost();
    return simple_query(age_wrap_text(query, graph_, result_columns),
                        timeout_ms);
  }

  bool reset() override {
    if (!ensure_session(kConnectTimeoutMs)) return false;
    // Dropping a missing graph errors; the follow-up create settles it.
    simple_query("SELECT drop_graph('" + graph_ + "', true);",
                 kConnectTimeoutMs);
    Outcome o = simple_query("SELECT create_graph('" + graph_ + "');",
                             kConnectTimeoutMs);
    return o.kind == Outcome::Kind::Rows;
  }

  bool alive() override {
    if (!ensure_session(kConnectTimeoutMs)) return false;
    return simple_query("SELECT 1;", kConnectTimeoutMs).kind ==
           Outcome::Kind::Rows;
  }

 private:
  struct Backend {
    char type = 0;
    std::string payload;
  };

  bool read_message(Backend& msg, unsigned timeout_ms) {
    unsigned char header[5];
    if (!socket_.recv_exact(header, sizeof(header), timeout_ms)) return false;
    msg.type = static_cast<char>(header[0]);
    std::uint32_t length = pgwire::read_u32(header + 1);
    if (length < 4 || length > (64u << 20)) return false;
    msg.payload.resize(length - 4);
    if (length > 4 &&
        !socket_.recv_exact(msg.payload.data(), length - 4, timeout_ms))
      return false;
    return true;
  }

  bool handshake(unsigned timeout_ms) {
    std::string user = url_.user.empty() ? "postgres" : url_.user;
    std::string db = url_.path.empty() ? user : url_.path;
    std::string hello = pgwire::startup_message(user, db);
    if (!socket_.send_all(hello.data(), hello.size(), timeout_ms))
      return false;
    while (true) {
      Backend msg;
      if (!read_message(msg, timeout_ms)) return false;
      switch (msg.type) {
        case 'R': {
          if (msg.payload.size() < 4) return false;
          std::uint32_t kind = pgwire::read_u32(
              reinterpret_cast<const unsigned char*>(msg.payload.data()));
          std::string reply;
          if (kind == 0) break;  // AuthenticationOk
          if (kind == 3) {
            reply = pgwire::password_message(url_.password);
          } else if (kind == 5 && msg.payload.size() >= 8) {
            reply = pgwire::md5_password_message(
                user, url_.password,
                reinterpret_cast<const unsigned char*>(msg.payload.data() +
                                                       4));
          }
          if (reply.empty()) return false;  // SCRAM and friends
          if (!socket_.send_all(reply.data(), reply.size(), timeout_ms))
            return false;
          break;
        }
        case 'E':
          return false;
        case 'Z':
          return true;
        default:
          break;  // ParameterStatus, BackendKeyData, notices
      }
    }
  }

  bool ensure_session(unsigned timeout_ms) {
    if (ready_) return true;
    socket_.close();
    std::uint16_t port = url_.port ? url_.port : 5432;
    if (!socket_.connect(url_.host, port, timeout_ms)) return false;
    if (!handshake(timeout_ms)) {
      socket_.close();
      return false;
    }
    ready_ = true;
    // Session setup; failures surface on the first real query.
    simple_query("CREATE EXTENSION IF NOT EXISTS age;", timeout_ms);
    simple_query("LOAD 'age';", timeout_ms);
    simple_query("SET search_path = ag_catalog, \"$user\", public;",
                 timeout_ms);
    simple_query("SELECT create_graph('" + graph_ + "');", timeout_ms);
    return ready_;
  }

  Outcome simple_query(const std::string& sql, unsigned timeout_ms) {
    if (!ready_) return Outcome::connection_lost();
    std::string wire = pgwire::query_message(sql);
    if (!socket_.send_all(wire.data(), wire.size(), timeout_ms)) {
      drop();
      return Outcome::connection_lost();
    }
    std::uint64_t rows = 0;
    bool failed = false;
    pgwire::ErrorFields error;
    while (true) {
      Backend msg;
      if (!read_message(msg, timeout_ms)) {
        drop();
        // recv_exact cannot distinguish deadline from loss; a dead socket
        // also fails the next alive() probe, which the campaign checks.
        return Outcome::timeout();
      }
      switch (msg.type) {
        case 'D':
          ++rows;
          break;
        case 'E':
          failed = true;
          error = pgwire::parse_error_fields(msg.payload);
          break;
        case 'Z':
          if (failed) return Outcome::error(error.message, error.sqlstate);
          return Outcome::rows_returned(rows);
        default:
          break;  // RowDescription, CommandComplete, notices
      }
    }
  }

  void drop() {
    socket_.close();
    ready_ = false;
  }

  net::Url url_;
  std::string graph_;
  net::Socket socket_;
  bool ready_ = false;
};

}  // namespace

std::unique_ptr<EngineAdapter> make_age_engine(const std::string& url) {
  net::Url parsed;
  if (!url.empty() && !net::parse_url(url, parsed))
    throw std::runtime_error("bad age url: " + url);
  return std::make_unique<AgeEngine>(std::move(parsed), "cypherforge");
}

}  // namespace cypherforge
