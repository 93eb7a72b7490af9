#include <stdexcept>

#include "cypherforge/engine.hpp"
#include "engines_internal.hpp"
#include "net_internal.hpp"
#include "resp_internal.hpp"

namespace cypherforge {

namespace {

constexpr unsigned kConnectTimeoutMs = 3000;

class RedisGraphEngine : public EngineAdapter {
 public:
  RedisGraphEngine(std::string host, std::uint16_t port, std::string graph)
      : host_(std::move(host)), port_(port), graph_(std::move(graph)) {}

  std::string name() const override { return "redisgraph"; }

  Outcome submit(const std::string& query, unsigned timeout_ms,
                 std::size_t) override {
    resp::Value reply;
    Wire rc = command({"GRAPH.QUERY", graph_, query, "--compact"}, timeout_ms,
                      reply);
    if (rc == Wire::Timeout) return Outcome::timeout();
    if (rc == Wire::Lost) return Outcome::connection_lost();
    if (reply.type == resp::Value::Type::Error) {
      std::string code = reply.text.substr(0, reply.text.find(' '));
      return Outcome::error(reply.text, code);
    }
    // GRAPH.QUERY replies [header, rows, stats]; update-only queries reply
    // [stats] alone.
    std::uint64_t rows = 0;
    if (reply.type == resp::Value::Type::Array && reply.items.size() >= 3)
      rows = reply.items[1].items.size();
    return Outcome::rows_returned(rows);
  }

  bool reset() override {
    resp::Value reply;
    Wire rc = command({"GRAPH.DELETE", graph_}, kConnectTimeoutMs, reply);
    // Deleting a graph that does not exist yet errors; that is a clean slate.
    return rc == Wire::Ok;
  }

  bool alive() override {
    resp::Value reply;
    return command({"PING"}, kConnectTimeoutMs, reply) == Wire::Ok &&
           reply.type == resp::Value::Type::Simple;
  }

 private:
  enum class Wire { Ok, Lost, Timeout };

  bool ensure_connected() {
    if (socket_.ok()) return true;
    return socket_.connect(host_, port_, kConnectTimeoutMs);
  }

  Wire command(const std::vector<std::string>& parts, unsigned timeout_ms,
               resp::Value& reply) {
    if (!ensure_connected()) return Wire::Lost;
    std::string wire = resp::encode_command(parts);
    if (!socket_.send_all(wire.data(), wire.size(), timeout_ms)) {
      socket_.close();
      return Wire::Lost;
    }
    std::string buffer;
    char chunk[4096];
    while (true) {
      long parsed = resp::parse(buffer.data(), buffer.size(), reply);
      if (parsed > 0) return Wire::Ok;
      if (parsed < 0) {
        socket_.close();
        return Wire::Lost;
      }
      long n = socket_.recv_some(chunk, sizeof(chunk), timeout_ms);
      if (n == -2) {
        socket_.close();
        return Wire::Timeout;
      }
      if (n <= 0) {
        socket_.close();
        return Wire::Lost;
      }
      buffer.append(chunk, static_cast<std::size_t>(n));
    }
  }

  std::string host_;
  std::uint16_t port_;
  std::string graph_;
  net::Socket socket_;
};

}  // namespace

std::unique_ptr<EngineAdapter> make_redisgraph_engine(const std::string& url) {
  net::Url parsed;
  parsed.port = 6379;
  if (!url.empty() && !net::parse_url(url, parsed))
    throw std::runtime_error("bad redisgraph url: " + url);
  std::string graph = parsed.path.empty() ? "cypherforge" : parsed.path;
  return std::make_unique<RedisGraphEngine>(parsed.host, parsed.port, graph);
}

}  // namespace cypherforge
