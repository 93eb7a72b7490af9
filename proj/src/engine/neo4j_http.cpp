#include <stdexcept>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "cypherforge/engine.hpp"
#include "engines_internal.hpp"
#include "net_internal.hpp"

namespace cypherforge {

namespace {

using nlohmann::json;

class Neo4jHttpEngine : public EngineAdapter {
 public:
  explicit Neo4jHttpEngine(net::Url url)
      : url_(std::move(url)),
        database_(url_.path.empty() ? "neo4j" : url_.path) {}

  std::string name() const override { return "neo4j"; }

  Outcome submit(const std::string& query, unsigned timeout_ms,
                 std::size_t) override {
    return post_statement(query, timeout_ms);
  }

  bool reset() override {
    Outcome o = post_statement("MATCH (n) DETACH DELETE n", 30000);
    return o.kind == Outcome::Kind::Rows;
  }

  bool alive() override {
    httplib::Client cli = client(5000);
    // Any HTTP answer counts; the discovery endpoint needs no auth.
    return cli.Get("/") != nullptr;
  }

 private:
  httplib::Client client(unsigned timeout_ms) {
    std::uint16_t port = url_.port ? url_.port : 7474;
    httplib::Client cli(url_.host, port);
    if (!url_.user.empty()) cli.set_basic_auth(url_.user, url_.password);
    time_t sec = timeout_ms / 1000;
    time_t usec = static_cast<time_t>(timeout_ms % 1000) * 1000;
    cli.set_connection_timeout(sec, usec);
    cli.set_read_timeout(sec, usec);
    cli.set_write_timeout(sec, usec);
    return cli;
  }

  Outcome post_statement(const std::string& query, unsigned timeout_ms) {
    json body = {{"statements", json::array({json{{"statement", query}}})}};
    httplib::Client cli = client(timeout_ms);
    httplib::Result res = cli.Post("/db/" + database_ + "/tx/commit",
                                   body.dump(), "application/json");
    if (!res) {
      if (res.error() == httplib::Error::Read) return Outcome::timeout();
      return Outcome::connection_lost();
    }
    json reply = json::parse(res->body, nullptr, /*allow_exceptions=*/false);
    if (reply.is_discarded())
      return Outcome::error("unparseable response: " + res->body,
                            "http." + std::to_string(res->status));
    if (reply.contains("errors") && !reply["errors"].empty()) {
      const json& first = reply["errors"][0];
      return Outcome::error(first.value("message", ""),
                            first.value("code", ""));
    }
    std::uint64_t rows = 0;
    if (reply.contains("results") && !reply["results"].empty())
      rows = reply["results"][0].value("data", json::array()).size();
    return Outcome::rows_returned(rows);
  }

  net::Url url_;
  std::string database_;
};

}  // namespace

std::unique_ptr<EngineAdapter> make_neo4j_http_engine(const std::string& url) {
  net::Url parsed;
  if (!url.empty() && !net::parse_url(url, parsed))
    throw std::runtime_error("bad neo4j url: " + url);
  return std::make_unique<Neo4jHttpEngine>(std::move(parsed));
}

}  // namespace cypherforge
