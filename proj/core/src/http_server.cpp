#include <httplib.h>

#include "jsonl.hpp"
#include "radlabel/error.hpp"
#include "radlabel/review_service.hpp"

namespace radlabel::review {

using detail::json;

namespace {

std::string_view kind_name(stats::RowKind k) {
  switch (k) {
    case stats::RowKind::kInterval: return "interval";
    case stats::RowKind::kPointOnly: return "point_only";
    case stats::RowKind::kUnsampled: return "unsampled";
    case stats::RowKind::kNoPositives: return "no_positives";
  }
  return "unsampled";
}

// CiResult fields plus the row kind and the 3-decimal strings the summary
// CSV prints, so clients can display numbers without formatting them.
json row_json(const stats::SummaryRow& row) {
  const auto& ci = row.ci;
  json j = {{"keyword", row.keyword},   {"population", ci.population}, {"sample", ci.sample},
            {"hits", ci.hits},          {"p_hat", ci.p_hat},           {"se", ci.se},
            {"lower", ci.lower},        {"upper", ci.upper},           {"point_only", ci.point_only},
            {"kind", kind_name(row.kind)}};
  if (row.kind == stats::RowKind::kInterval || row.kind == stats::RowKind::kPointOnly) {
    j["display"] = {{"p_hat", stats::format3(ci.p_hat)},
                    {"lower", stats::format3(ci.lower)},
                    {"upper", stats::format3(ci.upper)}};
  }
  return j;
}

json session_json(const SessionInfo& info) {
  json samples = json::array();
  for (const auto& s : info.samples) {
    samples.push_back({{"keyword", s.keyword},
                       {"population", s.population},
                       {"draw_order", s.draw_order}});
  }
  return {{"session_id", info.session_id}, {"n", info.n}, {"seed", info.seed},
          {"samples", samples}};
}

json item_json(const ReviewItem& item) {
  json evidence = json::array();
  for (const auto& e : item.evidence) {
    evidence.push_back({{"sentence_index", e.sentence_index}, {"start", e.start}, {"end", e.end}});
  }
  json sentences = json::array();
  for (const auto& s : item.sentences) sentences.push_back({{"start", s.start}, {"end", s.end}});
  return {{"status", "item"},          {"report_id", item.report_id},
          {"keyword", item.keyword},   {"text", item.text},
          {"evidence", evidence},      {"sentences", sentences},
          {"position", item.position}, {"sample_size", item.sample_size},
          {"remaining", item.remaining}};
}

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(detail::dump_compact(body), "application/json");
}

struct BadRequest : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json parse_body(const httplib::Request& req) {
  json j = json::parse(req.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw BadRequest("request body is not a JSON object");
  return j;
}

// Maps library errors onto status codes.
template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const NotFoundError& e) {
      reply(res, 404, {{"error", e.what()}});
    } catch (const DataError& e) {
      reply(res, 422, {{"error", e.what()}});
    } catch (const BadRequest& e) {
      reply(res, 400, {{"error", e.what()}});
    } catch (const json::exception& e) {
      reply(res, 400, {{"error", std::string("malformed request: ") + e.what()}});
    } catch (const std::exception& e) {
      reply(res, 500, {{"error", e.what()}});
    }
  };
}

}  // namespace

struct ReviewServer::Impl {
  ReviewService& service;
  httplib::Server server;

  explicit Impl(ReviewService& s) : service(s) {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Headers", "Content-Type"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.status = 204;
    });

    server.Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const json body = req.body.empty() ? json::object() : parse_body(req);
      SessionRequest request;
      request.keywords = body.value("keywords", std::vector<std::string>{});
      request.n = body.value("n", stats::kDefaultSampleSize);
      request.seed = body.value("seed", std::uint64_t{0});
      reply(res, 201, session_json(service.create_session(request)));
    }));

    server.Get(R"(/sessions/([^/]+))",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 reply(res, 200, session_json(service.session(req.matches[1])));
               }));

    server.Get(R"(/sessions/([^/]+)/next)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 if (!req.has_param("keyword")) throw BadRequest("missing keyword parameter");
                 const std::string keyword = req.get_param_value("keyword");
                 auto item = service.next_item(req.matches[1], keyword);
                 if (item) {
                   reply(res, 200, item_json(*item));
                   return;
                 }
                 for (const auto& row : service.summary(req.matches[1])) {
                   if (row.keyword == keyword) {
                     reply(res, 200,
                           {{"status", "exhausted"}, {"keyword", keyword}, {"ci", row_json(row)}});
                     return;
                   }
                 }
               }));

    server.Post(R"(/sessions/([^/]+)/verdicts)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  const json body = parse_body(req);
                  ArbitrationRecord v;
                  v.report_id = body.at("report_id").get<std::string>();
                  v.keyword = body.at("keyword").get<std::string>();
                  v.correct = body.at("correct").get<bool>();
                  v.arbiter_id = body.at("arbiter_id").get<std::string>();
                  v.timestamp = body.value("timestamp", std::string());
                  reply(res, 200, row_json(service.submit_verdict(req.matches[1], std::move(v))));
                }));

    server.Get(R"(/sessions/([^/]+)/summary)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 json rows = json::array();
                 for (const auto& row : service.summary(req.matches[1])) rows.push_back(row_json(row));
                 reply(res, 200, rows);
               }));
  }
};

ReviewServer::ReviewServer(ReviewService& service) : impl_(std::make_unique<Impl>(service)) {}

ReviewServer::~ReviewServer() { stop(); }

int ReviewServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw IoError("cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw IoError("cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void ReviewServer::serve() { impl_->server.listen_after_bind(); }

void ReviewServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

void ReviewServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace radlabel::review
