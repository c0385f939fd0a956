#include "curvemetrics_app/service.hpp"

#include <httplib.h>

#include <charconv>

#include "common.hpp"
#include "curvemetrics/error.hpp"
#include "curvemetrics/study.hpp"

namespace curvemetrics::app {
namespace {

auto error(int status, std::string code, const std::string& message, const std::string& field = {})
    -> Response {
  return {status, Json{{"code", std::move(code)}, {"message", message}, {"field", field}}};
}

auto parse_body(const std::string& body) -> Json {
  Json j;
  try {
    j = Json::parse(body);
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string("request body is not valid JSON: ") + e.what(), "body");
  }
  if (!j.is_object()) throw ValidationError("request body must be a JSON object", "body");
  return j;
}

auto required_string(const Json& j, const char* key) -> std::string {
  if (!j.contains(key) || !j[key].is_string())
    throw ValidationError(std::string("missing string field '") + key + "'", key);
  return j[key].get<std::string>();
}

auto query_number(const Request& r, const std::string& key) -> std::optional<double> {
  const auto it = r.query.find(key);
  if (it == r.query.end()) return std::nullopt;
  double v = 0.0;
  const auto& s = it->second;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw ValidationError("query parameter '" + key + "' is not a number", key);
  return v;
}

auto scenario_summary(const Scenario& s) -> Json {
  Json names = Json::array();
  Json with_precision = Json::array();
  for (const auto& e : s.estimates) {
    names.push_back(e.name);
    if (e.precision) with_precision.push_back(e.name);
  }
  return {{"name", s.name},
          {"description", s.description},
          {"domain", {s.domain().lo, s.domain().hi}},
          {"estimates", names},
          {"estimates_with_precision", with_precision},
          {"distribution", distribution_to_json(s.distribution)}};
}

auto scenario_detail(const Scenario& s) -> Json {
  Json j = scenario_summary(s);
  const Json truth = curve_samples_json(s.truth, kPlotSamples);
  j["x"] = truth["x"];
  j["truth"] = truth["y"];
  Json curves = Json::array();
  for (const auto& e : s.estimates)
    curves.push_back({{"name", e.name}, {"y", curve_samples_json(e.curve, kPlotSamples)["y"]}});
  j["curves"] = std::move(curves);
  const double l = 0.05;
  const double u = 0.95;
  j["band"] = {{"l", l},
               {"u", u},
               {"lo", s.distribution.quantile(l)},
               {"hi", s.distribution.quantile(u)}};
  return j;
}

// Scenario from the store with the body's optional distribution applied.
auto scenario_for(const ScenarioStore& store, const Json& body) -> Scenario {
  const Scenario& base = store.get(required_string(body, "scenario"));
  if (!body.contains("distribution") || body["distribution"].is_null()) return base;
  return base.with_distribution(distribution_from_json(body["distribution"]));
}

}  // namespace

Service::Service(ScenarioStore store, EvaluationOptions options)
    : store_(std::move(store)), options_(options) {}

auto Service::handle(const Request& request) const -> Response {
  try {
    return route(request);
  } catch (const ValidationError& e) {
    return error(400, "validation_error", e.what(), e.field());
  } catch (const UnsupportedOperationError& e) {
    return error(400, "unsupported", e.what());
  } catch (const NotFoundError& e) {
    return error(404, "not_found", e.what());
  } catch (const DegenerateScopeError& e) {
    return error(422, "degenerate_scope", e.what(), "scope");
  } catch (const std::exception& e) {
    return error(500, "internal", e.what());
  }
}

auto Service::route(const Request& r) const -> Response {
  const std::string prefix = "/scenarios/";
  if (r.path == "/scenarios") {
    if (r.method != "GET") return error(405, "method_not_allowed", "use GET");
    Json list = Json::array();
    for (const Scenario* s : store_.scenarios()) list.push_back(scenario_summary(*s));
    return {200, Json{{"scenarios", std::move(list)}}};
  }
  if (r.path.starts_with(prefix)) {
    if (r.method != "GET") return error(405, "method_not_allowed", "use GET");
    Scenario s = store_.get(r.path.substr(prefix.size()));
    const auto alpha = query_number(r, "alpha");
    const auto beta = query_number(r, "beta");
    if (alpha || beta) {
      if (!alpha || !beta) throw ValidationError("alpha and beta must be given together", alpha ? "beta" : "alpha");
      s = s.with_distribution(PredictorDistribution::beta(*alpha, *beta, s.domain()));
    }
    return {200, scenario_detail(s)};
  }
  if (r.path == "/evaluate") {
    if (r.method != "POST") return error(405, "method_not_allowed", "use POST");
    const Json body = parse_body(r.body);
    const Scenario s = scenario_for(store_, body);
    const std::string estimate = required_string(body, "estimate");
    if (!body.contains("measure")) throw ValidationError("missing field 'measure'", "measure");
    const MeasureSpec spec = spec_from_json(body["measure"]);
    const EvalValue v = detail::evaluate_estimate(s, estimate, spec, options_);
    Json j = eval_to_json(v);
    j["scenario"] = s.name;
    j["estimate"] = estimate;
    j["label"] = label(spec);
    j["direction"] = to_string(direction(spec));
    return {200, std::move(j)};
  }
  if (r.path == "/panel") {
    if (r.method != "POST") return error(405, "method_not_allowed", "use POST");
    const Json body = parse_body(r.body);
    const Scenario s = scenario_for(store_, body);
    std::vector<MeasureSpec> specs;
    if (body.contains("measures")) {
      specs = specs_from_json(body["measures"]);
    } else if (body.contains("measure")) {
      specs.push_back(spec_from_json(body["measure"]));
    } else {
      throw ValidationError("missing field 'measure' or 'measures'", "measure");
    }
    detail::check_panel(s, specs);
    PanelOptions po;
    po.evaluation = options_;
    po.threads = 1;  // requests already run concurrently
    return {200, rank_table_to_json(evaluate_panel(s, specs, po))};
  }
  if (r.path == "/measures/schema") {
    if (r.method != "GET") return error(405, "method_not_allowed", "use GET");
    return {200, measure_schema_json()};
  }
  return error(404, "not_found", "no route for " + r.path);
}

struct HttpServer::Impl {
  const Service& service;
  httplib::Server server;
};

HttpServer::HttpServer(const Service& service) : impl_(new Impl{service, {}}) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    Request r{req.method, req.path, {}, req.body};
    for (const auto& [k, v] : req.params) r.query.emplace(k, v);
    const Response out = impl_->service.handle(r);
    res.status = out.status;
    res.set_content(out.body.dump(), "application/json");
  };
  const char* pattern = R"(/.*)";
  impl_->server.Get(pattern, handler);
  impl_->server.Post(pattern, handler);
  impl_->server.Put(pattern, handler);
  impl_->server.Delete(pattern, handler);
}

HttpServer::~HttpServer() { stop(); }

auto HttpServer::bind(const std::string& host, int port) -> int {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host)
                              : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw ValidationError("cannot bind " + host + ":" + std::to_string(port), "port");
  return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace curvemetrics::app
