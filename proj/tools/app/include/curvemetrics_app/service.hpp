#pragma once

#include <map>
#include <memory>
#include <string>

#include "curvemetrics/json_io.hpp"
#include "curvemetrics/measures.hpp"
#include "curvemetrics_app/store.hpp"

namespace curvemetrics::app {

struct Request {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct Response {
  int status = 200;
  Json body;
};

/// The HTTP API as a pure function of the request; the store is never
/// modified, so one instance serves concurrent requests.
///
///   GET  /scenarios              list with metadata
///   GET  /scenarios/{name}       curves sampled at 512 points, distribution,
///                                band quantiles; ?alpha=&beta= picks a Beta
///   POST /evaluate               {scenario, estimate, measure[, distribution]}
///   POST /panel                  {scenario, measure | measures[, distribution]}
///   GET  /measures/schema        aspect lattice
///
/// Errors are {code, message, field} with status 400, 404 or 422.
class Service {
 public:
  explicit Service(ScenarioStore store, EvaluationOptions options = {});

  [[nodiscard]] auto handle(const Request& request) const -> Response;
  [[nodiscard]] auto store() const noexcept -> const ScenarioStore& { return store_; }

 private:
  [[nodiscard]] auto route(const Request& request) const -> Response;

  ScenarioStore store_;
  EvaluationOptions options_;
};

inline constexpr std::size_t kPlotSamples = 512;

/// httplib front end of a Service.
class HttpServer {
 public:
  explicit HttpServer(const Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  auto operator=(const HttpServer&) -> HttpServer& = delete;

  /// Binds to host:port (port 0 picks a free one) and returns the port.
  /// Throws ValidationError when the address cannot be bound.
  auto bind(const std::string& host, int port) -> int;
  /// Serves until stop(); blocks.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace curvemetrics::app
