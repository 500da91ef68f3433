#include "mmsbayes/session_api.hpp"

#include <charconv>
#include <cmath>
#include <string_view>
#include <vector>

#include "mmsbayes/error.hpp"
#include "mmsbayes/json_io.hpp"

namespace mmsbayes {

namespace {

using nlohmann::json;

// Malformed request input (as opposed to a domain precondition).
class BadRequest : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ApiResponse json_response(int status, const json& body) {
  return ApiResponse{status, "application/json", body.dump()};
}

ApiResponse error_response(int status, std::string_view code,
                           std::string_view rule, std::string_view message) {
  return json_response(status, json{{"code", code},
                                    {"rule", rule.empty() ? json() : json(rule)},
                                    {"message", message}});
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start < path.size()) {
    std::size_t slash = path.find('/', start);
    if (slash == std::string_view::npos) slash = path.size();
    if (slash > start) parts.emplace_back(path.substr(start, slash - start));
    start = slash + 1;
  }
  return parts;
}

json parse_body(const std::string& body) {
  try {
    return json::parse(body.empty() ? "{}" : body);
  } catch (const json::parse_error& e) {
    throw BadRequest(std::string("request body is not JSON: ") + e.what());
  }
}

double number_param(const ApiRequest& r, const std::string& key, double fallback) {
  const auto it = r.query.find(key);
  if (it == r.query.end()) return fallback;
  double v = 0.0;
  const auto& s = it->second;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() ||
      !std::isfinite(v)) {
    throw BadRequest("query parameter '" + key + "' must be a number");
  }
  return v;
}

std::size_t grid_param(const ApiRequest& r) {
  const double g = number_param(r, "grid", 512);
  if (!(g >= 2 && g <= 100000) || g != std::floor(g)) {
    throw BadRequest("query parameter 'grid' must be an integer in [2, 100000]");
  }
  return static_cast<std::size_t>(g);
}

double body_number(const json& body, const std::string& key) {
  if (!body.contains(key) || !body[key].is_number()) {
    throw BadRequest("body needs a numeric '" + key + "'");
  }
  return body[key].get<double>();
}

ApiResponse method_not_allowed() {
  return error_response(405, "method_not_allowed", "", "method not allowed");
}

}  // namespace

ApiResponse SessionApi::handle(const ApiRequest& request) const {
  try {
    const auto parts = split_path(request.path);
    const std::string& m = request.method;

    if (parts.size() == 1 && parts[0] == "healthz") {
      return json_response(200, json{{"status", "ok"}});
    }
    if (parts.size() == 1 && parts[0] == "preview") {
      if (m != "GET") return method_not_allowed();
      const BetaParams params(number_param(request, "alpha", 1.0),
                              number_param(request, "beta", 1.0));
      return json_response(200,
                           json{{"params", json_io::to_json(params)},
                                {"summary", json_io::to_json(summarize_beta(params))},
                                {"grid", json_io::to_json(density_grid(
                                             params, grid_param(request)))}});
    }
    if (parts.empty() || parts[0] != "sessions") {
      return error_response(404, "not_found", "", "no route for " + request.path);
    }
    if (parts.size() == 1) {
      if (m == "POST") {
        return json_response(201, json_io::to_json(store_.create_session()));
      }
      if (m == "GET") return json_response(200, json{{"sessions", store_.list()}});
      return method_not_allowed();
    }

    const std::string& id = parts[1];
    if (parts.size() == 2) {
      if (m != "GET") return method_not_allowed();
      return json_response(200, json_io::to_json(store_.get(id)));
    }
    const std::string& leaf = parts[2];
    if (parts.size() == 3 && leaf == "prior") {
      if (m != "PUT") return method_not_allowed();
      const json body = parse_body(request.body);
      const BetaParams params(body_number(body, "alpha"), body_number(body, "beta"));
      return json_response(200, json_io::to_json(store_.set_prior(id, params)));
    }
    if (parts.size() == 4 && leaf == "prior" && parts[3] == "lock") {
      if (m != "POST") return method_not_allowed();
      return json_response(200, json_io::to_json(store_.lock_prior(id)));
    }
    if (parts.size() == 3 && leaf == "bags") {
      if (m != "POST") return method_not_allowed();
      BagTally bag = json_io::bag_from_json(parse_body(request.body));
      return json_response(201, json_io::to_json(store_.add_bag(id, std::move(bag))));
    }
    if (parts.size() == 3 && leaf == "posterior") {
      if (m != "GET") return method_not_allowed();
      const auto scope_it = request.query.find("scope");
      const std::string scope =
          scope_it == request.query.end() ? "class" : scope_it->second;
      const double level = number_param(request, "level", kDefaultCredibleLevel);
      return json_response(200, json_io::to_json(store_.get_posterior(
                                    id, scope, level, grid_param(request))));
    }
    if (parts.size() == 3 && leaf == "reveal") {
      if (m != "POST") return method_not_allowed();
      return json_response(200, json_io::to_json(store_.reveal(id)));
    }
    if (parts.size() == 3 && leaf == "export.csv") {
      if (m != "GET") return method_not_allowed();
      return ApiResponse{200, "text/csv; charset=utf-8", store_.export_csv(id)};
    }
    return error_response(404, "not_found", "", "no route for " + request.path);
  } catch (const NotFoundError& e) {
    return error_response(404, "not_found", "", e.what());
  } catch (const ConflictError& e) {
    return error_response(409, "conflict", e.rule(), e.what());
  } catch (const BadRequest& e) {
    return error_response(400, "bad_request", "", e.what());
  } catch (const DomainError& e) {
    return error_response(400, "bad_request", "", e.what());
  } catch (const std::exception& e) {
    return error_response(500, "internal", "", e.what());
  }
}

}  // namespace mmsbayes
