#include "httplib.h"
#include "json.hpp"

#include "chaseforge/corpus.hpp"

namespace chaseforge {

HttpBackend::HttpBackend(std::string url, int timeout_seconds) : url_(std::move(url)), timeout_(timeout_seconds) {
  if (url_.rfind("http://", 0) != 0)
    throw UsageError("backend URL must start with http:// (got '" + url_ + "')");
}

std::vector<GeneratedPair> HttpBackend::expand(const GenerationRequest& request) {
  auto slash = url_.find('/', 7);
  std::string base = url_.substr(0, slash);
  std::string prefix = slash == std::string::npos ? "" : url_.substr(slash);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();

  httplib::Client client(base);
  client.set_connection_timeout(timeout_, 0);
  client.set_read_timeout(timeout_, 0);
  auto res = client.Post(prefix + "/expand", request_payload(request), "application/json");
  if (!res) throw BackendTransportError(url_ + ": " + httplib::to_string(res.error()));
  if (res->status >= 500) throw BackendTransportError(url_ + ": HTTP " + std::to_string(res->status));
  if (res->status != 200) throw BackendError(url_ + ": HTTP " + std::to_string(res->status));

  std::vector<GeneratedPair> out;
  try {
    auto j = nlohmann::json::parse(res->body);
    for (const auto& t : j.at("templates"))
      out.push_back({t.at("prompt").get<std::string>(), t.at("response").get<std::string>()});
  } catch (const nlohmann::json::exception& e) {
    throw BackendError(url_ + ": malformed response: " + e.what());
  }
  return out;
}

}  // namespace chaseforge
