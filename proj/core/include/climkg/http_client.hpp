#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace climkg::http {

struct Request {
  std::string url;
  std::chrono::seconds timeout{30};
  std::optional<std::string> bearer_token;
  std::vector<std::pair<std::string, std::string>> headers;
  bool head_only = false;
  std::size_t max_bytes = 0;  // 0 = unlimited
};

struct Response {
  long status = 0;
  std::string body;
  std::map<std::string, std::string> headers;  // keys lowercased
  bool size_cap_exceeded = false;

  std::optional<std::string> header(const std::string& lower_name) const;
};

class Client {
 public:
  virtual ~Client() = default;
  /// Throws RuntimeFailure on transport errors (DNS, connect, timeout).
  /// HTTP error statuses are returned, not thrown.
  virtual Response perform(const Request& request) = 0;
};

/// libcurl-backed client for http and https.
std::unique_ptr<Client> make_curl_client();

/// Refuses every request; used when `--offline` is in effect.
std::unique_ptr<Client> make_offline_client();

/// Value of CLIMKG_API_TOKEN, if set and non-empty.
std::optional<std::string> token_from_environment();

}  // namespace climkg::http
