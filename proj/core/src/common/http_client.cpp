#include "climkg/http_client.hpp"

#include <curl/curl.h>

#include <cstdlib>
#include <mutex>

#include "climkg/error.hpp"
#include "climkg/text.hpp"

namespace climkg::http {

std::optional<std::string> Response::header(const std::string& lower_name) const {
  auto it = headers.find(lower_name);
  if (it == headers.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> token_from_environment() {
  const char* v = std::getenv("CLIMKG_API_TOKEN");
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

namespace {

struct Transfer {
  Response* response;
  std::size_t max_bytes;
};

std::size_t on_body(char* data, std::size_t size, std::size_t nmemb, void* user) {
  auto* t = static_cast<Transfer*>(user);
  std::size_t n = size * nmemb;
  if (t->max_bytes != 0 && t->response->body.size() + n > t->max_bytes) {
    t->response->size_cap_exceeded = true;
    return 0;  // aborts the transfer
  }
  t->response->body.append(data, n);
  return n;
}

std::size_t on_header(char* data, std::size_t size, std::size_t nmemb, void* user) {
  auto* t = static_cast<Transfer*>(user);
  std::string_view line(data, size * nmemb);
  auto colon = line.find(':');
  if (colon != std::string_view::npos) {
    auto key = text::to_lower(text::trim(line.substr(0, colon)));
    t->response->headers[key] = std::string(text::trim(line.substr(colon + 1)));
  }
  return size * nmemb;
}

class CurlClient final : public Client {
 public:
  CurlClient() {
    static std::once_flag once;
    std::call_once(once, [] { curl_global_init(CURL_GLOBAL_DEFAULT); });
  }

  Response perform(const Request& request) override {
    std::unique_ptr<CURL, decltype(&curl_easy_cleanup)> curl(curl_easy_init(), &curl_easy_cleanup);
    if (!curl) throw RuntimeFailure("curl initialization failed");

    Response response;
    Transfer transfer{&response, request.max_bytes};
    curl_slist* header_list = nullptr;
    for (const auto& [k, v] : request.headers) header_list = curl_slist_append(header_list, (k + ": " + v).c_str());
    if (request.bearer_token) {
      header_list = curl_slist_append(header_list, ("Authorization: Bearer " + *request.bearer_token).c_str());
    }
    std::unique_ptr<curl_slist, decltype(&curl_slist_free_all)> headers_guard(header_list, &curl_slist_free_all);

    CURL* h = curl.get();
    curl_easy_setopt(h, CURLOPT_URL, request.url.c_str());
    curl_easy_setopt(h, CURLOPT_PROTOCOLS, CURLPROTO_HTTP | CURLPROTO_HTTPS);
    curl_easy_setopt(h, CURLOPT_FOLLOWLOCATION, 1L);
    curl_easy_setopt(h, CURLOPT_MAXREDIRS, 5L);
    curl_easy_setopt(h, CURLOPT_TIMEOUT, static_cast<long>(request.timeout.count()));
    curl_easy_setopt(h, CURLOPT_NOSIGNAL, 1L);
    curl_easy_setopt(h, CURLOPT_USERAGENT, "climkg/" CLIMKG_VERSION);
    curl_easy_setopt(h, CURLOPT_HTTPHEADER, header_list);
    curl_easy_setopt(h, CURLOPT_WRITEFUNCTION, &on_body);
    curl_easy_setopt(h, CURLOPT_WRITEDATA, &transfer);
    curl_easy_setopt(h, CURLOPT_HEADERFUNCTION, &on_header);
    curl_easy_setopt(h, CURLOPT_HEADERDATA, &transfer);
    if (request.head_only) curl_easy_setopt(h, CURLOPT_NOBODY, 1L);

    CURLcode rc = curl_easy_perform(h);
    if (rc != CURLE_OK && !response.size_cap_exceeded) {
      throw RuntimeFailure(request.url + ": " + curl_easy_strerror(rc));
    }
    curl_easy_getinfo(h, CURLINFO_RESPONSE_CODE, &response.status);
    return response;
  }
};

class OfflineClient final : public Client {
 public:
  Response perform(const Request& request) override {
    throw RuntimeFailure("network access disabled (offline mode): " + request.url);
  }
};

}  // namespace

std::unique_ptr<Client> make_curl_client() { return std::make_unique<CurlClient>(); }
std::unique_ptr<Client> make_offline_client() { return std::make_unique<OfflineClient>(); }

}  // namespace climkg::http
