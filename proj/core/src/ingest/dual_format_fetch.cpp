#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "climkg/error.hpp"
#include "climkg/ingest.hpp"
#include "climkg/text.hpp"

namespace climkg::ingest {

using nlohmann::json;
namespace fs = std::filesystem;

bool is_url(std::string_view source) {
  return text::starts_with_icase(source, "http://") || text::starts_with_icase(source, "https://");
}

namespace {

const json* entries_of_json_page(const json& page) {
  if (auto feed = page.find("feed"); feed != page.end() && feed->is_object()) {
    if (auto entry = feed->find("entry"); entry != feed->end() && entry->is_array()) return &*entry;
    return nullptr;
  }
  return nullptr;
}

const json* items_of_umm_page(const json& page) {
  if (auto items = page.find("items"); items != page.end() && items->is_array()) return &*items;
  return nullptr;
}

std::string page_name(std::size_t page, std::string_view suffix) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%05zu", page);
  return std::string(buf) + std::string(suffix);
}

std::optional<std::string> read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, std::string_view body) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw RuntimeFailure("cannot write " + p.string());
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
}

std::size_t entry_count(const json* page, bool umm) {
  if (!page) return 0;
  const json* list = umm ? items_of_umm_page(*page) : entries_of_json_page(*page);
  return list ? list->size() : 0;
}

// Parses the raw bodies of one page into pairs; nullopt + reason when malformed.
std::optional<std::vector<RawRecordPair>> parse_page(const std::optional<std::string>& json_body,
                                                     const std::optional<std::string>& umm_body,
                                                     std::string& reason) {
  std::optional<json> jp;
  std::optional<json> up;
  try {
    if (json_body) jp = json::parse(*json_body);
    if (umm_body) up = json::parse(*umm_body);
    return pair_page(jp ? &*jp : nullptr, up ? &*up : nullptr);
  } catch (const json::exception& e) {
    reason = e.what();
  } catch (const ValidationError& e) {
    reason = e.what();
  }
  return std::nullopt;
}

FetchReport fetch_fixture_dir(const FetchOptions& options, const std::function<void(RawRecordPair&&)>& sink) {
  fs::path dir(options.source);
  if (!fs::is_directory(dir)) throw ValidationError("fixture source is not a directory: " + options.source);
  std::set<std::size_t> pages;
  for (const auto& entry : fs::directory_iterator(dir)) {
    auto name = entry.path().filename().string();
    auto dot = name.find('.');
    if (dot == std::string::npos || dot == 0) continue;
    auto rest = name.substr(dot);
    if (rest != ".json" && rest != ".umm.json") continue;
    auto stem = name.substr(0, dot);
    if (!std::all_of(stem.begin(), stem.end(), [](char c) { return c >= '0' && c <= '9'; })) continue;
    pages.insert(std::stoul(stem));
  }

  FetchReport report;
  for (std::size_t page : pages) {
    if (options.max_pages && report.pages >= options.max_pages) break;
    ++report.pages;
    auto json_body = read_file(dir / page_name(page, ".json"));
    auto umm_body = read_file(dir / page_name(page, ".umm.json"));
    std::string reason;
    auto pairs = parse_page(json_body, umm_body, reason);
    if (!pairs) {
      report.skipped.push_back("page " + std::to_string(page) + ": " + reason);
      spdlog::warn("ingest: skipping malformed {}", report.skipped.back());
      continue;
    }
    for (auto& p : *pairs) {
      ++report.pairs;
      sink(std::move(p));
    }
  }
  return report;
}

std::string endpoint_url(std::string_view base, std::string_view format, std::size_t page_size,
                         std::optional<std::size_t> page_num) {
  std::string path(base);
  std::string query;
  if (auto q = path.find('?'); q != std::string::npos) {
    query = path.substr(q + 1);
    path.resize(q);
  }
  while (!path.empty() && path.back() == '/') path.pop_back();
  std::string url = path + "." + std::string(format) + "?";
  if (!query.empty()) url += query + "&";
  url += "page_size=" + std::to_string(page_size);
  if (page_num) url += "&page_num=" + std::to_string(*page_num);
  return url;
}

struct EndpointState {
  std::string format;
  std::optional<std::string> search_after;
  bool exhausted = false;
};

http::Response get_with_retries(http::Client& client, const FetchOptions& options, http::Request request,
                                const std::string& cursor) {
  std::string last_error;
  for (int attempt = 0; attempt <= options.retries; ++attempt) {
    if (attempt > 0) {
      auto delay = options.backoff_base * (1 << (attempt - 1));
      std::this_thread::sleep_for(delay);
    }
    try {
      auto response = client.perform(request);
      if (response.status >= 500 || response.status == 429) {
        last_error = "HTTP " + std::to_string(response.status);
        continue;
      }
      return response;
    } catch (const RuntimeFailure& e) {
      last_error = e.what();
    }
  }
  // The token never appears in the message: only the URL and cursor do.
  throw RetryableFetchError("fetch failed after " + std::to_string(options.retries) + " retries (" + last_error +
                                "): " + request.url,
                            cursor);
}

FetchReport fetch_live(const FetchOptions& options, http::Client& client,
                       const std::function<void(RawRecordPair&&)>& sink) {
  if (options.offline) throw ValidationError("offline mode forbids fetching from " + options.source);
  if (options.record_dir) fs::create_directories(*options.record_dir);

  EndpointState json_ep{"json", std::nullopt, false};
  EndpointState umm_ep{"umm_json", std::nullopt, false};
  FetchReport report;
  for (std::size_t page = 1;; ++page) {
    if (options.max_pages && report.pages >= options.max_pages) break;
    if (json_ep.exhausted && umm_ep.exhausted) break;

    std::optional<std::string> bodies[2];
    EndpointState* eps[2] = {&json_ep, &umm_ep};
    for (int i = 0; i < 2; ++i) {
      auto& ep = *eps[i];
      if (ep.exhausted) continue;
      http::Request req;
      req.timeout = options.timeout;
      req.bearer_token = options.auth_token;
      req.headers.emplace_back("Accept", "application/json");
      std::string cursor;
      if (ep.search_after) {
        req.url = endpoint_url(options.source, ep.format, options.page_size, std::nullopt);
        req.headers.emplace_back("CMR-Search-After", *ep.search_after);
        cursor = "search-after:" + *ep.search_after;
      } else {
        req.url = endpoint_url(options.source, ep.format, options.page_size, page);
        cursor = "page:" + std::to_string(page);
      }
      auto response = get_with_retries(client, options, req, cursor);
      if (response.status >= 400) {
        throw RetryableFetchError("HTTP " + std::to_string(response.status) + " from " + req.url, cursor);
      }
      ep.search_after = response.header("cmr-search-after");
      bodies[i] = std::move(response.body);
    }
    ++report.pages;
    if (options.record_dir) {
      if (bodies[0]) write_file(*options.record_dir / page_name(page, ".json"), *bodies[0]);
      if (bodies[1]) write_file(*options.record_dir / page_name(page, ".umm.json"), *bodies[1]);
    }

    std::string reason;
    auto pairs = parse_page(bodies[0], bodies[1], reason);
    if (!pairs) {
      report.skipped.push_back("page " + std::to_string(page) + ": " + reason);
      spdlog::warn("ingest: skipping malformed {}", report.skipped.back());
      // A malformed page carries no count information; stop rather than loop.
      break;
    }
    for (int i = 0; i < 2; ++i) {
      if (!bodies[i]) continue;
      auto parsed = json::parse(*bodies[i]);
      if (entry_count(&parsed, i == 1) < options.page_size) eps[i]->exhausted = true;
    }
    for (auto& p : *pairs) {
      ++report.pairs;
      sink(std::move(p));
    }
  }
  return report;
}

}  // namespace

std::vector<RawRecordPair> pair_page(const json* json_page, const json* umm_page) {
  std::vector<RawRecordPair> out;
  std::map<std::string, std::size_t> index;
  auto slot = [&](const std::string& id) -> RawRecordPair& {
    auto [it, inserted] = index.try_emplace(id, out.size());
    if (inserted) out.push_back(RawRecordPair{id, std::nullopt, std::nullopt});
    return out[it->second];
  };

  if (json_page) {
    const json* entries = entries_of_json_page(*json_page);
    if (!entries) throw ValidationError("JSON page lacks feed.entry array");
    for (const auto& e : *entries) {
      if (!e.is_object() || !e.contains("id") || !e["id"].is_string()) continue;
      slot(e["id"].get<std::string>()).json_doc = e;
    }
  }
  if (umm_page) {
    const json* items = items_of_umm_page(*umm_page);
    if (!items) throw ValidationError("UMM page lacks items array");
    for (const auto& item : *items) {
      if (!item.is_object()) continue;
      auto meta = item.find("meta");
      auto umm = item.find("umm");
      if (meta == item.end() || umm == item.end() || !meta->contains("concept-id")) continue;
      slot((*meta)["concept-id"].get<std::string>()).umm_doc = *umm;
    }
  }
  return out;
}

FetchReport fetch_dual_format(const FetchOptions& options, http::Client& client,
                              const std::function<void(RawRecordPair&&)>& sink) {
  if (options.page_size == 0) throw ValidationError("page_size must be positive");
  if (is_url(options.source)) return fetch_live(options, client, sink);
  return fetch_fixture_dir(options, sink);
}

}  // namespace climkg::ingest
