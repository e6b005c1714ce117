#include <spdlog/spdlog.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "climkg/acquisition.hpp"
#include "climkg/error.hpp"
#include "climkg/hashing.hpp"
#include "climkg/text.hpp"

namespace climkg::acquisition {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Discovered: return "discovered";
    case Status::Retrieved: return "retrieved";
    case Status::Preprocessed: return "preprocessed";
    case Status::Analyzed: return "analyzed";
    case Status::Failed: return "failed";
  }
  return "failed";
}

std::string_view to_string(Action a) {
  switch (a) {
    case Action::Retrieve: return "retrieve";
    case Action::Preprocess: return "preprocess";
    case Action::Analyze: return "analyze";
  }
  return "retrieve";
}

json Validation::to_json() const {
  return json{{"V", passed() ? 1 : 0},
              {"link_valid", link_valid},
              {"accessible", accessible},
              {"structure", structure}};
}

json AcquisitionState::to_json() const {
  json links_json = json::array();
  for (const auto& l : links) links_json.push_back({{"url", l.url}, {"kind", l.kind}});
  auto path_or_null = [](const std::optional<fs::path>& p) { return p ? json(p->string()) : json(nullptr); };
  return json{{"dataset_id", dataset_id},
              {"links", std::move(links_json)},
              {"source_url", source_url ? json(*source_url) : json(nullptr)},
              {"raw_path", path_or_null(raw_path)},
              {"format", format},
              {"normalized_path", path_or_null(normalized_path)},
              {"summary_path", path_or_null(summary_path)},
              {"status", std::string(to_string(status))},
              {"validation", validation ? validation->to_json() : json(nullptr)},
              {"diagnostics", diagnostics}};
}

bool is_direct_download(std::string_view kind) {
  auto k = text::to_lower(kind);
  return k == "get data" || k == "direct download" || k == "download" || k == "get data via direct access" ||
         k == "data";
}

std::vector<LinkRef> extract_links(const store::PropertyGraph& g, std::string_view dataset_id) {
  std::vector<LinkRef> out;
  for (const auto* n : g.neighbors(dataset_id, "hasLink", store::Direction::Out)) {
    LinkRef l;
    if (auto it = n->properties.find("url"); it != n->properties.end()) l.url = it->second.get<std::string>();
    if (auto it = n->properties.find("kind"); it != n->properties.end()) l.kind = it->second.get<std::string>();
    out.push_back(std::move(l));
  }
  std::stable_sort(out.begin(), out.end(), [](const LinkRef& a, const LinkRef& b) {
    bool da = is_direct_download(a.kind), db = is_direct_download(b.kind);
    return da != db ? da : a.url < b.url;
  });
  return out;
}

Action decide_action(const AcquisitionState& s) {
  if (s.status == Status::Failed) {
    throw ValidationError("acquisition of " + s.dataset_id + " failed; reset the state before continuing");
  }
  if (!s.raw_path) return Action::Retrieve;
  if (!s.normalized_path) return Action::Preprocess;
  return Action::Analyze;
}

std::optional<fs::path> file_link_path(std::string_view url, const fs::path& root) {
  if (!url.starts_with("file:")) return std::nullopt;
  std::string_view rest = url.substr(5);
  if (rest.starts_with("//")) {
    rest.remove_prefix(2);
    // file://host/path: only the empty host or localhost is local.
    auto slash = rest.find('/');
    if (slash == std::string_view::npos) return std::nullopt;
    auto host = rest.substr(0, slash);
    if (!host.empty() && host != "localhost") return std::nullopt;
    return fs::path(std::string(rest.substr(slash)));
  }
  if (rest.empty()) return std::nullopt;
  fs::path p{std::string(rest)};
  return p.is_absolute() ? p : root / p;
}

bool link_syntax_valid(std::string_view url) {
  auto u = text::trim(url);
  if (u.empty() || u.size() != url.size()) return false;
  if (u.find_first_of(" \t\r\n") != std::string_view::npos) return false;
  for (std::string_view scheme : {"http://", "https://"}) {
    if (text::starts_with_icase(u, scheme)) return u.size() > scheme.size() && u[scheme.size()] != '/';
  }
  return u.starts_with("file:") && u.size() > 5;
}

std::string detect_format(std::string_view bytes, std::string_view name) {
  if (bytes.size() >= 4 && bytes.substr(0, 3) == "CDF" && (bytes[3] == '\x01' || bytes[3] == '\x02')) return "netcdf";
  if (bytes.size() >= 4 && bytes.substr(0, 4) == "\x89HDF") return "hdf";
  auto path = std::string(name.substr(0, name.find_first_of("?#")));
  auto ext = text::to_lower(fs::path(path).extension().string());
  if (ext == ".csv") return "csv";
  if (ext == ".json") return "json";
  if (ext == ".nc" || ext == ".nc4" || ext == ".cdf") return "netcdf";
  if (ext == ".h5" || ext == ".hdf" || ext == ".hdf5" || ext == ".he5") return "hdf";
  auto body = text::trim(bytes.substr(0, 4096));
  if (!body.empty() && (body.front() == '[' || body.front() == '{')) return "json";
  if (body.find(',') != std::string_view::npos && body.find('\0') == std::string_view::npos) return "csv";
  return "unknown";
}

namespace {

fs::path dataset_dir(const AcquisitionState& s, const AcquisitionOptions& o) { return o.out_dir / s.dataset_id; }

std::string extension_for(const std::string& format) {
  if (format == "csv") return ".csv";
  if (format == "json") return ".json";
  if (format == "netcdf") return ".nc";
  if (format == "hdf") return ".h5";
  return ".bin";
}

// Bytes of one link, or an error message.
std::optional<std::string> fetch(const LinkRef& link, http::Client& client, const AcquisitionOptions& o,
                                 std::string& error) {
  if (!link_syntax_valid(link.url)) {
    error = "malformed link";
    return std::nullopt;
  }
  if (auto local = file_link_path(link.url, o.link_root)) {
    std::error_code ec;
    auto size = fs::file_size(*local, ec);
    if (ec) {
      error = "cannot open " + local->string();
      return std::nullopt;
    }
    if (o.max_bytes && size > o.max_bytes) {
      error = "size cap of " + std::to_string(o.max_bytes) + " bytes exceeded";
      return std::nullopt;
    }
    std::ifstream in(*local, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    if (!in && !in.eof()) {
      error = "cannot read " + local->string();
      return std::nullopt;
    }
    return ss.str();
  }
  if (link.url.starts_with("file:")) {
    error = "non-local file link";
    return std::nullopt;
  }
  if (o.offline) {
    error = "offline mode";
    return std::nullopt;
  }
  http::Request req;
  req.url = link.url;
  req.timeout = o.timeout;
  req.bearer_token = o.bearer_token;
  req.max_bytes = o.max_bytes;
  try {
    auto resp = client.perform(req);
    if (resp.size_cap_exceeded) {
      error = "size cap of " + std::to_string(o.max_bytes) + " bytes exceeded";
      return std::nullopt;
    }
    if (resp.status < 200 || resp.status >= 300) {
      error = "HTTP " + std::to_string(resp.status);
      return std::nullopt;
    }
    return std::move(resp.body);
  } catch (const RuntimeFailure& e) {
    error = e.what();
    return std::nullopt;
  }
}

}  // namespace

AcquisitionState retrieve(AcquisitionState s, http::Client& client, const AcquisitionOptions& o) {
  if (s.links.empty()) {
    s.status = Status::Failed;
    s.diagnostics.push_back("no links to retrieve");
    return s;
  }
  for (const auto& link : s.links) {
    std::string error;
    auto bytes = fetch(link, client, o, error);
    if (!bytes) {
      s.diagnostics.push_back(link.url + ": " + error);
      continue;
    }
    s.format = detect_format(*bytes, link.url);
    auto raw_dir = dataset_dir(s, o) / "raw";
    fs::create_directories(raw_dir);
    auto path = raw_dir / (hashing::sha256_hex(*bytes).substr(0, 16) + extension_for(s.format));
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << *bytes;
    out.close();
    if (!out) throw RuntimeFailure("cannot write " + path.string());
    s.raw_path = path;
    s.source_url = link.url;
    s.status = Status::Retrieved;
    if (s.format == "netcdf" || s.format == "hdf") {
      s.diagnostics.push_back(s.format + " detected; normalization is not supported for this format");
    }
    return s;
  }
  s.status = Status::Failed;
  return s;
}

Validation validate(const AcquisitionState& s, http::Client* client, bool check_only, const AcquisitionOptions& o) {
  Validation v;
  std::string url = s.source_url ? *s.source_url : (s.links.empty() ? std::string() : s.links.front().url);
  v.link_valid = link_syntax_valid(url);
  if (check_only) {
    if (v.link_valid) {
      if (auto local = file_link_path(url, o.link_root)) {
        v.accessible = fs::is_regular_file(*local);
      } else if (client && !o.offline && !url.starts_with("file:")) {
        http::Request req;
        req.url = url;
        req.head_only = true;
        req.timeout = o.timeout;
        req.bearer_token = o.bearer_token;
        try {
          v.accessible = client->perform(req).status < 400;
        } catch (const RuntimeFailure&) {
          v.accessible = false;
        }
      }
    }
  } else {
    v.accessible = s.raw_path && fs::is_regular_file(*s.raw_path);
  }
  if (s.normalized_path) {
    std::ifstream in(*s.normalized_path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      auto canonical = normalize_csv(ss.str());
      v.structure = std::count(canonical.begin(), canonical.end(), '\n') >= 2;
    } catch (const ValidationError&) {
      v.structure = false;
    }
  } else if (check_only) {
    v.structure = false;
  }
  return v;
}

AcquisitionState run_pipeline(const store::PropertyGraph& g, std::string_view dataset_id, http::Client& client,
                              const AcquisitionOptions& o) {
  AcquisitionState s;
  s.dataset_id = std::string(dataset_id);
  s.links = extract_links(g, dataset_id);
  while (s.status != Status::Failed && s.status != Status::Analyzed) {
    switch (decide_action(s)) {
      case Action::Retrieve:
        s = retrieve(std::move(s), client, o);
        if (s.status == Status::Failed) s.validation = validate(s, &client, false, o);
        break;
      case Action::Preprocess:
        s = normalize(std::move(s), o);
        if (s.status != Status::Failed) {
          s.validation = validate(s, &client, false, o);
          if (!s.validation->passed()) {
            s.status = Status::Failed;
            s.diagnostics.push_back("validation failed");
          }
        }
        break;
      case Action::Analyze:
        s = analyze(std::move(s), o);
        break;
    }
  }
  return s;
}

}  // namespace climkg::acquisition
