#include <sqlite3.h>
#include <spdlog/spdlog.h>

#include "climkg/discovery.hpp"

namespace climkg::discovery {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kSchema =
    "CREATE TABLE IF NOT EXISTS records ("
    " seq INTEGER PRIMARY KEY AUTOINCREMENT,"
    " query_text TEXT NOT NULL,"
    " dataset_id TEXT NOT NULL,"
    " title TEXT NOT NULL,"
    " score REAL NOT NULL,"
    " constraints_json TEXT NOT NULL,"
    " created_at TEXT NOT NULL,"
    " UNIQUE(query_text, dataset_id));";

class Statement {
 public:
  Statement(sqlite3* db, const char* sql) {
    if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK) {
      throw RuntimeFailure(std::string("cache: ") + sqlite3_errmsg(db));
    }
  }
  ~Statement() { sqlite3_finalize(stmt_); }
  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;
  sqlite3_stmt* get() const { return stmt_; }

  void bind(int i, std::string_view s) {
    sqlite3_bind_text(stmt_, i, s.data(), static_cast<int>(s.size()), SQLITE_TRANSIENT);
  }
  void bind(int i, double v) { sqlite3_bind_double(stmt_, i, v); }

 private:
  sqlite3_stmt* stmt_ = nullptr;
};

std::string column_text(sqlite3_stmt* s, int i) {
  auto p = reinterpret_cast<const char*>(sqlite3_column_text(s, i));
  return p ? std::string(p, static_cast<std::size_t>(sqlite3_column_bytes(s, i))) : std::string();
}

// Opens the database and makes sure it is usable; nullptr if it is not.
sqlite3* open_checked(const fs::path& path, std::string& error) {
  sqlite3* db = nullptr;
  if (sqlite3_open_v2(path.c_str(), &db, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE, nullptr) != SQLITE_OK) {
    error = db ? sqlite3_errmsg(db) : "cannot open";
    sqlite3_close(db);
    return nullptr;
  }
  sqlite3_busy_timeout(db, 5000);
  char* msg = nullptr;
  int rc = sqlite3_exec(db, kSchema, nullptr, nullptr, &msg);
  if (rc == SQLITE_OK) {
    sqlite3_stmt* check = nullptr;
    rc = sqlite3_prepare_v2(db, "PRAGMA quick_check;", -1, &check, nullptr);
    if (rc == SQLITE_OK) {
      rc = sqlite3_step(check);
      std::string verdict = rc == SQLITE_ROW ? column_text(check, 0) : std::string();
      rc = verdict == "ok" ? SQLITE_OK : SQLITE_CORRUPT;
      if (rc != SQLITE_OK) error = verdict.empty() ? "integrity check failed" : verdict;
    }
    sqlite3_finalize(check);
  } else {
    error = msg ? msg : sqlite3_errmsg(db);
  }
  sqlite3_free(msg);
  if (rc != SQLITE_OK) {
    if (error.empty()) error = sqlite3_errmsg(db);
    sqlite3_close(db);
    return nullptr;
  }
  return db;
}

}  // namespace

struct ResultCache::Impl {
  sqlite3* db = nullptr;
  ~Impl() { sqlite3_close(db); }
};

ResultCache::ResultCache(fs::path path) : impl_(std::make_unique<Impl>()) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::string error;
  impl_->db = open_checked(path, error);
  if (!impl_->db) {
    fs::path backup = path;
    backup += ".corrupt";
    for (int n = 1; fs::exists(backup); ++n) {
      backup = path;
      backup += ".corrupt." + std::to_string(n);
    }
    spdlog::warn("cache {} unusable ({}); moved to {} and rebuilt", path.string(), error, backup.string());
    fs::rename(path, backup);
    for (const char* suffix : {"-journal", "-wal", "-shm"}) {
      fs::path side = path;
      side += suffix;
      std::error_code ec;
      fs::remove(side, ec);
    }
    backup_ = backup;
    impl_->db = open_checked(path, error);
    if (!impl_->db) throw RuntimeFailure("cache " + path.string() + ": " + error);
  }
}

ResultCache::~ResultCache() = default;

void ResultCache::persist(std::string_view query_text, const std::vector<DiscoveryResult>& results) {
  sqlite3* db = impl_->db;
  if (sqlite3_exec(db, "BEGIN IMMEDIATE;", nullptr, nullptr, nullptr) != SQLITE_OK) {
    throw RuntimeFailure(std::string("cache: ") + sqlite3_errmsg(db));
  }
  try {
    Statement ins(db,
                  "INSERT OR IGNORE INTO records(query_text, dataset_id, title, score, constraints_json, created_at)"
                  " VALUES(?,?,?,?,?,?);");
    for (const auto& r : results) {
      sqlite3_reset(ins.get());
      ins.bind(1, query_text);
      ins.bind(2, r.dataset_id);
      ins.bind(3, r.title);
      ins.bind(4, r.score);
      ins.bind(5, json(r.constraints).dump());
      ins.bind(6, r.provenance.value("timestamp", utc_timestamp()));
      if (sqlite3_step(ins.get()) != SQLITE_DONE) throw RuntimeFailure(std::string("cache: ") + sqlite3_errmsg(db));
    }
  } catch (...) {
    sqlite3_exec(db, "ROLLBACK;", nullptr, nullptr, nullptr);
    throw;
  }
  if (sqlite3_exec(db, "COMMIT;", nullptr, nullptr, nullptr) != SQLITE_OK) {
    throw RuntimeFailure(std::string("cache: ") + sqlite3_errmsg(db));
  }
}

std::vector<DiscoveryResult> ResultCache::recall(std::string_view query_text) const {
  Statement q(impl_->db,
              "SELECT dataset_id, title, score, constraints_json, created_at FROM records"
              " WHERE query_text = ? ORDER BY seq DESC;");
  q.bind(1, query_text);
  std::vector<DiscoveryResult> out;
  int rc;
  while ((rc = sqlite3_step(q.get())) == SQLITE_ROW) {
    DiscoveryResult r;
    r.dataset_id = column_text(q.get(), 0);
    r.title = column_text(q.get(), 1);
    r.score = sqlite3_column_double(q.get(), 2);
    r.constraints = json::parse(column_text(q.get(), 3)).get<std::vector<std::string>>();
    r.provenance = json{{"query", json{{"text", std::string(query_text)}}}, {"timestamp", column_text(q.get(), 4)},
                        {"cached", true}};
    out.push_back(std::move(r));
  }
  if (rc != SQLITE_DONE) throw RuntimeFailure(std::string("cache: ") + sqlite3_errmsg(impl_->db));
  return out;
}

}  // namespace climkg::discovery
