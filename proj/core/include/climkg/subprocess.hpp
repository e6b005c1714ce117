#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <sys/types.h>

namespace climkg {

/// A long-lived child process spoken to one line at a time over its
/// stdin/stdout. The command runs under `/bin/sh -c`.
class LineProcess {
 public:
  explicit LineProcess(std::string command);
  ~LineProcess();

  LineProcess(const LineProcess&) = delete;
  LineProcess& operator=(const LineProcess&) = delete;

  /// Writes `line` plus a newline and waits for one reply line. Returns
  /// nullopt on timeout, broken pipe, or child exit; the process is then
  /// considered dead and later calls fail fast.
  std::optional<std::string> request(std::string_view line, std::chrono::milliseconds timeout);

  bool alive() const noexcept { return pid_ > 0; }
  const std::string& command() const noexcept { return command_; }

 private:
  void terminate() noexcept;

  std::string command_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string pending_;
};

}  // namespace climkg
