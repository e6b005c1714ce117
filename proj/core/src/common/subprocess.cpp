#include "climkg/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <csignal>

#include "climkg/error.hpp"

extern char** environ;

namespace climkg {

LineProcess::LineProcess(std::string command) : command_(std::move(command)) {
  int in_pipe[2];
  int out_pipe[2];
  if (pipe2(in_pipe, O_CLOEXEC) != 0) throw RuntimeFailure("pipe failed");
  if (pipe2(out_pipe, O_CLOEXEC) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    throw RuntimeFailure("pipe failed");
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);

  // Own process group, so terminate() also reaches grandchildren holding our stderr.
  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
  posix_spawnattr_setpgroup(&attr, 0);

  const char* argv[] = {"/bin/sh", "-c", command_.c_str(), nullptr};
  int rc = posix_spawn(&pid_, "/bin/sh", &actions, &attr, const_cast<char**>(argv), environ);
  posix_spawn_file_actions_destroy(&actions);
  posix_spawnattr_destroy(&attr);
  close(in_pipe[0]);
  close(out_pipe[1]);
  if (rc != 0) {
    close(in_pipe[1]);
    close(out_pipe[0]);
    pid_ = -1;
    throw RuntimeFailure("cannot spawn '" + command_ + "'");
  }
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  // A dead child must surface as EPIPE, not kill us.
  std::signal(SIGPIPE, SIG_IGN);
}

LineProcess::~LineProcess() { terminate(); }

void LineProcess::terminate() noexcept {
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    kill(-pid_, SIGTERM);
    int status = 0;
    waitpid(pid_, &status, 0);
  }
  pid_ = -1;
}

std::optional<std::string> LineProcess::request(std::string_view line, std::chrono::milliseconds timeout) {
  if (!alive()) return std::nullopt;
  std::string msg(line);
  msg.push_back('\n');
  std::size_t written = 0;
  while (written < msg.size()) {
    ssize_t n = write(to_child_, msg.data() + written, msg.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      terminate();
      return std::nullopt;
    }
    written += static_cast<std::size_t>(n);
  }

  auto deadline = std::chrono::steady_clock::now() + timeout;
  for (;;) {
    if (auto nl = pending_.find('\n'); nl != std::string::npos) {
      std::string reply = pending_.substr(0, nl);
      pending_.erase(0, nl + 1);
      return reply;
    }
    auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (remaining.count() <= 0) {
      terminate();
      return std::nullopt;
    }
    pollfd pfd{from_child_, POLLIN, 0};
    int ready = poll(&pfd, 1, static_cast<int>(remaining.count()));
    if (ready < 0 && errno == EINTR) continue;
    if (ready <= 0) {
      terminate();
      return std::nullopt;
    }
    char buf[4096];
    ssize_t n = read(from_child_, buf, sizeof buf);
    if (n <= 0) {
      terminate();
      return std::nullopt;
    }
    pending_.append(buf, static_cast<std::size_t>(n));
  }
}

}  // namespace climkg
