// SPDX-License-Identifier: Apache-2.0
#include "stref/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>

#include "stref/error.hpp"

namespace stref {

namespace {

struct Pipe {
  int rd = -1, wr = -1;

  Pipe() {
    int fds[2];
    if (pipe(fds) != 0) throw Error(ErrKind::AdapterError, "pipe() failed");
    rd = fds[0];
    wr = fds[1];
  }
  ~Pipe() {
    if (rd >= 0) close(rd);
    if (wr >= 0) close(wr);
  }
  void close_rd() {
    if (rd >= 0) close(rd);
    rd = -1;
  }
  void close_wr() {
    if (wr >= 0) close(wr);
    wr = -1;
  }
};

}  // namespace

SpawnResult run_process(const std::vector<std::string>& argv, double timeout_s) {
  if (argv.empty()) throw Error(ErrKind::AdapterError, "empty adapter command");

  Pipe out_pipe, err_pipe;
  std::vector<char*> cargv;
  cargv.reserve(argv.size() + 1);
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);

  // environment allow-list
  std::vector<std::string> env_store;
  for (const char* key : {"PATH", "HOME", "LANG", "LC_ALL"}) {
    if (const char* v = std::getenv(key)) env_store.push_back(std::string(key) + "=" + v);
  }
  std::vector<char*> cenv;
  for (auto& e : env_store) cenv.push_back(e.data());
  cenv.push_back(nullptr);

  posix_spawn_file_actions_t fa;
  posix_spawn_file_actions_init(&fa);
  posix_spawn_file_actions_adddup2(&fa, out_pipe.wr, STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(&fa, err_pipe.wr, STDERR_FILENO);
  posix_spawn_file_actions_addclose(&fa, out_pipe.rd);
  posix_spawn_file_actions_addclose(&fa, err_pipe.rd);

  pid_t pid = -1;
  int rc = posix_spawnp(&pid, cargv[0], &fa, nullptr, cargv.data(), cenv.data());
  posix_spawn_file_actions_destroy(&fa);
  if (rc != 0)
    throw Error(ErrKind::AdapterError,
                std::string("cannot start '") + argv[0] + "': " + std::strerror(rc));

  out_pipe.close_wr();
  err_pipe.close_wr();

  SpawnResult result;
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::milliseconds(static_cast<long long>(timeout_s * 1000.0));

  struct pollfd fds[2] = {{out_pipe.rd, POLLIN, 0}, {err_pipe.rd, POLLIN, 0}};
  bool open_fd[2] = {true, true};
  char buf[4096];
  while (open_fd[0] || open_fd[1]) {
    auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      result.timed_out = true;
      kill(pid, SIGKILL);
      break;
    }
    int wait_ms = static_cast<int>(
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count());
    fds[0].fd = open_fd[0] ? out_pipe.rd : -1;
    fds[1].fd = open_fd[1] ? err_pipe.rd : -1;
    int n = poll(fds, 2, std::max(1, std::min(wait_ms, 200)));
    if (n < 0) {
      if (errno == EINTR) continue;
      break;
    }
    for (int i = 0; i < 2; ++i) {
      if (fds[i].fd < 0 || !(fds[i].revents & (POLLIN | POLLHUP))) continue;
      ssize_t got = read(fds[i].fd, buf, sizeof buf);
      if (got > 0) {
        (i == 0 ? result.out : result.err).append(buf, static_cast<size_t>(got));
      } else {
        open_fd[i] = false;
      }
    }
  }

  // drain whatever is left after a kill
  if (result.timed_out) {
    for (int i = 0; i < 2; ++i) {
      int fd = i == 0 ? out_pipe.rd : err_pipe.rd;
      int flags = fcntl(fd, F_GETFL);
      fcntl(fd, F_SETFL, flags | O_NONBLOCK);
      ssize_t got;
      while ((got = read(fd, buf, sizeof buf)) > 0)
        (i == 0 ? result.out : result.err).append(buf, static_cast<size_t>(got));
    }
  }

  int status = 0;
  if (waitpid(pid, &status, 0) == pid) {
    if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
    else if (WIFSIGNALED(status)) result.exit_code = 128 + WTERMSIG(status);
  }
  return result;
}

}  // namespace stref
