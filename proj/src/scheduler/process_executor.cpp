#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <map>
#include <thread>

#include "anbx/scheduler/executor.hpp"

extern char** environ;

namespace anbx::scheduler {

namespace {

using Clock = std::chrono::steady_clock;

struct Pipe {
  int fd[2] = {-1, -1};
  ~Pipe() {
    for (int f : fd)
      if (f >= 0) ::close(f);
  }
  bool open() { return ::pipe2(fd, O_CLOEXEC) == 0; }
  int take(int i) {
    int f = fd[i];
    fd[i] = -1;
    return f;
  }
};

std::vector<std::string> merged_environment(const std::map<std::string, std::string>& overrides) {
  std::map<std::string, std::string> env;
  for (char** e = environ; e && *e; ++e) {
    std::string kv = *e;
    auto eq = kv.find('=');
    if (eq != std::string::npos) env[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  for (const auto& [k, v] : overrides) env[k] = v;
  std::vector<std::string> out;
  for (const auto& [k, v] : env) out.push_back(k + "=" + v);
  return out;
}

std::vector<char*> c_strings(std::vector<std::string>& v) {
  std::vector<char*> out;
  for (auto& s : v) out.push_back(s.data());
  out.push_back(nullptr);
  return out;
}

}  // namespace

ProcessExecutor::ProcessExecutor(std::chrono::milliseconds grace) : grace_(grace) {
  // A child that exits before reading its stdin must not take us down.
  ::signal(SIGPIPE, SIG_IGN);
}

ExecResult ProcessExecutor::run(const adapters::CommandPlan& plan, TaskControl& control, const OutputSink& sink) {
  ExecResult r;
  Pipe in, out, err;
  if (!in.open() || !out.open() || !err.open()) {
    r.error = std::string("pipe: ") + std::strerror(errno);
    return r;
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in.fd[0], 0);
  posix_spawn_file_actions_adddup2(&actions, out.fd[1], 1);
  posix_spawn_file_actions_adddup2(&actions, err.fd[1], 2);
  if (!plan.working_dir.empty()) posix_spawn_file_actions_addchdir_np(&actions, plan.working_dir.c_str());

  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  sigset_t none, all_default;
  sigemptyset(&none);
  sigemptyset(&all_default);
  sigaddset(&all_default, SIGPIPE);
  sigaddset(&all_default, SIGTERM);
  posix_spawnattr_setsigmask(&attr, &none);
  posix_spawnattr_setsigdefault(&attr, &all_default);
  posix_spawnattr_setpgroup(&attr, 0);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP | POSIX_SPAWN_SETSIGMASK | POSIX_SPAWN_SETSIGDEF);

  std::vector<std::string> argv_s{plan.executable.string()};
  argv_s.insert(argv_s.end(), plan.args.begin(), plan.args.end());
  auto env_s = merged_environment(plan.env);
  auto argv = c_strings(argv_s);
  auto envp = c_strings(env_s);

  pid_t pid = -1;
  const bool has_slash = plan.executable.string().find('/') != std::string::npos;
  int rc = has_slash ? posix_spawn(&pid, argv[0], &actions, &attr, argv.data(), envp.data())
                     : posix_spawnp(&pid, argv[0], &actions, &attr, argv.data(), envp.data());
  posix_spawn_file_actions_destroy(&actions);
  posix_spawnattr_destroy(&attr);
  if (rc != 0) {
    r.error = plan.executable.string() + ": " + std::strerror(rc);
    return r;
  }
  r.spawned = true;

  ::close(in.take(0));
  ::close(out.take(1));
  ::close(err.take(1));
  int stdin_fd = in.take(1);
  int stdout_fd = out.take(0);
  int stderr_fd = err.take(0);
  const std::string input = plan.stdin_data.value_or("");
  std::size_t written = 0;
  if (input.empty()) {
    ::close(stdin_fd);
    stdin_fd = -1;
  } else {
    ::fcntl(stdin_fd, F_SETFL, ::fcntl(stdin_fd, F_GETFL) | O_NONBLOCK);
  }

  std::ofstream tee;
  if (plan.stdout_path) tee.open(*plan.stdout_path, std::ios::binary | std::ios::trunc);

  std::optional<Clock::time_point> term_sent;
  bool kill_sent = false;
  bool reaped = false;
  int status = 0;
  char buf[8192];

  while (stdout_fd >= 0 || stderr_fd >= 0 || stdin_fd >= 0 || !reaped) {
    if (control.stop_requested() && !reaped) {
      if (!term_sent) {
        ::kill(-pid, SIGTERM);
        term_sent = Clock::now();
      } else if (!kill_sent && Clock::now() - *term_sent >= grace_) {
        ::kill(-pid, SIGKILL);
        kill_sent = true;
      }
    }

    std::vector<pollfd> fds;
    if (stdout_fd >= 0) fds.push_back({stdout_fd, POLLIN, 0});
    if (stderr_fd >= 0) fds.push_back({stderr_fd, POLLIN, 0});
    if (stdin_fd >= 0) fds.push_back({stdin_fd, POLLOUT, 0});
    if (fds.empty()) {
      // Pipes are closed but the process may still run.
      pid_t w = ::waitpid(pid, &status, WNOHANG);
      if (w == pid || (w < 0 && errno == ECHILD)) {
        reaped = true;
        break;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
      continue;
    }
    int n = ::poll(fds.data(), fds.size(), 20);
    if (n < 0 && errno != EINTR) break;
    for (const auto& p : fds) {
      if (!p.revents) continue;
      if (p.fd == stdin_fd) {
        ssize_t k = ::write(stdin_fd, input.data() + written, input.size() - written);
        if (k > 0) written += static_cast<std::size_t>(k);
        if (k < 0 && errno != EAGAIN && errno != EINTR) written = input.size();
        if (written >= input.size()) {
          ::close(stdin_fd);
          stdin_fd = -1;
        }
        continue;
      }
      ssize_t k = ::read(p.fd, buf, sizeof buf);
      if (k > 0) {
        std::string_view chunk(buf, static_cast<std::size_t>(k));
        if (p.fd == stdout_fd && tee.is_open()) tee.write(chunk.data(), chunk.size());
        r.output.append(chunk);
        sink(chunk);
      } else if (k == 0 || (errno != EAGAIN && errno != EINTR)) {
        ::close(p.fd);
        (p.fd == stdout_fd ? stdout_fd : stderr_fd) = -1;
      }
    }
  }
  if (stdin_fd >= 0) ::close(stdin_fd);
  if (!reaped) ::waitpid(pid, &status, 0);

  if (WIFEXITED(status)) {
    r.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    r.signaled = true;
    r.exit_code = 128 + WTERMSIG(status);
  }
  return r;
}

}  // namespace anbx::scheduler
