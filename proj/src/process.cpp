#include "process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>

#include "reoptbench/error.hpp"

namespace reoptbench::detail {

namespace {

[[noreturn]] void child_fail(int report_fd) {
  const int code = errno;
  [[maybe_unused]] ssize_t ignored = ::write(report_fd, &code, sizeof code);
  ::_exit(127);
}

}  // namespace

ChildProcess::ChildProcess(const std::vector<std::string>& argv, const SpawnOptions& options) {
  if (argv.empty()) throw IoError("empty command");
  int out_pipe[2];
  int report_pipe[2];
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) throw IoError("pipe: " + std::string(std::strerror(errno)));
  if (::pipe2(report_pipe, O_CLOEXEC) != 0) {
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    throw IoError("pipe: " + std::string(std::strerror(errno)));
  }

  // Everything the child needs is prepared before fork.
  std::vector<char*> args;
  for (const std::string& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);
  std::vector<std::string> env_storage;
  for (const auto& [key, value] : options.environment) env_storage.push_back(key + "=" + value);

  pid_ = ::fork();
  if (pid_ < 0) {
    const int code = errno;
    for (int fd : {out_pipe[0], out_pipe[1], report_pipe[0], report_pipe[1]}) ::close(fd);
    throw IoError("fork: " + std::string(std::strerror(code)));
  }
  if (pid_ == 0) {
    ::setpgid(0, 0);
    if (::dup2(out_pipe[1], STDOUT_FILENO) < 0) child_fail(report_pipe[1]);
    if (options.stderr_path) {
      const int fd = ::open(options.stderr_path->c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
      if (fd < 0 || ::dup2(fd, STDERR_FILENO) < 0) child_fail(report_pipe[1]);
    }
    for (std::string& entry : env_storage) ::putenv(entry.data());
    if (options.address_space_limit_bytes) {
      const rlimit limit{*options.address_space_limit_bytes, *options.address_space_limit_bytes};
      if (::setrlimit(RLIMIT_AS, &limit) != 0) child_fail(report_pipe[1]);
    }
    ::execvp(args[0], args.data());
    child_fail(report_pipe[1]);
  }

  ::close(out_pipe[1]);
  ::close(report_pipe[1]);
  stdout_fd_ = out_pipe[0];
  int code = 0;
  ssize_t got;
  do {
    got = ::read(report_pipe[0], &code, sizeof code);
  } while (got < 0 && errno == EINTR);
  ::close(report_pipe[0]);
  if (got == static_cast<ssize_t>(sizeof code)) {
    wait();
    ::close(stdout_fd_);
    stdout_fd_ = -1;
    throw IoError("cannot start '" + argv[0] + "': " + std::strerror(code));
  }
}

ChildProcess::~ChildProcess() {
  if (running()) {
    kill();
    wait();
  }
  if (stdout_fd_ >= 0) ::close(stdout_fd_);
}

ChildProcess::ReadStatus ChildProcess::read_line(std::string& line, Clock::time_point deadline) {
  while (true) {
    const std::size_t newline = buffer_.find('\n');
    if (newline != std::string::npos) {
      line = buffer_.substr(0, newline);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      buffer_.erase(0, newline + 1);
      return ReadStatus::line;
    }
    if (eof_) {
      if (buffer_.empty()) return ReadStatus::eof;
      line = std::move(buffer_);
      buffer_.clear();
      return ReadStatus::line;
    }
    const auto now = Clock::now();
    if (now >= deadline) return ReadStatus::timeout;
    const auto wait_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count() + 1;
    pollfd pfd{stdout_fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(wait_ms, 1000)));
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw IoError("poll: " + std::string(std::strerror(errno)));
    }
    if (ready == 0) continue;
    char chunk[4096];
    const ssize_t got = ::read(stdout_fd_, chunk, sizeof chunk);
    if (got < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      throw IoError("read: " + std::string(std::strerror(errno)));
    }
    if (got == 0) {
      eof_ = true;
    } else {
      buffer_.append(chunk, static_cast<std::size_t>(got));
    }
  }
}

void ChildProcess::kill() {
  if (!running()) return;
  ::kill(-pid_, SIGKILL);
  ::kill(pid_, SIGKILL);
}

int ChildProcess::wait() {
  if (pid_ <= 0 || reaped_) return exit_code_;
  int status = 0;
  pid_t r;
  do {
    r = ::waitpid(pid_, &status, 0);
  } while (r < 0 && errno == EINTR);
  reaped_ = true;
  if (r < 0) {
    exit_code_ = -1;
  } else if (WIFEXITED(status)) {
    exit_code_ = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    exit_code_ = 128 + WTERMSIG(status);
  }
  return exit_code_;
}

}  // namespace reoptbench::detail
