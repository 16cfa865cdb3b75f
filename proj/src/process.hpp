#pragma once

// Child process with a line-buffered view of its standard output. POSIX only.

#include <sys/types.h>

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace reoptbench::detail {

struct SpawnOptions {
  /// Added to (or overriding) the parent's environment.
  std::vector<std::pair<std::string, std::string>> environment;
  std::optional<std::uint64_t> address_space_limit_bytes;
  /// Standard error of the child goes here when set; otherwise it is inherited.
  std::optional<std::string> stderr_path;
};

class ChildProcess {
 public:
  enum class ReadStatus { line, eof, timeout };
  using Clock = std::chrono::steady_clock;

  /// Throws IoError when the program cannot be started.
  ChildProcess(const std::vector<std::string>& argv, const SpawnOptions& options);
  ~ChildProcess();

  ChildProcess(const ChildProcess&) = delete;
  ChildProcess& operator=(const ChildProcess&) = delete;

  /// Next complete line of standard output (without the newline). A final
  /// unterminated line is returned before eof.
  ReadStatus read_line(std::string& line, Clock::time_point deadline);

  /// SIGKILL to the child's process group.
  void kill();
  /// Reaps the child; returns the exit code, or 128 + signal number.
  int wait();
  bool running() const { return pid_ > 0 && !reaped_; }

 private:
  pid_t pid_ = -1;
  int stdout_fd_ = -1;
  bool reaped_ = false;
  bool eof_ = false;
  int exit_code_ = 0;
  std::string buffer_;
};

}  // namespace reoptbench::detail
