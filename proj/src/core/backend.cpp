// Copyright 2026 The nmtnoise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/backend.hpp"

#include <fcntl.h>
#include <poll.h>
#include <pthread.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cctype>
#include <cerrno>
#include <cstring>

#include "core/errors.hpp"

extern char** environ;

namespace nmtnoise {
namespace {

constexpr size_t kStderrTail = 2048;

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  ~Fd() { reset(); }
  Fd(Fd&& o) noexcept : fd_(o.fd_) { o.fd_ = -1; }
  Fd& operator=(Fd&& o) noexcept {
    if (this != &o) {
      reset();
      fd_ = o.fd_;
      o.fd_ = -1;
    }
    return *this;
  }
  int get() const { return fd_; }
  void reset() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_ = -1;
};

void make_pipe(Fd& read_end, Fd& write_end) {
  int fds[2];
  if (::pipe2(fds, O_CLOEXEC) != 0) {
    throw BackendError(std::string("pipe: ") + std::strerror(errno));
  }
  read_end = Fd(fds[0]);
  write_end = Fd(fds[1]);
}

std::string tail(const std::string& s) {
  return s.size() <= kStderrTail ? s : s.substr(s.size() - kStderrTail);
}

std::vector<std::string> split_output(const std::string& out) {
  std::vector<std::string> lines;
  size_t pos = 0;
  while (pos < out.size()) {
    size_t nl = out.find('\n', pos);
    if (nl == std::string::npos) nl = out.size();
    std::string line = out.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    pos = nl + 1;
  }
  return lines;
}

std::vector<std::string> run_subprocess(const std::vector<std::string>& lines,
                                        const TranslatorBackend& backend,
                                        const TranslateContext& context) {
  const std::string command = expand_command(backend.command, context.variables);

  std::string input;
  for (const auto& l : lines) {
    input += l;
    input += '\n';
  }

  std::vector<std::string> env_storage;
  for (char** e = environ; *e; ++e) env_storage.emplace_back(*e);
  for (const auto& [key, value] : context.variables) {
    std::string name = "NMTNOISE_";
    for (char c : key) {
      name.push_back(std::isalnum(static_cast<unsigned char>(c))
                         ? static_cast<char>(std::toupper(static_cast<unsigned char>(c)))
                         : '_');
    }
    env_storage.push_back(name + "=" + value);
  }
  std::vector<char*> envp;
  for (auto& s : env_storage) envp.push_back(s.data());
  envp.push_back(nullptr);
  const std::string cwd = context.working_directory.string();

  Fd in_r, in_w, out_r, out_w, err_r, err_w;
  make_pipe(in_r, in_w);
  make_pipe(out_r, out_w);
  make_pipe(err_r, err_w);

  // A child that exits before reading all input raises SIGPIPE on our
  // write; keep it pending on this thread and discard it afterwards.
  sigset_t pipe_set, old_mask;
  sigemptyset(&pipe_set);
  sigaddset(&pipe_set, SIGPIPE);
  ::pthread_sigmask(SIG_BLOCK, &pipe_set, &old_mask);

  const pid_t pid = ::fork();
  if (pid < 0) {
    ::pthread_sigmask(SIG_SETMASK, &old_mask, nullptr);
    throw BackendError(std::string("fork: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::sigprocmask(SIG_SETMASK, &old_mask, nullptr);
    ::setpgid(0, 0);
    ::dup2(in_r.get(), STDIN_FILENO);
    ::dup2(out_w.get(), STDOUT_FILENO);
    ::dup2(err_w.get(), STDERR_FILENO);
    if (!cwd.empty() && ::chdir(cwd.c_str()) != 0) ::_exit(126);
    const char* argv[] = {"sh", "-c", command.c_str(), nullptr};
    ::execve("/bin/sh", const_cast<char* const*>(argv), envp.data());
    ::_exit(127);
  }
  in_r.reset();
  out_w.reset();
  err_w.reset();
  ::fcntl(in_w.get(), F_SETFL, O_NONBLOCK);

  std::string out, err;
  size_t written = 0;
  if (input.empty()) in_w.reset();
  const auto deadline = std::chrono::steady_clock::now() + backend.timeout;
  bool timed_out = false;
  char buf[65536];
  while (out_r.get() >= 0 || err_r.get() >= 0) {
    pollfd fds[3];
    nfds_t n = 0;
    int out_slot = -1, err_slot = -1, in_slot = -1;
    if (out_r.get() >= 0) { out_slot = n; fds[n++] = {out_r.get(), POLLIN, 0}; }
    if (err_r.get() >= 0) { err_slot = n; fds[n++] = {err_r.get(), POLLIN, 0}; }
    if (in_w.get() >= 0) { in_slot = n; fds[n++] = {in_w.get(), POLLOUT, 0}; }
    const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (remaining.count() <= 0) {
      timed_out = true;
      break;
    }
    const int rc = ::poll(fds, n, static_cast<int>(std::min<long long>(remaining.count(), 1000)));
    if (rc < 0) {
      if (errno == EINTR) continue;
      break;
    }
    auto drain = [&](int slot, Fd& fd, std::string& sink) {
      if (slot < 0 || !(fds[slot].revents & (POLLIN | POLLHUP | POLLERR))) return;
      const ssize_t got = ::read(fd.get(), buf, sizeof buf);
      if (got > 0) {
        sink.append(buf, static_cast<size_t>(got));
      } else if (got == 0 || (errno != EAGAIN && errno != EINTR)) {
        fd.reset();
      }
    };
    drain(out_slot, out_r, out);
    drain(err_slot, err_r, err);
    if (in_slot >= 0 && (fds[in_slot].revents & (POLLOUT | POLLERR | POLLHUP))) {
      const ssize_t put = ::write(in_w.get(), input.data() + written,
                                  input.size() - written);
      if (put > 0) {
        written += static_cast<size_t>(put);
        if (written == input.size()) in_w.reset();
      } else if (put < 0 && errno != EAGAIN && errno != EINTR) {
        in_w.reset();
      }
    }
  }
  in_w.reset();
  if (timed_out) ::kill(-pid, SIGKILL);
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  const timespec no_wait{0, 0};
  while (::sigtimedwait(&pipe_set, nullptr, &no_wait) == SIGPIPE) {
  }
  ::pthread_sigmask(SIG_SETMASK, &old_mask, nullptr);

  const std::string who = "backend '" + command + "'";
  if (timed_out) {
    throw BackendError(who + " timed out after " +
                       std::to_string(backend.timeout.count()) +
                       " ms; stderr: " + tail(err));
  }
  if (WIFSIGNALED(status)) {
    throw BackendError(who + " killed by signal " +
                       std::to_string(WTERMSIG(status)) + "; stderr: " + tail(err));
  }
  if (WIFEXITED(status) && WEXITSTATUS(status) != 0) {
    throw BackendError(who + " exited with status " +
                       std::to_string(WEXITSTATUS(status)) + "; stderr: " +
                       tail(err));
  }
  auto result = split_output(out);
  if (result.size() != lines.size()) {
    throw BackendError(who + " produced " + std::to_string(result.size()) +
                       " lines for " + std::to_string(lines.size()) +
                       " input lines; stderr: " + tail(err));
  }
  return result;
}

}  // namespace

TranslatorBackend TranslatorBackend::subprocess(std::string command) {
  if (command.empty()) throw ContractViolation("empty backend command");
  TranslatorBackend b;
  b.kind = Kind::kSubprocess;
  b.command = std::move(command);
  return b;
}

TranslatorBackend TranslatorBackend::parse(const std::string& spec) {
  if (spec == "identity") return identity();
  if (spec == "copy") return copy();
  return subprocess(spec);
}

std::string TranslatorBackend::identity_string() const {
  switch (kind) {
    case Kind::kIdentity: return "identity";
    case Kind::kCopy: return "copy";
    case Kind::kSubprocess: return "subprocess:" + command;
  }
  return "?";
}

std::string expand_command(const std::string& command,
                           const std::map<std::string, std::string>& variables) {
  std::string out = command;
  for (const auto& [key, value] : variables) {
    const std::string pattern = "{" + key + "}";
    size_t pos = 0;
    while ((pos = out.find(pattern, pos)) != std::string::npos) {
      out.replace(pos, pattern.size(), value);
      pos += value.size();
    }
  }
  return out;
}

std::vector<std::string> translate(const std::vector<std::string>& lines,
                                   const TranslatorBackend& backend,
                                   const TranslateContext& context) {
  switch (backend.kind) {
    case TranslatorBackend::Kind::kIdentity:
    case TranslatorBackend::Kind::kCopy:
      return lines;
    case TranslatorBackend::Kind::kSubprocess:
      return run_subprocess(lines, backend, context);
  }
  return lines;
}

void probe(const TranslatorBackend& backend, const TranslateContext& context) {
  const auto out = translate({"probe"}, backend, context);
  if (out.size() != 1) throw BackendError("backend probe failed");
}

}  // namespace nmtnoise
