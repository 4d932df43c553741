#pragma once

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

namespace testing {

struct CliResult {
  int status = -1;
  std::string out;
};

/// Runs the qpfb binary with `args` (shell syntax) and captures stdout.
/// stderr is folded into the capture when `with_stderr` is set.
inline CliResult run_qpfb(const std::string& args, bool with_stderr = false) {
  std::string cmd = std::string("'") + QPFB_BINARY + "' " + args + (with_stderr ? " 2>&1" : " 2>/dev/null");
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

inline std::string files_arg(std::initializer_list<std::string> paths) {
  std::string s;
  for (const auto& p : paths) s += " -f '" + p + "'";
  return s;
}

}  // namespace testing
