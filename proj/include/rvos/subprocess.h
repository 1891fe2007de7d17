/* Copyright 2026 The rvos Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef RVOS_SUBPROCESS_H_
#define RVOS_SUBPROCESS_H_

#include <filesystem>
#include <map>
#include <string>

namespace rvos {

struct ProcessResult {
  int exit_code = -1;  // -1 when killed or signalled
  bool timed_out = false;
  std::string log_tail;  // last few KiB of combined stdout/stderr
};

// Runs `command` through /bin/sh with stdin from /dev/null and stdout/stderr
// appended to `log_path`. The child sees only `environment` (PATH defaults
// to a system path when not given). After `timeout_seconds` the whole process
// group is killed.
ProcessResult RunShellCommand(const std::string& command,
                              const std::map<std::string, std::string>& environment,
                              double timeout_seconds,
                              const std::filesystem::path& log_path);

// Wraps `s` in single quotes for /bin/sh.
std::string ShellQuote(const std::string& s);

}  // namespace rvos

#endif  // RVOS_SUBPROCESS_H_
