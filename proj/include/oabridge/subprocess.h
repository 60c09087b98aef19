// oabridge/subprocess.h

// Copyright 2026 The oabridge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef OABRIDGE_SUBPROCESS_H_
#define OABRIDGE_SUBPROCESS_H_

#include <chrono>
#include <string>
#include <vector>

namespace oabridge {

struct ProcessResult {
  int exit_status = -1;  // -1 when killed by a signal or never started
  bool timed_out = false;
  std::string stdout_text;
  std::string stderr_text;
};

/// Runs argv[0] (looked up on PATH) without a shell and collects both output
/// streams. The child gets its own process group, which is killed when the
/// timeout expires. A program that cannot be executed reports exit status
/// 127 with the reason on stderr.
ProcessResult RunProcess(const std::vector<std::string> &argv,
                         std::chrono::milliseconds timeout);

/// Splits a command template into argv words. Whitespace separates words;
/// single quotes keep everything literal, double quotes keep whitespace and
/// honour backslash escapes. Throws InvalidArgumentError on an unterminated
/// quote.
std::vector<std::string> SplitCommandLine(const std::string &line);

}  // namespace oabridge

#endif  // OABRIDGE_SUBPROCESS_H_
