// oabridge/cli.h

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

#ifndef OABRIDGE_CLI_H_
#define OABRIDGE_CLI_H_

namespace oabridge {

/// Entry point of the `oabridge` tool. Returns 0 on success, 1 on usage
/// errors and 2 on runtime errors.
int RunCli(int argc, char **argv);

}  // namespace oabridge

#endif  // OABRIDGE_CLI_H_
