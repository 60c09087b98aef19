// oabridge/wer.h

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

#ifndef OABRIDGE_WER_H_
#define OABRIDGE_WER_H_

#include <string>
#include <vector>

namespace oabridge {

/// Lowercases, drops everything except letters, digits, apostrophes and
/// whitespace, and splits on whitespace runs. Bytes >= 0x80 are kept as
/// letters so UTF-8 words survive; only ASCII is case-folded.
std::vector<std::string> NormalizeText(const std::string &text);

struct WerResult {
  double wer = 0.0;
  int substitutions = 0;
  int deletions = 0;
  int insertions = 0;
  int ref_words = 0;

  int errors() const { return substitutions + deletions + insertions; }
  /// Accumulates counts and recomputes the corpus-level rate.
  WerResult &operator+=(const WerResult &o);
  bool operator==(const WerResult &) const = default;
};

/// Unit-cost Levenshtein alignment of token sequences. Among equal-cost
/// alignments the backtrace prefers match/substitution, then deletion, then
/// insertion. Throws InvalidArgumentError for an empty reference.
WerResult ComputeWer(const std::vector<std::string> &ref,
                     const std::vector<std::string> &hyp);

}  // namespace oabridge

#endif  // OABRIDGE_WER_H_
