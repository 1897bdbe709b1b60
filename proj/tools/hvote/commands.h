/* Copyright 2026 The HoughVote Authors. All Rights Reserved.

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

#ifndef HOUGHVOTE_TOOLS_HVOTE_COMMANDS_H_
#define HOUGHVOTE_TOOLS_HVOTE_COMMANDS_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "houghvote/error.h"
#include "houghvote/vote_field.h"
#include "houghvote/voting.h"

namespace houghvote::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitIo = 4;

int ExitCodeFor(ErrorCode code);

// Runs `hvote` with args (excluding the program name).
int RunHvote(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

struct BenchConfig {
  int height = 128;
  int width = 128;
  int classes = 80;
  VoteFieldSpec field{90, {2, 8, 16}, false, false};
  std::vector<Backend> backends{Backend::kScatter, Backend::kGather,
                                Backend::kKernel, Backend::kSparse};
  int repeats = 5;
  std::uint64_t seed = 42;
  int threads = 0;
  double sparse_threshold = 0.0;
  double density = 1.0;  // fraction of evidence entries that are non-zero
};

struct BenchRow {
  Backend backend;
  double max_rel_error = 0.0;  // against scatter, relative to max|O|
  double median_ms = 0.0;
  double votes_per_sec = 0.0;
  double speedup_vs_scatter = 0.0;  // 0 when scatter was not timed
};

struct BenchReport {
  BenchConfig config;
  int threads = 1;
  double votes = 0.0;  // sum of K_r over non-zero evidence entries
  std::vector<BenchRow> rows;
};

inline constexpr double kAgreementTolerance = 1e-6;

// Synthesizes C x H x W x R evidence from the seed, checks every backend
// against scatter (throws Error(kShapeMismatch) on disagreement beyond
// kAgreementTolerance), then times each backend `repeats` times.
BenchReport RunBench(const BenchConfig& config);

void WriteBenchCsv(std::ostream& out, const BenchReport& report);

}  // namespace houghvote::cli

#endif  // HOUGHVOTE_TOOLS_HVOTE_COMMANDS_H_
