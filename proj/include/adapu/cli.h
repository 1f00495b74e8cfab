/*
 * Copyright 2026 The AdaPU Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#ifndef ADAPU_CLI_H_
#define ADAPU_CLI_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace adapu::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Invalid flags or configuration values; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Runs one command line. `args` excludes the program name.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

// Everything needed to re-run a command: its arguments, resolved
// configuration and fingerprints of the inputs it read.
struct RunManifest {
  std::string command;
  std::vector<std::string> args;
  nlohmann::ordered_json config;
  struct Input {
    std::string path;
    std::string fnv1a64;  // hex; empty when the file could not be read
  };
  std::vector<Input> inputs;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> outputs;
  std::string tool_version;

  nlohmann::ordered_json ToJson() const;
  static RunManifest FromJson(const nlohmann::ordered_json& json);
};

// Hex FNV-1a 64 of a file's bytes; empty string when unreadable.
std::string FingerprintFile(const std::filesystem::path& path);

void WriteManifest(const RunManifest& manifest,
                   const std::filesystem::path& path);
RunManifest ReadManifest(const std::filesystem::path& path);

std::string ToolVersion();

// Output root: the flag if given, else $ADAPU_OUTPUT_ROOT, else `fallback`.
std::filesystem::path ResolveOutputDir(const std::string& flag,
                                       const std::string& fallback);

// Benchmark grid runner (spec file schema documented in the README).
int RunBenchmark(const std::filesystem::path& spec_path,
                 const std::filesystem::path& out_dir, int jobs,
                 const std::vector<std::string>& args, std::ostream& out,
                 std::ostream& err);

}  // namespace adapu::cli

#endif  // ADAPU_CLI_H_
