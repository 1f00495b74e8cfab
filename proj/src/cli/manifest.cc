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


#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "adapu/cli.h"
#include "adapu/rng.h"

namespace adapu::cli {

using Json = nlohmann::ordered_json;

std::string ToolVersion() { return std::string("adapu ") + ADAPU_VERSION; }

std::string FingerprintFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "";
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    h = Fnv1a64(std::string_view(buf, static_cast<std::size_t>(in.gcount())),
                h);
  }
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << h;
  return hex.str();
}

Json RunManifest::ToJson() const {
  Json j;
  j["tool_version"] = tool_version;
  j["command"] = command;
  j["args"] = args;
  j["config"] = config;
  Json in = Json::array();
  for (const auto& i : inputs) {
    in.push_back(Json{{"path", i.path}, {"fnv1a64", i.fnv1a64}});
  }
  j["inputs"] = std::move(in);
  j["seeds"] = seeds;
  j["outputs"] = outputs;
  return j;
}

RunManifest RunManifest::FromJson(const Json& j) {
  RunManifest m;
  try {
    m.tool_version = j.at("tool_version").get<std::string>();
    m.command = j.at("command").get<std::string>();
    m.args = j.at("args").get<std::vector<std::string>>();
    m.config = j.value("config", Json::object());
    for (const auto& i : j.at("inputs")) {
      m.inputs.push_back(
          {i.at("path").get<std::string>(), i.at("fnv1a64").get<std::string>()});
    }
    m.seeds = j.value("seeds", std::vector<std::uint64_t>{});
    m.outputs = j.value("outputs", std::vector<std::string>{});
  } catch (const Json::exception& e) {
    throw std::runtime_error(std::string("manifest: ") + e.what());
  }
  return m;
}

void WriteManifest(const RunManifest& manifest,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << manifest.ToJson().dump(2) << '\n';
}

RunManifest ReadManifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return RunManifest::FromJson(Json::parse(in));
  } catch (const Json::parse_error& e) {
    throw std::runtime_error("manifest: invalid JSON: " +
                             std::string(e.what()));
  }
}

std::filesystem::path ResolveOutputDir(const std::string& flag,
                                       const std::string& fallback) {
  if (!flag.empty()) return flag;
  if (const char* root = std::getenv("ADAPU_OUTPUT_ROOT"); root && *root) {
    return std::filesystem::path(root) / fallback;
  }
  return fallback;
}

}  // namespace adapu::cli
