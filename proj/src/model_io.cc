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


#include <fstream>
#include <sstream>
#include <string>

#include "adapu/booster.h"
#include "json.hpp"

namespace adapu {
namespace {

using Json = nlohmann::ordered_json;

const Json& Field(const Json& obj, const std::string& key,
                  const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ModelFormatError("model file: missing field '" + where + key + "'");
  }
  return obj.at(key);
}

double NumberField(const Json& obj, const std::string& key,
                   const std::string& where = "") {
  const Json& v = Field(obj, key, where);
  if (!v.is_number()) {
    throw ModelFormatError("model file: field '" + where + key +
                           "' must be a number");
  }
  return v.get<double>();
}

std::uint64_t UnsignedField(const Json& obj, const std::string& key,
                            const std::string& where = "") {
  const Json& v = Field(obj, key, where);
  if (!v.is_number_unsigned()) {
    throw ModelFormatError("model file: field '" + where + key +
                           "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string StringField(const Json& obj, const std::string& key,
                        const std::string& where = "") {
  const Json& v = Field(obj, key, where);
  if (!v.is_string()) {
    throw ModelFormatError("model file: field '" + where + key +
                           "' must be a string");
  }
  return v.get<std::string>();
}

template <typename Parse>
auto EnumField(const Json& obj, const std::string& key, Parse parse) {
  const std::string text = StringField(obj, key);
  try {
    return parse(text);
  } catch (const std::invalid_argument&) {
    throw ModelFormatError("model file: field '" + key +
                           "' has unknown value '" + text + "'");
  }
}

}  // namespace

std::string SerializeEnsemble(const Ensemble& ensemble) {
  const EnsembleMetadata& meta = ensemble.metadata();
  Json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["algorithm"] = std::string(AlgorithmName(meta.algorithm));
  doc["prior"] = meta.prior;
  doc["mode"] = std::string(NormalizationName(meta.mode));
  doc["strategy"] = std::string(ThresholdStrategyName(meta.strategy));
  doc["threshold_interval"] = std::string(ThresholdIntervalName(meta.interval));
  doc["beta"] = meta.beta;
  doc["K"] = meta.K;
  doc["seed"] = meta.seed;
  doc["rounds"] = meta.rounds;
  doc["dimension"] = meta.dimension;
  Json members = Json::array();
  for (const auto& m : ensemble.members()) {
    Json item;
    item["weight"] = m.weight;
    item["feature"] = m.stump.feature;
    item["threshold"] = m.stump.threshold;
    item["orientation"] = std::string(OrientationName(m.stump.orientation));
    members.push_back(std::move(item));
  }
  doc["members"] = std::move(members);
  return doc.dump(2) + "\n";
}

Ensemble DeserializeEnsemble(const std::string& json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw ModelFormatError(std::string("model file: invalid JSON: ") +
                           e.what());
  }
  if (!doc.is_object()) {
    throw ModelFormatError("model file: top level must be an object");
  }
  const auto version = UnsignedField(doc, "format_version");
  if (version != kModelFormatVersion) {
    throw ModelFormatError("model file: unsupported format_version " +
                           std::to_string(version));
  }
  EnsembleMetadata meta;
  meta.algorithm = doc.contains("algorithm")
                       ? EnumField(doc, "algorithm", ParseAlgorithm)
                       : Algorithm::kAdaPu;
  meta.prior = NumberField(doc, "prior");
  meta.mode = EnumField(doc, "mode", ParseNormalization);
  if (doc.contains("strategy")) {
    meta.strategy = EnumField(doc, "strategy", ParseThresholdStrategy);
  }
  if (doc.contains("threshold_interval")) {
    meta.interval =
        EnumField(doc, "threshold_interval", ParseThresholdInterval);
  }
  meta.beta = NumberField(doc, "beta");
  meta.K = static_cast<int>(UnsignedField(doc, "K"));
  meta.seed = UnsignedField(doc, "seed");
  if (doc.contains("rounds")) {
    meta.rounds = static_cast<int>(UnsignedField(doc, "rounds"));
  }
  if (doc.contains("dimension")) {
    meta.dimension = UnsignedField(doc, "dimension");
  }

  Ensemble ensemble(meta);
  const Json& members = Field(doc, "members", "");
  if (!members.is_array()) {
    throw ModelFormatError("model file: field 'members' must be an array");
  }
  for (std::size_t i = 0; i < members.size(); ++i) {
    const std::string where = "members[" + std::to_string(i) + "].";
    const Json& item = members[i];
    DecisionStump stump;
    stump.feature = UnsignedField(item, "feature", where);
    stump.threshold = NumberField(item, "threshold", where);
    const std::string orientation = StringField(item, "orientation", where);
    try {
      stump.orientation = ParseOrientation(orientation);
    } catch (const std::invalid_argument&) {
      throw ModelFormatError("model file: field '" + where +
                             "orientation' has unknown value '" + orientation +
                             "'");
    }
    if (meta.dimension != 0 && stump.feature >= meta.dimension) {
      throw ModelFormatError("model file: field '" + where +
                             "feature' exceeds the model dimension");
    }
    const double weight = NumberField(item, "weight", where);
    if (!(weight > 0.0)) {
      throw ModelFormatError("model file: field '" + where +
                             "weight' must be positive");
    }
    ensemble.Append(weight, stump);
  }
  return ensemble;
}

void SaveEnsemble(const Ensemble& ensemble, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << SerializeEnsemble(ensemble);
}

Ensemble LoadEnsemble(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return DeserializeEnsemble(buffer.str());
}

void WriteRoundLogCsv(std::span<const RoundLog> logs,
                      const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "round,feature,threshold,orientation,alpha,eps,E,Z,abstained,"
         "train_pu_risk,wall_time_ms,error\n";
  for (const auto& log : logs) {
    out << log.round << ',';
    if (log.stump) {
      out << log.stump->feature << ',' << FormatDouble(log.stump->threshold)
          << ',' << OrientationName(log.stump->orientation) << ',';
    } else {
      out << ",,,";
    }
    out << FormatDouble(log.alpha) << ',' << FormatDouble(log.eps) << ','
        << FormatDouble(log.E) << ',' << FormatDouble(log.Z) << ','
        << (log.abstained ? 1 : 0) << ',' << FormatDouble(log.train_pu_risk)
        << ',' << FormatDouble(log.wall_time_ms) << ',' << log.error << '\n';
  }
}

}  // namespace adapu
