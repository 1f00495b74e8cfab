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


#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "adapu/booster.h"
#include "adapu/cli.h"
#include "adapu/dataset.h"
#include "adapu/eval.h"

namespace adapu::cli {
namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct DatasetSpec {
  std::string name;
  LabeledDataset train;
  LabeledDataset test;
  double prior = 0.0;
  std::size_t n_p = 0;
  std::optional<std::size_t> n_n;
  std::vector<std::string> input_paths;
  std::string load_error;  // cells of a dataset that failed to load fail too
};

struct MethodSpec {
  std::string name;
  Algorithm algorithm = Algorithm::kAdaPu;
  bool external = false;
  Normalization mode = Normalization::kPerGroup;
  ThresholdStrategy strategy = ThresholdStrategy::kRandom;
  ThresholdInterval interval = ThresholdInterval::kWidened;
  // Beta per dataset name; "*" is the fallback. Empty optional means "cv".
  std::map<std::string, std::optional<double>> beta;
  std::string predictions;  // external only; {dataset} and {seed} expand
};

struct Spec {
  std::vector<std::uint64_t> seeds;
  int rounds = 100;
  int K = 10;
  int threads = 1;
  std::vector<DatasetSpec> datasets;
  std::vector<MethodSpec> methods;
  std::vector<std::string> sweep_methods;
  std::vector<double> sweep_grid;
};

struct Cell {
  std::size_t dataset = 0;
  std::size_t method = 0;
  std::uint64_t seed = 0;
  std::optional<double> sweep_beta;  // set for beta-sweep cells
};

struct CellResult {
  bool ok = false;
  std::string error;
  double beta = 0.0;
  std::size_t members = 0;
  EvalReport test;
  EvalReport train;  // PU rates for AdaPU, labeled error for AdaBoost
  std::vector<std::size_t> feature_usage;
};

std::string Slug(const std::string& s) {
  std::string out;
  for (char c : s) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) ||
                      c == '-' || c == '_' || c == '.';
    out += keep ? c : '_';
  }
  return out;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string Expand(std::string pattern, const std::string& dataset,
                   std::uint64_t seed) {
  auto replace = [&](const std::string& key, const std::string& value) {
    for (std::size_t at = pattern.find(key); at != std::string::npos;
         at = pattern.find(key, at + value.size())) {
      pattern.replace(at, key.size(), value);
    }
  };
  replace("{dataset}", dataset);
  replace("{seed}", std::to_string(seed));
  return pattern;
}

LabeledDataset LoadSource(const Json& j, const fs::path& base,
                          std::vector<std::string>& inputs) {
  const fs::path path = base / j.at("path").get<std::string>();
  inputs.push_back(path.string());
  const std::string format = j.value("format", "csv");
  if (format == "sparse") {
    return LoadSparseText(path, j.at("dimension").get<std::size_t>());
  }
  if (format != "csv") throw UsageError("unknown format '" + format + "'");
  CsvOptions options;
  options.has_header = j.value("header", true);
  if (j.contains("label_column")) {
    const Json& col = j["label_column"];
    options.label_column = col.is_number()
                               ? ColumnRef{std::nullopt, col.get<std::size_t>()}
                               : ColumnRef::Parse(col.get<std::string>());
  }
  options.positive_label = j.value("positive_label", "1");
  return LoadCsv(path, options);
}

Spec ParseSpec(const fs::path& spec_path) {
  std::ifstream in(spec_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + spec_path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw UsageError("benchmark spec: " + std::string(e.what()));
  }
  const fs::path base = spec_path.parent_path();
  Spec spec;
  try {
    spec.seeds = j.value("seeds", std::vector<std::uint64_t>{1, 2, 3, 4, 5});
    spec.rounds = j.value("rounds", 100);
    spec.K = j.value("K", 10);
    spec.threads = j.value("threads", 1);
    for (const Json& d : j.at("datasets")) {
      DatasetSpec ds;
      ds.name = d.at("name").get<std::string>();
      try {
        LabeledDataset all = LoadSource(d.at("train"), base, ds.input_paths);
        if (d.contains("test")) {
          ds.train = std::move(all);
          ds.test = LoadSource(d["test"], base, ds.input_paths);
        } else if (d.contains("split_head")) {
          std::tie(ds.train, ds.test) =
              SplitHeadTail(all, d["split_head"].get<std::size_t>());
        } else if (d.contains("split_random")) {
          const Json& s = d["split_random"];
          std::tie(ds.train, ds.test) =
              ShuffleSplit(all, s.at("train").get<std::size_t>(),
                           s.value("seed", std::uint64_t{0}));
        } else {
          throw UsageError("dataset '" + ds.name +
                           "' needs one of test, split_head, split_random");
        }
        if (d.contains("train_limit")) {
          const auto limit = d["train_limit"].get<std::size_t>();
          if (limit < ds.train.size()) {
            ds.train = SplitHeadTail(ds.train, limit).first;
          }
        }
      } catch (const DataError& e) {
        ds.load_error = e.what();
      }
      ds.prior = d.at("prior").get<double>();
      ds.n_p = d.at("n_p").get<std::size_t>();
      if (d.contains("n_n")) ds.n_n = d["n_n"].get<std::size_t>();
      spec.datasets.push_back(std::move(ds));
    }
    for (const Json& m : j.at("methods")) {
      MethodSpec ms;
      ms.name = m.at("name").get<std::string>();
      const std::string algo = m.value("algorithm", "adapu");
      if (algo == "external") {
        ms.external = true;
        ms.predictions = m.at("predictions").get<std::string>();
        if (fs::path(ms.predictions).is_relative()) {
          ms.predictions = (base / ms.predictions).string();
        }
      } else {
        ms.algorithm = ParseAlgorithm(algo);
      }
      ms.mode = ParseNormalization(m.value("mode", "per-group"));
      ms.strategy = ParseThresholdStrategy(m.value("thresholds", "random"));
      ms.interval = ParseThresholdInterval(m.value("interval", "widened"));
      const Json beta = m.value("beta", Json(1.0));
      auto beta_of = [](const Json& b) -> std::optional<double> {
        if (b.is_string() && b.get<std::string>() == "cv") return std::nullopt;
        return b.get<double>();
      };
      if (beta.is_object()) {
        for (const auto& [key, value] : beta.items()) {
          ms.beta[key] = beta_of(value);
        }
      } else {
        ms.beta["*"] = beta_of(beta);
      }
      spec.methods.push_back(std::move(ms));
    }
    if (j.contains("beta_sweep")) {
      const Json& s = j["beta_sweep"];
      spec.sweep_methods = s.at("methods").get<std::vector<std::string>>();
      spec.sweep_grid = s.value("grid", DefaultBetaGrid());
    }
  } catch (const Json::exception& e) {
    throw UsageError("benchmark spec: " + std::string(e.what()));
  } catch (const std::invalid_argument& e) {
    throw UsageError("benchmark spec: " + std::string(e.what()));
  }
  if (spec.seeds.empty()) throw UsageError("benchmark spec: no seeds");
  for (const auto& name : spec.sweep_methods) {
    const bool known =
        std::any_of(spec.methods.begin(), spec.methods.end(),
                    [&](const MethodSpec& m) { return m.name == name; });
    if (!known) throw UsageError("beta_sweep names unknown method " + name);
  }
  return spec;
}

std::optional<double> BetaFor(const MethodSpec& m, const std::string& dataset) {
  if (auto it = m.beta.find(dataset); it != m.beta.end()) return it->second;
  if (auto it = m.beta.find("*"); it != m.beta.end()) return it->second;
  return 1.0;
}

// One label per line (+1/-1, 1/-1 or 1/0), optional header.
std::vector<int> ReadPredictions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open predictions " + path);
  std::vector<int> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string cell = line.substr(0, line.find(','));
    if (cell == "1" || cell == "+1") {
      out.push_back(1);
    } else if (cell == "-1" || cell == "0") {
      out.push_back(-1);
    } else if (line_no == 1) {
      continue;  // header
    } else {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": bad prediction '" + cell + "'");
    }
  }
  return out;
}

CellResult RunCell(const Spec& spec, const Cell& cell,
                   const fs::path& model_dir) {
  const DatasetSpec& ds = spec.datasets[cell.dataset];
  const MethodSpec& method = spec.methods[cell.method];
  CellResult r;
  if (!ds.load_error.empty()) throw std::runtime_error(ds.load_error);
  if (method.external) {
    const std::vector<int> pred =
        ReadPredictions(Expand(method.predictions, ds.name, cell.seed));
    if (pred.size() != ds.test.size()) {
      throw std::runtime_error("predictions have " +
                               std::to_string(pred.size()) + " rows, test has " +
                               std::to_string(ds.test.size()));
    }
    std::size_t correct = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      correct += pred[i] == ds.test.labels[i];
    }
    const double acc = static_cast<double>(correct) /
                       static_cast<double>(pred.size());
    r.test.final.accuracy = acc;
    r.test.final.zero_one_loss = 1.0 - acc;
    r.ok = true;
    return r;
  }

  TrainConfig config;
  config.rounds = spec.rounds;
  config.K = spec.K;
  config.threads = spec.threads;
  config.mode = method.mode;
  config.strategy = method.strategy;
  config.interval = method.interval;
  config.seed = cell.seed;

  TrainResult result;
  if (method.algorithm == Algorithm::kAdaPu) {
    const PUDataset pu = MakePu(ds.train, ds.n_p, ds.prior, cell.seed);
    std::optional<double> beta =
        cell.sweep_beta ? cell.sweep_beta : BetaFor(method, ds.name);
    if (!beta) {
      const auto grid = DefaultBetaGrid();
      beta = CrossValidateBeta(pu, grid, config, SplitSpec{5, cell.seed})
                 .best_beta;
    }
    config.beta = *beta;
    config.Validate();
    result = TrainAdaPu(pu, config);
    r.train = EvaluatePuTrain(result.ensemble, pu, true);
  } else {
    const std::size_t n_n = ds.n_n ? *ds.n_n : PnNegativeCount(ds.prior, ds.n_p);
    const LabeledDataset pn = MakePnSample(ds.train, ds.n_p, n_n, cell.seed);
    config.beta = cell.sweep_beta ? *cell.sweep_beta
                                  : BetaFor(method, ds.name).value_or(1.0);
    config.Validate();
    result = TrainAdaBoost(pn, config);
    r.train = EvaluateLabeled(result.ensemble, pn, true);
  }
  if (!result.ok()) {
    throw std::runtime_error(result.logs.empty() ? "training failed"
                                                 : result.logs.back().error);
  }
  r.beta = config.beta;
  r.members = result.ensemble.size();
  r.test = EvaluateLabeled(result.ensemble, ds.test, true);
  r.feature_usage = FeatureUsageOf(result.ensemble, ds.train.dims()).counts;

  fs::create_directories(model_dir);
  std::string stem = "seed_" + std::to_string(cell.seed);
  if (cell.sweep_beta) stem += "_beta_" + FormatDouble(*cell.sweep_beta);
  SaveEnsemble(result.ensemble, model_dir / (stem + ".json"));
  r.ok = true;
  return r;
}

std::string MeanStd(std::span<const double> values) {
  if (values.empty()) return "n/a";
  const Summary s = Summarize(values);
  std::ostringstream out;
  out << std::fixed << std::setprecision(2) << 100.0 * s.mean << " ("
      << 100.0 * s.std << ")";
  return out.str();
}

}  // namespace

int RunBenchmark(const fs::path& spec_path, const fs::path& out_dir, int jobs,
                 const std::vector<std::string>& args, std::ostream& out,
                 std::ostream& err) {
  const Spec spec = ParseSpec(spec_path);
  fs::create_directories(out_dir);

  RunManifest manifest;
  manifest.command = "benchmark";
  manifest.args = args;
  {
    std::ifstream in(spec_path, std::ios::binary);
    manifest.config = Json::parse(in);
  }
  manifest.inputs.push_back({spec_path.string(), FingerprintFile(spec_path)});
  for (const auto& ds : spec.datasets) {
    for (const auto& p : ds.input_paths) {
      manifest.inputs.push_back({p, FingerprintFile(p)});
    }
  }
  manifest.seeds = spec.seeds;
  for (const char* f : {"runs.csv", "table.md", "table.csv", "curves.csv",
                        "feature_usage.csv", "beta_sweep.csv"}) {
    manifest.outputs.push_back((out_dir / f).string());
  }
  manifest.tool_version = ToolVersion();
  WriteManifest(manifest, out_dir / "manifest.json");

  std::vector<Cell> cells;
  for (std::size_t d = 0; d < spec.datasets.size(); ++d) {
    for (std::size_t m = 0; m < spec.methods.size(); ++m) {
      for (std::uint64_t seed : spec.seeds) cells.push_back({d, m, seed, {}});
    }
  }
  const std::size_t main_cells = cells.size();
  for (std::size_t d = 0; d < spec.datasets.size(); ++d) {
    for (std::size_t m = 0; m < spec.methods.size(); ++m) {
      if (std::find(spec.sweep_methods.begin(), spec.sweep_methods.end(),
                    spec.methods[m].name) == spec.sweep_methods.end()) {
        continue;
      }
      for (double beta : spec.sweep_grid) {
        for (std::uint64_t seed : spec.seeds) {
          cells.push_back({d, m, seed, beta});
        }
      }
    }
  }

  std::vector<CellResult> results(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const Cell& c = cells[i];
      const fs::path model_dir =
          out_dir / "models" / Slug(spec.datasets[c.dataset].name) /
          Slug(spec.methods[c.method].name);
      try {
        results[i] = RunCell(spec, c, model_dir);
      } catch (const std::exception& e) {
        results[i].ok = false;
        results[i].error = e.what();
        std::lock_guard lock(log_mutex);
        err << "cell " << spec.datasets[c.dataset].name << " / "
            << spec.methods[c.method].name << " / seed " << c.seed
            << " failed: " << e.what() << '\n';
      }
    }
  };
  {
    const int n = std::max(1, std::min<int>(jobs, static_cast<int>(cells.size())));
    std::vector<std::jthread> pool;
    for (int t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
  }

  // runs.csv and curves.csv: one row per cell, in cell order.
  std::ofstream runs(out_dir / "runs.csv", std::ios::binary);
  runs << "dataset,method,seed,beta,status,members,test_accuracy,"
          "train_zero_one_loss,positives_as_positive,unlabeled_as_negative,"
          "error\n";
  std::ofstream curves(out_dir / "curves.csv", std::ios::binary);
  WriteCurveHeader(curves);
  std::ofstream usage(out_dir / "feature_usage.csv", std::ios::binary);
  usage << "dataset,method,feature,feature_name,count\n";

  std::size_t failures = 0;
  auto opt = [](const std::optional<double>& v) {
    return v ? FormatDouble(*v) : std::string();
  };
  for (std::size_t i = 0; i < main_cells; ++i) {
    const Cell& c = cells[i];
    const CellResult& r = results[i];
    const std::string& dname = spec.datasets[c.dataset].name;
    const std::string& mname = spec.methods[c.method].name;
    failures += !r.ok;
    runs << CsvField(dname) << ',' << CsvField(mname) << ',' << c.seed << ','
         << (r.ok && !spec.methods[c.method].external ? FormatDouble(r.beta) : "")
         << ',' << (r.ok ? "ok" : "FAILED") << ',' << r.members << ','
         << opt(r.test.final.accuracy) << ','
         << opt(r.train.final.zero_one_loss) << ','
         << opt(r.train.final.positives_as_positive_rate) << ','
         << opt(r.train.final.unlabeled_as_negative_rate) << ','
         << CsvField(r.error) << '\n';
    if (!r.ok) continue;
    WriteCurveRows(curves, r.test, "test_", c.seed, CsvField(dname),
                   CsvField(mname));
    WriteCurveRows(curves, r.train, "train_", c.seed, CsvField(dname),
                   CsvField(mname));
  }

  // Feature usage summed over seeds.
  for (std::size_t d = 0; d < spec.datasets.size(); ++d) {
    const auto& ds = spec.datasets[d];
    for (std::size_t m = 0; m < spec.methods.size(); ++m) {
      if (spec.methods[m].external) continue;
      std::vector<std::size_t> total(ds.train.dims(), 0);
      for (std::size_t i = 0; i < main_cells; ++i) {
        if (cells[i].dataset != d || cells[i].method != m || !results[i].ok) {
          continue;
        }
        for (std::size_t f = 0; f < total.size(); ++f) {
          total[f] += results[i].feature_usage[f];
        }
      }
      for (std::size_t f = 0; f < total.size(); ++f) {
        const std::string fname =
            f < ds.train.feature_names.size() ? ds.train.feature_names[f]
                                              : "x" + std::to_string(f + 1);
        usage << CsvField(ds.name) << ',' << CsvField(spec.methods[m].name)
              << ',' << f << ',' << CsvField(fname) << ',' << total[f] << '\n';
      }
    }
  }

  // Aggregate table: datasets as rows, methods as columns.
  std::ofstream md(out_dir / "table.md", std::ios::binary);
  std::ofstream tcsv(out_dir / "table.csv", std::ios::binary);
  md << "| Dataset |";
  tcsv << "dataset";
  for (const auto& m : spec.methods) {
    md << ' ' << m.name << " |";
    tcsv << ',' << CsvField(m.name);
  }
  md << "\n|---|";
  tcsv << '\n';
  for (std::size_t m = 0; m < spec.methods.size(); ++m) md << "---|";
  md << '\n';
  for (std::size_t d = 0; d < spec.datasets.size(); ++d) {
    md << "| " << spec.datasets[d].name << " |";
    tcsv << CsvField(spec.datasets[d].name);
    for (std::size_t m = 0; m < spec.methods.size(); ++m) {
      std::vector<double> acc;
      bool failed = false;
      for (std::size_t i = 0; i < main_cells; ++i) {
        if (cells[i].dataset != d || cells[i].method != m) continue;
        if (!results[i].ok) {
          failed = true;
        } else {
          acc.push_back(*results[i].test.final.accuracy);
        }
      }
      std::string text = MeanStd(acc);
      if (failed) text += " *";
      md << ' ' << text << " |";
      tcsv << ',' << CsvField(text);
    }
    md << '\n';
    tcsv << '\n';
  }
  md << "\nTest accuracy in %, mean (std) over " << spec.seeds.size()
     << " seeds.";
  if (failures) md << " * marks cells with failed runs (see runs.csv).";
  md << '\n';

  // Beta sweep: mean test accuracy per (dataset, method, beta).
  std::ofstream sweep(out_dir / "beta_sweep.csv", std::ios::binary);
  sweep << "dataset,method,beta,mean_accuracy,std_accuracy,runs,failed\n";
  std::map<std::tuple<std::size_t, std::size_t, double>,
           std::pair<std::vector<double>, std::size_t>>
      sweep_groups;
  for (std::size_t i = main_cells; i < cells.size(); ++i) {
    auto& g = sweep_groups[{cells[i].dataset, cells[i].method,
                            *cells[i].sweep_beta}];
    if (results[i].ok) {
      g.first.push_back(*results[i].test.final.accuracy);
    } else {
      ++g.second;
      ++failures;
    }
  }
  for (const auto& [key, g] : sweep_groups) {
    const auto& [d, m, beta] = key;
    sweep << CsvField(spec.datasets[d].name) << ','
          << CsvField(spec.methods[m].name) << ',' << FormatDouble(beta) << ',';
    if (!g.first.empty()) {
      const Summary s = Summarize(g.first);
      sweep << FormatDouble(s.mean) << ',' << FormatDouble(s.std);
    } else {
      sweep << ',';
    }
    sweep << ',' << g.first.size() << ',' << g.second << '\n';
  }

  {
    std::ifstream table(out_dir / "table.md");
    out << table.rdbuf();
  }
  out << cells.size() << " runs, " << failures << " failed; results in "
      << out_dir.string() << '\n';
  return failures ? kExitFailure : kExitOk;
}

}  // namespace adapu::cli
