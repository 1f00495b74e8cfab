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


#include "adapu/cli.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "adapu/booster.h"
#include "adapu/dataset.h"
#include "adapu/eval.h"

namespace adapu::cli {
namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct DataFlags {
  std::string labeled;
  std::string positives;
  std::string unlabeled;
  std::string format = "csv";
  std::size_t dimension = 0;
  std::string label_column;
  std::string positive_label = "1";
  bool no_header = false;
  std::string rows;  // "BEGIN:END", END optional
  bool make_pu = false;
  bool make_pn = false;
  std::size_t n_p = 0;
  std::size_t n_n = 0;
  double prior = 0.0;
};

struct TrainFlags {
  std::string algorithm = "adapu";
  int rounds = 100;
  double beta = 1.0;
  int K = 10;
  std::string mode = "per-group";
  std::string thresholds = "random";
  std::string interval = "widened";
  std::uint64_t seed = 0;
  bool no_stop = false;
  bool no_rescale = false;
  int threads = 1;
};

void AddInputFlags(CLI::App* cmd, DataFlags& f) {
  cmd->add_option("--labeled", f.labeled, "Labeled data file");
  cmd->add_option("--pu-positives", f.positives,
                  "Feature-only CSV of positive instances");
  cmd->add_option("--pu-unlabeled", f.unlabeled,
                  "Feature-only CSV of unlabeled instances");
  cmd->add_option("--format", f.format, "Labeled file format")
      ->check(CLI::IsMember({"csv", "sparse"}));
  cmd->add_option("--dimension", f.dimension,
                  "Feature count for the sparse text format");
  cmd->add_option("--label-column", f.label_column,
                  "Label column name or 0-based index (default: last)");
  cmd->add_option("--positive-label", f.positive_label,
                  "Raw label value mapped to +1");
  cmd->add_flag("--no-header", f.no_header, "CSV files have no header row");
  cmd->add_option("--rows", f.rows,
                  "Row range BEGIN:END of the labeled file (END optional)");
}

void AddSamplingFlags(CLI::App* cmd, DataFlags& f) {
  cmd->add_flag("--make-pu", f.make_pu,
                "Sample n_p positives and use every row as unlabeled");
  cmd->add_flag("--make-pn", f.make_pn,
                "Sample a PN counterpart (AdaBoost baseline)");
  cmd->add_option("--n-p", f.n_p, "Number of labeled positives to sample");
  cmd->add_option("--n-n", f.n_n,
                  "Negatives for --make-pn (default: formula from the prior)");
}

void AddTrainFlags(CLI::App* cmd, TrainFlags& t) {
  cmd->add_option("--rounds,-T", t.rounds, "Boosting rounds");
  cmd->add_option("--beta", t.beta, "Shrinkage in (0, 1]");
  cmd->add_option("-K,--thresholds-per-feature", t.K,
                  "Candidate thresholds per feature");
  cmd->add_option("--mode", t.mode, "per-group or over-all");
  cmd->add_option("--thresholds", t.thresholds, "random or even");
  cmd->add_option("--threshold-interval", t.interval,
                  "widened or pseudocode");
  cmd->add_option("--seed", t.seed, "Root seed for every random stream");
  cmd->add_flag("--no-stop-on-nonpositive-z", t.no_stop,
                "Keep boosting when the total weight is <= 0");
  cmd->add_flag("--no-rescale", t.no_rescale,
                "Disable per-round weight rescaling");
  cmd->add_option("--threads", t.threads, "Stump-search threads");
}

TrainConfig ToConfig(const TrainFlags& t) {
  TrainConfig c;
  try {
    c.rounds = t.rounds;
    c.beta = t.beta;
    c.K = t.K;
    c.mode = ParseNormalization(t.mode);
    c.strategy = ParseThresholdStrategy(t.thresholds);
    c.interval = ParseThresholdInterval(t.interval);
    c.seed = t.seed;
    c.stop_on_nonpositive_total = !t.no_stop;
    c.rescale_weights = !t.no_rescale;
    c.threads = t.threads;
    c.Validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return c;
}

Json ConfigJson(const TrainConfig& c) {
  Json j;
  j["rounds"] = c.rounds;
  j["beta"] = c.beta;
  j["K"] = c.K;
  j["mode"] = std::string(NormalizationName(c.mode));
  j["thresholds"] = std::string(ThresholdStrategyName(c.strategy));
  j["threshold_interval"] = std::string(ThresholdIntervalName(c.interval));
  j["seed"] = c.seed;
  j["stop_on_nonpositive_total"] = c.stop_on_nonpositive_total;
  j["rescale_weights"] = c.rescale_weights;
  j["threads"] = c.threads;
  return j;
}

Json DataJson(const DataFlags& f) {
  Json j;
  if (!f.labeled.empty()) {
    j["labeled"] = f.labeled;
    j["format"] = f.format;
    if (f.format == "sparse") j["dimension"] = f.dimension;
    j["label_column"] = f.label_column.empty() ? "<last>" : f.label_column;
    j["positive_label"] = f.positive_label;
    j["rows"] = f.rows.empty() ? "all" : f.rows;
  }
  if (!f.positives.empty()) j["pu_positives"] = f.positives;
  if (!f.unlabeled.empty()) j["pu_unlabeled"] = f.unlabeled;
  j["header"] = !f.no_header;
  j["make_pu"] = f.make_pu;
  j["make_pn"] = f.make_pn;
  j["n_p"] = f.n_p;
  j["n_n"] = f.n_n;
  j["prior"] = f.prior;
  return j;
}

std::pair<std::size_t, std::size_t> ParseRows(const std::string& text,
                                              std::size_t n) {
  if (text.empty()) return {0, n};
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw UsageError("--rows expects BEGIN:END");
  }
  auto parse = [&](std::string_view s, std::size_t fallback) {
    if (s.empty()) return fallback;
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw UsageError("--rows: bad number '" + std::string(s) + "'");
    }
    return v;
  };
  const std::string_view view(text);
  const std::size_t begin = parse(view.substr(0, colon), 0);
  const std::size_t end = std::min(parse(view.substr(colon + 1), n), n);
  if (begin >= end) throw UsageError("--rows selects no rows");
  return {begin, end};
}

LabeledDataset LoadLabeledFile(const DataFlags& f) {
  LabeledDataset data;
  if (f.format == "sparse") {
    if (f.dimension == 0) {
      throw UsageError("--format sparse requires --dimension");
    }
    data = LoadSparseText(f.labeled, f.dimension);
  } else {
    CsvOptions options;
    options.has_header = !f.no_header;
    if (!f.label_column.empty()) {
      options.label_column = ColumnRef::Parse(f.label_column);
    }
    options.positive_label = f.positive_label;
    data = LoadCsv(f.labeled, options);
  }
  const auto [begin, end] = ParseRows(f.rows, data.size());
  if (begin == 0 && end == data.size()) return data;
  std::vector<std::size_t> idx(end - begin);
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = begin + i;
  return data.SelectRows(idx);
}

bool HasPuFiles(const DataFlags& f) {
  return !f.positives.empty() || !f.unlabeled.empty();
}

PUDataset LoadPu(const DataFlags& f, std::uint64_t seed) {
  if (HasPuFiles(f)) {
    if (f.positives.empty() || f.unlabeled.empty()) {
      throw UsageError("--pu-positives and --pu-unlabeled go together");
    }
    PUDataset pu;
    pu.positives = LoadFeatureCsv(f.positives, !f.no_header);
    pu.unlabeled = LoadFeatureCsv(f.unlabeled, !f.no_header);
    pu.prior = f.prior;
    pu.Validate();
    return pu;
  }
  if (f.labeled.empty() || !f.make_pu) {
    throw UsageError(
        "PU input needs --pu-positives/--pu-unlabeled or --labeled with "
        "--make-pu");
  }
  if (f.n_p == 0) throw UsageError("--make-pu requires --n-p");
  return MakePu(LoadLabeledFile(f), f.n_p, f.prior, seed);
}

void CheckPrior(double prior) {
  if (!(prior > 0.0 && prior < 1.0)) {
    throw UsageError("--prior must lie strictly inside (0, 1)");
  }
}

std::vector<RunManifest::Input> InputsOf(const DataFlags& f) {
  std::vector<RunManifest::Input> out;
  for (const auto* p : {&f.labeled, &f.positives, &f.unlabeled}) {
    if (!p->empty()) out.push_back({*p, FingerprintFile(*p)});
  }
  return out;
}

std::string Fmt(double v, int precision = 6) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

void PrintMetric(std::ostream& out, const char* name,
                 const std::optional<double>& v) {
  if (v) out << "  " << std::left << std::setw(24) << name << Fmt(*v) << '\n';
}

Json MetricJson(const MetricPoint& p) {
  Json j;
  if (p.accuracy) j["accuracy"] = *p.accuracy;
  if (p.zero_one_loss) j["zero_one_loss"] = *p.zero_one_loss;
  if (p.positives_as_positive_rate) {
    j["positives_as_positive_rate"] = *p.positives_as_positive_rate;
  }
  if (p.unlabeled_as_negative_rate) {
    j["unlabeled_as_negative_rate"] = *p.unlabeled_as_negative_rate;
  }
  return j;
}

// --- train ---------------------------------------------------------------

int CmdTrain(const DataFlags& data_flags, const TrainFlags& train_flags,
             const std::string& out_flag,
             const std::vector<std::string>& args, std::ostream& out) {
  const TrainConfig config = ToConfig(train_flags);
  const Algorithm algorithm = [&] {
    try {
      return ParseAlgorithm(train_flags.algorithm);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();
  if (algorithm == Algorithm::kAdaPu) CheckPrior(data_flags.prior);
  if (algorithm == Algorithm::kAdaBoost) {
    if (data_flags.labeled.empty()) {
      throw UsageError("--algorithm adaboost needs --labeled");
    }
    if (data_flags.make_pn) {
      CheckPrior(data_flags.prior);
      if (data_flags.n_p == 0) throw UsageError("--make-pn requires --n-p");
    }
  }

  const fs::path dir = ResolveOutputDir(out_flag, "adapu_train");
  fs::create_directories(dir);
  RunManifest manifest;
  manifest.command = "train";
  manifest.args = args;
  manifest.config = ConfigJson(config);
  manifest.config["algorithm"] = std::string(AlgorithmName(algorithm));
  manifest.config["data"] = DataJson(data_flags);
  manifest.inputs = InputsOf(data_flags);
  manifest.seeds = {config.seed};
  manifest.outputs = {(dir / "model.json").string(),
                      (dir / "rounds.csv").string()};
  manifest.tool_version = ToolVersion();
  WriteManifest(manifest, dir / "manifest.json");

  TrainResult result;
  if (algorithm == Algorithm::kAdaPu) {
    const PUDataset pu = LoadPu(data_flags, config.seed);
    result = TrainAdaPu(pu, config);
  } else {
    LabeledDataset data = LoadLabeledFile(data_flags);
    if (data_flags.make_pn) {
      const std::size_t n_n =
          data_flags.n_n ? data_flags.n_n
                         : PnNegativeCount(data_flags.prior, data_flags.n_p);
      data = MakePnSample(data, data_flags.n_p, n_n, config.seed);
    }
    result = TrainAdaBoost(data, config);
  }
  SaveEnsemble(result.ensemble, dir / "model.json");
  WriteRoundLogCsv(result.logs, dir / "rounds.csv");

  const std::size_t abstained = static_cast<std::size_t>(
      std::count_if(result.logs.begin(), result.logs.end(),
                    [](const RoundLog& l) { return l.abstained; }));
  out << "rounds run:      " << result.logs.size() << '\n'
      << "members:         " << result.ensemble.size() << '\n'
      << "abstained:       " << abstained << '\n';
  if (!result.logs.empty()) {
    out << (algorithm == Algorithm::kAdaPu ? "train PU risk:   "
                                           : "train error:     ")
        << Fmt(result.logs.back().train_pu_risk) << '\n';
  }
  switch (result.stop) {
    case StopReason::kCompleted:
      break;
    case StopReason::kNonPositiveTotal:
      out << "stopped early: total weight became non-positive\n";
      break;
    case StopReason::kWeightOverflow:
      out << "aborted: weight overflow\n";
      break;
  }
  out << "model written to " << (dir / "model.json").string() << '\n';
  return result.ok() ? kExitOk : kExitFailure;
}

// --- cv ------------------------------------------------------------------

int CmdCv(const DataFlags& data_flags, const TrainFlags& train_flags,
          std::vector<double> grid, std::size_t folds,
          const std::string& out_flag, const std::vector<std::string>& args,
          std::ostream& out) {
  TrainFlags base = train_flags;
  const TrainConfig config = ToConfig(base);
  CheckPrior(data_flags.prior);
  if (folds < 2) throw UsageError("--folds must be at least 2");
  if (grid.empty()) grid = DefaultBetaGrid();
  for (double b : grid) {
    if (!(b > 0.0 && b <= 1.0)) {
      throw UsageError("grid value " + Fmt(b) + " outside (0, 1]");
    }
  }

  const fs::path dir = ResolveOutputDir(out_flag, "adapu_cv");
  fs::create_directories(dir);
  RunManifest manifest;
  manifest.command = "cv";
  manifest.args = args;
  manifest.config = ConfigJson(config);
  manifest.config["grid"] = grid;
  manifest.config["folds"] = folds;
  manifest.config["data"] = DataJson(data_flags);
  manifest.inputs = InputsOf(data_flags);
  manifest.seeds = {config.seed};
  manifest.outputs = {(dir / "cv.csv").string()};
  manifest.tool_version = ToolVersion();
  WriteManifest(manifest, dir / "manifest.json");

  const PUDataset pu = LoadPu(data_flags, config.seed);
  const CvResult cv =
      CrossValidateBeta(pu, grid, config, SplitSpec{folds, config.seed});

  std::ofstream csv(dir / "cv.csv", std::ios::binary);
  csv << "beta,mean_risk,std_risk";
  for (std::size_t k = 0; k < folds; ++k) csv << ",fold_" << k + 1;
  csv << '\n';
  out << std::left << std::setw(10) << "beta" << std::setw(14) << "mean risk"
      << "std\n";
  for (const auto& row : cv.table) {
    csv << FormatDouble(row.beta) << ',' << FormatDouble(row.mean_risk) << ','
        << FormatDouble(row.std_risk);
    for (double r : row.fold_risks) csv << ',' << FormatDouble(r);
    csv << '\n';
    out << std::left << std::setw(10) << Fmt(row.beta) << std::setw(14)
        << Fmt(row.mean_risk) << Fmt(row.std_risk) << '\n';
  }
  out << "best beta: " << Fmt(cv.best_beta) << '\n';
  return kExitOk;
}

// --- evaluate ------------------------------------------------------------

int CmdEvaluate(const DataFlags& data_flags, const std::string& model_path,
                const std::string& sweep_path, bool as_json,
                std::ostream& out) {
  if (model_path.empty()) throw UsageError("--model is required");
  const Ensemble model = LoadEnsemble(model_path);
  EvalReport report;
  const bool sweep = !sweep_path.empty();
  std::string prefix;
  if (HasPuFiles(data_flags)) {
    CheckPrior(data_flags.prior);
    report = EvaluatePuTrain(model, LoadPu(data_flags, model.metadata().seed),
                             sweep);
    prefix = "train_";
  } else if (!data_flags.labeled.empty()) {
    if (data_flags.make_pu) {
      CheckPrior(data_flags.prior);
      report = EvaluatePuTrain(
          model, LoadPu(data_flags, model.metadata().seed), sweep);
      prefix = "train_";
    } else {
      report = EvaluateLabeled(model, LoadLabeledFile(data_flags), sweep);
      prefix = "test_";
    }
  } else {
    throw UsageError("evaluate needs --labeled or --pu-positives/--pu-unlabeled");
  }

  if (sweep) {
    std::ofstream curve(sweep_path, std::ios::binary);
    if (!curve) throw std::runtime_error("cannot write " + sweep_path);
    WriteCurveHeader(curve);
    WriteCurveRows(curve, report, prefix, 0, "input", "model");
  }
  if (as_json) {
    Json j = MetricJson(report.final);
    j["members"] = model.size();
    out << j.dump(2) << '\n';
  } else {
    out << "members: " << model.size() << '\n';
    PrintMetric(out, "accuracy", report.final.accuracy);
    PrintMetric(out, "zero_one_loss", report.final.zero_one_loss);
    PrintMetric(out, "positives_as_positive", report.final.positives_as_positive_rate);
    PrintMetric(out, "unlabeled_as_negative", report.final.unlabeled_as_negative_rate);
  }
  return kExitOk;
}

// --- replay --------------------------------------------------------------

int CmdReplay(const std::string& manifest_path, const std::string& out_flag,
              std::ostream& out, std::ostream& err) {
  const RunManifest manifest = ReadManifest(manifest_path);
  for (const auto& input : manifest.inputs) {
    const std::string now = FingerprintFile(input.path);
    if (now != input.fnv1a64) {
      err << "warning: " << input.path << " changed since the original run ("
          << input.fnv1a64 << " -> " << (now.empty() ? "missing" : now)
          << ")\n";
    }
  }
  std::vector<std::string> args = manifest.args;
  if (out_flag.empty()) throw UsageError("replay requires --out");
  bool replaced = false;
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] == "--out") {
      args[i + 1] = out_flag;
      replaced = true;
    }
  }
  if (!replaced) {
    args.push_back("--out");
    args.push_back(out_flag);
  }
  return Run(args, out, err);
}

// --- plot ----------------------------------------------------------------

struct CurveKey {
  std::string dataset, method;
  std::size_t round;
  auto operator<=>(const CurveKey&) const = default;
};

int CmdPlot(const std::string& curves_path, const std::string& metric,
            const std::string& out_path, const std::string& format) {
  std::ifstream in(curves_path);
  if (!in) throw std::runtime_error("cannot open " + curves_path);
  std::string line;
  std::getline(in, line);
  if (line.rfind("round,metric,value,trial,dataset", 0) != 0) {
    throw std::runtime_error(curves_path + ": not a curve CSV");
  }
  std::map<CurveKey, std::vector<double>> groups;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() < 5 || cells[1] != metric) continue;
    CurveKey key{cells[4], cells.size() > 5 ? cells[5] : "",
                 std::stoul(cells[0])};
    groups[key].push_back(std::stod(cells[2]));
  }
  if (groups.empty()) {
    throw std::runtime_error("no rows for metric '" + metric + "'");
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  if (format == "vega-lite") {
    Json values = Json::array();
    for (const auto& [key, v] : groups) {
      const Summary s = Summarize(v);
      values.push_back(Json{{"dataset", key.dataset},
                            {"method", key.method},
                            {"round", key.round},
                            {"mean", s.mean},
                            {"lower", s.mean - s.std},
                            {"upper", s.mean + s.std}});
    }
    Json spec;
    spec["$schema"] = "https://vega.github.io/schema/vega-lite/v5.json";
    spec["data"] = Json{{"values", values}};
    spec["facet"] = Json{{"field", "dataset"}, {"type", "nominal"}};
    const Json x{{"field", "round"}, {"type", "quantitative"}};
    const Json color{{"field", "method"}, {"type", "nominal"}};
    Json band;
    band["mark"] = Json{{"type", "errorband"}};
    band["encoding"] = Json{{"x", x},
                            {"y", Json{{"field", "lower"},
                                       {"type", "quantitative"},
                                       {"title", metric}}},
                            {"y2", Json{{"field", "upper"}}},
                            {"color", color}};
    Json mean_line;
    mean_line["mark"] = "line";
    mean_line["encoding"] = Json{
        {"x", x},
        {"y", Json{{"field", "mean"}, {"type", "quantitative"}}},
        {"color", color}};
    spec["spec"] = Json{{"layer", Json::array({band, mean_line})}};
    out << spec.dump(2) << '\n';
  } else {
    // gnuplot: inline data blocks, one per dataset/method series.
    out << "# metric: " << metric << "\nset xlabel 'round'\nset ylabel '"
        << metric << "'\n";
    std::map<std::pair<std::string, std::string>, std::vector<std::string>>
        series;
    for (const auto& [key, v] : groups) {
      const Summary s = Summarize(v);
      series[{key.dataset, key.method}].push_back(
          std::to_string(key.round) + " " + Fmt(s.mean, 10) + " " +
          Fmt(s.std, 10));
    }
    std::size_t id = 0;
    std::vector<std::string> plots;
    for (const auto& [name, rows] : series) {
      out << "$s" << id << " << EOD\n";
      for (const auto& r : rows) out << r << '\n';
      out << "EOD\n";
      plots.push_back("$s" + std::to_string(id) +
                      " using 1:2:3 with yerrorlines title '" + name.first +
                      " " + name.second + "'");
      ++id;
    }
    out << "plot ";
    for (std::size_t i = 0; i < plots.size(); ++i) {
      out << (i ? ", \\\n     " : "") << plots[i];
    }
    out << '\n';
  }
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"AdaPU: boosting decision stumps on positive-unlabeled data",
               "adapu"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ToolVersion());

  DataFlags data;
  TrainFlags train;
  std::string out_dir;

  auto* train_cmd = app.add_subcommand("train", "Train AdaPU or AdaBoost");
  AddInputFlags(train_cmd, data);
  AddSamplingFlags(train_cmd, data);
  AddTrainFlags(train_cmd, train);
  train_cmd->add_option("--prior", data.prior, "Class prior of the positives")
      ->required();
  train_cmd->add_option("--algorithm", train.algorithm, "adapu or adaboost");
  train_cmd->add_option("--out", out_dir, "Output directory");

  std::vector<double> grid;
  std::size_t folds = 5;
  auto* cv_cmd = app.add_subcommand("cv", "Cross-validate beta");
  AddInputFlags(cv_cmd, data);
  AddSamplingFlags(cv_cmd, data);
  AddTrainFlags(cv_cmd, train);
  cv_cmd->add_option("--prior", data.prior, "Class prior")->required();
  cv_cmd->add_option("--grid", grid, "Comma-separated beta values")
      ->delimiter(',');
  cv_cmd->add_option("--folds", folds, "Number of folds");
  cv_cmd->add_option("--out", out_dir, "Output directory");

  std::string model_path, sweep_path;
  bool as_json = false;
  auto* eval_cmd = app.add_subcommand("evaluate", "Evaluate a saved model");
  AddInputFlags(eval_cmd, data);
  AddSamplingFlags(eval_cmd, data);
  eval_cmd->add_option("--prior", data.prior, "Class prior (PU inputs)");
  eval_cmd->add_option("--model", model_path, "Model JSON")->required();
  eval_cmd->add_option("--sweep", sweep_path,
                       "Write per-prefix curve CSV to this path");
  eval_cmd->add_flag("--json", as_json, "Print the report as JSON");

  std::string spec_path;
  int jobs = 0;
  auto* bench_cmd =
      app.add_subcommand("benchmark", "Run an experiment grid from a spec file");
  bench_cmd->add_option("--spec", spec_path, "Benchmark spec (JSON)")
      ->required();
  bench_cmd->add_option("--out", out_dir, "Output directory");
  bench_cmd->add_option("--jobs", jobs, "Parallel cells (env ADAPU_JOBS)");

  std::string manifest_path;
  auto* replay_cmd =
      app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay_cmd->add_option("--manifest", manifest_path, "manifest.json")
      ->required();
  replay_cmd->add_option("--out", out_dir, "New output directory")->required();

  std::string curves_path, metric, plot_out, plot_format = "vega-lite";
  auto* plot_cmd =
      app.add_subcommand("plot", "Turn a curve CSV into a plot description");
  plot_cmd->add_option("--curves", curves_path, "Long-format curve CSV")
      ->required();
  plot_cmd->add_option("--metric", metric, "Metric to plot")->required();
  plot_cmd->add_option("--out", plot_out, "Output file")->required();
  plot_cmd->add_option("--format", plot_format, "vega-lite or gnuplot")
      ->check(CLI::IsMember({"vega-lite", "gnuplot"}));

  std::vector<std::string> argv_storage = {"adapu"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (train_cmd->parsed()) {
      return CmdTrain(data, train, out_dir, args, out);
    }
    if (cv_cmd->parsed()) {
      return CmdCv(data, train, grid, folds, out_dir, args, out);
    }
    if (eval_cmd->parsed()) {
      return CmdEvaluate(data, model_path, sweep_path, as_json, out);
    }
    if (bench_cmd->parsed()) {
      if (jobs <= 0) {
        const char* env = std::getenv("ADAPU_JOBS");
        jobs = env ? std::max(1, std::atoi(env)) : 1;
      }
      return RunBenchmark(spec_path,
                          ResolveOutputDir(out_dir, "adapu_benchmark"), jobs,
                          args, out, err);
    }
    if (replay_cmd->parsed()) {
      return CmdReplay(manifest_path, out_dir, out, err);
    }
    if (plot_cmd->parsed()) {
      return CmdPlot(curves_path, metric, plot_out, plot_format);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace adapu::cli
