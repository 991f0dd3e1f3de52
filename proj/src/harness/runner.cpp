#include <chrono>
#include <cstdio>
#include <ctime>
#include <map>
#include <sstream>

#include "common/error.hpp"
#include "common/fileio.hpp"
#include "common/format.hpp"
#include "common/parallel.hpp"
#include "harness/harness.hpp"
#include "maskplan/maskplan.hpp"
#include "metrics2d/evaluate2d.hpp"
#include "metrics3d/evaluate3d.hpp"
#include "occluder/library.hpp"
#include "poses/poses.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace occbench::harness {
namespace {

// null marks a required parameter
const std::map<std::string, json>& defaults() {
  static const std::map<std::string, json> table = [] {
    const json occlusion = {{"input", nullptr},      {"library", nullptr},   {"out", nullptr},
                            {"p_occlude", 0.5},      {"f_min", 0.1},         {"f_max", 0.6},
                            {"max_tries", 100},      {"seed", 0},            {"split", "train"},
                            {"fill", "gray"},        {"alpha_threshold", 127}, {"count_min", 1},
                            {"count_max", 3},        {"scale_min", 0.3},     {"scale_max", 0.7},
                            {"shift_min", -40},      {"shift_max", 40}};
    json occnvs = occlusion;
    occnvs["p_occlude"] = 1.0;
    occnvs["p_occlude_target"] = 0.0;
    occnvs["split"] = "test";
    return std::map<std::string, json>{
        {"build-library", {{"renders", nullptr}, {"alpha_threshold", 127}, {"out", nullptr}}},
        {"gen-occlusions", occlusion},
        {"make-occnvs", occnvs},
        {"gen-poses", {{"set", nullptr}, {"radius", nullptr}, {"reference_azimuth", 0.0}, {"out", nullptr},
                       {"matrices", ""}}},
        {"mask-plan", {{"b", 64}, {"t", 6}, {"l", 196}, {"p_view", 0.5}, {"row_ratio", 0.25}, {"area_ratio", 0.5},
                       {"seed", 0}, {"epoch", 0}, {"out", nullptr}, {"sweep", json::array()}}},
        {"eval-2d", {{"pred", nullptr}, {"gt", nullptr}, {"out", nullptr}, {"mode", "nvs"}, {"background", "white"},
                     {"missing", "skip"}, {"import_scores", ""}}},
        {"eval-3d", {{"pred", nullptr}, {"gt", nullptr}, {"out", nullptr}, {"resolution", 64}, {"points", 100000},
                     {"pre_rotation_deg", 0.0}, {"squared", false}, {"seed", 0}, {"dataset", "default"},
                     {"n_ref_views", 1}}},
        {"report", {{"inputs", nullptr}, {"ref_views", {1, 2, 3, 5, 10}}, {"out", nullptr}}},
        {"selftest", {{"out", nullptr}, {"points", 4000}, {"resolution", 32}}},
    };
  }();
  return table;
}

bool file_output(const std::string& command, const json& params) {
  if (command == "gen-poses") return true;
  if (command == "mask-plan") return params.at("sweep").empty();
  return false;
}

bool compatible(const json& def, const json& v) {
  if (def.is_null()) return !v.is_null();
  if (def.is_number()) return v.is_number();
  if (def.is_boolean()) return v.is_boolean();
  if (def.is_string()) return v.is_string();
  if (def.is_array()) return v.is_array();
  return def.type() == v.type();
}

std::string utc_stamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

class Logger {
public:
  void operator()(const std::string& line) { lines.push_back(line); }
  std::string text() const {
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    return out;
  }
  std::vector<std::string> lines;
};

template <class T>
T get(const json& p, const char* key) {
  try {
    return p.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("parameter '") + key + "': " + e.what());
  }
}

uint8_t threshold_param(const json& p) {
  const int t = get<int>(p, "alpha_threshold");
  if (t < 0 || t > 255) throw ConfigError("alpha_threshold must lie in [0, 255]");
  return static_cast<uint8_t>(t);
}

occluder::DatasetOptions dataset_options(const json& p, int workers) {
  occluder::DatasetOptions o;
  o.p_occlude = get<double>(p, "p_occlude");
  if (p.contains("p_occlude_target")) o.p_occlude_target = get<double>(p, "p_occlude_target");
  o.bounds = {get<double>(p, "f_min"), get<double>(p, "f_max")};
  o.max_tries = get<int>(p, "max_tries");
  o.base_seed = get<uint64_t>(p, "seed");
  o.split = get<std::string>(p, "split");
  o.fill = occluder::parse_fill(get<std::string>(p, "fill"));
  o.alpha_threshold = threshold_param(p);
  o.pattern = {get<int>(p, "count_min"), get<int>(p, "count_max"), get<double>(p, "scale_min"),
               get<double>(p, "scale_max"), get<int>(p, "shift_min"), get<int>(p, "shift_max")};
  o.workers = workers;
  return o;
}

struct Context {
  const RunConfig& config;
  const json& p;
  fs::path out;  // resolved output path
  Logger& log;
};

int dataset_summary(const std::vector<occluder::PairedSample>& samples, Logger& log, std::string& summary) {
  std::map<std::string, size_t> by_status;
  size_t occluded = 0;
  for (const auto& s : samples) {
    ++by_status[s.status];
    occluded += s.occluded_flag ? 1 : 0;
  }
  std::ostringstream ss;
  ss << samples.size() << " rows, " << occluded << " occluded";
  for (const auto& [status, n] : by_status) ss << ", " << status << "=" << n;
  summary = ss.str();
  log(summary);
  const size_t failed = samples.size() - by_status["ok"];
  return failed ? kExitPartial : kExitOk;
}

int cmd_build_library(Context& c, std::string& summary) {
  occluder::BuildLibraryReport report;
  const uint8_t threshold = threshold_param(c.p);
  const auto library = occluder::build_library(get<std::string>(c.p, "renders"), threshold, &report);
  for (const auto& m : report.messages) c.log(m);
  if (library.empty()) throw ConfigError("no silhouettes could be extracted from " + get<std::string>(c.p, "renders"));
  library.save(c.out, threshold);
  summary = std::to_string(library.size()) + " silhouettes from " + std::to_string(report.renders) + " renders";
  c.log(summary);
  return report.failed ? kExitPartial : kExitOk;
}

int cmd_occlusions(Context& c, std::string& summary, bool occnvs) {
  const auto rows = occluder::read_input_manifest(get<std::string>(c.p, "input"));
  const auto library = occluder::SilhouetteLibrary::load(get<std::string>(c.p, "library"));
  const auto options = dataset_options(c.p, c.config.workers);
  c.log("library: " + std::to_string(library.size()) + " silhouettes");
  const auto samples = occnvs ? make_occnvs_split(rows, library, options, c.out)
                              : occluder::build_paired_dataset(rows, library, options, c.out);
  write_file_atomic(c.out / "manifest.json", occluder::manifest_json(samples).dump(2) + "\n");
  return dataset_summary(samples, c.log, summary);
}

int cmd_gen_poses(Context& c, std::string& summary) {
  const auto set = poses::make_viewset(get<std::string>(c.p, "set"), get<double>(c.p, "reference_azimuth"),
                                       get<double>(c.p, "radius"));
  write_file_atomic(c.out, poses::to_json(set).dump(2) + "\n");
  const std::string matrices = get<std::string>(c.p, "matrices");
  if (!matrices.empty()) {
    const fs::path mpath = c.out.parent_path() / fs::path(matrices).filename();
    write_file_atomic(mpath, poses::matrices_json(set).dump(2) + "\n");
  }
  summary = set.name + ": " + std::to_string(set.poses.size()) + " poses";
  c.log(summary);
  return kExitOk;
}

int cmd_mask_plan(Context& c, std::string& summary) {
  maskplan::PlanParams params;
  params.batch = get<int>(c.p, "b");
  params.views_per_sample = get<int>(c.p, "t");
  params.feature_len = get<int>(c.p, "l");
  params.p_view = get<double>(c.p, "p_view");
  params.row_ratio = get<double>(c.p, "row_ratio");
  params.area_ratio = get<double>(c.p, "area_ratio");
  params.seed = get<uint64_t>(c.p, "seed");
  params.epoch = get<uint64_t>(c.p, "epoch");
  try {
    params.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  const auto sweep = get<std::vector<double>>(c.p, "sweep");
  if (sweep.empty()) {
    write_file_atomic(c.out, maskplan::plan_file_text(maskplan::make_plan(params)));
    summary = "plan written";
  } else {
    const auto files = maskplan::sweep_ratios(sweep, params, c.out);
    for (const auto& f : files) c.log("wrote " + f.filename().string());
    summary = std::to_string(files.size()) + " plans written";
  }
  c.log(summary);
  return kExitOk;
}

int cmd_eval_2d(Context& c, std::string& summary) {
  metrics2d::Eval2dOptions o;
  const std::string mode = get<std::string>(c.p, "mode");
  if (mode == "nvs") o.mode = metrics2d::EvalMode::Nvs;
  else if (mode == "amodal") o.mode = metrics2d::EvalMode::Amodal;
  else throw ConfigError("mode must be nvs or amodal");
  o.background = metrics2d::parse_background(get<std::string>(c.p, "background"));
  const std::string missing = get<std::string>(c.p, "missing");
  if (missing == "skip") o.missing = metrics2d::MissingPolicy::Skip;
  else if (missing == "error") o.missing = metrics2d::MissingPolicy::Error;
  else throw ConfigError("missing must be skip or error");
  const std::string scores = get<std::string>(c.p, "import_scores");
  if (!scores.empty()) o.import_scores = scores;
  o.workers = c.config.workers;

  const auto gt = metrics2d::read_gt_manifest(get<std::string>(c.p, "gt"));
  const auto result = metrics2d::evaluate_2d(get<std::string>(c.p, "pred"), gt, o);
  write_file_atomic(c.out / "rows.csv", metrics2d::records_csv(result.records, result.extra_columns).to_string());
  write_file_atomic(c.out / "aggregate.csv", metrics2d::aggregate_csv(result.groups).to_string());
  for (const auto& r : result.records)
    if (r.status != "ok") c.log("flagged " + r.dataset + "/" + r.object_id + "/" + std::to_string(r.view_index) + ": " + r.status);
  summary = std::to_string(result.records.size()) + " rows, " + std::to_string(result.flagged) + " flagged, " +
            std::to_string(result.groups.size()) + " groups";
  c.log(summary);
  return result.flagged ? kExitPartial : kExitOk;
}

int cmd_eval_3d(Context& c, std::string& summary) {
  metrics3d::Eval3dOptions o;
  o.resolution = get<int>(c.p, "resolution");
  const auto points = get<long long>(c.p, "points");
  if (points <= 0) throw ConfigError("points must be > 0");
  o.n_points = static_cast<size_t>(points);
  o.pre_rotation_deg = get<double>(c.p, "pre_rotation_deg");
  o.squared = get<bool>(c.p, "squared");
  o.seed = get<uint64_t>(c.p, "seed");
  o.dataset = get<std::string>(c.p, "dataset");
  o.n_ref_views = get<int>(c.p, "n_ref_views");
  o.workers = c.config.workers;
  const auto result = metrics3d::evaluate_3d(get<std::string>(c.p, "pred"), get<std::string>(c.p, "gt"), o);
  write_file_atomic(c.out / "rows.csv", metrics3d::records3d_csv(result.records).to_string());
  write_file_atomic(c.out / "aggregate.csv", metrics3d::aggregate3d_csv(result.groups).to_string());
  for (const auto& r : result.records) {
    if (r.status != "ok") c.log("flagged " + r.object_id + ": " + r.status);
    else if (!r.watertight_pred) c.log("warning: " + r.object_id + " prediction has open boundary edges");
  }
  summary = std::to_string(result.records.size()) + " objects, " + std::to_string(result.flagged) + " flagged";
  c.log(summary);
  return result.flagged ? kExitPartial : kExitOk;
}

int cmd_report(Context& c, std::string& summary) {
  std::vector<fs::path> inputs;
  for (const auto& s : get<std::vector<std::string>>(c.p, "inputs")) inputs.emplace_back(s);
  if (inputs.empty()) throw ConfigError("report needs at least one input directory");
  const std::string md = render_report(inputs, get<std::vector<int>>(c.p, "ref_views"), c.out);
  write_file_atomic(c.out / "summary.md", md);
  summary = "report over " + std::to_string(inputs.size()) + " evaluation(s)";
  c.log(summary);
  return kExitOk;
}

int cmd_selftest(Context& c, std::string& summary);

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"build-library", "gen-occlusions", "make-occnvs",
                                                 "gen-poses",     "mask-plan",      "eval-2d",
                                                 "eval-3d",       "report",         "selftest"};
  return names;
}

RunConfig normalize_config(RunConfig config) {
  auto it = defaults().find(config.command);
  if (it == defaults().end()) throw ConfigError("unknown command '" + config.command + "'");
  if (!config.params.is_object()) throw ConfigError("params must be a JSON object");
  if (config.workers < 1) throw ConfigError("workers must be >= 1");
  json merged = it->second;
  for (const auto& [key, value] : config.params.items()) {
    if (!merged.contains(key)) throw ConfigError(config.command + ": unknown parameter '" + key + "'");
    if (value.is_null()) continue;
    if (!compatible(merged[key], value))
      throw ConfigError(config.command + ": parameter '" + key + "' has the wrong type");
    merged[key] = value;
  }
  for (const auto& [key, value] : merged.items())
    if (value.is_null()) throw ConfigError(config.command + ": missing required parameter '" + key + "'");
  config.params = std::move(merged);
  return config;
}

json config_to_json(const RunConfig& config) {
  return {{"command", config.command}, {"params", config.params}, {"workers", config.workers}};
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  try {
    c.command = j.at("command").get<std::string>();
    c.params = j.value("params", json::object());
    c.workers = j.value("workers", 1);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad run config: ") + e.what());
  }
  return c;
}

RunOutcome run(const RunConfig& raw, const fs::path& run_root) {
  const RunConfig config = normalize_config(raw);
  const json& p = config.params;

  RunOutcome outcome;
  fs::path out(p.at("out").get<std::string>());
  const bool to_file = file_output(config.command, p);
  fs::path meta_dir;
  std::string meta_prefix;
  if (!run_root.empty()) {
    const std::string base = config.command + "-" + utc_stamp();
    fs::path dir = run_root / base;
    for (int n = 1; fs::exists(dir); ++n) dir = run_root / (base + "-" + std::to_string(n));
    fs::create_directories(dir);
    outcome.run_dir = dir;
    if (out.is_relative()) out = dir / out;
    meta_dir = dir;
  } else if (to_file) {
    meta_dir = out.has_parent_path() ? out.parent_path() : fs::path(".");
    meta_prefix = out.filename().string() + ".";
    outcome.run_dir = meta_dir;
  } else {
    meta_dir = out;
    outcome.run_dir = out;
  }
  if (!to_file) fs::create_directories(out);

  Logger log;
  log("command: " + config.command);
  Context ctx{config, p, out, log};
  std::string summary;
  int code = kExitOk;
  const std::string& cmd = config.command;
  if (cmd == "build-library") code = cmd_build_library(ctx, summary);
  else if (cmd == "gen-occlusions") code = cmd_occlusions(ctx, summary, false);
  else if (cmd == "make-occnvs") code = cmd_occlusions(ctx, summary, true);
  else if (cmd == "gen-poses") code = cmd_gen_poses(ctx, summary);
  else if (cmd == "mask-plan") code = cmd_mask_plan(ctx, summary);
  else if (cmd == "eval-2d") code = cmd_eval_2d(ctx, summary);
  else if (cmd == "eval-3d") code = cmd_eval_3d(ctx, summary);
  else if (cmd == "report") code = cmd_report(ctx, summary);
  else if (cmd == "selftest") code = cmd_selftest(ctx, summary);

  nlohmann::ordered_json status;
  status["command"] = cmd;
  status["exit_code"] = code;
  status["summary"] = summary;
  write_file_atomic(meta_dir / (meta_prefix + "config.json"), config_to_json(config).dump(2) + "\n");
  write_file_atomic(meta_dir / (meta_prefix + "log.txt"), log.text());
  write_file_atomic(meta_dir / (meta_prefix + "status.json"), status.dump(2) + "\n");

  outcome.exit_code = code;
  outcome.summary = summary;
  outcome.log = std::move(log.lines);
  return outcome;
}

std::vector<occluder::PairedSample> make_occnvs_split(const std::vector<occluder::InputRow>& rows,
                                                      const occluder::SilhouetteLibrary& library,
                                                      occluder::DatasetOptions options, const fs::path& out_dir) {
  if (!options.p_occlude_target) options.p_occlude_target = 0.0;
  return occluder::build_paired_dataset(rows, library, options, out_dir);
}

namespace {

struct SelftestStep {
  std::string name;
  RunConfig config;
};

std::vector<SelftestStep> selftest_steps(const fs::path& fx, const fs::path& out, int points, int resolution,
                                         int workers) {
  auto s = [](const fs::path& p) { return p.string(); };
  std::vector<SelftestStep> steps = {
      {"build-library", {"build-library", {{"renders", s(fx / "renders")}, {"out", s(out / "library")}}, workers}},
      {"gen-occlusions",
       {"gen-occlusions",
        {{"input", s(fx / "views.json")}, {"library", s(out / "library")}, {"seed", 7}, {"out", s(out / "train")}},
        workers}},
      {"make-occnvs",
       {"make-occnvs",
        {{"input", s(fx / "views.json")}, {"library", s(out / "library")}, {"seed", 7}, {"out", s(out / "occnvs")}},
        workers}},
      {"gen-poses",
       {"gen-poses",
        {{"set", "enhanced42"}, {"radius", 1.5}, {"out", s(out / "poses" / "poses.json")}, {"matrices", "matrices.json"}},
        workers}},
      {"mask-plan", {"mask-plan", {{"b", 8}, {"t", 3}, {"l", 64}, {"seed", 11}, {"out", s(out / "plans" / "plan.json")}}, workers}},
      {"mask-plan-sweep",
       {"mask-plan",
        {{"b", 8}, {"t", 3}, {"l", 64}, {"seed", 11}, {"sweep", maskplan::default_sweep_grid()}, {"out", s(out / "sweep")}},
        workers}},
      {"eval-2d",
       {"eval-2d", {{"pred", s(fx / "pred2d")}, {"gt", s(fx / "gt2d.json")}, {"out", s(out / "eval2d")}}, workers}},
      {"eval-3d",
       {"eval-3d",
        {{"pred", s(fx / "pred3d")}, {"gt", s(fx / "gt3d")}, {"points", points}, {"resolution", resolution},
         {"dataset", "fixture"}, {"out", s(out / "eval3d")}},
        workers}},
      {"report",
       {"report", {{"inputs", {s(out / "eval2d"), s(out / "eval3d")}}, {"out", s(out / "report")}}, workers}},
  };
  return steps;
}

int cmd_selftest(Context& c, std::string& summary) {
  const fs::path fixtures = c.out / "fixtures";
  write_fixtures(fixtures);
  const int points = get<int>(c.p, "points");
  const int resolution = get<int>(c.p, "resolution");
  bool all_ok = true;
  size_t steps_run = 0;
  for (const char* pass : {"run_a", "run_b"}) {
    const fs::path dir = c.out / pass;
    fs::remove_all(dir);
    for (const auto& step : selftest_steps(fixtures, dir, points, resolution, c.config.workers)) {
      std::string line = std::string(pass) + " " + step.name + ": ";
      try {
        const RunOutcome r = run(step.config);
        line += r.exit_code == kExitOk ? "PASS" : "FAIL (exit " + std::to_string(r.exit_code) + ")";
        all_ok &= r.exit_code == kExitOk;
      } catch (const std::exception& e) {
        line += std::string("FAIL (") + e.what() + ")";
        all_ok = false;
      }
      ++steps_run;
      c.log(line);
    }
  }
  const auto diffs = diff_trees(c.out / "run_a", c.out / "run_b");
  for (const auto& d : diffs) c.log("diff: " + d);
  c.log(std::string("determinism: ") + (diffs.empty() ? "PASS" : "FAIL"));
  all_ok &= diffs.empty();
  summary = std::string(all_ok ? "PASS" : "FAIL") + ": " + std::to_string(steps_run) + " steps, " +
            std::to_string(diffs.size()) + " differing files";
  return all_ok ? kExitOk : kExitHardError;
}

}  // namespace

std::vector<std::string> diff_trees(const fs::path& a, const fs::path& b) {
  auto listing = [](const fs::path& root) {
    std::map<std::string, fs::path> files;
    if (!fs::exists(root)) return files;
    for (const auto& e : fs::recursive_directory_iterator(root))
      if (e.is_regular_file()) files.emplace(e.path().lexically_relative(root).generic_string(), e.path());
    return files;
  };
  const auto fa = listing(a), fb = listing(b);
  std::vector<std::string> out;
  for (const auto& [rel, path] : fa) {
    auto it = fb.find(rel);
    if (it == fb.end()) {
      out.push_back(rel + " only in " + a.string());
      continue;
    }
    std::string ta = read_file_text(path), tb = read_file_text(it->second);
    // Paths embedded in config and log files name the run directory itself.
    if (rel.ends_with(".json") || rel.ends_with(".txt")) {
      auto scrub = [](std::string t, const std::string& from) {
        for (size_t pos = t.find(from); pos != std::string::npos; pos = t.find(from, pos)) t.replace(pos, from.size(), "<run>");
        return t;
      };
      ta = scrub(ta, a.string());
      tb = scrub(tb, b.string());
    }
    if (ta != tb) out.push_back(rel + " differs");
  }
  for (const auto& [rel, path] : fb)
    if (!fa.count(rel)) out.push_back(rel + " only in " + b.string());
  return out;
}

}  // namespace occbench::harness
