#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "occluder/dataset.hpp"

namespace occbench::harness {

inline constexpr int kExitOk = 0;
inline constexpr int kExitHardError = 1;
inline constexpr int kExitPartial = 2;

/// The names accepted by run().
const std::vector<std::string>& command_names();

/// A command plus its parameters. Every default is filled in by
/// normalize_config so config.json fully describes the run.
struct RunConfig {
  std::string command;
  nlohmann::json params = nlohmann::json::object();
  int workers = 1;
};

/// Validates the command name and fills in parameter defaults. Unknown
/// parameter names are a ConfigError.
RunConfig normalize_config(RunConfig config);

nlohmann::json config_to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& j);

struct RunOutcome {
  int exit_code = kExitOk;
  std::filesystem::path run_dir;
  std::string summary;
  std::vector<std::string> log;
};

/// Executes one command. When run_root is non-empty a fresh timestamped run
/// directory is created under it and relative output paths resolve inside.
/// config.json, log.txt and status.json are written next to the outputs.
/// Hard errors propagate as exceptions; flagged rows give kExitPartial.
RunOutcome run(const RunConfig& config, const std::filesystem::path& run_root = {});

/// Evaluation split: every reference view gets an occlusion attempt (unless
/// p_occlude overrides it), target views stay clean, keys live in the "test"
/// namespace.
std::vector<occluder::PairedSample> make_occnvs_split(const std::vector<occluder::InputRow>& rows,
                                                      const occluder::SilhouetteLibrary& library,
                                                      occluder::DatasetOptions options,
                                                      const std::filesystem::path& out_dir);

/// Markdown summary of the aggregate tables, one table per dataset with one
/// row per reference-view count. Cell text is copied from the CSV strings.
std::string render_report(const std::vector<std::filesystem::path>& eval_dirs, const std::vector<int>& ref_views,
                          const std::filesystem::path& out_dir);

/// Writes the bundled fixture corpus (renders, manifests, predictions and
/// meshes) under dir. Deterministic.
void write_fixtures(const std::filesystem::path& dir);

/// Compares two directory trees file by file. Returns human-readable
/// differences; empty means byte-identical.
std::vector<std::string> diff_trees(const std::filesystem::path& a, const std::filesystem::path& b);

}  // namespace occbench::harness
