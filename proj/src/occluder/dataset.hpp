#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "occluder/library.hpp"
#include "occluder/pattern.hpp"
#include "poses/poses.hpp"

namespace occbench::occluder {

/// One row of an input (clean) manifest. `role` is "reference", "target" or
/// empty; only the OccNVS split treats the two differently.
struct InputRow {
  std::string object_id;
  int view_index = 0;
  std::filesystem::path clean_path;  // resolved against the manifest directory
  std::string clean_path_text;       // as written in the manifest
  poses::SphericalPose pose;
  std::string role;
};

/// Rows missing a pose (or any other required key) are a hard ConfigError.
std::vector<InputRow> read_input_manifest(const std::filesystem::path& manifest);

struct PairedSample {
  std::string object_id;
  int view_index = 0;
  poses::SphericalPose pose;
  std::string clean_path;     // relative to the output manifest directory
  std::string occluded_path;
  std::string mask_path;
  double occlusion_fraction = 0.0;
  bool occluded_flag = false;
  uint64_t seed_key = 0;
  std::string status;  // ok | placement_failed | read_failed | empty_object
};

struct DatasetOptions {
  double p_occlude = 0.5;
  /// When set, rows whose role is "target" use this probability instead.
  std::optional<double> p_occlude_target;
  FractionBounds bounds;
  int max_tries = 100;
  uint64_t base_seed = 0;
  /// Namespaces every per-row key, so train and test draws never collide.
  std::string split = "train";
  PatternParams pattern;
  Fill fill;
  uint8_t alpha_threshold = 127;
  int workers = 1;
};

/// Per-row key: hash(base_seed, split, object_id, view_index).
RngKey sample_key(uint64_t base_seed, const std::string& split, const std::string& object_id, int view_index);

/// One PairedSample per input row, images under out_dir/{clean,occluded,masks}.
/// Clean outputs are byte copies of the inputs; unoccluded rows reuse those
/// bytes for the occluded image. Output is independent of worker count and
/// row order.
std::vector<PairedSample> build_paired_dataset(const std::vector<InputRow>& rows, const SilhouetteLibrary& library,
                                               const DatasetOptions& options, const std::filesystem::path& out_dir);

nlohmann::ordered_json manifest_json(const std::vector<PairedSample>& samples);
std::vector<PairedSample> samples_from_json(const nlohmann::json& j);

}  // namespace occbench::occluder
