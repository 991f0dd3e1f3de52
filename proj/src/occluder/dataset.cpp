#include "occluder/dataset.hpp"

#include <cctype>
#include <cstdio>

#include "common/error.hpp"
#include "common/fileio.hpp"
#include "common/parallel.hpp"
#include "common/png_io.hpp"

namespace fs = std::filesystem;

namespace occbench::occluder {
namespace {

std::string safe_name(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '_';
  return out;
}

std::string file_stem(const InputRow& row) {
  char idx[16];
  std::snprintf(idx, sizeof idx, "%03d", row.view_index);
  return safe_name(row.object_id) + "_" + idx;
}

PairedSample process_row(const InputRow& row, const SilhouetteLibrary& library, const DatasetOptions& opt,
                         const fs::path& out_dir) {
  PairedSample s;
  s.object_id = row.object_id;
  s.view_index = row.view_index;
  s.pose = row.pose;
  const RngKey key = sample_key(opt.base_seed, opt.split, row.object_id, row.view_index);
  s.seed_key = key.value();

  std::vector<uint8_t> clean_bytes;
  RgbaImage clean;
  try {
    clean_bytes = read_file_bytes(row.clean_path);
    clean = read_png_rgba(row.clean_path);
  } catch (const Error&) {
    s.clean_path = row.clean_path_text;
    s.status = "read_failed";
    return s;
  }

  const std::string stem = file_stem(row);
  s.clean_path = "clean/" + stem + ".png";
  s.occluded_path = "occluded/" + stem + ".png";
  s.mask_path = "masks/" + stem + ".png";
  write_file_atomic(out_dir / s.clean_path, clean_bytes);

  const double p = (row.role == "target" && opt.p_occlude_target) ? *opt.p_occlude_target : opt.p_occlude;
  Rng coin(key.derive("occlude"));
  const bool draw = coin.bernoulli(p);
  s.status = "ok";

  if (draw) {
    try {
      const OcclusionPattern pattern = compose_pattern(library, opt.pattern, key.derive("pattern"), opt.fill);
      OverlayResult r =
          overlay_occlusion(clean, pattern, library, opt.bounds, opt.max_tries, key.derive("place"), opt.alpha_threshold);
      if (r.placed) {
        s.occluded_flag = true;
        s.occlusion_fraction = r.occlusion_fraction;
        write_png(out_dir / s.occluded_path, r.occluded);
        write_png(out_dir / s.mask_path, r.mask);
        return s;
      }
      s.status = "placement_failed";
    } catch (const EmptyInputError&) {
      s.status = "empty_object";
    }
  }
  write_file_atomic(out_dir / s.occluded_path, clean_bytes);
  write_png(out_dir / s.mask_path, BinaryMask(clean.width(), clean.height()));
  return s;
}

}  // namespace

RngKey sample_key(uint64_t base_seed, const std::string& split, const std::string& object_id, int view_index) {
  return RngKey(base_seed).derive(split).derive(object_id).derive(static_cast<uint64_t>(view_index));
}

std::vector<InputRow> read_input_manifest(const fs::path& manifest) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file_text(manifest));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(manifest.string() + ": " + e.what());
  }
  if (!j.is_array()) throw FormatError(manifest.string() + ": manifest must be a JSON array");
  const fs::path base = manifest.parent_path();
  std::vector<InputRow> rows;
  for (size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    const std::string where = manifest.string() + " row " + std::to_string(i);
    InputRow row;
    try {
      row.object_id = e.at("object_id").get<std::string>();
      row.view_index = e.at("view_index").get<int>();
      row.clean_path_text = e.at("clean_path").get<std::string>();
      row.role = e.value("role", "");
    } catch (const nlohmann::json::exception& ex) {
      throw ConfigError(where + ": " + ex.what());
    }
    if (!e.contains("pose") || e["pose"].is_null()) throw ConfigError(where + ": missing pose");
    try {
      row.pose = poses::pose_from_json(e["pose"]);
    } catch (const Error& ex) {
      throw ConfigError(where + ": " + ex.what());
    }
    fs::path p(row.clean_path_text);
    row.clean_path = p.is_absolute() ? p : base / p;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<PairedSample> build_paired_dataset(const std::vector<InputRow>& rows, const SilhouetteLibrary& library,
                                               const DatasetOptions& options, const fs::path& out_dir) {
  if (!(options.p_occlude >= 0.0 && options.p_occlude <= 1.0)) throw ConfigError("p_occlude must lie in [0, 1]");
  if (options.p_occlude_target && !(*options.p_occlude_target >= 0.0 && *options.p_occlude_target <= 1.0))
    throw ConfigError("target p_occlude must lie in [0, 1]");
  if (!(options.bounds.min >= 0.0 && options.bounds.max <= 1.0 && options.bounds.min <= options.bounds.max))
    throw ConfigError("occlusion fraction bounds must satisfy 0 <= f_min <= f_max <= 1");
  if (options.max_tries < 1) throw ConfigError("max_tries must be >= 1");
  if (library.empty()) throw ConfigError("silhouette library is empty");
  options.pattern.validate();

  std::vector<PairedSample> out(rows.size());
  parallel_for(rows.size(), options.workers,
               [&](size_t i) { out[i] = process_row(rows[i], library, options, out_dir); });
  return out;
}

nlohmann::ordered_json manifest_json(const std::vector<PairedSample>& samples) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& s : samples) {
    nlohmann::ordered_json e;
    e["object_id"] = s.object_id;
    e["view_index"] = s.view_index;
    nlohmann::ordered_json pose;
    pose["azimuth_deg"] = s.pose.azimuth_deg;
    pose["elevation_deg"] = s.pose.elevation_deg;
    pose["radius"] = s.pose.radius;
    pose["roll_deg"] = s.pose.roll_deg;
    e["pose"] = std::move(pose);
    e["clean_path"] = s.clean_path;
    e["occluded_path"] = s.occluded_path;
    e["mask_path"] = s.mask_path;
    e["occlusion_fraction"] = s.occlusion_fraction;
    e["occluded_flag"] = s.occluded_flag;
    e["seed_key"] = s.seed_key;
    e["status"] = s.status;
    arr.push_back(std::move(e));
  }
  return arr;
}

std::vector<PairedSample> samples_from_json(const nlohmann::json& j) {
  std::vector<PairedSample> out;
  try {
    for (const auto& e : j) {
      PairedSample s;
      s.object_id = e.at("object_id").get<std::string>();
      s.view_index = e.at("view_index").get<int>();
      s.pose = poses::pose_from_json(e.at("pose"));
      s.clean_path = e.at("clean_path").get<std::string>();
      s.occluded_path = e.at("occluded_path").get<std::string>();
      s.mask_path = e.at("mask_path").get<std::string>();
      s.occlusion_fraction = e.at("occlusion_fraction").get<double>();
      s.occluded_flag = e.at("occluded_flag").get<bool>();
      s.seed_key = e.at("seed_key").get<uint64_t>();
      s.status = e.at("status").get<std::string>();
      out.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad dataset manifest: ") + e.what());
  }
  return out;
}

}  // namespace occbench::occluder
