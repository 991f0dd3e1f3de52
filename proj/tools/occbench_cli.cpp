// Command-line front end. Every subcommand turns its flags into a run
// configuration and hands it to ocb_run through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "occbench/occbench.h"

using nlohmann::json;

namespace {

enum class Kind { String, Number, Flag, NumberList, StringList };

struct Param {
  std::string key;  // parameter name in the run configuration
  Kind kind;
  std::string help;
};

struct Command {
  std::string name;
  std::string help;
  std::vector<Param> params;
};

std::vector<Param> occlusion_params(const std::string& p_help) {
  return {
      {"input", Kind::String, "input manifest (JSON with object_id, view_index, path, pose)"},
      {"library", Kind::String, "silhouette library directory"},
      {"out", Kind::String, "output directory"},
      {"p_occlude", Kind::Number, p_help},
      {"f_min", Kind::Number, "minimum occluded fraction of the object"},
      {"f_max", Kind::Number, "maximum occluded fraction of the object"},
      {"max_tries", Kind::Number, "placement attempts before a row is flagged"},
      {"seed", Kind::Number, "base seed"},
      {"split", Kind::String, "split tag used in the seed hierarchy"},
      {"fill", Kind::String, "occluder fill: gray | texture | rgb:r,g,b"},
      {"alpha_threshold", Kind::Number, "alpha above this value counts as object"},
      {"count_min", Kind::Number, "fewest silhouettes per pattern"},
      {"count_max", Kind::Number, "most silhouettes per pattern"},
      {"scale_min", Kind::Number, "smallest silhouette scale"},
      {"scale_max", Kind::Number, "largest silhouette scale"},
      {"shift_min", Kind::Number, "smallest pixel shift"},
      {"shift_max", Kind::Number, "largest pixel shift"},
  };
}

std::vector<Command> commands() {
  auto occnvs = occlusion_params("occlusion probability for reference views");
  occnvs.push_back({"p_occlude_target", Kind::Number, "occlusion probability for target views"});
  return {
      {"build-library",
       "extract object silhouettes from RGBA renders",
       {{"renders", Kind::String, "directory of RGBA renders"},
        {"alpha_threshold", Kind::Number, "alpha above this value counts as object"},
        {"out", Kind::String, "library directory"}}},
      {"gen-occlusions", "composite occluders onto clean views",
       occlusion_params("probability that a view is occluded")},
      {"make-occnvs", "build an occluded evaluation split", occnvs},
      {"gen-poses",
       "emit a standard camera view set",
       {{"set", Kind::String, "neus36 | zero123pp | enhanced42"},
        {"radius", Kind::Number, "camera distance from the origin"},
        {"reference_azimuth", Kind::Number, "azimuth of the reference view in degrees"},
        {"out", Kind::String, "output poses JSON"},
        {"matrices", Kind::String, "optional output file for 4x4 camera-to-world matrices"}}},
      {"mask-plan",
       "sample input- and feature-level masks for a training batch",
       {{"b", Kind::Number, "batch size"},
        {"t", Kind::Number, "views per sample"},
        {"l", Kind::Number, "feature positions per view"},
        {"p_view", Kind::Number, "input-level masking probability"},
        {"row_ratio", Kind::Number, "share of rows that receive feature masking"},
        {"area_ratio", Kind::Number, "share of positions masked in a selected row"},
        {"seed", Kind::Number, "base seed"},
        {"epoch", Kind::Number, "epoch index"},
        {"out", Kind::String, "output plan file, or directory when sweeping"},
        {"sweep", Kind::NumberList, "row ratios to sweep; writes one plan per ratio"}}},
      {"eval-2d",
       "PSNR and SSIM of predicted views against ground truth",
       {{"pred", Kind::String, "prediction root"},
        {"gt", Kind::String, "ground-truth manifest"},
        {"out", Kind::String, "output directory"},
        {"mode", Kind::String, "nvs | amodal"},
        {"background", Kind::String, "white | black | rgb:r,g,b"},
        {"missing", Kind::String, "skip | error"},
        {"import_scores", Kind::String, "CSV of extra per-row scores to merge"}}},
      {"eval-3d",
       "Chamfer distance and volume IoU of predicted meshes",
       {{"pred", Kind::String, "directory of predicted meshes"},
        {"gt", Kind::String, "directory of ground-truth meshes"},
        {"out", Kind::String, "output directory"},
        {"resolution", Kind::Number, "voxel grid resolution"},
        {"points", Kind::Number, "surface samples per mesh"},
        {"pre_rotation_deg", Kind::Number, "rotation about +z applied to predictions"},
        {"squared", Kind::Flag, "report mean squared distances"},
        {"seed", Kind::Number, "sampling seed"},
        {"dataset", Kind::String, "dataset label"},
        {"n_ref_views", Kind::Number, "reference-view count label"}}},
      {"report",
       "summarize evaluation directories as markdown tables",
       {{"inputs", Kind::StringList, "evaluation output directories"},
        {"ref_views", Kind::NumberList, "reference-view counts to list"},
        {"out", Kind::String, "output directory"}}},
      {"selftest",
       "run every command twice on bundled fixtures and compare the outputs",
       {{"out", Kind::String, "working directory"},
        {"points", Kind::Number, "surface samples per mesh"},
        {"resolution", Kind::Number, "voxel grid resolution"}}},
  };
}

std::string flag_name(const std::string& key) {
  std::string s = "--" + key;
  for (char& c : s)
    if (c == '_') c = '-';
  return s;
}

json parse_number(const std::string& text) {
  json v;
  try {
    v = json::parse(text);
  } catch (const json::exception&) {
    throw CLI::ValidationError("'" + text + "' is not a number");
  }
  if (!v.is_number()) throw CLI::ValidationError("'" + text + "' is not a number");
  return v;
}

struct Values {
  std::map<std::string, std::string> scalars;
  std::map<std::string, std::vector<std::string>> lists;
  std::map<std::string, bool> flags;
};

json collect(const Command& cmd, const Values& values, CLI::App& sub) {
  json params = json::object();
  for (const auto& p : cmd.params) {
    if (sub.count(flag_name(p.key)) == 0) continue;
    switch (p.kind) {
      case Kind::String: params[p.key] = values.scalars.at(p.key); break;
      case Kind::Number: params[p.key] = parse_number(values.scalars.at(p.key)); break;
      case Kind::Flag: params[p.key] = values.flags.at(p.key); break;
      case Kind::NumberList: {
        json arr = json::array();
        for (const auto& s : values.lists.at(p.key)) arr.push_back(parse_number(s));
        params[p.key] = arr;
        break;
      }
      case Kind::StringList: params[p.key] = values.lists.at(p.key); break;
    }
  }
  return params;
}

json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  return json::parse(in);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"occbench: occlusion-robust multi-view benchmarking toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ocb_version()));

  int workers = 1;
  std::string run_root;
  std::string config_path;
  app.add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--run-root", run_root, "create a timestamped run directory here");
  app.add_option("--config", config_path, "JSON config; flags given on the command line take precedence")
      ->check(CLI::ExistingFile);

  const auto cmds = commands();
  std::vector<Values> values(cmds.size());
  std::vector<CLI::App*> subs;
  for (size_t i = 0; i < cmds.size(); ++i) {
    CLI::App* sub = app.add_subcommand(cmds[i].name, cmds[i].help);
    for (const auto& p : cmds[i].params) {
      const std::string flag = flag_name(p.key);
      switch (p.kind) {
        case Kind::Flag: sub->add_flag(flag, values[i].flags[p.key], p.help); break;
        case Kind::NumberList:
        case Kind::StringList: sub->add_option(flag, values[i].lists[p.key], p.help); break;
        default: sub->add_option(flag, values[i].scalars[p.key], p.help); break;
      }
    }
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  json config;
  try {
    for (size_t i = 0; i < cmds.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      json params = json::object();
      if (!config_path.empty()) {
        const json file = read_config(config_path);
        if (file.contains("command") && file.at("command") != cmds[i].name)
          throw std::runtime_error("config file is for command " + file.at("command").dump());
        if (file.contains("params")) params = file.at("params");
        if (file.contains("workers") && app.count("--workers") == 0) workers = file.at("workers").get<int>();
      }
      params.update(collect(cmds[i], values[i], *subs[i]));
      config = {{"command", cmds[i].name}, {"params", params}, {"workers", workers}};
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  int exit_code = 1;
  char* summary = nullptr;
  const ocb_status status =
      ocb_run(config.dump().c_str(), run_root.empty() ? nullptr : run_root.c_str(), &exit_code, &summary);
  if (status != OCB_OK) {
    std::cerr << "error (" << ocb_status_name(status) << "): " << ocb_last_error() << "\n";
    return 1;
  }
  if (summary) {
    std::cout << summary << "\n";
    ocb_string_free(summary);
  }
  return exit_code;
}
