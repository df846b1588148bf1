#pragma once

#include <string>

#include "itre/admm.hpp"
#include "itre/rg.hpp"
#include "itre/sphere_cluster.hpp"
#include "itre/wls.hpp"

namespace itre {

// Every pipeline tunable. Defaults are the shipped behavior; a config file
// (flat key = value lines, # comments) overrides defaults, CLI flags override
// the file.
struct EnhanceConfig {
  SolverConfig solver;  // carries alpha_exp
  WlsParams wls;
  RgParams rg;
  int codebook_size = 1000;
  CodebookKind codebook = CodebookKind::fibonacci;
  bool dump_intermediates = false;
  std::string output_format = "png";
};

// Parses one key/value pair into cfg; throws UsageError on unknown keys or
// malformed values.
void apply_config_entry(EnhanceConfig& cfg, const std::string& key,
                        const std::string& value);

// Applies a config file on top of cfg.
void load_config_file(EnhanceConfig& cfg, const std::string& path);

// Round-trippable serialization of every field.
std::string serialize_config(const EnhanceConfig& cfg);
void save_config_file(const EnhanceConfig& cfg, const std::string& path);

}  // namespace itre
