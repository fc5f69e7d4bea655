#pragma once

#include "config.hpp"
#include "report.hpp"

namespace wavelab::runner {

// Dispatches on cfg.command. Config errors and numerical failures end up in
// the report (status 2 and 1); nothing is thrown for them. With `write` the
// artifacts land in <cfg.out>/<command>/<hash>/ (sweeps always write their
// child runs).
RunReport run(const ExperimentConfig& cfg, bool write = true);

// Reads a config file; throws ConfigError ("$" path for unreadable files or
// malformed JSON).
ExperimentConfig load_config(const std::filesystem::path& file);

}  // namespace wavelab::runner
