#pragma once

#include <filesystem>

#include "cmv/io.hpp"

namespace cmvtool {

// Each command writes into `dir` and returns the process exit code.
int cmd_coeffs(const cmv::RunConfig& cfg, const std::filesystem::path& dir);
int cmd_spectrum(const cmv::RunConfig& cfg, const std::filesystem::path& dir);
int cmd_measure(const cmv::RunConfig& cfg, const std::filesystem::path& dir);
int cmd_holder(const cmv::RunConfig& cfg, const std::filesystem::path& dir);
int cmd_walk(const cmv::RunConfig& cfg, const std::filesystem::path& dir);
int cmd_verify(const cmv::RunConfig& cfg, const std::filesystem::path& dir);

}  // namespace cmvtool
