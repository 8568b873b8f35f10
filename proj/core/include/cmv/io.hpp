#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cmv/coeffs.hpp"
#include "cmv/types.hpp"

namespace cmv {

enum class ModelKind { free, constant, sturmian, explicit_file };

/// Everything a command needs; loaded from key=value or JSON plus flag overrides.
struct RunConfig {
  ModelKind model = ModelKind::sturmian;
  cplx alpha{0.5, 0.0};                                  // constant model value
  std::pair<cplx, cplx> alphabet{{0.5, 0.0}, {-0.5, 0.0}};  // (alpha, beta)
  double omega = kGoldenFrequency;
  std::string explicit_file;  // CSV n,re_alpha,im_alpha[,...]
  Support support = Support::two_sided;
  cplx eta_b{1.0, 0.0};

  int theta_count = 256;
  std::vector<double> r{0.9, 0.99};
  std::vector<double> eps{1e-3, 3e-3, 1e-2, 3e-2, 1e-1};
  std::vector<double> holder_theta;  // empty: picked from the spectrum approximation
  int depth = 10;                    // trace-map depth n
  long window = 0;                   // resolvent half-width, 0 = automatic
  long n_lo = 0, n_hi = 100;         // coefficient range
  long steps = 1000;                 // walk steps
  long snapshot_every = 100;
  std::uint64_t seed = 20240917;
  std::string out = "runs";
};

/// "0.5", "-0.2+0.3i", "0.4i", "(0.1,0.2)".
cplx parse_complex(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);
std::pair<cplx, cplx> parse_alphabet(const std::string& text);

/// Applies one key=value setting; throws DomainError on unknown keys or bad values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);
/// Reads a config file: JSON object if it starts with '{', key=value lines otherwise.
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});
/// Checks every numeric parameter against the module preconditions.
void validate(const RunConfig& cfg);

VerblunskySequence make_model(const RunConfig& cfg);
std::string config_json(const RunConfig& cfg);
std::string to_string(ModelKind k);

/// Creates <base>/<command>-<UTC timestamp>[-k] and returns it.
std::filesystem::path make_run_directory(const std::filesystem::path& base,
                                         const std::string& command);

}  // namespace cmv
