#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lfdrlab/error.hpp"
#include "lfdrlab/model.hpp"

namespace lfdr::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kNotEnoughData = 3,
  kInvalidParameters = 4,
  kDegenerate = 5,
};

int exit_code_for(ErrorCode code) noexcept;

/// z-values from text: one value per line, or a CSV whose header names a
/// `z` column. Blank lines and lines starting with '#' are skipped.
/// Throws Error(MalformedInput) with the offending line number.
std::vector<double> parse_z_values(std::istream& in);
std::vector<double> read_z_file(const std::filesystem::path& path);

/// "w:mean:sd,w:mean:sd,..." into nonnull components.
std::vector<WeightedComponent> parse_components(const std::string& spec);
std::string format_components(const std::vector<WeightedComponent>& comps);

/// Everything needed to reproduce one command invocation. Parameters hold
/// the command's options as a flat JSON object of scalars.
struct RunManifest {
  std::string tool = "lfdr_lab";
  std::string version;
  std::string command;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::optional<std::uint64_t> seed;

  nlohmann::ordered_json to_json() const;
  static RunManifest from_json(const nlohmann::ordered_json& j);
  void save(const std::filesystem::path& path) const;
  static RunManifest load(const std::filesystem::path& path);
};

/// Runs the command line (without the program name). Reports go to `out`,
/// diagnostics to `err`; the return value is the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lfdr::cli
