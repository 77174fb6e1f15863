#include <fstream>

#include "lfdrlab/cli.hpp"

namespace lfdr::cli {

using nlohmann::ordered_json;

ordered_json RunManifest::to_json() const {
  ordered_json j;
  j["tool"] = tool;
  j["version"] = version;
  j["command"] = command;
  j["parameters"] = parameters;
  j["inputs"] = inputs;
  j["outputs"] = outputs;
  j["seed"] = seed ? ordered_json(*seed) : ordered_json(nullptr);
  return j;
}

RunManifest RunManifest::from_json(const ordered_json& j) {
  try {
    RunManifest m;
    m.tool = j.at("tool").get<std::string>();
    m.version = j.at("version").get<std::string>();
    m.command = j.at("command").get<std::string>();
    m.parameters = j.at("parameters");
    if (!m.parameters.is_object()) {
      throw Error(ErrorCode::MalformedInput, "manifest parameters must be an object");
    }
    for (const auto& [key, value] : m.parameters.items()) {
      if (value.is_structured()) {
        throw Error(ErrorCode::MalformedInput, "manifest parameter '" + key + "' is not a scalar");
      }
    }
    m.inputs = j.at("inputs").get<std::vector<std::string>>();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    if (!j.at("seed").is_null()) m.seed = j.at("seed").get<std::uint64_t>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedInput, std::string("invalid manifest: ") + e.what());
  }
}

void RunManifest::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::MalformedInput, "cannot write '" + path.string() + "'");
  out << to_json().dump(2) << '\n';
  if (!out) throw Error(ErrorCode::MalformedInput, "failed writing '" + path.string() + "'");
}

RunManifest RunManifest::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedInput, "cannot open '" + path.string() + "'");
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedInput, path.string() + ": " + e.what());
  }
  return from_json(j);
}

}  // namespace lfdr::cli
