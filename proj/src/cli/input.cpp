#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>

#include "lfdrlab/cli.hpp"
#include "lfdrlab/simulation.hpp"

namespace lfdr::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string_view unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return trim(s);
}

std::optional<double> to_double(std::string_view s) {
  s = unquote(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void malformed(std::size_t line_no, const std::string& what) {
  throw Error(ErrorCode::MalformedInput, "line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedInput:
    case ErrorCode::EmptyInput:
      return kInputError;
    case ErrorCode::NotEnoughData:
      return kNotEnoughData;
    case ErrorCode::DegenerateCF:
    case ErrorCode::DegenerateData:
    case ErrorCode::DegenerateMarginal:
      return kDegenerate;
    default:
      return kInvalidParameters;
  }
}

std::vector<double> parse_z_values(std::istream& in) {
  std::vector<double> z;
  std::optional<std::size_t> column;  // set once a CSV header is seen
  bool first = true;
  std::size_t line_no = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string_view line = raw;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;

    if (first) {
      first = false;
      if (!to_double(line)) {
        const auto names = split(line, ',');
        for (std::size_t i = 0; i < names.size(); ++i) {
          if (unquote(names[i]) == "z") {
            column = i;
            break;
          }
        }
        if (!column) malformed(line_no, "expected a number or a CSV header with a 'z' column");
        continue;
      }
    }

    std::string_view cell = line;
    if (column) {
      const auto cells = split(line, ',');
      if (*column >= cells.size()) malformed(line_no, "row has no 'z' field");
      cell = cells[*column];
    }
    const auto v = to_double(cell);
    if (!v) malformed(line_no, "cannot parse '" + std::string(trim(cell)) + "' as a number");
    if (!std::isfinite(*v)) malformed(line_no, "z-values must be finite");
    z.push_back(*v);
  }
  if (z.empty()) throw Error(ErrorCode::EmptyInput, "input contains no z-values");
  return z;
}

std::vector<double> read_z_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedInput, "cannot open '" + path.string() + "'");
  try {
    return parse_z_values(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::vector<WeightedComponent> parse_components(const std::string& spec) {
  std::vector<WeightedComponent> out;
  if (trim(spec).empty()) return out;
  for (auto item : split(spec, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 3) {
      throw Error(ErrorCode::MalformedInput,
                  "component '" + std::string(trim(item)) + "' is not weight:mean:sd");
    }
    const auto w = to_double(parts[0]);
    const auto mu = to_double(parts[1]);
    const auto sd = to_double(parts[2]);
    if (!w || !mu || !sd) {
      throw Error(ErrorCode::MalformedInput,
                  "component '" + std::string(trim(item)) + "' has a non-numeric field");
    }
    out.push_back({*w, {*mu, *sd}});
  }
  return out;
}

std::string format_components(const std::vector<WeightedComponent>& comps) {
  std::string s;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (i) s += ',';
    s += format_full(comps[i].weight) + ':' + format_full(comps[i].component.mean) + ':' +
         format_full(comps[i].component.sd);
  }
  return s;
}

}  // namespace lfdr::cli
