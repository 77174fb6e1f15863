#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>

#include "lfdrlab/cli.hpp"
#include "lfdrlab/estimation.hpp"
#include "lfdrlab/figures.hpp"
#include "lfdrlab/oracle.hpp"
#include "lfdrlab/procedures.hpp"
#include "lfdrlab/simulation.hpp"

#ifndef LFDR_LAB_VERSION
#define LFDR_LAB_VERSION "0.0.0"
#endif

namespace lfdr::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr double kCliWeightTolerance = 1e-9;

// Six significant digits for human-readable reports.
std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string format_region(const RejectionRegion& r) {
  if (r.empty()) return "empty";
  std::string s;
  for (std::size_t i = 0; i < r.intervals().size(); ++i) {
    const auto& iv = r.intervals()[i];
    if (i) s += " U ";
    s += std::isinf(iv.lo) ? "(-inf" : "[" + fmt6(iv.lo);
    s += ", ";
    s += std::isinf(iv.hi) ? "inf)" : fmt6(iv.hi) + "]";
  }
  return s;
}

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1), got " + fmt6(alpha));
  }
}

// Writes every file only after all content is produced; if any write fails
// the files written so far are removed.
class OutputSet {
 public:
  void add(fs::path path, std::string content) {
    files_.emplace_back(std::move(path), std::move(content));
  }

  std::vector<std::string> paths() const {
    std::vector<std::string> out;
    for (const auto& [p, c] : files_) out.push_back(p.string());
    return out;
  }

  void commit() {
    std::vector<fs::path> written;
    try {
      for (const auto& [path, content] : files_) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::MalformedInput, "cannot write '" + path.string() + "'");
        written.push_back(path);
        out << content;
        out.close();
        if (!out) throw Error(ErrorCode::MalformedInput, "failed writing '" + path.string() + "'");
      }
    } catch (...) {
      std::error_code ec;
      for (const auto& p : written) fs::remove(p, ec);
      throw;
    }
  }

 private:
  std::vector<std::pair<fs::path, std::string>> files_;
};

RunManifest make_manifest(const std::string& command) {
  RunManifest m;
  m.version = LFDR_LAB_VERSION;
  m.command = command;
  return m;
}

std::string manifest_text(const RunManifest& m) { return m.to_json().dump(2) + "\n"; }

// ---------------------------------------------------------------- analyze

struct AnalyzeOptions {
  std::string input;
  double alpha = 0.1;
  std::string procedure = "bh";
  std::string null = "theoretical";
  std::string out;
  std::string manifest;
};

// KDE marginal, or a single-bandwidth kernel sum when the sample is too
// small or too flat for the bandwidth rule.
std::function<double(double)> marginal_for(const std::vector<double>& z,
                                           const GaussianComponent& null) {
  const auto [mn, mx] = std::minmax_element(z.begin(), z.end());
  if (z.size() >= 2 && *mn < *mx) {
    auto kde = std::make_shared<MarginalDensityEstimate>(estimate_marginal_kde(z));
    return [kde](double x) { return (*kde)(x); };
  }
  const double h = 1.06 * null.sd * std::pow(static_cast<double>(z.size()), -0.2);
  return [z, h](double x) {
    double acc = 0.0;
    for (double v : z) acc += gaussian_pdf(x, {v, h});
    return acc / static_cast<double>(z.size());
  };
}

int cmd_analyze(const AnalyzeOptions& opt, std::ostream& out) {
  require_alpha(opt.alpha);
  const std::vector<double> z = read_z_file(opt.input);

  GaussianComponent null = kStandardNormal;
  std::optional<NullEstimate> est;
  if (opt.null == "estimated") {
    est = estimate_null_ecf(z);
    null = est->null();
  }
  std::vector<double> pvalues(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) pvalues[i] = two_sided_pvalue(z[i], null);
  const double p0_hat = est ? est->p0_hat : estimate_p0_tail(pvalues);

  DecisionTable table;
  if (opt.procedure == "bh") {
    table = bh_stepup(pvalues, opt.alpha);
  } else if (opt.procedure == "abh") {
    table = adaptive_bh(pvalues, opt.alpha, std::max(p0_hat, std::numeric_limits<double>::min()));
  } else {
    const auto lfdr_hat = estimated_lfdr_values(z, p0_hat, null, marginal_for(z, null));
    table = lfdr_stepup(lfdr_hat, opt.alpha);
  }
  for (std::size_t i = 0; i < z.size(); ++i) {
    table.rows[i].z = z[i];
    table.rows[i].pvalue = pvalues[i];
  }

  std::ostringstream csv;
  csv << "index,z,pvalue,lfdr_hat,reject\n";
  for (const auto& r : table.rows) {
    csv << r.index << ',' << format_full(r.z) << ',' << format_full(r.pvalue) << ','
        << (r.lfdr_hat ? format_full(*r.lfdr_hat) : std::string()) << ','
        << (r.reject ? "true" : "false") << '\n';
  }

  if (opt.out.empty()) {
    out << csv.str();
    return kOk;
  }

  RunManifest man = make_manifest("analyze");
  man.parameters["alpha"] = opt.alpha;
  man.parameters["procedure"] = opt.procedure;
  man.parameters["null"] = opt.null;
  man.parameters["out"] = opt.out;
  man.inputs = {opt.input};
  man.outputs = {opt.out};
  OutputSet files;
  files.add(opt.out, csv.str());
  files.add(opt.manifest.empty() ? opt.out + ".manifest.json" : opt.manifest, manifest_text(man));
  files.commit();

  out << "m: " << z.size() << '\n'
      << "procedure: " << opt.procedure << '\n'
      << "alpha: " << fmt6(opt.alpha) << '\n'
      << "null: N(" << fmt6(null.mean) << ", " << fmt6(null.sd) << "^2)"
      << (est ? " estimated" : " theoretical") << '\n'
      << "p0_hat: " << fmt6(p0_hat) << '\n'
      << "rejections: " << table.k << '\n'
      << "wrote: " << opt.out << '\n';
  return kOk;
}

// ----------------------------------------------------------------- oracle

struct OracleOptions {
  double p0 = 1.0;
  std::string components;
  double alpha = 0.1;
  double null_mean = 0.0;
  double null_sd = 1.0;
  std::string csv;
  std::string manifest;
};

int cmd_oracle(const OracleOptions& opt, std::ostream& out, std::ostream& err) {
  require_alpha(opt.alpha);
  const TwoGroupModel model(opt.p0, {opt.null_mean, opt.null_sd},
                            parse_components(opt.components), kCliWeightTolerance);

  struct Outcome {
    RuleKind kind;
    std::optional<OracleRule> rule;
    std::string error;
  };
  std::vector<Outcome> outcomes;
  for (auto kind : {RuleKind::PValue, RuleKind::Lfdr}) {
    Outcome o{kind, std::nullopt, {}};
    try {
      o.rule = kind == RuleKind::PValue ? oracle_pvalue_rule(model, opt.alpha)
                                        : oracle_lfdr_rule(model, opt.alpha);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Infeasible) throw;
      o.error = e.what();
    }
    outcomes.push_back(std::move(o));
  }

  out << "model: p0=" << fmt6(opt.p0) << " null=N(" << fmt6(opt.null_mean) << ", "
      << fmt6(opt.null_sd) << "^2) nonnull=" << (opt.components.empty() ? "none" : opt.components)
      << '\n'
      << "alpha: " << fmt6(opt.alpha) << '\n';
  std::ostringstream csv;
  csv << "rule,threshold,lo,hi,mfdr,mfnr\n";
  std::string infeasible;
  for (const auto& o : outcomes) {
    out << to_string(o.kind) << " oracle\n";
    if (!o.rule) {
      infeasible += (infeasible.empty() ? "" : " and ") + std::string(to_string(o.kind));
      out << "  infeasible: " << o.error << '\n';
      csv << to_string(o.kind) << ",,,,,\n";
      continue;
    }
    const auto& r = *o.rule;
    out << "  threshold: " << fmt6(r.threshold) << '\n'
        << "  region: " << format_region(r.region) << '\n'
        << "  symmetric: "
        << (r.region.symmetric_about(opt.null_mean, 1e-8) ? "yes" : "no") << '\n'
        << "  mfdr: " << fmt6(r.mfdr) << '\n'
        << "  mfnr: " << fmt6(r.mfnr) << '\n';
    const std::string tail = ',' + format_full(r.mfdr) + ',' + format_full(r.mfnr) + '\n';
    if (r.region.empty()) csv << to_string(r.kind) << ',' << format_full(r.threshold) << ",,"
                              << tail;
    for (const auto& iv : r.region.intervals()) {
      csv << to_string(r.kind) << ',' << format_full(r.threshold) << ',' << format_full(iv.lo)
          << ',' << format_full(iv.hi) << tail;
    }
  }

  std::string manifest_path = opt.manifest;
  if (manifest_path.empty() && !opt.csv.empty()) manifest_path = opt.csv + ".manifest.json";
  if (!manifest_path.empty()) {
    RunManifest man = make_manifest("oracle");
    man.parameters["p0"] = opt.p0;
    man.parameters["components"] = opt.components;
    man.parameters["alpha"] = opt.alpha;
    man.parameters["null_mean"] = opt.null_mean;
    man.parameters["null_sd"] = opt.null_sd;
    if (!opt.csv.empty()) {
      man.parameters["csv"] = opt.csv;
      man.outputs = {opt.csv};
    }
    OutputSet files;
    if (!opt.csv.empty()) files.add(opt.csv, csv.str());
    files.add(manifest_path, manifest_text(man));
    files.commit();
  }

  if (!infeasible.empty()) {
    err << "error: the " << infeasible << " oracle cannot reach alpha = " << fmt6(opt.alpha)
        << " for this model\n";
    return kInvalidParameters;
  }
  return kOk;
}

// ---------------------------------------------------------- estimate-null

struct EstimateOptions {
  std::string input;
  std::string manifest;
};

int cmd_estimate_null(const EstimateOptions& opt, std::ostream& out) {
  const std::vector<double> z = read_z_file(opt.input);
  const NullEstimate e = estimate_null_ecf(z);
  out << "m: " << z.size() << '\n'
      << "p0_hat: " << fmt6(e.p0_hat) << '\n'
      << "u0_hat: " << fmt6(e.u0_hat) << '\n'
      << "sigma0_hat: " << fmt6(e.sigma0_hat) << '\n'
      << "t_star: " << fmt6(e.t_star) << '\n'
      << "cf_modulus: " << fmt6(e.cf_magnitude_at_t_star) << '\n'
      << "p0_hat,u0_hat,sigma0_hat,t_star,cf_modulus\n"
      << format_full(e.p0_hat) << ',' << format_full(e.u0_hat) << ','
      << format_full(e.sigma0_hat) << ',' << format_full(e.t_star) << ','
      << format_full(e.cf_magnitude_at_t_star) << '\n';
  if (!opt.manifest.empty()) {
    RunManifest man = make_manifest("estimate-null");
    man.inputs = {opt.input};
    OutputSet files;
    files.add(opt.manifest, manifest_text(man));
    files.commit();
  }
  return kOk;
}

// --------------------------------------------------------------- simulate

// Resolved simulation request. Every field is filled so that the manifest
// records the full configuration, not just what the file spelled out.
struct SimRequest {
  std::string figure;  // empty for a replication study
  ordered_json resolved = ordered_json::object();
  SimConfig config;
  std::size_t demo_m = 10000;
  std::uint64_t demo_seed = 20080101;
};

[[noreturn]] void bad_config(const std::string& msg) {
  throw Error(ErrorCode::MalformedInput, "config: " + msg);
}

template <class T>
T config_value(const ordered_json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    bad_config(std::string("'") + key + "' has the wrong type");
  }
}

std::size_t config_count(const ordered_json& j, const char* key, std::size_t fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_unsigned()) bad_config(std::string("'") + key + "' must be a positive integer");
  return v.get<std::size_t>();
}

std::vector<std::string> config_procedures(const ordered_json& j) {
  std::vector<std::string> names;
  if (!j.contains("procedures")) return {"bh", "adaptive_bh", "lfdr_oracle_plugin", "lfdr_estimated"};
  const auto& v = j.at("procedures");
  if (v.is_string()) {
    std::stringstream s(v.get<std::string>());
    for (std::string item; std::getline(s, item, ',');) {
      item.erase(0, item.find_first_not_of(' '));
      item.erase(item.find_last_not_of(' ') + 1);
      if (!item.empty()) names.push_back(item);
    }
  } else if (v.is_array()) {
    for (const auto& item : v) {
      if (!item.is_string()) bad_config("'procedures' entries must be strings");
      names.push_back(item.get<std::string>());
    }
  } else {
    bad_config("'procedures' must be a list or a comma-separated string");
  }
  return names;
}

SimRequest resolve_config(const ordered_json& j) {
  if (!j.is_object()) bad_config("top level must be an object");
  SimRequest req;

  std::string figure;
  if (j.contains("figure1")) {
    const auto panel = config_value<std::string>(j, "figure1", "");
    if (panel.size() != 1) bad_config("'figure1' must be one of a, b, c, d");
    figure = "figure1_" + std::string(1, static_cast<char>(std::tolower(panel[0])));
  }
  if (j.contains("figure")) {
    if (!figure.empty()) bad_config("give either 'figure' or 'figure1', not both");
    figure = config_value<std::string>(j, "figure", "");
  }

  std::set<std::string> allowed;
  if (figure.empty()) {
    allowed = {"p0", "components", "m", "reps", "alpha", "seed", "rho", "procedures"};
  } else if (figure == "concentrated") {
    allowed = {"figure", "m", "seed"};
  } else {
    allowed = {"figure", "figure1"};
  }
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) {
      bad_config("key '" + key + "' is not valid" +
                 (figure.empty() ? std::string() : " for figure '" + figure + "'"));
    }
  }

  if (figure.rfind("figure1_", 0) == 0) {
    if (figure.size() != 9) bad_config("unknown figure '" + figure + "'");
    try {
      parse_panel(figure[8]);
    } catch (const Error&) {
      bad_config("unknown figure '" + figure + "'");
    }
    req.figure = figure;
    req.resolved["figure"] = figure;
    return req;
  }
  if (figure == "figure2") {
    req.figure = figure;
    req.resolved["figure"] = figure;
    return req;
  }
  if (figure == "concentrated") {
    req.figure = figure;
    req.demo_m = config_count(j, "m", req.demo_m);
    req.demo_seed = config_value<std::uint64_t>(j, "seed", req.demo_seed);
    if (req.demo_m < 100) bad_config("'m' must be at least 100 for the concentrated demo");
    req.resolved["figure"] = figure;
    req.resolved["m"] = req.demo_m;
    req.resolved["seed"] = req.demo_seed;
    return req;
  }
  if (!figure.empty()) bad_config("unknown figure '" + figure + "'");

  const double p0 = config_value<double>(j, "p0", 0.8);
  const std::string components =
      config_value<std::string>(j, "components", "0.1:-3:1,0.1:3:1");
  SimConfig& c = req.config;
  try {
    c.model = TwoGroupModel(p0, kStandardNormal, parse_components(components), kCliWeightTolerance);
  } catch (const Error& e) {
    bad_config(e.what());
  }
  c.m = config_count(j, "m", 5000);
  c.reps = config_count(j, "reps", 200);
  c.alpha = config_value<double>(j, "alpha", 0.1);
  c.seed = config_value<std::uint64_t>(j, "seed", 2008);
  c.rho = config_value<double>(j, "rho", 0.0);
  c.procedures.clear();
  std::string joined;
  for (const auto& name : config_procedures(j)) {
    try {
      c.procedures.push_back(parse_sim_procedure(name));
    } catch (const Error& e) {
      bad_config(e.what());
    }
    joined += (joined.empty() ? "" : ",") + name;
  }
  try {
    c.validate();
  } catch (const Error& e) {
    bad_config(e.what());
  }

  req.resolved["p0"] = p0;
  req.resolved["components"] = format_components(c.model.nonnull());
  req.resolved["m"] = c.m;
  req.resolved["reps"] = c.reps;
  req.resolved["alpha"] = c.alpha;
  req.resolved["seed"] = c.seed;
  req.resolved["rho"] = c.rho;
  req.resolved["procedures"] = joined;
  return req;
}

std::string csv_of(const std::function<void(std::ostream&)>& writer) {
  std::ostringstream s;
  writer(s);
  return s.str();
}

int run_simulation(const SimRequest& req, const fs::path& dir,
                   const std::vector<std::string>& inputs, std::ostream& out,
                   std::ostream& err) {
  OutputSet files;
  std::ostringstream report;
  std::optional<std::uint64_t> seed;

  if (req.figure.rfind("figure1_", 0) == 0) {
    const Figure1Panel panel = parse_panel(req.figure[8]);
    const auto rows = figure1_data(panel);
    for (const auto& r : rows) {
      if (!r.ok()) err << "warning: sweep " << fmt6(r.sweep) << ": " << r.error << '\n';
    }
    files.add(dir / (req.figure + ".csv"),
              csv_of([&](std::ostream& s) { write_figure1_csv(s, panel, rows); }));
    report << req.figure << ": " << rows.size() << " rows\n";
  } else if (req.figure == "figure2") {
    const auto data = figure2_data();
    files.add(dir / "figure2_curve.csv",
              csv_of([&](std::ostream& s) { write_figure2_curve_csv(s, data); }));
    files.add(dir / "figure2_regions.csv",
              csv_of([&](std::ostream& s) { write_figure2_regions_csv(s, data); }));
    files.add(dir / "figure2_probes.csv",
              csv_of([&](std::ostream& s) { write_figure2_probes_csv(s, data); }));
    report << "pvalue oracle region: " << format_region(data.pvalue_rule.region) << '\n'
           << "lfdr oracle region: " << format_region(data.lfdr_rule.region) << '\n';
    for (const auto& p : data.probes) {
      report << "z=" << fmt6(p.z) << " pvalue=" << fmt6(p.pvalue) << " lfdr=" << fmt6(p.lfdr)
             << " pvalue_oracle=" << (p.pvalue_oracle_rejects ? "reject" : "accept")
             << " lfdr_oracle=" << (p.lfdr_oracle_rejects ? "reject" : "accept") << '\n';
    }
  } else if (req.figure == "concentrated") {
    seed = req.demo_seed;
    const auto rep = concentrated_alternative_demo(concentrated_model(), req.demo_m, 100,
                                                   req.demo_seed);
    files.add(dir / "concentrated.csv",
              csv_of([&](std::ostream& s) { write_concentrated_csv(s, rep); }));
    report << "nonnull fraction among 100 smallest p-values: "
           << fmt6(rep.capture_smallest_pvalues) << '\n'
           << "nonnull fraction among 100 smallest Lfdr: " << fmt6(rep.capture_smallest_lfdr)
           << '\n';
  } else {
    seed = req.config.seed;
    const auto result = run_replicated(req.config);
    files.add(dir / "replication.csv",
              csv_of([&](std::ostream& s) { write_replication_csv(s, result); }));
    for (const auto& p : result.procedures) {
      report << to_string(p.procedure) << ": mfdr=" << fmt6(p.mfdr) << " (se " << fmt6(p.mfdr_se)
             << ") mfnr=" << fmt6(p.mfnr) << " (se " << fmt6(p.mfnr_se)
             << ") rejections=" << fmt6(p.mean_rejections) << '\n';
    }
  }

  RunManifest man = make_manifest("simulate");
  man.parameters = req.resolved;
  man.parameters["out"] = dir.string();
  man.inputs = inputs;
  man.outputs = files.paths();
  man.seed = seed;
  files.add(dir / "manifest.json", manifest_text(man));

  fs::create_directories(dir);
  files.commit();
  out << report.str();
  for (const auto& p : files.paths()) out << "wrote: " << p << '\n';
  return kOk;
}

int cmd_simulate(const std::string& config_path, const std::string& dir, std::ostream& out,
                 std::ostream& err) {
  std::ifstream in(config_path);
  if (!in) throw Error(ErrorCode::MalformedInput, "cannot open '" + config_path + "'");
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    bad_config(e.what());
  }
  return run_simulation(resolve_config(j), dir, {config_path}, out, err);
}

// ----------------------------------------------------------------- replay

std::string scalar_text(const ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return format_full(v.get<double>());
  return v.dump();
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_replay(const std::string& path, std::ostream& out, std::ostream& err) {
  const RunManifest man = RunManifest::load(path);
  if (man.version != LFDR_LAB_VERSION) {
    err << "warning: manifest was written by version " << man.version << ", this is "
        << LFDR_LAB_VERSION << '\n';
  }
  if (man.command == "simulate") {
    ordered_json config = man.parameters;
    if (!config.contains("out")) bad_config("manifest has no 'out' parameter");
    const std::string dir = config["out"].get<std::string>();
    config.erase("out");
    return run_simulation(resolve_config(config), dir, man.inputs, out, err);
  }

  std::vector<std::string> args = {man.command};
  for (const auto& in : man.inputs) args.push_back(in);
  for (const auto& [key, value] : man.parameters.items()) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    args.push_back(flag);
    args.push_back(scalar_text(value));
  }
  args.push_back("--manifest");
  args.push_back(path);
  if (man.command != "analyze" && man.command != "oracle" && man.command != "estimate-null") {
    throw Error(ErrorCode::MalformedInput, "manifest names unknown command '" + man.command + "'");
  }
  return dispatch(args, out, err);
}

// -------------------------------------------------------------- front end

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Local false discovery rate toolkit", "lfdr_lab"};
  app.set_version_flag("--version", std::string(LFDR_LAB_VERSION));
  app.require_subcommand(1);

  AnalyzeOptions an;
  auto* analyze = app.add_subcommand("analyze", "Run a multiple-testing procedure on z-values");
  analyze->add_option("input", an.input, "z-value file")->required();
  analyze->add_option("--alpha", an.alpha, "Target level")->capture_default_str();
  analyze->add_option("--procedure", an.procedure, "bh, abh or lfdr")
      ->check(CLI::IsMember({"bh", "abh", "lfdr"}))
      ->capture_default_str();
  analyze->add_option("--null", an.null, "theoretical or estimated")
      ->check(CLI::IsMember({"theoretical", "estimated"}))
      ->capture_default_str();
  analyze->add_option("--out", an.out, "Decision CSV (stdout when omitted)");
  analyze->add_option("--manifest", an.manifest, "Manifest path (default <out>.manifest.json)");

  OracleOptions orc;
  auto* oracle = app.add_subcommand("oracle", "Oracle rejection regions for a known mixture");
  oracle->add_option("--p0", orc.p0, "Null proportion")->required();
  oracle->add_option("--components", orc.components, "Nonnull components w:mean:sd,...");
  oracle->add_option("--alpha", orc.alpha, "mFDR level")->capture_default_str();
  oracle->add_option("--null-mean", orc.null_mean, "Null mean")->capture_default_str();
  oracle->add_option("--null-sd", orc.null_sd, "Null standard deviation")->capture_default_str();
  oracle->add_option("--csv", orc.csv, "Region CSV");
  oracle->add_option("--manifest", orc.manifest, "Manifest path (default <csv>.manifest.json)");

  std::string config_path, out_dir;
  auto* simulate = app.add_subcommand("simulate", "Simulation studies and figure data");
  simulate->add_option("--config", config_path, "JSON configuration")->required();
  simulate->add_option("--out", out_dir, "Output directory")->required();

  EstimateOptions est;
  auto* estimate = app.add_subcommand("estimate-null", "Estimate the null distribution");
  estimate->add_option("input", est.input, "z-value file")->required();
  estimate->add_option("--manifest", est.manifest, "Manifest path");

  std::string manifest_path;
  auto* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay->add_option("manifest", manifest_path, "Manifest file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  if (*analyze) return cmd_analyze(an, out);
  if (*oracle) return cmd_oracle(orc, out, err);
  if (*simulate) return cmd_simulate(config_path, out_dir, out, err);
  if (*estimate) return cmd_estimate_null(est, out);
  return cmd_replay(manifest_path, out, err);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace lfdr::cli
