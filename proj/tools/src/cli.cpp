#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pseudolap/errors.hpp"
#include "pseudolap/models.hpp"
#include "pseudolap/oracle.hpp"
#include "pseudolap/secular.hpp"
#include "pseudolap/systole.hpp"

namespace pseudolap::cli {

using nlohmann::json;

json to_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["model"] = c.model;
  j["heights"] = c.heights;
  j["window"] = c.window ? json::array({c.window->first, c.window->second}) : json(nullptr);
  j["tmax"] = c.t_max;
  j["grid"] = c.grid;
  j["tol"] = c.tol;
  j["branch"] = c.branch ? json(*c.branch) : json(nullptr);
  j["lambda_max"] = c.lambda_max;
  j["scales"] = json::array({c.scales.first, c.scales.second});
  j["samples"] = c.samples;
  j["out"] = c.out_dir;
  j["format"] = c.format;
  return j;
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  c.command = j.at("command").get<std::string>();
  c.model = j.at("model").get<std::string>();
  c.heights = j.at("heights").get<std::vector<double>>();
  if (!j.at("window").is_null()) c.window = std::pair{j["window"].at(0).get<double>(), j["window"].at(1).get<double>()};
  c.t_max = j.at("tmax").get<double>();
  c.grid = j.at("grid").get<int>();
  c.tol = j.at("tol").get<double>();
  if (!j.at("branch").is_null()) c.branch = j["branch"].get<int>();
  c.lambda_max = j.at("lambda_max").get<double>();
  c.scales = {j.at("scales").at(0).get<double>(), j.at("scales").at(1).get<double>()};
  c.samples = j.at("samples").get<int>();
  c.out_dir = j.at("out").get<std::string>();
  c.format = j.at("format").get<std::string>();
  return c;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

namespace {

std::string cell_text(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return format_number(std::get<double>(c));
}

json cell_json(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  return std::get<double>(c);
}

}  // namespace

void write_delimited(const Table& t, std::ostream& out) {
  for (std::size_t k = 0; k < t.columns.size(); ++k) out << (k ? "," : "") << t.columns[k];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << cell_text(row[k]);
    out << '\n';
  }
}

json structured_report(const RunConfig& c, const std::vector<Table>& tables, const json& summary) {
  json j;
  j["config"] = to_json(c);
  j["summary"] = summary;
  json tj = json::object();
  for (const Table& t : tables) {
    json rows = json::array();
    for (const auto& row : t.rows) {
      json r = json::object();
      for (std::size_t k = 0; k < row.size(); ++k) r[t.columns[k]] = cell_json(row[k]);
      rows.push_back(r);
    }
    tj[t.name] = rows;
  }
  j["tables"] = tj;
  return j;
}

namespace {

struct Outcome {
  std::vector<Table> tables;
  json summary = json::object();
  std::vector<std::string> messages;
  int code = kOk;
};

const char* chart_name(Chart c) { return c == Chart::real_branch ? "real" : "critical"; }

const char* class_name(RootClass c) {
  switch (c) {
    case RootClass::regular: return "regular";
    case RootClass::singular_mixed: return "singular-mixed";
    case RootClass::quarter: return "quarter";
  }
  return "?";
}

const char* basis_tag(const SecularRoot& r) {
  if (r.classification == RootClass::quarter) return "quarter-logarithmic-basis";
  if (r.classification == RootClass::singular_mixed) return "mixed-residue-system";
  return r.param.chart == Chart::real_branch ? "secular-real-branch" : "secular-critical-eigenphase";
}

ScanOptions scan_options(const RunConfig& c) {
  ScanOptions o;
  o.grid = c.grid;
  o.tol = c.tol;
  return o;
}

TruncationHeights heights_for(const RunConfig& c, const SurfaceModel& m) {
  if (c.heights.empty()) return TruncationHeights(m.num_cusps(), 10.0);
  if (c.heights.size() == 1 && m.num_cusps() > 1) return TruncationHeights(m.num_cusps(), c.heights[0]);
  return c.heights;
}

std::string heights_text(const TruncationHeights& a) {
  std::string s;
  for (std::size_t j = 0; j < a.size(); ++j) s += (j ? ";" : "") + format_number(a[j]);
  return s;
}

Outcome cmd_spectrum(const RunConfig& c, const SurfaceModel& m) {
  const TruncationHeights a = heights_for(c, m);
  validate_truncation(m, a);
  Outcome o;
  Table t{"spectrum", {"index", "chart", "s_re", "s_im", "lambda", "multiplicity", "class", "residual", "basis"}, {}};
  std::vector<SecularRoot> roots;
  if (c.window) {
    roots = spectrum_in_lambda_window(*m.scattering, a, c.window->first, c.window->second, scan_options(c));
  } else {
    roots = discrete_spectrum(*m.scattering, a, c.t_max, scan_options(c));
  }
  long long k = 0;
  for (const SecularRoot& r : roots) {
    t.rows.push_back({k++, chart_name(r.param.chart), r.param.s.real(), r.param.s.imag(), r.param.lambda,
                      static_cast<long long>(r.multiplicity), class_name(r.classification), r.residual,
                      basis_tag(r)});
  }
  o.summary["heights"] = a;
  o.summary["eigenvalues"] = static_cast<long long>(t.rows.size());
  o.messages.push_back(std::to_string(t.rows.size()) + " eigenvalue(s) at a = " + heights_text(a));
  o.tables.push_back(std::move(t));
  return o;
}

Outcome cmd_branches(const RunConfig& c, const SurfaceModel& m) {
  const TruncationHeights base = heights_for(c, m);
  if (c.samples < 8) throw DomainError("branches: at least 8 samples along the ray are needed");
  TruncationHeights start = base;
  for (double& v : start) v *= c.scales.first;
  validate_truncation(m, start);
  const ScanOptions opt = scan_options(c);

  std::vector<int> indices;
  if (c.branch) {
    indices.push_back(*c.branch);
  } else {
    int small = 0;
    for (const SecularRoot& r : discrete_spectrum(*m.scattering, start, 1.0, opt)) {
      if (r.param.lambda <= 0.25 + 1e-12) small += r.multiplicity;
    }
    for (int j = 0; j <= small; ++j) indices.push_back(j);
  }

  Outcome o;
  Table samples{"branches", {"branch", "scale", "heights", "lambda", "chart", "basis"}, {}};
  Table diag{"diagnostics", {"branch", "target", "monotone", "limit_ok", "first_violation_scale", "verdict", "basis"}, {}};
  bool all_ok = true;
  for (int j : indices) {
    const SpectralBranch br = branch_sweep(*m.scattering, base, c.scales.first, c.scales.second, c.samples, j, opt);
    for (const BranchSample& s : br.samples) {
      TruncationHeights a = base;
      for (double& v : a) v *= s.scale;
      samples.rows.push_back({static_cast<long long>(j), s.scale, heights_text(a), s.lambda, chart_name(s.chart),
                              "branch-continuation"});
    }
    const double viol = br.monotone ? 0.0 : br.samples[br.first_violation].scale;
    diag.rows.push_back({static_cast<long long>(j), br.target, br.monotone ? "yes" : "no", br.limit_ok ? "yes" : "no",
                         viol, br.ok() ? "PASS" : "FAIL", "monotone-limit-diagnostic"});
    std::ostringstream msg;
    msg << "branch " << j << ": " << format_number(br.samples.front().lambda) << " -> "
        << format_number(br.samples.back().lambda) << " target " << format_number(br.target)
        << (br.monotone ? "" : " NOT MONOTONE") << (br.limit_ok ? "" : " LIMIT FAILS") << (br.ok() ? " PASS" : " FAIL");
    o.messages.push_back(msg.str());
    all_ok = all_ok && br.ok();
  }
  o.summary["branches"] = indices;
  o.summary["all_ok"] = all_ok;
  o.tables.push_back(std::move(samples));
  o.tables.push_back(std::move(diag));
  if (!all_ok && m.surface_flagged) o.code = kDiagnosticFailure;
  return o;
}

Outcome cmd_count(const RunConfig& c, const SurfaceModel& m) {
  const TruncationHeights a = heights_for(c, m);
  const CountReport r = count_below(m, a, c.lambda_max, scan_options(c));
  Outcome o;
  Table t{"count",
          {"heights", "lambda_max", "cuspidal", "cuspidal_assumed_zero", "real_branch", "quarter", "total", "budget",
           "verdict", "basis"},
          {}};
  t.rows.push_back({heights_text(a), r.lambda_max, static_cast<long long>(r.cuspidal),
                    r.cuspidal_assumed_zero ? "yes" : "no", static_cast<long long>(r.real_branch),
                    static_cast<long long>(r.quarter), static_cast<long long>(r.total),
                    static_cast<long long>(r.budget), r.verdict, "counting-bound"});
  o.tables.push_back(std::move(t));
  o.messages.push_back(std::to_string(r.total) + " ≤ " + std::to_string(r.budget) + " " + r.verdict);
  if (r.cuspidal_assumed_zero) o.messages.push_back("no cuspidal eigenvalues supplied; counted as none");
  o.summary["total"] = r.total;
  o.summary["budget"] = r.budget;
  o.summary["verdict"] = r.verdict;
  if (!r.within_budget && m.surface_flagged) o.code = kDiagnosticFailure;
  return o;
}

Outcome cmd_residuals(const RunConfig&, const SurfaceModel& m) {
  Outcome o;
  Table t{"residuals", {"lambda", "s", "multiplicity", "basis"}, {}};
  std::string line;
  for (const auto& [lam, mult] : residual_spectrum(*m.scattering)) {
    const double s = 0.5 + std::sqrt(std::max(0.25 - lam, 0.0));
    t.rows.push_back({lam, s, static_cast<long long>(mult), "residue-rank"});
    line += (line.empty() ? "" : " ") + std::string("(") + format_number(lam) + "," + std::to_string(mult) + ")";
  }
  o.messages.push_back(line.empty() ? "no residual eigenvalues" : line);
  o.summary["count"] = static_cast<long long>(t.rows.size());
  o.tables.push_back(std::move(t));
  return o;
}

Outcome cmd_systole(const RunConfig& c, const SurfaceModel& m) {
  const TruncationHeights a = heights_for(c, m);
  const SystoleReport r = systole_report(m, a);
  Outcome o;
  Table t{"systole", {"quantity", "value", "basis"}, {}};
  t.rows.push_back({"area", r.area, "gauss-bonnet"});
  t.rows.push_back({"systole", r.systole, "model-input"});
  t.rows.push_back({"disc_bound", r.disc_bound, "disc-faber-krahn"});
  t.rows.push_back({"geodesic_annulus_bound", r.geodesic_annulus_bound, "geodesic-annulus"});
  t.rows.push_back({"certified_min_types_1_4", r.certified_min_types_1_4, "min-of-computable-types"});
  for (std::size_t j = 0; j < r.cusp_bound_per_cusp.size(); ++j) {
    t.rows.push_back({"cusp_ingredient_" + std::to_string(j + 1), r.cusp_bound_per_cusp[j], "cusp-rayleigh-ingredient"});
  }
  o.tables.push_back(std::move(t));
  o.messages.push_back("certified lower bound over disc and annulus domains: " +
                       format_number(r.certified_min_types_1_4));
  o.messages.push_back("cusp domains: above 1/4 qualitatively; no constant available");
  o.summary["certified_min_types_1_4"] = r.certified_min_types_1_4;
  o.summary["type5_qualitative"] = r.type5_qualitative;
  if (!(r.certified_min_types_1_4 > 0.25) && m.surface_flagged) o.code = kDiagnosticFailure;
  return o;
}

Outcome cmd_verify(const RunConfig&, const SurfaceModel&) {
  const VerificationReport rep = run_verification_suite();
  Outcome o;
  Table t{"verify", {"check", "inputs", "digest", "defect", "tolerance", "verdict"}, {}};
  int failed = 0;
  for (const VerificationCheck& ch : rep.checks) {
    t.rows.push_back({ch.name, ch.inputs, ch.digest, ch.defect, ch.tolerance, ch.pass ? "PASS" : "FAIL"});
    if (!ch.pass) {
      ++failed;
      o.messages.push_back("FAIL " + ch.name + " [" + ch.inputs + "]");
    }
  }
  o.messages.push_back(std::to_string(rep.checks.size() - static_cast<std::size_t>(failed)) + "/" +
                       std::to_string(rep.checks.size()) + " checks PASS");
  o.summary["checks"] = static_cast<long long>(rep.checks.size());
  o.summary["failed"] = failed;
  o.tables.push_back(std::move(t));
  if (failed) o.code = kNumericalError;
  return o;
}

}  // namespace

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.format != "delimited" && c.format != "structured") throw DomainError("unknown format '" + c.format + "'");
    const SurfaceModel m = c.command == "verify" ? SurfaceModel{} : resolve_model(c.model);
    if (c.command != "verify") validate_model(m);
    Outcome o;
    if (c.command == "spectrum") o = cmd_spectrum(c, m);
    else if (c.command == "branches") o = cmd_branches(c, m);
    else if (c.command == "count") o = cmd_count(c, m);
    else if (c.command == "residuals") o = cmd_residuals(c, m);
    else if (c.command == "systole") o = cmd_systole(c, m);
    else if (c.command == "verify") o = cmd_verify(c, m);
    else throw DomainError("unknown command '" + c.command + "'");

    if (c.out_dir.empty()) {
      if (c.format == "structured") {
        out << structured_report(c, o.tables, o.summary).dump(2) << '\n';
      } else {
        for (std::size_t k = 0; k < o.tables.size(); ++k) {
          if (k) out << '\n';
          write_delimited(o.tables[k], out);
        }
      }
      for (const std::string& msg : o.messages) err << msg << '\n';
    } else {
      std::filesystem::create_directories(c.out_dir);
      const std::filesystem::path dir(c.out_dir);
      if (c.format == "structured") {
        std::ofstream f(dir / (c.command + ".json"));
        f << structured_report(c, o.tables, o.summary).dump(2) << '\n';
      } else {
        for (const Table& t : o.tables) {
          std::ofstream f(dir / (t.name + ".csv"));
          write_delimited(t, f);
        }
      }
      for (const std::string& msg : o.messages) out << msg << '\n';
    }
    return o.code;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalError;
  }
}

namespace {

template <class T>
std::vector<T> split_list(const std::string& text) {
  std::vector<T> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::istringstream in(item);
    T x{};
    if (!(in >> x)) throw CLI::ValidationError("list", "cannot parse '" + item + "'");
    v.push_back(x);
  }
  return v;
}

std::pair<double, double> parse_pair(const std::string& text, const char* what) {
  const auto v = split_list<double>(text);
  if (v.size() != 2) throw CLI::ValidationError(what, "expected two comma-separated numbers");
  return {v[0], v[1]};
}

}  // namespace

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectra of pseudo-Laplacians on cusped hyperbolic surfaces"};
  app.require_subcommand(1);
  RunConfig c;
  std::string heights, window, scales;
  int branch = -1;
  std::string models_help = "builtin model name or model file; builtins:";
  for (const BuiltinInfo& b : builtin_models()) models_help += " " + b.name;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--model", c.model, models_help)->capture_default_str();
    sub->add_option("--a", heights, "truncation heights, comma list (one value applies to every cusp; default 10)");
    sub->add_option("--grid", c.grid, "uniform scan points per pole-free interval")->capture_default_str();
    sub->add_option("--tol", c.tol, "root bracket width")->capture_default_str();
    sub->add_option("--out", c.out_dir, "output directory (default: tables to stdout)");
    sub->add_option("--format", c.format, "delimited | structured")->capture_default_str();
  };
  CLI::App* spectrum = app.add_subcommand("spectrum", "eigenvalues of the pseudo-Laplacian on Eisenstein data");
  add_common(spectrum);
  spectrum->add_option("--window", window, "lambda window lo,hi (default: everything up to --tmax)");
  spectrum->add_option("--tmax", c.t_max, "largest t on the critical line")->capture_default_str();

  CLI::App* branches = app.add_subcommand("branches", "follow eigenvalue branches along a = c * a_base");
  add_common(branches);
  branches->add_option("--scales", scales, "scale interval c_lo,c_hi (default 1,100)");
  branches->add_option("--samples", c.samples, "geometric samples along the ray")->capture_default_str();
  branches->add_option("--branch", branch, "branch index (default: all branches starting at or below 1/4, plus one)");

  CLI::App* count = app.add_subcommand("count", "count eigenvalues at or below lambda_max");
  add_common(count);
  count->add_option("--lambda-max", c.lambda_max, "upper end, at most 1/4")->capture_default_str();

  CLI::App* residuals = app.add_subcommand("residuals", "residual eigenvalues from the scattering poles");
  add_common(residuals);
  CLI::App* systole = app.add_subcommand("systole", "lower bounds for the analytic systole");
  add_common(systole);
  CLI::App* verify = app.add_subcommand("verify", "run the independent verification suite");
  verify->add_option("--out", c.out_dir, "output directory (default: tables to stdout)");
  verify->add_option("--format", c.format, "delimited | structured")->capture_default_str();

  try {
    app.parse(argc, argv);
    c.command = app.get_subcommands().front()->get_name();
    if (!heights.empty()) c.heights = split_list<double>(heights);
    if (!window.empty()) c.window = parse_pair(window, "--window");
    if (!scales.empty()) c.scales = parse_pair(scales, "--scales");
    if (branch >= 0) c.branch = branch;
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kInputError;
  }
  return run(c, out, err);
}

}  // namespace pseudolap::cli
