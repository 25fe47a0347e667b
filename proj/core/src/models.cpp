#include "pseudolap/models.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "pseudolap/errors.hpp"
#include "pseudolap/scattering.hpp"

namespace pseudolap {

namespace {

Eigen::MatrixXd rotation(double degrees) {
  const double c = std::cos(degrees * kPi / 180.0), s = std::sin(degrees * kPi / 180.0);
  Eigen::MatrixXd u(2, 2);
  u << c, -s, s, c;
  return u;
}

SurfaceModel one_cusp_torus(const std::string& name, ScatteringPtr phi) {
  SurfaceModel m;
  m.name = name;
  m.genus = 1;
  m.base_heights = {1.0};
  m.systole_hint = 1.0;
  m.scattering = std::move(phi);
  return m;
}

template <class T>
std::vector<T> parse_list(const std::string& text, const std::string& key) {
  std::vector<T> out;
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(", \t"), boost::token_compress_on);
  for (std::string p : parts) {
    boost::trim(p);
    if (p.empty()) continue;
    std::istringstream in(p);
    T v{};
    if (!(in >> v) || !in.eof()) throw ModelFormatError("cannot parse '" + p + "' in " + key);
    out.push_back(v);
  }
  return out;
}

bool parse_bool(const std::string& text, const std::string& key) {
  const std::string v = boost::algorithm::to_lower_copy(boost::trim_copy(text));
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ModelFormatError("expected a boolean for " + key + ", got '" + text + "'");
}

}  // namespace

const std::vector<BuiltinInfo>& builtin_models() {
  static const std::vector<BuiltinInfo> list = {
      {"modular", "PSL(2,Z)\\H, one cusp, cone points of order 2 and 3", false},
      {"synthetic-beta1", "one-cusp torus, phi(s) = s/(s-1)", false},
      {"synthetic-barrier", "one-cusp torus, pole at beta = 0.75", false},
      {"synthetic-mixed", "two-cusp torus, diag(phi_1, phi_0.75)", false},
      {"synthetic-twin", "two-cusp torus, beta = 0.9 twice, mixing rotated by 45 degrees", false},
      {"tampered", "synthetic-beta1 times exp(-3 (2s-1)^3), breaks monotonicity", true},
  };
  return list;
}

SurfaceModel builtin_model(const std::string& name) {
  if (name == "modular") {
    SurfaceModel m;
    m.name = name;
    m.genus = 0;
    m.base_heights = {1.0};
    m.cone_orders = {2, 3};
    // closed geodesic of trace 3
    m.systole_hint = 2.0 * std::acosh(1.5);
    m.scattering = modular_model();
    return m;
  }
  if (name == "synthetic-beta1") return one_cusp_torus(name, synthetic_model({1.0}, Eigen::MatrixXd::Identity(1, 1)));
  if (name == "synthetic-barrier") return one_cusp_torus(name, synthetic_model({0.75}, Eigen::MatrixXd::Identity(1, 1)));
  if (name == "synthetic-mixed" || name == "synthetic-twin") {
    SurfaceModel m;
    m.name = name;
    m.genus = 1;
    m.base_heights = {1.0, 1.0};
    m.systole_hint = 1.0;
    m.scattering = name == "synthetic-mixed" ? synthetic_model({1.0, 0.75}, Eigen::MatrixXd::Identity(2, 2))
                                             : synthetic_model({0.9, 0.9}, rotation(45.0));
    return m;
  }
  if (name == "tampered") {
    auto base = synthetic_model({1.0}, Eigen::MatrixXd::Identity(1, 1));
    return one_cusp_torus(name, std::make_shared<TamperedScattering>(base));
  }
  throw ModelFormatError("unknown builtin model '" + name + "'");
}

ScatteringPtr load_scattering_table(const std::string& path, const std::string& name) {
  std::ifstream in(path);
  if (!in) throw ModelFormatError("cannot open scattering table " + path);
  std::size_t n = 0;
  std::vector<TabulatedScattering::Sample> samples;
  std::vector<Pole> poles;
  std::string line;
  int line_no = 0;
  auto read_matrix = [&](std::istringstream& ls) {
    CMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        double re = 0.0, im = 0.0;
        if (!(ls >> re >> im)) throw ModelFormatError(path + ":" + std::to_string(line_no) + ": expected n^2 complex entries");
        m(i, j) = Complex(re, im);
      }
    }
    return m;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "dim") {
      if (!(ls >> n) || n == 0) throw ModelFormatError(path + ": bad dimension");
    } else if (n == 0) {
      throw ModelFormatError(path + ": 'dim n' must come first");
    } else if (tag == "sample") {
      double re = 0.0, im = 0.0;
      if (!(ls >> re >> im)) throw ModelFormatError(path + ":" + std::to_string(line_no) + ": bad sample point");
      samples.push_back({Complex(re, im), read_matrix(ls)});
    } else if (tag == "pole") {
      double sp = 0.0;
      if (!(ls >> sp)) throw ModelFormatError(path + ":" + std::to_string(line_no) + ": bad pole location");
      poles.push_back({sp, read_matrix(ls)});
    } else {
      throw ModelFormatError(path + ":" + std::to_string(line_no) + ": unknown record '" + tag + "'");
    }
  }
  return std::make_shared<TabulatedScattering>(n, std::move(samples), std::move(poles), name);
}

SurfaceModel load_model_file(const std::string& path) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(path, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ModelFormatError(e.what());
  }
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    if (auto v = tree.get_optional<std::string>(key)) return boost::trim_copy(*v);
    return std::nullopt;
  };
  auto require = [&](const std::string& key) {
    auto v = get(key);
    if (!v) throw ModelFormatError(path + ": missing " + key);
    return *v;
  };

  SurfaceModel m;
  m.name = get("topology.name").value_or(std::filesystem::path(path).stem().string());
  m.genus = parse_list<int>(require("topology.genus"), "topology.genus").at(0);
  if (auto v = get("topology.orientable")) m.orientable = parse_bool(*v, "topology.orientable");
  if (auto v = get("topology.cone_orders")) m.cone_orders = parse_list<int>(*v, "topology.cone_orders");
  if (auto v = get("topology.surface")) m.surface_flagged = parse_bool(*v, "topology.surface");
  m.base_heights = parse_list<double>(require("cusps.base_heights"), "cusps.base_heights");
  if (auto v = get("spectrum.cuspidal")) m.cuspidal_eigenvalues = parse_list<double>(*v, "spectrum.cuspidal");
  if (auto v = get("systole.length")) m.systole_hint = parse_list<double>(*v, "systole.length").at(0);

  const std::string kind = require("scattering.kind");
  const std::size_t n = m.base_heights.size();
  if (kind == "modular") {
    m.scattering = modular_model();
  } else if (kind == "synthetic") {
    const auto betas = parse_list<double>(require("scattering.betas"), "scattering.betas");
    Eigen::MatrixXd u = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(betas.size()),
                                                  static_cast<Eigen::Index>(betas.size()));
    if (auto v = get("scattering.mixing")) {
      const auto entries = parse_list<double>(*v, "scattering.mixing");
      if (entries.size() != betas.size() * betas.size()) throw ModelFormatError(path + ": mixing needs n*n entries");
      for (std::size_t k = 0; k < entries.size(); ++k) {
        u(static_cast<Eigen::Index>(k / betas.size()), static_cast<Eigen::Index>(k % betas.size())) = entries[k];
      }
    }
    m.scattering = std::make_shared<SyntheticScattering>(betas, u, m.name);
  } else if (kind == "tampered") {
    const SurfaceModel base = builtin_model(require("scattering.base"));
    const double c1 = parse_list<double>(get("scattering.c1").value_or("0"), "scattering.c1").at(0);
    const double c3 = parse_list<double>(get("scattering.c3").value_or("-3"), "scattering.c3").at(0);
    m.scattering = std::make_shared<TamperedScattering>(base.scattering, c1, c3);
  } else if (kind == "tabulated") {
    std::filesystem::path table = require("scattering.table");
    if (table.is_relative()) table = std::filesystem::path(path).parent_path() / table;
    m.scattering = load_scattering_table(table.string(), m.name);
  } else {
    throw ModelFormatError(path + ": unknown scattering kind '" + kind + "'");
  }
  if (m.scattering->dimension() != n) throw ModelFormatError(path + ": scattering dimension does not match cusp count");
  validate_model(m);
  check_structure(*m.scattering, default_structure_grid(*m.scattering));
  return m;
}

SurfaceModel resolve_model(const std::string& source) {
  for (const BuiltinInfo& b : builtin_models()) {
    if (b.name == source) return builtin_model(source);
  }
  if (std::filesystem::exists(source)) return load_model_file(source);
  throw ModelFormatError("'" + source + "' is neither a builtin model nor a readable file");
}

}  // namespace pseudolap
