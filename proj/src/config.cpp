#include "itre/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "itre/errors.hpp"

namespace itre {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\'')))
    return s.substr(1, s.size() - 2);
  return s;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw UsageError("config: bad numeric value for " + key + ": " + value);
  }
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return int(v);
  } catch (const std::exception&) {
    throw UsageError("config: bad integer value for " + key + ": " + value);
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw UsageError("config: bad boolean value for " + key + ": " + value);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void apply_config_entry(EnhanceConfig& cfg, const std::string& key,
                        const std::string& raw_value) {
  const std::string value = unquote(trim(raw_value));
  if (key == "alpha_exp") {
    cfg.solver.alpha_exp = parse_double(key, value);
    if (cfg.solver.alpha_exp < 0.0)
      throw UsageError("config: alpha_exp must be >= 0");
  } else if (key == "eps") {
    cfg.solver.eps = parse_double(key, value);
  } else if (key == "eps1") {
    cfg.solver.eps1 = parse_double(key, value);
  } else if (key == "lambda_g") {
    cfg.solver.lambda_g = parse_double(key, value);
  } else if (key == "rho0") {
    cfg.solver.rho0 = parse_double(key, value);
    if (cfg.solver.rho0 <= 0.0) throw UsageError("config: rho0 must be > 0");
  } else if (key == "p") {
    cfg.solver.p = parse_double(key, value);
    if (cfg.solver.p <= 1.0) throw UsageError("config: p must be > 1");
  } else if (key == "max_iterations") {
    cfg.solver.max_iterations = parse_int(key, value);
    if (cfg.solver.max_iterations < 1)
      throw UsageError("config: max_iterations must be >= 1");
  } else if (key == "convergence_tol") {
    cfg.solver.convergence_tol = parse_double(key, value);
  } else if (key == "dual_sign_alternate") {
    cfg.solver.dual_sign_alternate = parse_bool(key, value);
  } else if (key == "wls_lambda") {
    cfg.wls.strength = parse_double(key, value);
    if (cfg.wls.strength <= 0.0) throw UsageError("config: wls_lambda must be > 0");
  } else if (key == "wls_alpha") {
    cfg.wls.exponent = parse_double(key, value);
    if (cfg.wls.exponent <= 0.0) throw UsageError("config: wls_alpha must be > 0");
  } else if (key == "wls_eps") {
    cfg.wls.guide_floor = parse_double(key, value);
    if (cfg.wls.guide_floor <= 0.0) throw UsageError("config: wls_eps must be > 0");
  } else if (key == "wls_tolerance") {
    cfg.wls.solver_tolerance = parse_double(key, value);
    if (cfg.wls.solver_tolerance <= 0.0)
      throw UsageError("config: wls_tolerance must be > 0");
  } else if (key == "wls_max_iterations") {
    cfg.wls.max_solver_iterations = parse_int(key, value);
  } else if (key == "rg_enabled") {
    if (parse_bool(key, value))
      cfg.rg.mode = RgMode::on;
    else if (cfg.rg.mode == RgMode::on)
      cfg.rg.mode = RgMode::off;
  } else if (key == "rg_auto") {
    if (parse_bool(key, value))
      cfg.rg.mode = RgMode::automatic;
    else if (cfg.rg.mode == RgMode::automatic)
      cfg.rg.mode = RgMode::off;
  } else if (key == "rg_radius") {
    cfg.rg.neighborhood_radius = parse_int(key, value);
    if (cfg.rg.neighborhood_radius < 1)
      throw UsageError("config: rg_radius must be >= 1");
  } else if (key == "rg_radius_auto") {
    cfg.rg.radius_auto = parse_bool(key, value);
  } else if (key == "rg_auto_threshold") {
    cfg.rg.auto_trigger_threshold = parse_double(key, value);
    if (cfg.rg.auto_trigger_threshold < 0.0 ||
        cfg.rg.auto_trigger_threshold > 1.0)
      throw UsageError("config: rg_auto_threshold must be in [0,1]");
  } else if (key == "clusters") {
    cfg.codebook_size = parse_int(key, value);
    if (cfg.codebook_size < 16)
      throw UsageError("config: clusters must be >= 16");
  } else if (key == "codebook") {
    if (value == "fibonacci")
      cfg.codebook = CodebookKind::fibonacci;
    else if (value == "kmeans")
      cfg.codebook = CodebookKind::kmeans;
    else
      throw UsageError("config: codebook must be fibonacci or kmeans");
  } else if (key == "dump_intermediates") {
    cfg.dump_intermediates = parse_bool(key, value);
  } else if (key == "output_format") {
    if (value != "png") throw UsageError("config: output_format must be png");
    cfg.output_format = value;
  } else {
    throw UsageError("config: unknown key: " + key);
  }
}

void load_config_file(EnhanceConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw UsageError("config: " + path + ":" + std::to_string(lineno) +
                       ": expected key = value");
    apply_config_entry(cfg, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
  }
}

std::string serialize_config(const EnhanceConfig& cfg) {
  std::ostringstream out;
  out << "alpha_exp = " << fmt(cfg.solver.alpha_exp) << "\n";
  out << "eps = " << fmt(cfg.solver.eps) << "\n";
  out << "eps1 = " << fmt(cfg.solver.eps1) << "\n";
  out << "lambda_g = " << fmt(cfg.solver.lambda_g) << "\n";
  out << "rho0 = " << fmt(cfg.solver.rho0) << "\n";
  out << "p = " << fmt(cfg.solver.p) << "\n";
  out << "max_iterations = " << cfg.solver.max_iterations << "\n";
  out << "convergence_tol = " << fmt(cfg.solver.convergence_tol) << "\n";
  out << "dual_sign_alternate = "
      << (cfg.solver.dual_sign_alternate ? "true" : "false") << "\n";
  out << "wls_lambda = " << fmt(cfg.wls.strength) << "\n";
  out << "wls_alpha = " << fmt(cfg.wls.exponent) << "\n";
  out << "wls_eps = " << fmt(cfg.wls.guide_floor) << "\n";
  out << "wls_tolerance = " << fmt(cfg.wls.solver_tolerance) << "\n";
  out << "wls_max_iterations = " << cfg.wls.max_solver_iterations << "\n";
  out << "rg_enabled = " << (cfg.rg.mode == RgMode::on ? "true" : "false")
      << "\n";
  out << "rg_auto = " << (cfg.rg.mode == RgMode::automatic ? "true" : "false")
      << "\n";
  out << "rg_radius = " << cfg.rg.neighborhood_radius << "\n";
  out << "rg_radius_auto = " << (cfg.rg.radius_auto ? "true" : "false") << "\n";
  out << "rg_auto_threshold = " << fmt(cfg.rg.auto_trigger_threshold) << "\n";
  out << "clusters = " << cfg.codebook_size << "\n";
  out << "codebook = "
      << (cfg.codebook == CodebookKind::kmeans ? "kmeans" : "fibonacci") << "\n";
  out << "dump_intermediates = " << (cfg.dump_intermediates ? "true" : "false")
      << "\n";
  out << "output_format = " << cfg.output_format << "\n";
  return out.str();
}

void save_config_file(const EnhanceConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << serialize_config(cfg);
  if (!out) throw IoError("failed to write " + path);
}

}  // namespace itre
