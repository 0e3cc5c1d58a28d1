#include "ctgibbs/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>

namespace ctgibbs {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw ConfigError("invalid value '" + value + "' for key '" + key + "'");
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const int out = std::stoi(v, &pos);
    if (pos != v.size()) bad_value(key, v);
    return out;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    bad_value(key, v);
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const std::uint64_t out = std::stoull(v, &pos);
    if (pos != v.size()) bad_value(key, v);
    return out;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    bad_value(key, v);
  }
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double out = std::stod(v, &pos);
    if (pos != v.size()) bad_value(key, v);
    return out;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    bad_value(key, v);
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, v);
}

}  // namespace

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path.string());

  RunConfig cfg;
  std::string section;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;

  while (std::getline(f, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError("malformed section header at line " + std::to_string(line_no));
      section = t.substr(1, t.size() - 2);
      if (section != "problem" && section != "geometry" && section != "sampler" &&
          section != "output") {
        throw ConfigError("unknown config section '" + section + "'");
      }
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected 'key = value' at line " + std::to_string(line_no));
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (section.empty()) throw ConfigError("key '" + key + "' outside any section");
    const std::string full = section + "." + key;
    if (!seen.insert(full).second) throw ConfigError("duplicate key '" + full + "'");

    if (section == "problem") {
      if (key == "phantom") cfg.phantom = value;
      else if (key == "n") cfg.n = parse_int(full, value);
      else if (key == "n_grains") cfg.n_grains = parse_int(full, value);
      else if (key == "ppower_blur") cfg.ppower_blur = parse_double(full, value);
      else if (key == "ppower_power") cfg.ppower_power = parse_double(full, value);
      else if (key == "ppower_zero_frac") cfg.ppower_zero_frac = parse_double(full, value);
      else if (key == "q") cfg.q = parse_int(full, value);
      else if (key == "noise_level") cfg.noise_level = parse_double(full, value);
      else if (key == "sigma_true_deg") cfg.sigma_true_deg = parse_double(full, value);
      else if (key == "seed") cfg.seed = parse_u64(full, value);
      else throw ConfigError("unknown key '" + full + "'");
    } else if (section == "geometry") {
      if (key == "dso") cfg.dso = parse_double(full, value);
      else if (key == "dod") cfg.dod = parse_double(full, value);
      else if (key == "det_len") cfg.det_len = parse_double(full, value);
      else if (key == "p") cfg.p = parse_int(full, value);
      else if (key == "fov") cfg.fov = parse_double(full, value);
      else throw ConfigError("unknown key '" + full + "'");
    } else if (section == "sampler") {
      if (key == "n_s") cfg.gibbs.n_s = parse_int(full, value);
      else if (key == "burn_in_frac") cfg.gibbs.burn_in_frac = parse_double(full, value);
      else if (key == "thinning") cfg.gibbs.thinning = parse_int(full, value);
      else if (key == "n_cgls") cfg.gibbs.n_cgls = parse_int(full, value);
      else if (key == "nbar_s") cfg.gibbs.nbar_s = parse_int(full, value);
      else if (key == "eps") cfg.gibbs.eps = parse_double(full, value);
      else if (key == "beta") cfg.gibbs.beta = parse_double(full, value);
      else if (key == "sigma_theta_deg") cfg.sigma_theta_deg = parse_double(full, value);
      else if (key == "kappa_step") cfg.gibbs.kappa_step = parse_double(full, value);
      else if (key == "adapt_kappa") cfg.gibbs.adapt_kappa = parse_bool(full, value);
      else if (key == "cgls_tol") cfg.gibbs.cgls_tol = parse_double(full, value);
      else if (key == "mode") cfg.mode = value;
      else if (key == "random_scan") cfg.gibbs.random_scan = parse_bool(full, value);
      else if (key == "is_check") cfg.gibbs.is_check = parse_bool(full, value);
      else if (key == "seed") {
        cfg.gibbs.seed = parse_u64(full, value);
        cfg.sampler_seed_set = true;
      } else throw ConfigError("unknown key '" + full + "'");
    } else {  // output
      if (key == "dir") cfg.output_dir = value;
      else throw ConfigError("unknown key '" + full + "'");
    }
  }

  cfg.validate();
  return cfg;
}

FanBeamGeometry RunConfig::geometry() const {
  FanBeamGeometry g;
  g.dso = dso;
  g.dod = dod;
  g.det_len = det_len;
  g.n = n;
  g.p = p > 0 ? p : static_cast<int>(std::ceil(1.5 * n));
  g.fov = fov > 0.0 ? fov : FanBeamGeometry::default_fov(dso, dod, det_len);
  g.validate();
  return g;
}

GibbsConfig RunConfig::sampler_config() const {
  GibbsConfig g = gibbs;
  g.update_angles = (mode == "uncertain-angles");
  g.sigma_theta = sigma_theta_deg >= 0.0 ? sigma_theta_deg * M_PI / 180.0 : -1.0;
  if (!sampler_seed_set) {
    g.seed = Rng(seed).substream(0xC7).seed();
  }
  return g;
}

void RunConfig::validate() const {
  if (phantom != "grains" && phantom != "ppower") {
    throw ConfigError("problem.phantom must be 'grains' or 'ppower'");
  }
  if (n < 8) throw ConfigError("problem.n must be >= 8");
  if (n_grains < 1) throw ConfigError("problem.n_grains must be >= 1");
  if (q < 1) throw ConfigError("problem.q must be >= 1");
  if (!(noise_level > 0.0)) throw ConfigError("problem.noise_level must be > 0");
  if (sigma_true_deg < 0.0) throw ConfigError("problem.sigma_true_deg must be >= 0");
  if (!(ppower_blur > 0.0)) throw ConfigError("problem.ppower_blur must be > 0");
  if (!(ppower_power >= 1.0)) throw ConfigError("problem.ppower_power must be >= 1");
  if (ppower_zero_frac < 0.0 || ppower_zero_frac >= 1.0) {
    throw ConfigError("problem.ppower_zero_frac must be in [0, 1)");
  }
  if (mode != "uncertain-angles" && mode != "fixed-nominal-angles") {
    throw ConfigError("sampler.mode must be 'uncertain-angles' or 'fixed-nominal-angles'");
  }
  if (output_dir.empty()) throw ConfigError("output.dir must not be empty");
  geometry();          // throws on bad geometry values
  gibbs.validate();
}

std::filesystem::path resolve_output_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  if (p.is_absolute()) return p;
  if (const char* root = std::getenv("CTGIBBS_OUTPUT_ROOT")) {
    return std::filesystem::path(root) / p;
  }
  return p;
}

}  // namespace ctgibbs
