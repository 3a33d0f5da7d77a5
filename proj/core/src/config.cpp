#include "tns/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "tns/models.hpp"

namespace tns {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw invalid_parameter("config line " + std::to_string(line) + ": " + msg);
}

real parse_real(const std::string& tok, int line) {
  char* end = nullptr;
  const real v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0') fail(line, "malformed number '" + tok + "'");
  return v;
}

long long parse_int(const std::string& tok, int line) {
  char* end = nullptr;
  const long long v = std::strtoll(tok.c_str(), &end, 10);
  if (end == tok.c_str() || *end != '\0') fail(line, "malformed integer '" + tok + "'");
  return v;
}

bool parse_bool(const std::string& tok, int line) {
  if (tok == "true" || tok == "1") return true;
  if (tok == "false" || tok == "0") return false;
  fail(line, "malformed boolean '" + tok + "' (use true/false)");
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::vector<real> parse_real_list(const std::string& s, int line) {
  std::vector<real> out;
  for (const auto& tok : split_ws(s)) out.push_back(parse_real(tok, line));
  if (out.empty()) fail(line, "empty number list");
  return out;
}

ModeSpec parse_mode(const std::string& value, int dim, bool with_comp, int line) {
  const auto toks = split_ws(value);
  const std::size_t expect = static_cast<std::size_t>(dim) + (with_comp ? 3 : 2);
  if (toks.size() != expect)
    fail(line, "mode needs " + std::to_string(expect) + " values: " +
                   std::string(with_comp ? "comp " : "") + "amp k_per_axis... phase");
  ModeSpec m;
  std::size_t i = 0;
  if (with_comp) {
    m.comp = static_cast<int>(parse_int(toks[i++], line));
    if (m.comp < 0 || m.comp >= dim) fail(line, "mode component out of range");
  }
  m.amp = parse_real(toks[i++], line);
  for (int a = 0; a < dim; ++a) m.k.push_back(static_cast<int>(parse_int(toks[i++], line)));
  m.phase = parse_real(toks[i++], line);
  return m;
}

}  // namespace

Config parse_config(const std::string& text) {
  Config cfg;
  // dim must be known before modes can be parsed; collect mode lines first.
  struct ModeLine {
    std::string value;
    bool is_u;
    int line;
  };
  std::vector<ModeLine> mode_lines;

  const std::set<std::string> sections = {"problem", "model", "initial", "solver", "output"};
  std::set<std::string> seen_keys;

  std::istringstream is(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      if (!sections.count(section)) fail(line, "unknown section '" + section + "'");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) fail(line, "empty key");
    if (section.empty()) fail(line, "key outside any section");
    const std::string qual = section + "." + key;

    if (qual == "initial.rho_mode" || qual == "initial.u_mode") {
      mode_lines.push_back({value, qual == "initial.u_mode", line});
      continue;
    }
    if (!seen_keys.insert(qual).second) fail(line, "duplicate key '" + qual + "'");

    if (qual == "problem.dim") cfg.dim = static_cast<int>(parse_int(value, line));
    else if (qual == "problem.n") cfg.n = static_cast<int>(parse_int(value, line));
    else if (qual == "problem.T") cfg.T = parse_real(value, line);
    else if (qual == "problem.nt") cfg.nt = static_cast<int>(parse_int(value, line));
    else if (qual == "problem.p") cfg.p = parse_real(value, line);
    else if (qual == "problem.q") cfg.q = parse_real(value, line);
    else if (qual == "problem.sigma") cfg.sigma = parse_real(value, line);
    else if (qual == "problem.rho_ref") cfg.rho_ref = parse_real(value, line);
    else if (qual == "model.viscosity") cfg.viscosity = value;
    else if (qual == "model.mu_params") cfg.mu_params = parse_real_list(value, line);
    else if (qual == "model.lam_params") cfg.lam_params = parse_real_list(value, line);
    else if (qual == "model.pressure") cfg.pressure = value;
    else if (qual == "model.pressure_params") cfg.pressure_params = parse_real_list(value, line);
    else if (qual == "initial.epsilon") cfg.epsilon = parse_real(value, line);
    else if (qual == "solver.tol") cfg.tol = parse_real(value, line);
    else if (qual == "solver.max_iter") cfg.max_iter = static_cast<int>(parse_int(value, line));
    else if (qual == "solver.max_halvings")
      cfg.max_halvings = static_cast<int>(parse_int(value, line));
    else if (qual == "solver.richardson_tol") cfg.richardson_tol = parse_real(value, line);
    else if (qual == "solver.richardson_max_iter")
      cfg.richardson_max_iter = static_cast<int>(parse_int(value, line));
    else if (qual == "solver.reference_substeps")
      cfg.reference_substeps = static_cast<int>(parse_int(value, line));
    else if (qual == "solver.npairs") cfg.npairs = static_cast<int>(parse_int(value, line));
    else if (qual == "solver.seed")
      cfg.seed = static_cast<std::uint64_t>(parse_int(value, line));
    else if (qual == "output.dir") cfg.out_dir = value;
    else if (qual == "output.prefix") cfg.prefix = value;
    else if (qual == "output.snapshots") cfg.write_snapshots = parse_bool(value, line);
    else if (qual == "output.csv") cfg.write_csv = parse_bool(value, line);
    else fail(line, "unknown key '" + qual + "'");
  }

  if (cfg.dim != 2 && cfg.dim != 3) throw invalid_parameter("config: dim must be 2 or 3");
  if (cfg.n < 4 || cfg.n % 2 != 0) throw invalid_parameter("config: n must be even and >= 4");
  if (!(cfg.T > 0.0)) throw invalid_parameter("config: T must be positive");
  if (cfg.nt < 2) throw invalid_parameter("config: nt must be >= 2");
  if (!(cfg.p >= 1.0) || !(cfg.q >= 1.0)) throw invalid_parameter("config: p, q must be >= 1");
  if (!(cfg.sigma > 0.0)) throw invalid_parameter("config: sigma must be positive");
  if (!(cfg.rho_ref > 0.0)) throw invalid_parameter("config: rho_ref must be positive");

  for (const auto& ml : mode_lines) {
    ModeSpec m = parse_mode(ml.value, cfg.dim, ml.is_u, ml.line);
    for (int ka : m.k)
      if (std::abs(ka) >= cfg.n / 2) fail(ml.line, "mode frequency not representable on the grid");
    (ml.is_u ? cfg.u_modes : cfg.rho_modes).push_back(std::move(m));
  }

  // Model families are validated by construction.
  (void)make_viscosity(cfg.viscosity, cfg.mu_params, cfg.lam_params);
  (void)make_pressure(cfg.pressure, cfg.pressure_params);
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invalid_parameter("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const Config& cfg) {
  std::ostringstream os;
  auto put = [&os](const std::string& k, const std::string& v) { os << k << " = " << v << "\n"; };
  auto put_list = [&](const std::string& k, const std::vector<real>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += " ";
      s += format_real(v[i]);
    }
    put(k, s);
  };
  os << "[problem]\n";
  put("dim", std::to_string(cfg.dim));
  put("n", std::to_string(cfg.n));
  put("T", format_real(cfg.T));
  put("nt", std::to_string(cfg.nt));
  put("p", format_real(cfg.p));
  put("q", format_real(cfg.q));
  put("sigma", format_real(cfg.sigma));
  put("rho_ref", format_real(cfg.rho_ref));
  os << "\n[model]\n";
  put("viscosity", cfg.viscosity);
  put_list("mu_params", cfg.mu_params);
  put_list("lam_params", cfg.lam_params);
  put("pressure", cfg.pressure);
  put_list("pressure_params", cfg.pressure_params);
  os << "\n[initial]\n";
  put("epsilon", format_real(cfg.epsilon));
  auto put_mode = [&](const char* key, const ModeSpec& m, bool with_comp) {
    std::string s;
    if (with_comp) s += std::to_string(m.comp) + " ";
    s += format_real(m.amp);
    for (int ka : m.k) s += " " + std::to_string(ka);
    s += " " + format_real(m.phase);
    put(key, s);
  };
  for (const auto& m : cfg.rho_modes) put_mode("rho_mode", m, false);
  for (const auto& m : cfg.u_modes) put_mode("u_mode", m, true);
  os << "\n[solver]\n";
  put("tol", format_real(cfg.tol));
  put("max_iter", std::to_string(cfg.max_iter));
  put("max_halvings", std::to_string(cfg.max_halvings));
  put("richardson_tol", format_real(cfg.richardson_tol));
  put("richardson_max_iter", std::to_string(cfg.richardson_max_iter));
  put("reference_substeps", std::to_string(cfg.reference_substeps));
  put("npairs", std::to_string(cfg.npairs));
  put("seed", std::to_string(cfg.seed));
  os << "\n[output]\n";
  put("dir", cfg.out_dir);
  put("prefix", cfg.prefix);
  put("snapshots", cfg.write_snapshots ? "true" : "false");
  put("csv", cfg.write_csv ? "true" : "false");
  return os.str();
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Grid make_grid(const Config& cfg) { return Grid(cfg.dim, cfg.n); }

Problem make_problem(const Config& cfg, const Grid& g) {
  if (g.dim() != cfg.dim || g.n() != cfg.n)
    throw invalid_parameter("make_problem: grid does not match the configuration");
  Problem pb;
  pb.grid = &g;
  pb.mod = make_viscosity(cfg.viscosity, cfg.mu_params, cfg.lam_params);
  pb.pres = make_pressure(cfg.pressure, cfg.pressure_params);
  pb.rho_ref = cfg.rho_ref;
  pb.tg = TimeGrid{cfg.T, cfg.nt};
  pb.p = cfg.p;
  pb.q = cfg.q;
  pb.sigma_threshold = cfg.sigma;
  pb.rich.tol = cfg.richardson_tol;
  pb.rich.max_iter = cfg.richardson_max_iter;

  pb.rho0 = Field::scalar(g);
  for (real& v : pb.rho0.data) v = cfg.rho_ref;
  pb.u0 = Field::vector(g);
  std::vector<int> ij(cfg.dim);
  auto add_modes = [&](Field& f, const std::vector<ModeSpec>& modes, bool use_comp) {
    for (const auto& m : modes) {
      const int c = use_comp ? m.comp : 0;
      auto out = f.comp(c);
      for (index_t p = 0; p < g.size(); ++p) {
        g.unflat(p, ij.data());
        real phase = m.phase;
        for (int a = 0; a < cfg.dim; ++a) phase += pi * m.k[a] * g.coord(ij[a]);
        out[p] += cfg.epsilon * m.amp * std::cos(phase);
      }
    }
  };
  add_modes(pb.rho0, cfg.rho_modes, false);
  add_modes(pb.u0, cfg.u_modes, true);
  for (real v : pb.rho0.comp(0))
    if (!(v > 0.0))
      throw invalid_parameter("make_problem: initial density is not positive everywhere");
  return pb;
}

}  // namespace tns
