#include "semiflow/lab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace semiflow::lab {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (trim(s.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("config: cannot parse '" + s + "' for " + what);
}

std::string join(const std::vector<double>& v) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  return os.str();
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

IniDocument IniDocument::parse(const std::string& text) {
  IniDocument doc;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto cut = line.find_first_of("#;");
    if (cut != std::string::npos) line.resize(cut);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw std::invalid_argument("config: bad section header on line " + std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      doc.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config: expected key = value on line " + std::to_string(lineno));
    doc.sections_[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return doc;
}

IniDocument IniDocument::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

bool IniDocument::has(const std::string& section, const std::string& key) const { return get(section, key).has_value(); }

std::optional<std::string> IniDocument::get(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) return std::nullopt;
  auto k = s->second.find(key);
  if (k == s->second.end()) return std::nullopt;
  return k->second;
}

std::string IniDocument::get_string(const std::string& section, const std::string& key,
                                    const std::string& fallback) const {
  return get(section, key).value_or(fallback);
}

double IniDocument::get_double(const std::string& section, const std::string& key, double fallback) const {
  const auto v = get(section, key);
  return v ? to_double(*v, section + "." + key) : fallback;
}

long long IniDocument::get_int(const std::string& section, const std::string& key, long long fallback) const {
  const auto v = get(section, key);
  if (!v) return fallback;
  try {
    std::size_t used = 0;
    const long long out = std::stoll(*v, &used);
    if (trim(v->substr(used)).empty()) return out;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("config: cannot parse integer '" + *v + "' for " + section + "." + key);
}

std::vector<double> IniDocument::get_list(const std::string& section, const std::string& key,
                                          const std::vector<double>& fallback) const {
  const auto v = get(section, key);
  if (!v) return fallback;
  std::vector<double> out;
  std::istringstream in(*v);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(item, section + "." + key));
  }
  return out;
}

const std::map<std::string, std::string>& IniDocument::section(const std::string& name) const {
  static const std::map<std::string, std::string> empty;
  auto it = sections_.find(name);
  return it == sections_.end() ? empty : it->second;
}

void IniDocument::set(const std::string& section, const std::string& key, const std::string& value) {
  sections_[section][key] = value;
}

std::string IniDocument::to_string() const {
  std::ostringstream os;
  for (const auto& [name, entries] : sections_) {
    if (!name.empty()) os << '[' << name << "]\n";
    for (const auto& [k, v] : entries) os << k << " = " << v << '\n';
    os << '\n';
  }
  return os.str();
}

std::string to_string(Generator g) {
  switch (g) {
    case Generator::equilibrium: return "equilibrium";
    case Generator::smooth_wave: return "smooth_wave";
    case Generator::riemann: return "riemann";
    case Generator::perturbed_ensemble: return "perturbed_ensemble";
  }
  return "unknown";
}

Generator parse_generator(const std::string& s) {
  for (Generator g : {Generator::equilibrium, Generator::smooth_wave, Generator::riemann, Generator::perturbed_ensemble}) {
    if (to_string(g) == s) return g;
  }
  throw std::invalid_argument("config: unknown generator '" + s + "'");
}

ScenarioConfig ScenarioConfig::from_ini(const IniDocument& doc) {
  ScenarioConfig c;
  c.name = doc.get_string("scenario", "name", c.name);
  c.dim = static_cast<int>(doc.get_int("grid", "dim", c.dim));
  c.n = static_cast<int>(doc.get_int("grid", "n", c.n));

  const auto& law = doc.section("law");
  if (!law.empty()) {
    std::string text;
    for (const auto& [k, v] : law) {
      std::string value = v;
      value.erase(std::remove(value.begin(), value.end(), ' '), value.end());
      text += k + "=" + value + " ";
    }
    c.law = PressureLaw::parse(text);
  }

  DataSpec& d = c.data;
  d.generator = parse_generator(doc.get_string("data", "generator", to_string(d.generator)));
  d.mass = doc.get_double("data", "mass", d.mass);
  d.rho_mean = doc.get_double("data", "rho_mean", d.rho_mean);
  d.amplitude = doc.get_double("data", "amplitude", d.amplitude);
  d.mode = static_cast<int>(doc.get_int("data", "mode", d.mode));
  d.rho_left = doc.get_double("data", "rho_left", d.rho_left);
  d.rho_right = doc.get_double("data", "rho_right", d.rho_right);
  d.u_left = doc.get_double("data", "u_left", d.u_left);
  d.u_right = doc.get_double("data", "u_right", d.u_right);
  d.width = doc.get_double("data", "width", d.width);
  d.base = parse_generator(doc.get_string("data", "base", to_string(d.base)));
  d.members = static_cast<int>(doc.get_int("data", "members", d.members));
  d.seed = static_cast<std::uint64_t>(doc.get_int("data", "seed", static_cast<long long>(d.seed)));
  d.perturbation = doc.get_double("data", "perturbation", d.perturbation);

  const std::string policy = doc.get_string("energy", "policy", "consistent");
  if (policy != "consistent" && policy != "inflated") {
    throw std::invalid_argument("config: energy.policy must be consistent or inflated");
  }
  c.inflated = policy == "inflated";
  c.delta = doc.get_double("energy", "delta", c.delta);

  c.eps = doc.get_list("solver", "eps", c.eps);
  c.smoothing = doc.get_list("solver", "smoothing", c.smoothing);
  c.m_order = static_cast<int>(doc.get_int("solver", "m_order", c.m_order));
  c.dt = doc.get_double("solver", "dt", c.dt);
  c.t_end = doc.get_double("solver", "t_end", c.t_end);
  c.sample_stride = static_cast<int>(doc.get_int("solver", "sample_stride", c.sample_stride));
  c.rho_floor = doc.get_double("solver", "rho_floor", c.rho_floor);

  c.restart_times = doc.get_list("selection", "restart_times", c.restart_times);
  c.cap_k = static_cast<int>(doc.get_int("selection", "K", c.cap_k));
  c.cap_n = static_cast<int>(doc.get_int("selection", "N", c.cap_n));
  c.cap_m = static_cast<int>(doc.get_int("selection", "M", c.cap_m));
  c.tol = doc.get_double("selection", "tol", c.tol);
  c.t_max = doc.get_double("selection", "T_max", c.t_end);
  c.seed = static_cast<std::uint64_t>(doc.get_int("selection", "seed", static_cast<long long>(c.seed)));
  c.validate();
  return c;
}

ScenarioConfig ScenarioConfig::load(const std::filesystem::path& path) { return from_ini(IniDocument::load(path)); }

IniDocument ScenarioConfig::to_ini() const {
  IniDocument doc;
  doc.set("scenario", "name", name);
  doc.set("grid", "dim", std::to_string(dim));
  doc.set("grid", "n", std::to_string(n));
  std::istringstream law_text(law.to_string());
  std::string item;
  while (law_text >> item) {
    const auto eq = item.find('=');
    doc.set("law", item.substr(0, eq), item.substr(eq + 1));
  }
  doc.set("data", "generator", to_string(data.generator));
  doc.set("data", "mass", num(data.mass));
  doc.set("data", "rho_mean", num(data.rho_mean));
  doc.set("data", "amplitude", num(data.amplitude));
  doc.set("data", "mode", std::to_string(data.mode));
  doc.set("data", "rho_left", num(data.rho_left));
  doc.set("data", "rho_right", num(data.rho_right));
  doc.set("data", "u_left", num(data.u_left));
  doc.set("data", "u_right", num(data.u_right));
  doc.set("data", "width", num(data.width));
  doc.set("data", "base", to_string(data.base));
  doc.set("data", "members", std::to_string(data.members));
  doc.set("data", "seed", std::to_string(data.seed));
  doc.set("data", "perturbation", num(data.perturbation));
  doc.set("energy", "policy", inflated ? "inflated" : "consistent");
  doc.set("energy", "delta", num(delta));
  doc.set("solver", "eps", join(eps));
  doc.set("solver", "smoothing", join(smoothing));
  doc.set("solver", "m_order", std::to_string(m_order));
  doc.set("solver", "dt", num(dt));
  doc.set("solver", "t_end", num(t_end));
  doc.set("solver", "sample_stride", std::to_string(sample_stride));
  doc.set("solver", "rho_floor", num(rho_floor));
  doc.set("selection", "restart_times", join(restart_times));
  doc.set("selection", "K", std::to_string(cap_k));
  doc.set("selection", "N", std::to_string(cap_n));
  doc.set("selection", "M", std::to_string(cap_m));
  doc.set("selection", "tol", num(tol));
  doc.set("selection", "T_max", num(t_max));
  doc.set("selection", "seed", std::to_string(seed));
  return doc;
}

void ScenarioConfig::validate() const {
  if (dim != 1 && dim != 2) throw std::invalid_argument("config: grid.dim must be 1 or 2");
  if (eps.empty()) throw std::invalid_argument("config: solver.eps needs at least one value");
  for (double e : eps) {
    if (!(e >= 0.0)) throw std::invalid_argument("config: eps values must be >= 0");
  }
  if (smoothing.empty()) throw std::invalid_argument("config: solver.smoothing needs at least one value");
  if (inflated && !(delta >= 0.0)) throw std::invalid_argument("config: energy.delta must be >= 0");
  if (!(t_max > 0.0 && t_max <= t_end + 1e-12)) throw std::invalid_argument("config: T_max must lie in (0, t_end]");
  const double block = dt * sample_stride;
  for (double r : restart_times) {
    if (!(r > 0.0 && r < t_end)) throw std::invalid_argument("config: restart times must lie in (0, t_end)");
    const double q = r / block;
    if (std::abs(q - std::round(q)) > 1e-9) {
      throw std::invalid_argument("config: restart times must be multiples of dt * sample_stride");
    }
  }
  if (data.generator == Generator::perturbed_ensemble && data.base == Generator::perturbed_ensemble) {
    throw std::invalid_argument("config: perturbed_ensemble cannot perturb itself");
  }
}

}  // namespace semiflow::lab
