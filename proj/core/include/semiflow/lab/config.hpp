#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semiflow/pressure_law.hpp"

namespace semiflow::lab {

/// Sectioned key=value text. `#` and `;` start comments, keys are case
/// sensitive, and a key repeated within a section overrides the earlier one.
class IniDocument {
 public:
  static IniDocument parse(const std::string& text);
  static IniDocument load(const std::filesystem::path& path);

  bool has(const std::string& section, const std::string& key) const;
  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  long long get_int(const std::string& section, const std::string& key, long long fallback) const;
  std::vector<double> get_list(const std::string& section, const std::string& key,
                               const std::vector<double>& fallback) const;
  const std::map<std::string, std::string>& section(const std::string& name) const;

  void set(const std::string& section, const std::string& key, const std::string& value);
  std::string to_string() const;

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

enum class Generator { equilibrium, smooth_wave, riemann, perturbed_ensemble };

struct DataSpec {
  Generator generator = Generator::smooth_wave;
  double mass = 2.0;          // equilibrium
  double rho_mean = 1.0;      // smooth_wave
  double amplitude = 0.2;     // smooth_wave
  int mode = 1;               // smooth_wave
  double rho_left = 1.5;      // riemann: state inside |x_0| < 1/2
  double rho_right = 1.0;
  double u_left = 0.0;
  double u_right = 0.0;
  double width = 0.05;        // riemann: tanh width of the jumps
  // perturbed_ensemble: a base generator whose solver paths are jittered.
  Generator base = Generator::smooth_wave;
  int members = 0;
  std::uint64_t seed = 1;
  double perturbation = 0.0;  // relative jitter of eps
};

struct ScenarioConfig {
  std::string name = "scenario";
  int dim = 1;
  int n = 256;
  PressureLaw law = PressureLaw::isentropic(1.0, 2.0);
  DataSpec data;
  bool inflated = false;
  double delta = 0.0;          // E0 = data energy + delta when inflated
  std::vector<double> eps{1e-3};
  std::vector<double> smoothing{0.0};
  int m_order = 1;
  double dt = 2e-3;
  double t_end = 1.0;
  int sample_stride = 5;
  double rho_floor = 1e-8;
  std::vector<double> restart_times{0.25, 0.5};
  int cap_k = 8;
  int cap_n = 4;
  int cap_m = 4;
  double tol = 1e-9;
  double t_max = 1.0;
  std::uint64_t seed = 1;

  static ScenarioConfig from_ini(const IniDocument& doc);
  static ScenarioConfig load(const std::filesystem::path& path);
  IniDocument to_ini() const;
  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
};

std::string to_string(Generator g);
Generator parse_generator(const std::string& s);

}  // namespace semiflow::lab
