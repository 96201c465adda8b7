#include "semiflow/pressure_law.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

namespace semiflow {
namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
  return out;
}

std::string join(const std::vector<double>& v) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

// int_{lo}^{hi} c s^{g-2} ds for the power law c s^g.
double power_integral(double c, double g, double lo, double hi) {
  if (std::abs(g - 1.0) < 1e-12) return c * std::log(hi / lo);
  return c * (std::pow(hi, g - 1.0) - std::pow(lo, g - 1.0)) / (g - 1.0);
}

}  // namespace

double positive_power(double rho, double exponent) {
  if (rho <= 0.0) return 0.0;
  return std::exp(exponent * std::log(rho));
}

PressureLaw PressureLaw::isentropic(double a, double gamma) {
  if (!(a > 0.0)) throw std::invalid_argument("PressureLaw: need a > 0");
  if (!(gamma > 1.0)) throw std::invalid_argument("PressureLaw: need gamma > 1");
  PressureLaw law;
  law.kind_ = Kind::isentropic;
  law.a_ = a;
  law.gamma_ = gamma;
  return law;
}

PressureLaw PressureLaw::tabulated(std::vector<double> rho, std::vector<double> p) {
  if (rho.size() < 2 || rho.size() != p.size()) {
    throw std::invalid_argument("PressureLaw: tabulated law needs >= 2 matching (rho, p) knots");
  }
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (!(rho[i] > 0.0) || !(p[i] > 0.0)) {
      throw std::invalid_argument("PressureLaw: tabulated knots must be positive");
    }
    if (i > 0 && (!(rho[i] > rho[i - 1]) || !(p[i] > p[i - 1]))) {
      throw std::invalid_argument("PressureLaw: tabulated p must be strictly increasing in rho");
    }
  }
  PressureLaw law;
  law.kind_ = Kind::tabulated;
  law.rho_ = std::move(rho);
  law.p_ = std::move(p);
  const std::size_t knots = law.rho_.size();
  law.exponent_.resize(knots + 1);
  for (std::size_t i = 0; i + 1 < knots; ++i) {
    law.exponent_[i + 1] = std::log(law.p_[i + 1] / law.p_[i]) / std::log(law.rho_[i + 1] / law.rho_[i]);
  }
  law.exponent_[0] = law.exponent_[1];
  law.exponent_[knots] = law.exponent_[knots - 1];
  if (!(law.exponent_[0] > 1.0) || !(law.exponent_[knots] > 1.0)) {
    throw std::invalid_argument("PressureLaw: end exponents of a tabulated law must exceed 1");
  }
  law.gamma_ = law.exponent_[knots];
  law.a_ = law.p_.back() / std::pow(law.rho_.back(), law.gamma_);
  law.integral_at_.resize(knots);
  {
    const double g = law.exponent_[0];
    const double c = law.p_[0] / std::pow(law.rho_[0], g);
    law.integral_at_[0] = c * std::pow(law.rho_[0], g - 1.0) / (g - 1.0);
  }
  for (std::size_t i = 1; i < knots; ++i) {
    const double g = law.exponent_[i];
    const double c = law.p_[i - 1] / std::pow(law.rho_[i - 1], g);
    law.integral_at_[i] = law.integral_at_[i - 1] + power_integral(c, g, law.rho_[i - 1], law.rho_[i]);
  }
  return law;
}

PressureLaw PressureLaw::parse(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::istringstream is{std::string(text)};
  std::string token;
  while (is >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("PressureLaw: malformed token '" + token + "'");
    kv[token.substr(0, eq)] = token.substr(eq + 1);
  }
  const auto kind = kv.find("kind");
  if (kind == kv.end()) throw std::invalid_argument("PressureLaw: missing kind");
  try {
    if (kind->second == "isentropic") return isentropic(std::stod(kv.at("a")), std::stod(kv.at("gamma")));
    if (kind->second == "tabulated") return tabulated(parse_list(kv.at("rho")), parse_list(kv.at("p")));
  } catch (const std::out_of_range&) {
    throw std::invalid_argument("PressureLaw: missing parameter in '" + std::string(text) + "'");
  }
  throw std::invalid_argument("PressureLaw: unknown kind '" + kind->second + "'");
}

std::string PressureLaw::to_string() const {
  std::ostringstream os;
  os << std::setprecision(17);
  if (kind_ == Kind::isentropic) {
    os << "kind=isentropic a=" << a_ << " gamma=" << gamma_;
  } else {
    os << "kind=tabulated rho=" << join(rho_) << " p=" << join(p_);
  }
  return os.str();
}

double PressureLaw::asymptotic_gamma() const { return gamma_; }

std::size_t PressureLaw::piece_of(double rho) const {
  return static_cast<std::size_t>(std::upper_bound(rho_.begin(), rho_.end(), rho) - rho_.begin());
}

// Power-law value of piece `piece` anchored at the knot to its left (or the
// first knot for the leftmost piece).
double PressureLaw::piece_power(std::size_t piece, double rho) const {
  const std::size_t anchor = piece == 0 ? 0 : piece - 1;
  return p_[anchor] * positive_power(rho / rho_[anchor], exponent_[piece]);
}

double PressureLaw::pressure(double rho) const {
  if (rho <= 0.0) return 0.0;
  if (kind_ == Kind::isentropic) return a_ * positive_power(rho, gamma_);
  return piece_power(piece_of(rho), rho);
}

double PressureLaw::pressure_derivative(double rho) const {
  if (rho <= 0.0) return 0.0;
  if (kind_ == Kind::isentropic) return a_ * gamma_ * positive_power(rho, gamma_ - 1.0);
  const std::size_t piece = piece_of(rho);
  return exponent_[piece] * piece_power(piece, rho) / rho;
}

double PressureLaw::potential(double rho) const {
  if (rho <= 0.0) return 0.0;
  if (kind_ == Kind::isentropic) return a_ / (gamma_ - 1.0) * positive_power(rho, gamma_);
  const std::size_t piece = piece_of(rho);
  const double g = exponent_[piece];
  const std::size_t anchor = piece == 0 ? 0 : piece - 1;
  const double c = p_[anchor] / std::pow(rho_[anchor], g);
  double integral;
  if (piece == 0) {
    integral = c * std::pow(rho, g - 1.0) / (g - 1.0);
  } else {
    integral = integral_at_[anchor] + power_integral(c, g, rho_[anchor], rho);
  }
  return rho * integral;
}

double PressureLaw::potential_derivative(double rho) const {
  if (rho <= 0.0) return 0.0;
  if (kind_ == Kind::isentropic) return a_ * gamma_ / (gamma_ - 1.0) * positive_power(rho, gamma_ - 1.0);
  return (potential(rho) + pressure(rho)) / rho;
}

double PressureLaw::potential_second_derivative(double rho) const {
  if (rho <= 0.0) return 0.0;
  return pressure_derivative(rho) / rho;
}

}  // namespace semiflow
