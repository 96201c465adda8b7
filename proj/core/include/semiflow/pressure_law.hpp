#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace semiflow {

/// Barotropic pressure law p(rho) with its pressure potential P, the
/// solution of P'(rho) rho - P(rho) = p(rho) with P(0) = 0.
///
/// Two kinds are supported. The isentropic law p = a rho^gamma has
/// P = a/(gamma-1) rho^gamma. The tabulated law interpolates (rho_i, p_i)
/// log-log linearly, i.e. p is a power law c_i rho^{g_i} on each piece and
/// is extrapolated with the first/last exponent; the last exponent is the
/// asymptotic adiabatic exponent. Both exponents at the ends must exceed 1.
class PressureLaw {
 public:
  enum class Kind { isentropic, tabulated };

  static PressureLaw isentropic(double a, double gamma);
  static PressureLaw tabulated(std::vector<double> rho, std::vector<double> p);

  /// Parses `kind=isentropic a=1.0 gamma=1.4` or
  /// `kind=tabulated rho=0.5,1,2 p=0.25,1,4`.
  static PressureLaw parse(std::string_view text);
  std::string to_string() const;

  Kind kind() const { return kind_; }
  double a() const { return a_; }
  double gamma() const { return gamma_; }
  /// Exponent governing p/P -> gamma - 1 as rho -> infinity.
  double asymptotic_gamma() const;

  double pressure(double rho) const;
  /// dp/drho (squared sound speed).
  double pressure_derivative(double rho) const;
  double potential(double rho) const;
  /// P'(rho), the enthalpy.
  double potential_derivative(double rho) const;
  /// P''(rho) = p'(rho) / rho.
  double potential_second_derivative(double rho) const;

  friend bool operator==(const PressureLaw&, const PressureLaw&) = default;

 private:
  PressureLaw() = default;
  std::size_t piece_of(double rho) const;
  double piece_power(std::size_t piece, double rho) const;

  Kind kind_ = Kind::isentropic;
  double a_ = 1.0;
  double gamma_ = 1.4;
  std::vector<double> rho_;
  std::vector<double> p_;
  std::vector<double> exponent_;       // exponent on piece i (size = knots + 1)
  std::vector<double> integral_at_;    // int_0^{rho_i} p(s)/s^2 ds at each knot
};

/// rho^gamma via exp(gamma log rho); zero at rho <= 0.
double positive_power(double rho, double exponent);

}  // namespace semiflow
