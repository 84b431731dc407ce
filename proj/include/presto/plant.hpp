#pragma once

#include <array>
#include <string>
#include <vector>

namespace presto {

/// Coefficients of the single-mode beam model
///   x1' = x2,  x2' = -K1 x1 - K2 x1^3 - g u + d.
struct PlantParams {
  double K1 = 97.4;
  double K2 = -19.97;
  double g = -1.09;

  /// Throws DomainError if g == 0 or any coefficient is non-finite.
  void validate() const;

  /// Drift f(x) = -K1 x1 - K2 x1^3 of the canonical form x2' = f + b u + d.
  double drift(double x1) const { return -K1 * x1 - K2 * x1 * x1 * x1; }
  /// Input gain b = -g of the canonical form.
  double input_gain() const { return -g; }
};

using State2 = std::array<double, 2>;

/// (x2, -K1 x1 - K2 x1^3 - g u + d)
State2 plant_derivative(const State2& x, double u, double d, const PlantParams& pp);

enum class Integrator { euler, rk4 };

/// One fixed step of the plant with u and d held over the step.
State2 plant_step(const State2& x, double u, double d, const PlantParams& pp, double dt,
                  Integrator scheme = Integrator::euler);

// --- disturbances ----------------------------------------------------------

struct DisturbanceTerm {
  enum class Kind { sin_linear, sin_sqrt };
  double amplitude = 0.0;
  Kind kind = Kind::sin_linear;
  double rate = 0.0;
};

/// Sum of terms A sin(rate pi t) (sin_linear) and A sin(rate sqrt(t + 1))
/// (sin_sqrt), or a tabulated waveform with linear interpolation and constant
/// extrapolation at both ends.
struct DisturbanceSpec {
  std::vector<DisturbanceTerm> terms;
  std::vector<double> table_t;
  std::vector<double> table_d;

  bool tabulated() const { return !table_t.empty(); }
  /// Sum of |amplitude| for analytic terms, max |d| of the table otherwise.
  double bound() const;
};

double disturbance_value(const DisturbanceSpec& spec, double t);

/// Midspan-normalised deflection Q sin(pi xbar). Throws DomainError outside [0, 1].
double deflection_field(double Q, double xbar);

// --- Galerkin reduction ----------------------------------------------------

struct BeamParams {
  double alpha = 0.0;   // ea / L
  double beta = 0.0;    // l_m / L
  double lambda = 1.0;  // 12 L^3 / (E A h^2 r)
  int quadrature_points = 16;

  void validate() const;
};

/// Integrals over [0, 1] of products of derivatives of phi(x) = sin(pi x).
struct ModeIntegrals {
  double I_pp2 = 0.0;    // (phi')^2
  double I_dd = 0.0;     // phi'' phi
  double I_4 = 0.0;      // phi'''' phi
  double I_6 = 0.0;      // phi^(6) phi
  double I_3p = 0.0;     // phi''' phi'
  double I_pp2sq = 0.0;  // (phi'')^2
  double I_00 = 0.0;     // phi^2
};

/// Composite 7-point Gauss-Legendre over `n_points` equal panels.
ModeIntegrals mode_integrals(int n_points);

/// Which integral closes the inertia denominator of the reduced model:
/// the (phi')^2 integral as printed in the source formulas, or the
/// conventional mass integral of phi^2.
enum class MassTerm { slope_squared, phi_squared };

PlantParams galerkin_coefficients(const BeamParams& bp, MassTerm mass = MassTerm::slope_squared);
PlantParams galerkin_from_integrals(const BeamParams& bp, const ModeIntegrals& mi,
                                    MassTerm mass = MassTerm::slope_squared);

MassTerm parse_mass_term(const std::string& s);
std::string to_string(MassTerm m);

}  // namespace presto
