#pragma once

#include <map>
#include <string>
#include <vector>

#include "mwt/constants.hpp"

namespace mwt {

// Complex permittivity convention: time dependence e^{+j omega t}, so a lossy
// medium has eps_r = eps' - j sigma/(omega eps0) with a negative imaginary
// part. Every routine in this module (and everything downstream: wavenumbers,
// assembly, boundary conditions) assumes this sign.

/// Relative permittivity described by its real part and a conductivity at a
/// given frequency.
struct ComplexPermittivity {
  double eps_real = 1.0;  // dimensionless
  double sigma = 0.0;     // S/m
  double frequency = 0.0; // Hz

  Complex value() const;
};

/// eps' - j sigma/(omega eps0). Throws std::invalid_argument for freq <= 0 or
/// sigma < 0.
Complex to_complex(double eps_real, double sigma, double freq);

struct ColeColePole {
  double delta_eps = 0.0;  // dimensionless, >= 0
  double tau = 0.0;        // seconds, > 0
  double alpha = 0.0;      // in [0, 1)
};

/// Multi-pole Cole-Cole dispersion parameters:
///   eps(w) = eps_inf + sum_n delta_eps_n / (1 + (j w tau_n)^(1-alpha_n))
///            + sigma_static / (j w eps0)
struct ColeColeParams {
  double eps_inf = 1.0;
  std::vector<ColeColePole> poles;
  double sigma_static = 0.0;  // S/m
};

/// Evaluate the Cole-Cole model at a frequency. With alpha = 0 a pole reduces
/// to the Debye form. Throws std::invalid_argument on parameter-range errors.
Complex cole_cole_eval(const ColeColeParams& params, double freq);

struct MixtureFit {
  double fraction = 0.0;  // volume fraction of component a, clamped to [0,1]
  double residual = 0.0;  // | v sqrt(eps_a) + (1-v) sqrt(eps_b) - sqrt(eps_t) |
};

/// Binary mixture law fit: find v in [0,1] minimizing
/// |v sqrt(eps_a) + (1-v) sqrt(eps_b) - sqrt(eps_target)|^2.
/// The problem is linear in v, so the minimizer is the closed-form projection
/// onto the segment (principal square roots throughout).
MixtureFit kraszewski_fraction(Complex target, Complex comp_a, Complex comp_b);

/// kappa = k^2 = w^2 eps_r eps0 mu0 (1/m^2); Im(kappa) <= 0 for lossy media.
Complex wavenumber_squared(Complex eps_r, double freq);

/// k = w sqrt(eps_r eps0 mu0); principal branch, Im(k) <= 0 for lossy media.
Complex wavenumber(Complex eps_r, double freq);

/// 2 pi / Re(k): the physical wavelength used for mesh sizing.
double wavelength_in(Complex eps_r, double freq);

/// Convert a kappa field value back to relative permittivity.
Complex eps_from_kappa(Complex kappa, double freq);

/// Tissue database: name -> complex relative permittivity at a frequency.
class TissueTable {
 public:
  /// The built-in database at 1 GHz: bone, tendon, muscle, skin, sf, plus a
  /// matching medium equal to muscle.
  static TissueTable builtin_1ghz();

  /// Parse the plain-text table format: one `name eps_real sigma` row per
  /// tissue, `#` comments allowed. See data/tissues_1ghz.txt.
  static TissueTable parse(const std::string& text, double freq);
  static TissueTable load(const std::string& path, double freq);

  std::string serialize() const;

  Complex at(const std::string& tissue) const;  // throws on unknown name
  bool contains(const std::string& tissue) const;

  const std::map<std::string, ComplexPermittivity>& entries() const { return entries_; }
  double frequency() const { return frequency_; }

  void set(const std::string& tissue, double eps_real, double sigma);
  explicit TissueTable(double freq) : frequency_(freq) {}

 private:
  std::map<std::string, ComplexPermittivity> entries_;
  double frequency_ = 0.0;
};

}  // namespace mwt
