#include "mwt/dielectrics.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mwt/errors.hpp"

namespace mwt {

Complex ComplexPermittivity::value() const { return to_complex(eps_real, sigma, frequency); }

Complex to_complex(double eps_real, double sigma, double freq) {
  if (!(freq > 0.0)) throw std::invalid_argument("to_complex: frequency must be positive");
  if (sigma < 0.0) throw std::invalid_argument("to_complex: conductivity must be nonnegative");
  const double omega = angular_frequency(freq);
  return Complex(eps_real, -sigma / (omega * consts::eps0));
}

Complex cole_cole_eval(const ColeColeParams& params, double freq) {
  if (!(freq > 0.0)) throw std::invalid_argument("cole_cole_eval: frequency must be positive");
  if (params.sigma_static < 0.0)
    throw std::invalid_argument("cole_cole_eval: sigma_static must be nonnegative");
  const double omega = angular_frequency(freq);
  Complex eps(params.eps_inf, 0.0);
  for (const auto& pole : params.poles) {
    if (pole.delta_eps < 0.0) throw std::invalid_argument("cole_cole_eval: delta_eps must be >= 0");
    if (!(pole.tau > 0.0)) throw std::invalid_argument("cole_cole_eval: tau must be positive");
    if (pole.alpha < 0.0 || pole.alpha >= 1.0)
      throw std::invalid_argument("cole_cole_eval: alpha must be in [0,1)");
    const Complex jwt(0.0, omega * pole.tau);
    eps += pole.delta_eps / (1.0 + std::pow(jwt, 1.0 - pole.alpha));
  }
  eps += params.sigma_static / (Complex(0.0, omega * consts::eps0));
  return eps;
}

MixtureFit kraszewski_fraction(Complex target, Complex comp_a, Complex comp_b) {
  if (comp_a == comp_b)
    throw std::invalid_argument("kraszewski_fraction: components must differ");
  const Complex sa = std::sqrt(comp_a);
  const Complex sb = std::sqrt(comp_b);
  const Complex st = std::sqrt(target);
  const Complex d = sa - sb;
  const Complex e = st - sb;
  // least squares over real v: v* = Re(conj(d) e) / |d|^2, clamped to [0,1]
  double v = (std::conj(d) * e).real() / std::norm(d);
  v = std::min(1.0, std::max(0.0, v));
  const double residual = std::abs(v * sa + (1.0 - v) * sb - st);
  return {v, residual};
}

Complex wavenumber_squared(Complex eps_r, double freq) {
  const double omega = angular_frequency(freq);
  return omega * omega * consts::eps0 * consts::mu0 * eps_r;
}

Complex wavenumber(Complex eps_r, double freq) {
  return std::sqrt(wavenumber_squared(eps_r, freq));
}

double wavelength_in(Complex eps_r, double freq) {
  return 2.0 * consts::pi / wavenumber(eps_r, freq).real();
}

Complex eps_from_kappa(Complex kappa, double freq) {
  const double omega = angular_frequency(freq);
  return kappa / (omega * omega * consts::eps0 * consts::mu0);
}

TissueTable TissueTable::builtin_1ghz() {
  // Complex values at 1 GHz: bone 12.4-2.79j, tendon 45.6-13.66j,
  // muscle 54.8-17.43j, skin 40.9-16.17j, sf 68.0-29.0j. Stored as
  // (eps', sigma) with sigma = eps'' * omega * eps0.
  const double freq = 1e9;
  const double weps0 = angular_frequency(freq) * consts::eps0;
  TissueTable table(freq);
  table.set("bone", 12.4, 2.79 * weps0);
  table.set("tendon", 45.6, 13.66 * weps0);
  table.set("muscle", 54.8, 17.43 * weps0);
  table.set("skin", 40.9, 16.17 * weps0);
  table.set("sf", 68.0, 29.0 * weps0);
  // matching medium equals muscle
  table.set("matching", 54.8, 17.43 * weps0);
  return table;
}

void TissueTable::set(const std::string& tissue, double eps_real, double sigma) {
  entries_[tissue] = ComplexPermittivity{eps_real, sigma, frequency_};
}

Complex TissueTable::at(const std::string& tissue) const {
  auto it = entries_.find(tissue);
  if (it == entries_.end()) throw std::out_of_range("TissueTable: unknown tissue '" + tissue + "'");
  return it->second.value();
}

bool TissueTable::contains(const std::string& tissue) const {
  return entries_.count(tissue) != 0;
}

TissueTable TissueTable::parse(const std::string& text, double freq) {
  TissueTable table(freq);
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    std::string name;
    double eps_real = 0.0, sigma = 0.0;
    if (!(row >> name)) continue;  // blank line
    if (!(row >> eps_real >> sigma))
      throw IoError("tissue table: malformed row at line " + std::to_string(lineno));
    table.set(name, eps_real, sigma);
  }
  return table;
}

TissueTable TissueTable::load(const std::string& path, double freq) {
  std::ifstream in(path);
  if (!in) throw IoError("tissue table: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), freq);
}

std::string TissueTable::serialize() const {
  std::ostringstream out;
  out << "# tissue eps_real sigma(S/m)\n";
  out.precision(17);
  for (const auto& [name, value] : entries_) {
    out << name << " " << value.eps_real << " " << value.sigma << "\n";
  }
  return out.str();
}

}  // namespace mwt
