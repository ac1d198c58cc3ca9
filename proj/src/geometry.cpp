#include "mwt/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "mwt/errors.hpp"
#include "mwt/phantom_layout.hpp"

namespace mwt {

namespace {

double wrap_angle(double theta) {
  const double two_pi = 2.0 * consts::pi;
  double t = std::fmod(theta, two_pi);
  if (t < 0.0) t += two_pi;
  return t;
}

double angle_distance(double a, double b) {
  const double two_pi = 2.0 * consts::pi;
  double d = std::fabs(wrap_angle(a) - wrap_angle(b));
  return std::min(d, two_pi - d);
}

}  // namespace

bool contains(const Primitive& shape, Vec2 p) {
  if (const Circle* c = std::get_if<Circle>(&shape)) {
    const Vec2 d = p - c->center;
    return dot(d, d) <= c->radius * c->radius;
  }
  const Ellipse& e = std::get<Ellipse>(shape);
  const Vec2 d = p - e.center;
  const double ca = std::cos(e.angle), sa = std::sin(e.angle);
  const double u = ca * d.x + sa * d.y;
  const double v = -sa * d.x + ca * d.y;
  const double ru = u / e.semi_major;
  const double rv = v / e.semi_minor;
  return ru * ru + rv * rv <= 1.0;
}

std::string to_string(PhantomVariant v) {
  switch (v) {
    case PhantomVariant::healthy: return "healthy";
    case PhantomVariant::partial: return "partial";
    case PhantomVariant::large: return "large";
  }
  return "healthy";
}

PhantomVariant phantom_variant_from_string(const std::string& s) {
  if (s == "healthy") return PhantomVariant::healthy;
  if (s == "partial") return PhantomVariant::partial;
  if (s == "large") return PhantomVariant::large;
  throw ValidationError("unknown phantom variant '" + s + "'");
}

double PortSet::port_center_angle(int i) const {
  for (const auto& arc : arcs) {
    if (arc.kind == BoundaryKind::port && arc.port_index == i)
      return wrap_angle(0.5 * (arc.theta0 + arc.theta1));
  }
  throw GeometryError("port index out of range");
}

std::string Scene::tissue_at(Vec2 p) const {
  for (const auto& region : phantom.regions) {
    if (contains(region.shape, p)) return region.tissue;
  }
  return "matching";
}

ChamberSpec make_chamber(int n_antennas, double shift_angle, double frequency) {
  ChamberSpec spec;
  spec.n_antennas = n_antennas;
  spec.shift_angle = shift_angle;
  spec.frequency = frequency;
  const Complex eps = TissueTable::builtin_1ghz().at("matching");
  const double lambda = wavelength_in(eps, frequency);
  spec.diameter = 7.14 * lambda;
  // Ports keep the physical 2.1 cm guide aperture while it fits; dense rings
  // shrink the arc so the ring never overlaps. The guide width used for the
  // propagation constant stays fixed.
  const double circumference = consts::pi * spec.diameter;
  spec.port_width = std::min(spec.waveguide_width, 0.7 * circumference / n_antennas);
  return spec;
}

PhantomSpec make_phantom(PhantomVariant variant, double wavelength) {
  return make_phantom(variant, wavelength, PhantomLayout{});
}

PhantomSpec make_phantom(PhantomVariant variant, double wavelength, const PhantomLayout& layout) {
  PhantomSpec spec;
  spec.variant = variant;

  const double tear_major = (variant == PhantomVariant::large) ? 0.69 * wavelength
                                                               : 0.397 * wavelength;
  spec.tear = Ellipse{layout.tear_center, 0.5 * tear_major, 0.25 * tear_major,
                      layout.tear_angle};

  if (variant == PhantomVariant::healthy) {
    spec.regions.push_back({"tear_footprint", spec.tear, "muscle"});
  } else {
    spec.regions.push_back({"tear", spec.tear, "sf"});
  }
  spec.regions.push_back(
      {"tendon",
       Ellipse{layout.tendon_center, layout.tendon_semi_major, layout.tendon_semi_minor, 0.0},
       "tendon"});
  spec.regions.push_back({"bone", Circle{layout.bone_center, layout.bone_radius}, "bone"});
  spec.regions.push_back(
      {"muscle", Circle{{0.0, 0.0}, layout.body_radius - layout.skin_thickness}, "muscle"});
  spec.regions.push_back({"skin", Circle{{0.0, 0.0}, layout.body_radius}, "skin"});
  return spec;
}

Scene build_scene(const ChamberSpec& chamber, const PhantomSpec& phantom) {
  if (!(chamber.diameter > 0.0)) throw GeometryError("chamber diameter must be positive");
  if (chamber.n_antennas < 1) throw GeometryError("need at least one antenna");
  if (!(chamber.port_width > 0.0)) throw GeometryError("port width must be positive");
  if (!(chamber.frequency > 0.0)) throw GeometryError("frequency must be positive");

  const double radius = 0.5 * chamber.diameter;
  const double circumference = consts::pi * chamber.diameter;
  if (chamber.n_antennas * chamber.port_width >= circumference)
    throw GeometryError("ports overlap: n_antennas * port_width must stay below the circumference");

  Scene scene;
  scene.chamber = chamber;
  scene.phantom = phantom;
  scene.eps_matching = TissueTable::builtin_1ghz().at("matching");
  scene.wavelength_matching = wavelength_in(scene.eps_matching, chamber.frequency);

  // Port ring: uniform centers, arcs stored unwrapped and ascending starting
  // from port 0's start angle.
  PortSet ports;
  ports.radius = radius;
  ports.n_ports = chamber.n_antennas;
  ports.port_arc_length = chamber.port_width;
  const int n = chamber.n_antennas;
  const double spacing = 2.0 * consts::pi / n;
  const double half = 0.5 * chamber.port_width / radius;  // half-angle of a port arc

  std::vector<double> gap_mid(n);
  const double start = chamber.shift_angle - half;
  for (int i = 0; i < n; ++i) {
    const double center = chamber.shift_angle + i * spacing;
    BoundaryArc port;
    port.kind = BoundaryKind::port;
    port.port_index = i;
    port.theta0 = center - half;
    port.theta1 = center + half;
    ports.arcs.push_back(port);
    BoundaryArc gap;
    gap.kind = BoundaryKind::metal;
    gap.theta0 = center + half;
    gap.theta1 = center + spacing - half;
    gap_mid[i] = 0.5 * (gap.theta0 + gap.theta1);
    ports.arcs.push_back(gap);
  }
  (void)start;

  // The two gaps nearest angles 0 and pi are tagged open, standing in for the
  // open sides of the chamber.
  int gap_zero = 0, gap_pi = 1;
  double best_zero = 1e30, best_pi = 1e30;
  for (int i = 0; i < n; ++i) {
    const double d0 = angle_distance(gap_mid[i], 0.0);
    if (d0 < best_zero) {
      best_zero = d0;
      gap_zero = i;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (i == gap_zero) continue;
    const double dp = angle_distance(gap_mid[i], consts::pi);
    if (dp < best_pi) {
      best_pi = dp;
      gap_pi = i;
    }
  }
  ports.arcs[2 * gap_zero + 1].kind = BoundaryKind::open;
  ports.arcs[2 * gap_pi + 1].kind = BoundaryKind::open;
  scene.ports = ports;

  // Phantom validation.
  const bool has_tear_region =
      std::any_of(phantom.regions.begin(), phantom.regions.end(),
                  [](const Region& r) { return r.name == "tear"; });
  if (phantom.variant == PhantomVariant::healthy && has_tear_region)
    throw GeometryError("healthy phantom must not carry an sf tear region");
  if (phantom.variant != PhantomVariant::healthy && !has_tear_region)
    throw GeometryError("injured phantom requires a tear region");

  // The tear footprint must sit inside the body outline (and the chamber).
  double body_radius = 0.0;
  for (const auto& region : phantom.regions) {
    if (const Circle* c = std::get_if<Circle>(&region.shape)) {
      body_radius = std::max(body_radius, norm(c->center) + c->radius);
    }
  }
  const Ellipse& tear = phantom.tear;
  for (int k = 0; k < 64; ++k) {
    const double t = 2.0 * consts::pi * k / 64.0;
    const double u = tear.semi_major * std::cos(t);
    const double v = tear.semi_minor * std::sin(t);
    const double ca = std::cos(tear.angle), sa = std::sin(tear.angle);
    const Vec2 p{tear.center.x + ca * u - sa * v, tear.center.y + sa * u + ca * v};
    if (norm(p) > body_radius)
      throw GeometryError("tear ellipse extends outside the body outline");
    if (norm(p) >= radius)
      throw GeometryError("tear ellipse extends outside the chamber");
  }

  if (body_radius >= radius)
    throw GeometryError("body outline does not fit inside the chamber");

  return scene;
}

}  // namespace mwt
