#pragma once

#include <string>
#include <variant>
#include <vector>

#include "mwt/constants.hpp"
#include "mwt/dielectrics.hpp"

namespace mwt {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }

struct Circle {
  Vec2 center;
  double radius = 0.0;
};

struct Ellipse {
  Vec2 center;
  double semi_major = 0.0;  // along the rotated x axis
  double semi_minor = 0.0;
  double angle = 0.0;       // rotation of the major axis, radians
};

using Primitive = std::variant<Circle, Ellipse>;

bool contains(const Primitive& shape, Vec2 p);

/// One tissue region: a named primitive resolved to a tissue. Regions are
/// tested in list order, so earlier entries take priority where shapes nest.
struct Region {
  std::string name;
  Primitive shape;
  std::string tissue;
};

enum class PhantomVariant { healthy, partial, large };

std::string to_string(PhantomVariant v);
PhantomVariant phantom_variant_from_string(const std::string& s);

struct PhantomSpec {
  PhantomVariant variant = PhantomVariant::healthy;
  std::vector<Region> regions;  // priority order, innermost first
  Ellipse tear;                 // footprint; tissue is sf unless healthy
};

struct ChamberSpec {
  double diameter = 0.0;        // meters
  double port_width = 0.0;      // arc length of each port, meters
  int n_antennas = 0;
  double shift_angle = 0.0;     // rotation of the whole port ring, radians
  double frequency = 1e9;       // Hz
  double waveguide_width = 0.021;  // physical guide width feeding each port
  double waveguide_eps = 59.0;     // ceramic filling of the guides
};

enum class BoundaryKind { metal, port, open };

/// One arc of the chamber circle, [theta0, theta1) counterclockwise.
struct BoundaryArc {
  BoundaryKind kind = BoundaryKind::metal;
  int port_index = -1;  // valid when kind == port
  double theta0 = 0.0;
  double theta1 = 0.0;
};

/// The chamber circle partitioned into port, metal, and open arcs. Every port
/// transmits in its turn and receives always.
struct PortSet {
  double radius = 0.0;
  int n_ports = 0;
  double port_arc_length = 0.0;
  std::vector<BoundaryArc> arcs;  // sorted by theta0, partition of [0, 2pi)

  double port_center_angle(int i) const;
  double circumference() const { return 2.0 * consts::pi * radius; }
};

/// Fully resolved 2D scene: chamber, ports, phantom, and the tissue
/// assignment function. Immutable after construction.
struct Scene {
  ChamberSpec chamber;
  PhantomSpec phantom;
  PortSet ports;
  double wavelength_matching = 0.0;  // in the matching medium at `frequency`
  Complex eps_matching;

  /// Tissue name at a point: first matching phantom region, else matching
  /// medium. Points outside the chamber still resolve (callers clip).
  std::string tissue_at(Vec2 p) const;
};

/// Default chamber sizing: diameter 7.14 wavelengths in the matching medium,
/// ports of 2.1 cm arc length (shrunk when more antennas must fit).
ChamberSpec make_chamber(int n_antennas, double shift_angle = 0.0, double frequency = 1e9);

/// Default concentric phantom layout: skin shell (2 mm), muscle body, one
/// bone disk, a tendon lens above the bone, and the tear ellipse inside the
/// tendon. Tear in-plane extent: major axis 0.397 lambda (partial) or
/// 0.69 lambda (large), minor axis half of major. The healthy variant keeps
/// the footprint but fills it with muscle.
PhantomSpec make_phantom(PhantomVariant variant, double wavelength);

/// Validate the specs, lay out the port ring, and resolve the tissue map.
/// Throws GeometryError for overlapping ports or a tear outside the body.
Scene build_scene(const ChamberSpec& chamber, const PhantomSpec& phantom);

}  // namespace mwt
