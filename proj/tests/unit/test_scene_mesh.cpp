#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"
#include "mwt/constants.hpp"
#include "mwt/errors.hpp"
#include "mwt/geometry.hpp"
#include "mwt/mesh.hpp"
#include "mwt/phantom_layout.hpp"

using namespace mwt;

namespace {

Scene default_scene(PhantomVariant variant, int n_antennas = 32, double shift = 0.0) {
  const ChamberSpec chamber = make_chamber(n_antennas, shift);
  const Complex eps = TissueTable::builtin_1ghz().at("matching");
  const double lambda = wavelength_in(eps, chamber.frequency);
  return build_scene(chamber, make_phantom(variant, lambda));
}

}  // namespace

TEST_CASE("chamber and port layout") {
  const Scene scene = default_scene(PhantomVariant::healthy, 32, 0.0);

  // diameter is 7.14 wavelengths in the matching medium
  CHECK(scene.chamber.diameter == doctest::Approx(7.14 * scene.wavelength_matching));

  int n_port = 0, n_open = 0, n_metal = 0;
  double total = 0.0, port_total = 0.0;
  for (const auto& arc : scene.ports.arcs) {
    CHECK(arc.theta1 > arc.theta0);
    total += (arc.theta1 - arc.theta0) * scene.ports.radius;
    if (arc.kind == BoundaryKind::port) {
      ++n_port;
      port_total += (arc.theta1 - arc.theta0) * scene.ports.radius;
    } else if (arc.kind == BoundaryKind::open) {
      ++n_open;
    } else {
      ++n_metal;
    }
  }
  CHECK(n_port == 32);
  CHECK(n_open == 2);
  CHECK(n_metal == 30);
  // the arcs partition the circle
  CHECK(std::abs(total - scene.ports.circumference()) <= 1e-9 * scene.ports.circumference());
  CHECK(port_total == doctest::Approx(32 * scene.chamber.port_width));

  // uniform midpoints modulo the shift
  const double spacing = 2.0 * consts::pi / 32;
  for (int i = 0; i < 32; ++i) {
    const double expect = std::fmod(i * spacing + 2.0 * consts::pi, 2.0 * consts::pi);
    CHECK(scene.ports.port_center_angle(i) == doctest::Approx(expect).epsilon(1e-12));
  }

  // center of the chamber lands in the bone disk with the default layout
  CHECK(scene.tissue_at({0.0, 0.0}) == "bone");
  CHECK(scene.tissue_at({scene.ports.radius * 0.99, 0.0}) == "matching");
}

TEST_CASE("tear sizing follows the variant") {
  const Scene partial = default_scene(PhantomVariant::partial);
  const Scene large = default_scene(PhantomVariant::large);
  const double lambda = partial.wavelength_matching;
  CHECK(2.0 * partial.phantom.tear.semi_major == doctest::Approx(0.397 * lambda));
  CHECK(2.0 * large.phantom.tear.semi_major == doctest::Approx(0.69 * lambda));
  CHECK(partial.phantom.tear.center.x == large.phantom.tear.center.x);
  CHECK(partial.phantom.tear.center.y == large.phantom.tear.center.y);
  // minor axis, half the major
  CHECK(partial.phantom.tear.semi_minor == doctest::Approx(0.5 * partial.phantom.tear.semi_major));
  // ~1.59 cm and ~2.76 cm at the computed 4.00 cm wavelength
  CHECK(2.0 * partial.phantom.tear.semi_major == doctest::Approx(0.0159).epsilon(2e-2));
  CHECK(2.0 * large.phantom.tear.semi_major == doctest::Approx(0.0276).epsilon(2e-2));
}

TEST_CASE("scene validation errors") {
  ChamberSpec chamber = make_chamber(32);
  const double lambda = wavelength_in(TissueTable::builtin_1ghz().at("matching"), 1e9);
  const PhantomSpec phantom = make_phantom(PhantomVariant::partial, lambda);

  SUBCASE("overlapping ports") {
    chamber.port_width = consts::pi * chamber.diameter / 32 + 1e-6;
    CHECK_THROWS_AS(build_scene(chamber, phantom), GeometryError);
  }
  SUBCASE("tear outside the body") {
    PhantomSpec bad = phantom;
    bad.tear.center = {0.0, 0.3};
    for (auto& region : bad.regions)
      if (region.name == "tear") region.shape = bad.tear;
    CHECK_THROWS_AS(build_scene(chamber, bad), GeometryError);
  }
  SUBCASE("injured phantom needs a tear region") {
    PhantomSpec bad = phantom;
    bad.regions.erase(bad.regions.begin());
    CHECK_THROWS_AS(build_scene(chamber, bad), GeometryError);
  }
}

TEST_CASE("mesh generation" * doctest::timeout(300)) {
  const Scene healthy = default_scene(PhantomVariant::healthy);
  const Scene partial = default_scene(PhantomVariant::partial);

  const Mesh mesh = generate_mesh(healthy, 6.0);
  const MeshReport report = check_mesh(mesh);

  CHECK(report.conforming);
  CHECK(report.all_ccw);
  CHECK(report.labels_complete);
  CHECK(report.max_edge <= healthy.wavelength_matching / 6.0 * (1.0 + 1e-9));

  // triangle areas close the disk to 1% (polygonal boundary deficit)
  const double disk = consts::pi * healthy.ports.radius * healthy.ports.radius;
  CHECK(std::abs(report.area_sum - disk) / disk <= 0.01);

  // complete label set for the healthy phantom
  std::set<std::string> seen;
  for (int t = 0; t < mesh.n_triangles(); ++t) seen.insert(mesh.tissue_of(t));
  CHECK(seen == std::set<std::string>{"bone", "tendon", "muscle", "skin", "matching"});

  SUBCASE("partial variant carries sf elements") {
    const Mesh injured = generate_mesh(partial, 6.0);
    int n_sf = 0;
    for (int t = 0; t < injured.n_triangles(); ++t)
      if (injured.tissue_of(t) == "sf") ++n_sf;
    CHECK(n_sf >= 10);
  }

  SUBCASE("refinement scales the triangle count") {
    const Mesh fine = generate_mesh(healthy, 12.0);
    CHECK(fine.n_triangles() >= 3 * mesh.n_triangles());
    CHECK(check_mesh(fine).conforming);
  }

  SUBCASE("inversion mesh differs structurally and is homogeneous") {
    const Mesh inv = generate_inversion_mesh(healthy, 6.0);
    CHECK(inv.n_vertices() != mesh.n_vertices());
    CHECK(check_mesh(inv).conforming);
    for (int t = 0; t < inv.n_triangles(); ++t) CHECK(inv.tissue_of(t) == "matching");
  }

  SUBCASE("mesh file round trip") {
    const std::string text = serialize_mesh(mesh);
    const Mesh back = parse_mesh(text);
    CHECK(back.n_vertices() == mesh.n_vertices());
    CHECK(back.n_triangles() == mesh.n_triangles());
    CHECK(back.boundary.size() == mesh.boundary.size());
    CHECK(back.vertices[17].x == mesh.vertices[17].x);
    CHECK(back.tissue_of(0) == mesh.tissue_of(0));
    CHECK(serialize_mesh(back) == text);
  }
}

TEST_CASE("healthy and partial phantoms share geometry, differ on the tear" *
          doctest::timeout(300)) {
  const Scene healthy = default_scene(PhantomVariant::healthy);
  const Scene partial = default_scene(PhantomVariant::partial);
  const Mesh mh = generate_mesh(healthy, 6.0);
  const Mesh mp = generate_mesh(partial, 6.0);

  REQUIRE(mh.n_vertices() == mp.n_vertices());
  REQUIRE(mh.n_triangles() == mp.n_triangles());
  for (int t = 0; t < mh.n_triangles(); ++t) {
    const bool same = mh.tissue_of(t) == mp.tissue_of(t);
    if (!same) {
      CHECK(mh.tissue_of(t) == "muscle");
      CHECK(mp.tissue_of(t) == "sf");
      CHECK(contains(Primitive{partial.phantom.tear}, mp.tri_centroid(t)));
    } else if (mp.tissue_of(t) == "sf") {
      CHECK(false);  // sf may only appear inside the tear footprint
    }
  }
}

TEST_CASE("n_lambda below 4 is rejected") {
  const Scene scene = default_scene(PhantomVariant::healthy);
  CHECK_THROWS_AS(generate_mesh(scene, 3.0), std::invalid_argument);
}
