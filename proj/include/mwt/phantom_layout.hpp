#pragma once

#include "mwt/geometry.hpp"

namespace mwt {

/// Shipped default anatomy offsets for the concentric shoulder-slice layout.
/// All lengths in meters; overridable through the experiment config.
struct PhantomLayout {
  double body_radius = 0.095;       // skin outer circle
  double skin_thickness = 0.002;
  Vec2 bone_center{0.0, 0.0};
  double bone_radius = 0.032;
  Vec2 tendon_center{0.0, 0.052};
  double tendon_semi_major = 0.034;
  double tendon_semi_minor = 0.017;
  Vec2 tear_center{0.0, 0.052};
  double tear_angle = 0.0;

  /// Uniformly scaled copy (used by coarse test scenes).
  PhantomLayout scaled(double s) const {
    PhantomLayout out = *this;
    out.body_radius *= s;
    out.skin_thickness *= s;
    out.bone_center = s * bone_center;
    out.bone_radius *= s;
    out.tendon_center = s * tendon_center;
    out.tendon_semi_major *= s;
    out.tendon_semi_minor *= s;
    out.tear_center = s * tear_center;
    return out;
  }
};

PhantomSpec make_phantom(PhantomVariant variant, double wavelength, const PhantomLayout& layout);

}  // namespace mwt
