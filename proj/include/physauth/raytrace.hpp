#pragma once

// Location-specific fixed responses from image sources in a rectangular room.

#include <cstddef>
#include <span>
#include <vector>

#include "physauth/channel.hpp"
#include "physauth/numerics.hpp"

namespace physauth {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

double distance(const Vec3& a, const Vec3& b);

/// Shoebox room with one frequency-flat, angle-independent reflection
/// coefficient for every wall.
struct RoomScene {
  double Lx = 10.0;
  double Ly = 8.0;
  double Lz = 3.0;
  cplx reflectivity{-0.7, 0.0};  ///< 0.7 e^{j pi}
  int max_order = 4;
  double c = 2.998e8;
  /// Common amplitude scale on every ray (antenna gains, wavelength factor and
  /// building losses lumped together). 1 keeps plain 1/d spreading.
  double gain = 1.0;

  void validate() const;
  bool contains(const Vec3& p) const;
};

/// Horizontal grid of candidate transmitter positions.
struct GridSpec {
  double origin_x = 0.0;
  double origin_y = 0.0;
  double spacing = 0.2;
  std::size_t nx = 1;
  std::size_t ny = 1;
  double height = 1.0;

  void validate() const;
  std::size_t size() const { return nx * ny; }
  /// Point i, x-major: i = ix + nx * iy.
  Vec3 point(std::size_t i) const;
};

struct ImageSource {
  Vec3 position;
  int bounces = 0;
};

/// All images of `source` with at most scene.max_order wall reflections,
/// from the lattice x' = 2 n Lx + (1 - 2 p) x (same per axis); the bounce
/// count along an axis is |n - p| + |n|.
std::vector<ImageSource> image_sources(const RoomScene& scene, const Vec3& source);

/// Hbar_m = gain * sum_images refl^b / d * exp(-j 2 pi f_m d / c), m = 1..M.
CVector fixed_response(const RoomScene& scene, const Vec3& tx, const Vec3& rx,
                       const ChannelParams& params);

/// sqrt(mean over grid points and tones of |Hbar|^2), grid points transmitting to bob.
double room_average_gain(const RoomScene& scene, const GridSpec& grid, const Vec3& bob,
                         const ChannelParams& params);

/// Same, from already computed responses (one per grid point).
double room_average_gain(std::span<const CVector> responses);

}  // namespace physauth
