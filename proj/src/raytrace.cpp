#include "physauth/raytrace.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>

namespace physauth {

double distance(const Vec3& a, const Vec3& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                   (a.z - b.z) * (a.z - b.z));
}

void RoomScene::validate() const {
  if (!(Lx > 0.0 && Ly > 0.0 && Lz > 0.0)) {
    throw std::invalid_argument("RoomScene: dimensions must be > 0");
  }
  if (!(std::abs(reflectivity) <= 1.0)) {
    throw std::invalid_argument("RoomScene: |reflectivity| must be <= 1");
  }
  if (max_order < 0) throw std::invalid_argument("RoomScene: max_order must be >= 0");
  if (!(c > 0.0)) throw std::invalid_argument("RoomScene: c must be > 0");
  if (!(gain > 0.0)) throw std::invalid_argument("RoomScene: gain must be > 0");
}

bool RoomScene::contains(const Vec3& p) const {
  return p.x > 0.0 && p.x < Lx && p.y > 0.0 && p.y < Ly && p.z > 0.0 && p.z < Lz;
}

void GridSpec::validate() const {
  if (!(spacing > 0.0)) throw std::invalid_argument("GridSpec: spacing must be > 0");
  if (nx < 1 || ny < 1) throw std::invalid_argument("GridSpec: counts must be >= 1");
}

Vec3 GridSpec::point(std::size_t i) const {
  const std::size_t ix = i % nx;
  const std::size_t iy = i / nx;
  return {origin_x + spacing * static_cast<double>(ix),
          origin_y + spacing * static_cast<double>(iy), height};
}

std::vector<ImageSource> image_sources(const RoomScene& scene, const Vec3& s) {
  scene.validate();
  const int K = scene.max_order;
  struct AxisImage {
    double coord;
    int bounces;
  };
  auto axis = [K](double x, double L) {
    std::vector<AxisImage> out;
    for (int n = -K; n <= K; ++n) {
      for (int p = 0; p <= 1; ++p) {
        const int b = std::abs(n - p) + std::abs(n);
        if (b <= K) out.push_back({2.0 * n * L + (1 - 2 * p) * x, b});
      }
    }
    return out;
  };
  const auto xs = axis(s.x, scene.Lx);
  const auto ys = axis(s.y, scene.Ly);
  const auto zs = axis(s.z, scene.Lz);

  std::vector<ImageSource> images;
  for (const auto& ix : xs) {
    for (const auto& iy : ys) {
      if (ix.bounces + iy.bounces > K) continue;
      for (const auto& iz : zs) {
        const int b = ix.bounces + iy.bounces + iz.bounces;
        if (b <= K) images.push_back({{ix.coord, iy.coord, iz.coord}, b});
      }
    }
  }
  return images;
}

CVector fixed_response(const RoomScene& scene, const Vec3& tx, const Vec3& rx,
                       const ChannelParams& params) {
  params.validate();
  if (!scene.contains(tx) || !scene.contains(rx)) {
    throw std::invalid_argument("fixed_response: endpoints must lie strictly inside the room");
  }
  if (tx == rx) throw std::invalid_argument("fixed_response: tx and rx coincide");

  std::vector<cplx> refl_pow(static_cast<std::size_t>(scene.max_order) + 1, 1.0);
  for (std::size_t b = 1; b < refl_pow.size(); ++b) refl_pow[b] = refl_pow[b - 1] * scene.reflectivity;

  CVector h(params.M, 0.0);
  for (const auto& img : image_sources(scene, tx)) {
    const double d = distance(img.position, rx);
    const cplx amp = scene.gain * refl_pow[static_cast<std::size_t>(img.bounces)] / d;
    const double delay = d / scene.c;
    for (std::size_t m = 1; m <= params.M; ++m) {
      // reduce cycles mod 1 before scaling to radians
      const double cycles = std::fmod(params.tone_frequency(m) * delay, 1.0);
      h[m - 1] += amp * std::polar(1.0, -2.0 * std::numbers::pi * cycles);
    }
  }
  return h;
}

double room_average_gain(std::span<const CVector> responses) {
  if (responses.empty()) throw std::invalid_argument("room_average_gain: empty grid");
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& h : responses) {
    for (const cplx& v : h) sum += std::norm(v);
    count += h.size();
  }
  return std::sqrt(sum / static_cast<double>(count));
}

double room_average_gain(const RoomScene& scene, const GridSpec& grid, const Vec3& bob,
                         const ChannelParams& params) {
  grid.validate();
  std::vector<CVector> responses;
  responses.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    responses.push_back(fixed_response(scene, grid.point(i), bob, params));
  }
  return room_average_gain(responses);
}

}  // namespace physauth
