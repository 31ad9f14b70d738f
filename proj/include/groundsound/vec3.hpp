/**
 * @file vec3.hpp
 * @brief Minimal 3-vector used for positions and directions (SI metres).
 */

#ifndef GROUNDSOUND_VEC3_HPP
#define GROUNDSOUND_VEC3_HPP

#include <cmath>

namespace groundsound {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr bool operator==(const Vec3&) const = default;

    constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
    /// Distance from this point to `o` projected onto the z = 0 plane.
    double planar_distance(const Vec3& o) const { return std::hypot(x - o.x, y - o.y); }
};

} // namespace groundsound

#endif
