#pragma once

#include <cmath>

namespace darcyheat {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return s * a; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

// z-component of the 2D cross product a x b.
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

// Counterclockwise 90-degree rotation.
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }

}  // namespace darcyheat
