#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "darcyheat/geometry.hpp"

namespace darcyheat {

// Conforming triangulation of a polygonal domain. Immutable after
// construction: refinement (bisect) produces a new mesh.
//
// Conventions:
//  - triangles are counterclockwise (positive signed area);
//  - local edge i of a triangle is the edge opposite local vertex i;
//  - global edges are stored with vertex indices (a, b), a < b, sorted
//    lexicographically, so "smallest edge index" == lexicographic order;
//  - the global edge normal is perp(b - a) normalized; the per-triangle
//    orientation sign is +1 when that normal points out of the triangle.
struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;

  std::vector<std::array<int, 2>> edges;            // (a, b), a < b, lex-sorted
  std::vector<std::array<int, 3>> tri_edges;        // global edge id per local edge
  std::vector<std::array<int, 3>> tri_edge_signs;   // +-1, see above
  std::vector<std::array<int, 2>> edge_tris;        // incident triangles, second = -1 on boundary
  std::vector<bool> edge_on_boundary;
  std::vector<bool> vertex_on_boundary;
  std::vector<int> refinement_edge;                 // local index of the longest edge

  std::vector<double> tri_area;
  std::vector<double> tri_diameter;                 // longest edge length, h_K
  std::vector<double> edge_length;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }

  double total_area() const;

  Vec2 centroid(int t) const;
  // Unit normal on local edge le of triangle t pointing out of t.
  Vec2 outward_normal(int t, int le) const;
  // Unit tangent of global edge e, oriented from lower to higher vertex index.
  Vec2 edge_tangent(int e) const;
  // Barycentric coordinates of x with respect to triangle t.
  std::array<double, 3> barycentric(int t, Vec2 x) const;
};

// Builds the full incidence structure. Throws MeshError for degenerate
// (area <= 0) triangles, invalid indices, edges shared by more than two
// triangles, and hanging vertices (nonconforming input).
Mesh build_mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles);

struct BisectResult {
  Mesh mesh;
  // descendants[t] lists, for each triangle t of the input mesh, the ids of
  // the triangles of the output mesh that partition it.
  std::vector<std::vector<int>> descendants;
};

// Longest-edge bisection of the marked triangles with recursive conformity
// closure. The refinement chain length is capped at `closure_cap_factor *
// max(1, #marked)`; exceeding it signals a refinement-edge cycle and is an
// internal error. The minimum-angle floor (degrees) is asserted on the
// result.
BisectResult bisect(const Mesh& mesh, const std::vector<int>& marked,
                    double min_angle_floor_deg = 5.0, int closure_cap_factor = 100);

enum class PointClass { Interior, OnEdge, AtVertex };

struct LocateResult {
  int element = -1;
  std::array<double, 3> bary{};
  PointClass classification = PointClass::Interior;
  int local_edge = -1;    // for OnEdge: local edge of `element` containing z
  int local_vertex = -1;  // for AtVertex: local vertex of `element` equal to z
};

// Finds the lowest-id triangle whose closure contains z. Classification uses
// a tolerance of eps_geo * h_K on distances (converted to barycentric
// coordinates). Throws DomainError when no triangle contains z.
LocateResult locate(const Mesh& mesh, Vec2 z, double eps_geo = 1e-12);

struct Patch {
  int center = -1;
  std::vector<int> n_k;       // center plus edge-neighbors
  std::vector<int> n_k_star;  // center plus vertex-neighbors
};

std::vector<Patch> patches(const Mesh& mesh);

// Smallest interior angle over all triangles, in degrees.
double mesh_min_angle_deg(const Mesh& mesh);

// Criss-cross mesh of the unit square (0,1)^2 with n x n cells, 4 triangles
// per cell.
Mesh make_unit_square_crisscross(int n);

// Criss-cross mesh of the L-shaped domain (-1,1)^2 \ [0,1)x[-1,0) with
// m x m cells per unit quadrant (3 quadrants kept).
Mesh make_lshape_crisscross(int m);

// Plain-text format: header "nv nt", nv lines "x y", nt lines "i j k"
// (0-based).
Mesh read_mesh_text(std::istream& in);
Mesh read_mesh_text_file(const std::string& path);
void write_mesh_text(const Mesh& mesh, std::ostream& out);
void write_mesh_text_file(const Mesh& mesh, const std::string& path);

}  // namespace darcyheat
