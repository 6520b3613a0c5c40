#include "darcyheat/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "darcyheat/errors.hpp"

namespace darcyheat {

namespace {

double signed_area(Vec2 a, Vec2 b, Vec2 c) { return 0.5 * cross(b - a, c - b); }

std::array<int, 2> sorted_pair(int a, int b) {
  return a < b ? std::array<int, 2>{a, b} : std::array<int, 2>{b, a};
}

// Local edge i is opposite local vertex i.
std::array<int, 2> local_edge_vertices(const std::array<int, 3>& tri, int le) {
  return {tri[(le + 1) % 3], tri[(le + 2) % 3]};
}

long long edge_key(int a, int b) {
  auto [lo, hi] = sorted_pair(a, b);
  return static_cast<long long>(lo) * (1LL << 32) + hi;
}

}  // namespace

double Mesh::total_area() const {
  double s = 0.0;
  for (double a : tri_area) s += a;
  return s;
}

Vec2 Mesh::centroid(int t) const {
  const auto& tri = triangles[t];
  Vec2 c = vertices[tri[0]] + vertices[tri[1]] + vertices[tri[2]];
  return (1.0 / 3.0) * c;
}

Vec2 Mesh::outward_normal(int t, int le) const {
  auto [a, b] = local_edge_vertices(triangles[t], le);
  // (a, b) follows the CCW orientation of t, so the outward normal is the
  // clockwise rotation of b - a.
  Vec2 d = vertices[b] - vertices[a];
  double len = norm(d);
  return {d.y / len, -d.x / len};
}

Vec2 Mesh::edge_tangent(int e) const {
  Vec2 d = vertices[edges[e][1]] - vertices[edges[e][0]];
  double len = norm(d);
  return {d.x / len, d.y / len};
}

std::array<double, 3> Mesh::barycentric(int t, Vec2 x) const {
  const auto& tri = triangles[t];
  Vec2 v0 = vertices[tri[0]], v1 = vertices[tri[1]], v2 = vertices[tri[2]];
  double area = tri_area[t];
  double l0 = signed_area(x, v1, v2) / area;
  double l1 = signed_area(v0, x, v2) / area;
  return {l0, l1, 1.0 - l0 - l1};
}

Mesh build_mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles) {
  Mesh m;
  m.vertices = std::move(vertices);
  m.triangles = std::move(triangles);
  const int nv = m.num_vertices();
  const int nt = m.num_triangles();

  m.tri_area.resize(nt);
  m.tri_diameter.resize(nt);
  for (int t = 0; t < nt; ++t) {
    for (int k = 0; k < 3; ++k) {
      int v = m.triangles[t][k];
      if (v < 0 || v >= nv)
        throw MeshError("triangle " + std::to_string(t) + " references invalid vertex " +
                        std::to_string(v));
    }
    const auto& tri = m.triangles[t];
    double area = signed_area(m.vertices[tri[0]], m.vertices[tri[1]], m.vertices[tri[2]]);
    if (!(area > 0.0))
      throw MeshError("degenerate or clockwise triangle " + std::to_string(t) +
                      " (signed area " + std::to_string(area) + ")");
    m.tri_area[t] = area;
  }

  // Deduplicated edge list, lexicographic by (min vertex, max vertex).
  std::map<std::array<int, 2>, int> edge_index;
  for (int t = 0; t < nt; ++t)
    for (int le = 0; le < 3; ++le) {
      auto [a, b] = local_edge_vertices(m.triangles[t], le);
      edge_index.emplace(sorted_pair(a, b), -1);
    }
  m.edges.reserve(edge_index.size());
  for (auto& [ab, idx] : edge_index) {
    idx = static_cast<int>(m.edges.size());
    m.edges.push_back(ab);
  }
  const int ne = m.num_edges();

  m.edge_length.resize(ne);
  for (int e = 0; e < ne; ++e)
    m.edge_length[e] = norm(m.vertices[m.edges[e][1]] - m.vertices[m.edges[e][0]]);

  m.tri_edges.assign(nt, {-1, -1, -1});
  m.tri_edge_signs.assign(nt, {0, 0, 0});
  m.edge_tris.assign(ne, {-1, -1});
  for (int t = 0; t < nt; ++t)
    for (int le = 0; le < 3; ++le) {
      auto [a, b] = local_edge_vertices(m.triangles[t], le);
      int e = edge_index.at(sorted_pair(a, b));
      m.tri_edges[t][le] = e;
      // Global edge direction is low -> high vertex index; the triangle
      // traverses it as a -> b. Outward normal matches the global normal
      // perp-rotated from (high - low) exactly when a < b.
      m.tri_edge_signs[t][le] = (a < b) ? 1 : -1;
      if (m.edge_tris[e][0] < 0)
        m.edge_tris[e][0] = t;
      else if (m.edge_tris[e][1] < 0)
        m.edge_tris[e][1] = t;
      else
        throw MeshError("edge (" + std::to_string(m.edges[e][0]) + "," +
                        std::to_string(m.edges[e][1]) + ") shared by more than two triangles");
    }

  m.edge_on_boundary.resize(ne);
  m.vertex_on_boundary.assign(nv, false);
  for (int e = 0; e < ne; ++e) {
    m.edge_on_boundary[e] = (m.edge_tris[e][1] < 0);
    if (m.edge_on_boundary[e]) {
      m.vertex_on_boundary[m.edges[e][0]] = true;
      m.vertex_on_boundary[m.edges[e][1]] = true;
    }
  }

  // Refinement edge: longest edge, ties by smallest global edge index.
  m.refinement_edge.resize(nt);
  for (int t = 0; t < nt; ++t) {
    int best = 0;
    for (int le = 1; le < 3; ++le) {
      double lb = m.edge_length[m.tri_edges[t][best]];
      double lc = m.edge_length[m.tri_edges[t][le]];
      if (lc > lb || (lc == lb && m.tri_edges[t][le] < m.tri_edges[t][best])) best = le;
    }
    m.refinement_edge[t] = best;
    m.tri_diameter[t] =
        std::max({m.edge_length[m.tri_edges[t][0]], m.edge_length[m.tri_edges[t][1]],
                  m.edge_length[m.tri_edges[t][2]]});
  }

  // Conformity: no vertex may lie in the open interior of an edge. A hanging
  // vertex is always adjacent to an edge with a single incident triangle, so
  // only those edges need scanning.
  for (int e = 0; e < ne; ++e) {
    if (!m.edge_on_boundary[e]) continue;
    Vec2 a = m.vertices[m.edges[e][0]], b = m.vertices[m.edges[e][1]];
    Vec2 d = b - a;
    double len2 = dot(d, d);
    for (int v = 0; v < nv; ++v) {
      if (v == m.edges[e][0] || v == m.edges[e][1]) continue;
      Vec2 w = m.vertices[v] - a;
      double s = dot(w, d) / len2;
      if (s <= 1e-12 || s >= 1.0 - 1e-12) continue;
      double dist = std::abs(cross(d, w)) / std::sqrt(len2);
      if (dist < 1e-12 * std::sqrt(len2))
        throw MeshError("nonconforming mesh: hanging vertex " + std::to_string(v) +
                        " on edge (" + std::to_string(m.edges[e][0]) + "," +
                        std::to_string(m.edges[e][1]) + ")");
    }
  }

  return m;
}

double mesh_min_angle_deg(const Mesh& mesh) {
  double worst = 180.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      Vec2 u = mesh.vertices[tri[(k + 1) % 3]] - mesh.vertices[tri[k]];
      Vec2 v = mesh.vertices[tri[(k + 2) % 3]] - mesh.vertices[tri[k]];
      double ang = std::atan2(std::abs(cross(u, v)), dot(u, v)) * 180.0 / M_PI;
      worst = std::min(worst, ang);
    }
  }
  return worst;
}

namespace {

// Working representation during a bisection pass. Adjacency is maintained
// incrementally; the final mesh is rebuilt through build_mesh, which
// re-derives all incidence and revalidates invariants.
struct BisectWork {
  std::vector<Vec2> vertices;
  struct Tri {
    std::array<int, 3> v;
    int ancestor;
    bool alive;
  };
  std::vector<Tri> tris;
  std::unordered_map<long long, std::array<int, 2>> edge_tris;
  std::unordered_map<long long, int> midpoint;

  std::array<int, 2>& slots_for(int a, int b) {
    return edge_tris.try_emplace(edge_key(a, b), std::array<int, 2>{-1, -1}).first->second;
  }

  void attach(int t) {
    for (int le = 0; le < 3; ++le) {
      auto [a, b] = local_edge_vertices(tris[t].v, le);
      auto& slots = slots_for(a, b);
      if (slots[0] == t || slots[1] == t) continue;
      if (slots[0] < 0)
        slots[0] = t;
      else if (slots[1] < 0)
        slots[1] = t;
      else
        throw MeshError("bisection produced an edge with three incident triangles");
    }
  }

  void detach(int t) {
    for (int le = 0; le < 3; ++le) {
      auto [a, b] = local_edge_vertices(tris[t].v, le);
      auto& slots = slots_for(a, b);
      if (slots[0] == t) {
        slots[0] = slots[1];
        slots[1] = -1;
      } else if (slots[1] == t) {
        slots[1] = -1;
      }
    }
  }

  int neighbor(int t, int a, int b) const {
    auto it = edge_tris.find(edge_key(a, b));
    if (it == edge_tris.end()) return -1;
    return it->second[0] == t ? it->second[1] : it->second[0];
  }

  // Longest edge, ties broken lexicographically on sorted vertex pairs
  // (equivalent to the smallest global edge index once rebuilt).
  std::array<int, 2> longest_edge(int t) const {
    std::array<int, 2> best{-1, -1};
    double best_len = -1.0;
    for (int le = 0; le < 3; ++le) {
      auto ab = sorted_pair(tris[t].v[(le + 1) % 3], tris[t].v[(le + 2) % 3]);
      double len = norm(vertices[ab[1]] - vertices[ab[0]]);
      if (len > best_len || (len == best_len && ab < best)) {
        best_len = len;
        best = ab;
      }
    }
    return best;
  }

  int midpoint_of(int a, int b) {
    long long key = edge_key(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    int id = static_cast<int>(vertices.size());
    vertices.push_back(0.5 * (vertices[a] + vertices[b]));
    midpoint.emplace(key, id);
    return id;
  }

  // Splits t through edge (a, b); children keep the parent's cyclic order, so
  // they stay counterclockwise.
  void split(int t, int a, int b, int mid) {
    detach(t);
    tris[t].alive = false;
    std::array<int, 3> va = tris[t].v, vb = tris[t].v;
    for (int k = 0; k < 3; ++k) {
      if (va[k] == b) va[k] = mid;
      if (vb[k] == a) vb[k] = mid;
    }
    int ca = static_cast<int>(tris.size());
    tris.push_back({va, tris[t].ancestor, true});
    attach(ca);
    int cb = static_cast<int>(tris.size());
    tris.push_back({vb, tris[t].ancestor, true});
    attach(cb);
  }
};

}  // namespace

BisectResult bisect(const Mesh& mesh, const std::vector<int>& marked,
                    double min_angle_floor_deg, int closure_cap_factor) {
  const int nt = mesh.num_triangles();
  for (int t : marked)
    if (t < 0 || t >= nt) throw MeshError("marked element " + std::to_string(t) + " out of range");

  BisectWork work;
  work.vertices = mesh.vertices;
  work.tris.reserve(nt + 4 * marked.size());
  for (int t = 0; t < nt; ++t) work.tris.push_back({mesh.triangles[t], t, true});
  work.edge_tris.reserve(3 * nt);
  for (int t = 0; t < nt; ++t) work.attach(t);

  const std::size_t cap =
      static_cast<std::size_t>(closure_cap_factor) * std::max<std::size_t>(1, marked.size());

  std::vector<int> order(marked);
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());

  std::vector<int> chain;
  for (int seed : order) {
    if (!work.tris[seed].alive) continue;  // already refined by closure
    chain.assign(1, seed);
    while (!chain.empty()) {
      if (chain.size() > cap)
        throw MeshError("refinement-edge closure exceeded the depth cap (" +
                        std::to_string(cap) + "); refinement-edge cycle suspected");
      int t = chain.back();
      auto [a, b] = work.longest_edge(t);
      int tn = work.neighbor(t, a, b);
      if (tn >= 0 && work.longest_edge(tn) != std::array<int, 2>{a, b}) {
        chain.push_back(tn);
        continue;
      }
      int mid = work.midpoint_of(a, b);
      work.split(t, a, b, mid);
      if (tn >= 0) work.split(tn, a, b, mid);
      chain.pop_back();
      // The predecessor's longest-edge neighbor changed; it is re-examined on
      // the next pass of the loop.
    }
  }

  std::vector<std::array<int, 3>> new_tris;
  std::vector<int> ancestor;
  new_tris.reserve(work.tris.size());
  for (const auto& wt : work.tris) {
    if (!wt.alive) continue;
    new_tris.push_back(wt.v);
    ancestor.push_back(wt.ancestor);
  }

  BisectResult result;
  result.mesh = build_mesh(std::move(work.vertices), std::move(new_tris));
  result.descendants.assign(nt, {});
  for (int t = 0; t < result.mesh.num_triangles(); ++t)
    result.descendants[ancestor[t]].push_back(t);

  double min_angle = mesh_min_angle_deg(result.mesh);
  if (min_angle < min_angle_floor_deg)
    throw MeshError("refined mesh violates the minimum-angle floor: " +
                    std::to_string(min_angle) + " deg < " + std::to_string(min_angle_floor_deg) +
                    " deg");
  return result;
}

LocateResult locate(const Mesh& mesh, Vec2 z, double eps_geo) {
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    auto bary = mesh.barycentric(t, z);
    // Convert the distance tolerance eps_geo * h_K into barycentric units:
    // a barycentric coordinate is (distance to the opposite edge) / altitude,
    // and altitudes are at least 2|K| / h_K.
    double tol = eps_geo * mesh.tri_diameter[t] * mesh.tri_diameter[t] / (2.0 * mesh.tri_area[t]);
    if (bary[0] < -tol || bary[1] < -tol || bary[2] < -tol) continue;

    LocateResult res;
    res.element = t;
    res.bary = bary;
    int small[3];
    int ns = 0;
    for (int k = 0; k < 3; ++k)
      if (bary[k] <= tol) small[ns++] = k;
    if (ns >= 2) {
      res.classification = PointClass::AtVertex;
      // The vertex is the one with the large coordinate.
      for (int k = 0; k < 3; ++k)
        if (bary[k] > tol) res.local_vertex = k;
      res.bary = {0.0, 0.0, 0.0};
      res.bary[res.local_vertex] = 1.0;
    } else if (ns == 1) {
      res.classification = PointClass::OnEdge;
      res.local_edge = small[0];  // edge opposite the vanishing coordinate's vertex
      res.bary[small[0]] = 0.0;
    } else {
      res.classification = PointClass::Interior;
    }
    return res;
  }
  std::ostringstream oss;
  oss << "point (" << z.x << ", " << z.y << ") lies outside the meshed domain";
  throw DomainError(oss.str());
}

std::vector<Patch> patches(const Mesh& mesh) {
  const int nt = mesh.num_triangles();
  std::vector<std::vector<int>> vertex_tris(mesh.num_vertices());
  for (int t = 0; t < nt; ++t)
    for (int v : mesh.triangles[t]) vertex_tris[v].push_back(t);

  std::vector<Patch> result(nt);
  for (int t = 0; t < nt; ++t) {
    Patch& p = result[t];
    p.center = t;
    p.n_k.push_back(t);
    for (int le = 0; le < 3; ++le) {
      int e = mesh.tri_edges[t][le];
      int other = mesh.edge_tris[e][0] == t ? mesh.edge_tris[e][1] : mesh.edge_tris[e][0];
      if (other >= 0) p.n_k.push_back(other);
    }
    std::sort(p.n_k.begin(), p.n_k.end());
    for (int v : mesh.triangles[t])
      p.n_k_star.insert(p.n_k_star.end(), vertex_tris[v].begin(), vertex_tris[v].end());
    std::sort(p.n_k_star.begin(), p.n_k_star.end());
    p.n_k_star.erase(std::unique(p.n_k_star.begin(), p.n_k_star.end()), p.n_k_star.end());
  }
  return result;
}

Mesh make_unit_square_crisscross(int n) {
  if (n < 1) throw MeshError("criss-cross subdivision count must be >= 1");
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> tris;
  auto grid = [&](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      int c = static_cast<int>(vertices.size());
      vertices.push_back({(i + 0.5) / n, (j + 0.5) / n});
      int bl = grid(i, j), br = grid(i + 1, j), tr = grid(i + 1, j + 1), tl = grid(i, j + 1);
      tris.push_back({bl, br, c});
      tris.push_back({br, tr, c});
      tris.push_back({tr, tl, c});
      tris.push_back({tl, bl, c});
    }
  return build_mesh(std::move(vertices), std::move(tris));
}

Mesh make_lshape_crisscross(int m) {
  if (m < 1) throw MeshError("criss-cross subdivision count must be >= 1");
  const int n = 2 * m;  // cells across the bounding box (-1,1)^2
  const double h = 2.0 / n;
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> tris;
  std::map<std::pair<int, int>, int> grid_id;
  auto grid = [&](int i, int j) {
    auto it = grid_id.find({i, j});
    if (it != grid_id.end()) return it->second;
    int id = static_cast<int>(vertices.size());
    vertices.push_back({-1.0 + i * h, -1.0 + j * h});
    grid_id.emplace(std::make_pair(i, j), id);
    return id;
  };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double cx = -1.0 + (i + 0.5) * h, cy = -1.0 + (j + 0.5) * h;
      if (cx > 0.0 && cy < 0.0) continue;  // removed quadrant [0,1) x [-1,0)
      int bl = grid(i, j), br = grid(i + 1, j), tr = grid(i + 1, j + 1), tl = grid(i, j + 1);
      int c = static_cast<int>(vertices.size());
      vertices.push_back({cx, cy});
      tris.push_back({bl, br, c});
      tris.push_back({br, tr, c});
      tris.push_back({tr, tl, c});
      tris.push_back({tl, bl, c});
    }
  return build_mesh(std::move(vertices), std::move(tris));
}

Mesh read_mesh_text(std::istream& in) {
  int nv = 0, nt = 0;
  if (!(in >> nv >> nt)) throw MeshError("mesh text: failed to read header 'nv nt'");
  if (nv < 3 || nt < 1) throw MeshError("mesh text: implausible header counts");
  std::vector<Vec2> vertices(nv);
  for (int v = 0; v < nv; ++v)
    if (!(in >> vertices[v].x >> vertices[v].y))
      throw MeshError("mesh text: failed to read vertex " + std::to_string(v));
  std::vector<std::array<int, 3>> tris(nt);
  for (int t = 0; t < nt; ++t)
    if (!(in >> tris[t][0] >> tris[t][1] >> tris[t][2]))
      throw MeshError("mesh text: failed to read triangle " + std::to_string(t));
  return build_mesh(std::move(vertices), std::move(tris));
}

Mesh read_mesh_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file: " + path);
  return read_mesh_text(in);
}

void write_mesh_text(const Mesh& mesh, std::ostream& out) {
  out << mesh.num_vertices() << ' ' << mesh.num_triangles() << '\n';
  out.precision(17);
  for (const auto& v : mesh.vertices) out << v.x << ' ' << v.y << '\n';
  for (const auto& t : mesh.triangles) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

void write_mesh_text_file(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot open mesh file for writing: " + path);
  write_mesh_text(mesh, out);
  if (!out) throw MeshError("failed writing mesh file: " + path);
}

}  // namespace darcyheat
