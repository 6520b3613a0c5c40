#include "darcyheat/vtk.hpp"

#include <fstream>

#include "darcyheat/config.hpp"
#include "darcyheat/errors.hpp"

namespace darcyheat {

namespace {

void write_cell_scalars(std::ostream& out, const std::string& name,
                        const std::vector<double>& values) {
  out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (double v : values) out << format_double(v) << '\n';
}

}  // namespace

void export_vtk(const Mesh& mesh, const DofLayout* layout, const CoupledState* state,
                const IndicatorField* indicators, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open VTK file for writing: " + path);

  out << "# vtk DataFile Version 3.0\n";
  out << "darcyheat export\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_vertices() << " double\n";
  for (const auto& v : mesh.vertices)
    out << format_double(v.x) << ' ' << format_double(v.y) << " 0\n";
  out << "CELLS " << mesh.num_triangles() << ' ' << 4 * mesh.num_triangles() << '\n';
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << mesh.num_triangles() << '\n';
  for (int t = 0; t < mesh.num_triangles(); ++t) out << "5\n";

  if (state && layout) {
    out << "POINT_DATA " << mesh.num_vertices() << '\n';
    out << "SCALARS temperature double 1\nLOOKUP_TABLE default\n";
    for (int v = 0; v < mesh.num_vertices(); ++v) {
      int dof = layout->vertex_to_tdof[v];
      out << format_double(dof >= 0 ? state->T[dof] : 0.0) << '\n';
    }

    out << "CELL_DATA " << mesh.num_triangles() << '\n';
    out << "VECTORS velocity double\n";
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      Vec2 u = evaluate_rt0(mesh, *layout, state->u, t, mesh.centroid(t));
      out << format_double(u.x) << ' ' << format_double(u.y) << " 0\n";
    }
    std::vector<double> pressure(state->p.data(), state->p.data() + state->p.size());
    write_cell_scalars(out, "pressure", pressure);
    if (indicators) {
      write_cell_scalars(out, "est_heat", indicators->heat);
      write_cell_scalars(out, "est_curl", indicators->curl);
      write_cell_scalars(out, "est_pressure", indicators->pressure);
      write_cell_scalars(out, "est_total", indicators->total);
    }
  }

  if (!out) throw Error("failed writing VTK file: " + path);
}

}  // namespace darcyheat
