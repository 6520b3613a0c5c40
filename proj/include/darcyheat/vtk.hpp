#pragma once

#include <string>

#include "darcyheat/estimator.hpp"

namespace darcyheat {

// Legacy VTK unstructured-grid export: points, triangle cells, point-data
// scalar T_h, cell-data vector u_h (barycenter values) plus scalars p_h and
// the four per-element indicators. `state` and `indicators` may be null to
// export the mesh alone.
void export_vtk(const Mesh& mesh, const DofLayout* layout, const CoupledState* state,
                const IndicatorField* indicators, const std::string& path);

}  // namespace darcyheat
