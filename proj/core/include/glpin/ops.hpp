#pragma once
#include <functional>

#include "glpin/grid.hpp"

namespace glpin {

// Primal chain: node --grad--> edge --curl--> face --div--> cell.
// The composites curl(grad f) and div(curl v) telescope to zero exactly.
VectorField gradient(const ScalarField& node_scalar);
VectorField curl_edge_to_face(const VectorField& edge_vec);
ScalarField div_face_to_cell(const VectorField& face_vec);

// Dual-chain operators, valid on interior stencils; entries whose stencil
// would leave the box are set to zero.
VectorField curl_face_to_edge(const VectorField& face_vec);
ScalarField div_edge_to_node(const VectorField& edge_vec);

ScalarField cell_average(const ScalarField& node_scalar);

// Adjoints with respect to plain lattice sums, one-sided boundary terms
// included (unlike the dual-chain operators above).
// <gradient f, v>_edges = <f, grad_transpose v>_nodes
ScalarField grad_transpose(const VectorField& edge_vec);
// <curl_edge_to_face e, f>_faces = <e, curl_transpose f>_edges
VectorField curl_transpose(const VectorField& face_vec);

// Sampling of analytic functions at the staggered locations.
ScalarField sample_nodes(const Grid& g, const std::function<double(Vec3)>& f,
                         std::string name = "");
ScalarField sample_cells(const Grid& g, const std::function<double(Vec3)>& f,
                         std::string name = "");
// Edge placement stores the tangential component, face placement the normal one.
VectorField sample_vector(const Grid& g, Placement p,
                          const std::function<Vec3(Vec3)>& f, std::string name = "");

// Trilinear interpolation; each staggered component interpolates on its own
// lattice. Points outside the box are clamped to it.
double interp(const ScalarField& f, Vec3 p);
Vec3 interp(const VectorField& f, Vec3 p);

}  // namespace glpin
