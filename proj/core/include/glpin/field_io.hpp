#pragma once

#include <string>

#include "glpin/grid.hpp"

namespace glpin {

// GLF1 binary field file, little endian:
//   "GLF1" magic, u32 version, i32 placement, i32 ncomp, i32 pad,
//   3 x i64 node dims, f64 spacing, 3 x f64 origin,
//   then per component: 3 x i64 dims, doubles in x-fastest order.
// Scalar fields have ncomp 1, vector fields 3, complex (mod, phase) 2.

void write_field(const std::string& path, const ScalarField& f);
void write_field(const std::string& path, const VectorField& f);
void write_field(const std::string& path, const ComplexField& f);

ScalarField read_scalar_field(const std::string& path);
VectorField read_vector_field(const std::string& path);
ComplexField read_complex_field(const std::string& path);

// CSV: header row then one row per sample point with coordinates and values.
void write_csv(const std::string& path, const ScalarField& f);
void write_csv(const std::string& path, const VectorField& f);

}  // namespace glpin
