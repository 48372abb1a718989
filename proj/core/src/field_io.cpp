#include "glpin/field_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "glpin/ops.hpp"

namespace glpin {

namespace {

constexpr uint32_t kVersion = 1;

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw ConfigError("truncated field file");
  return v;
}

void write_header(std::ostream& os, const Grid& g, Placement p, int ncomp) {
  os.write("GLF1", 4);
  put<uint32_t>(os, kVersion);
  put<int32_t>(os, static_cast<int32_t>(p));
  put<int32_t>(os, ncomp);
  put<int32_t>(os, g.pad);
  put<int64_t>(os, g.n.nx);
  put<int64_t>(os, g.n.ny);
  put<int64_t>(os, g.n.nz);
  put<double>(os, g.h);
  put<double>(os, g.origin.x);
  put<double>(os, g.origin.y);
  put<double>(os, g.origin.z);
}

void write_component(std::ostream& os, Dims3 d, const std::vector<double>& v) {
  put<int64_t>(os, d.nx);
  put<int64_t>(os, d.ny);
  put<int64_t>(os, d.nz);
  os.write(reinterpret_cast<const char*>(v.data()),
           std::streamsize(v.size() * sizeof(double)));
}

struct RawFile {
  Grid grid;
  Placement placement;
  int ncomp;
  std::vector<std::vector<double>> data;
  std::vector<Dims3> dims;
};

RawFile read_raw(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open field file: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "GLF1", 4) != 0)
    throw ConfigError("not a GLF1 field file: " + path);
  uint32_t ver = get<uint32_t>(is);
  if (ver != kVersion) throw ConfigError("unsupported GLF1 version");
  RawFile rf;
  rf.placement = static_cast<Placement>(get<int32_t>(is));
  rf.ncomp = get<int32_t>(is);
  if (rf.ncomp < 1 || rf.ncomp > 3) throw ConfigError("bad component count");
  rf.grid.pad = get<int32_t>(is);
  rf.grid.n.nx = int(get<int64_t>(is));
  rf.grid.n.ny = int(get<int64_t>(is));
  rf.grid.n.nz = int(get<int64_t>(is));
  rf.grid.h = get<double>(is);
  rf.grid.origin.x = get<double>(is);
  rf.grid.origin.y = get<double>(is);
  rf.grid.origin.z = get<double>(is);
  if (rf.grid.h <= 0 || rf.grid.n.nx < 2 || rf.grid.n.ny < 2 || rf.grid.n.nz < 2)
    throw ConfigError("bad grid header");
  for (int c = 0; c < rf.ncomp; ++c) {
    Dims3 d;
    d.nx = int(get<int64_t>(is));
    d.ny = int(get<int64_t>(is));
    d.nz = int(get<int64_t>(is));
    if (d.nx < 1 || d.ny < 1 || d.nz < 1) throw ConfigError("bad component dims");
    std::vector<double> v(size_t(d.count()));
    is.read(reinterpret_cast<char*>(v.data()),
            std::streamsize(v.size() * sizeof(double)));
    if (!is) throw ConfigError("truncated field data");
    rf.dims.push_back(d);
    rf.data.push_back(std::move(v));
  }
  return rf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write field file: " + path);
  return os;
}

}  // namespace

void write_field(const std::string& path, const ScalarField& f) {
  auto os = open_out(path);
  write_header(os, f.grid, f.placement, 1);
  write_component(os, f.dims(), f.v);
}

void write_field(const std::string& path, const VectorField& f) {
  auto os = open_out(path);
  write_header(os, f.grid, f.placement, 3);
  for (int a = 0; a < 3; ++a) write_component(os, f.dims(a), f.comp[a]);
}

void write_field(const std::string& path, const ComplexField& f) {
  auto os = open_out(path);
  write_header(os, f.grid, Placement::Node, 2);
  write_component(os, f.grid.nodes(), f.mod);
  write_component(os, f.grid.nodes(), f.phase);
}

ScalarField read_scalar_field(const std::string& path) {
  RawFile rf = read_raw(path);
  if (rf.ncomp != 1) throw ConfigError("expected scalar field in " + path);
  ScalarField f(rf.grid, rf.placement);
  if (rf.dims[0].count() != f.dims().count())
    throw ConfigError("dims mismatch in " + path);
  f.v = std::move(rf.data[0]);
  return f;
}

VectorField read_vector_field(const std::string& path) {
  RawFile rf = read_raw(path);
  if (rf.ncomp != 3) throw ConfigError("expected vector field in " + path);
  VectorField f(rf.grid, rf.placement);
  for (int a = 0; a < 3; ++a) {
    if (rf.dims[a].count() != f.dims(a).count())
      throw ConfigError("dims mismatch in " + path);
    f.comp[a] = std::move(rf.data[a]);
  }
  return f;
}

ComplexField read_complex_field(const std::string& path) {
  RawFile rf = read_raw(path);
  if (rf.ncomp != 2) throw ConfigError("expected complex field in " + path);
  ComplexField f(rf.grid);
  if (rf.dims[0].count() != rf.grid.nodes().count())
    throw ConfigError("dims mismatch in " + path);
  f.mod = std::move(rf.data[0]);
  f.phase = std::move(rf.data[1]);
  return f;
}

void write_csv(const std::string& path, const ScalarField& f) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write csv: " + path);
  os << "x,y,z,value\n";
  os.precision(17);
  Dims3 d = f.dims();
  const Grid& g = f.grid;
  for (int k = 0; k < d.nz; ++k)
    for (int j = 0; j < d.ny; ++j)
      for (int i = 0; i < d.nx; ++i) {
        Vec3 p = f.placement == Placement::Cell ? g.cell_center(i, j, k)
                                                : g.node_pos(i, j, k);
        os << p.x << ',' << p.y << ',' << p.z << ',' << f.v[d.lin(i, j, k)]
           << '\n';
      }
}

void write_csv(const std::string& path, const VectorField& f) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write csv: " + path);
  os << "x,y,z,vx,vy,vz\n";
  os.precision(17);
  const Grid& g = f.grid;
  Dims3 d = g.cells();
  for (int k = 0; k < d.nz; ++k)
    for (int j = 0; j < d.ny; ++j)
      for (int i = 0; i < d.nx; ++i) {
        Vec3 p = g.cell_center(i, j, k);
        Vec3 v = interp(f, p);
        os << p.x << ',' << p.y << ',' << p.z << ',' << v.x << ',' << v.y << ','
           << v.z << '\n';
      }
}

}  // namespace glpin
