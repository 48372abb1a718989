#pragma once

#include <optional>
#include <string>
#include <vector>

#include "glpin/domain.hpp"
#include "glpin/grid.hpp"

namespace glpin {

// Oriented polyline. For closed curves the last vertex connects back to the
// first; vertices are not duplicated.
struct PolyCurve {
  std::vector<Vec3> pts;
  std::vector<double> s;  // arc length at each vertex, s[0] = 0
  bool closed{false};

  int seg_count() const {
    return closed ? int(pts.size()) : int(pts.size()) - 1;
  }
  void seg(int i, Vec3& a, Vec3& b) const {
    a = pts[size_t(i)];
    b = pts[size_t((i + 1) % int(pts.size()))];
  }
  double total_length() const;
  double wrap_s(double sv) const;  // clamp (open) or wrap (closed) into [0, L]
  int locate(double sv, double& t) const;  // segment index and local fraction
  Vec3 point_at(double sv) const;
  Vec3 tangent_at(double sv) const;   // unit, averaged at vertices
  Vec3 curvature_at(double sv) const;  // discrete second derivative wrt arclength
};

PolyCurve make_poly_curve(std::vector<Vec3> pts, bool closed);
PolyCurve resample(const PolyCurve& c, double target_ds);

// Minimum distance between non-adjacent segments; simplicity means > h/2.
double min_separation(const PolyCurve& c);

struct FrameSample {
  Vec3 t, e1, e2;
};

// Parallel-transport frame along the curve. For closed curves the holonomy
// angle is distributed so the frame is periodic; the raw defect is kept.
struct FramedCurve {
  PolyCurve curve;
  std::vector<Vec3> tangent, e1, e2;  // one per vertex
  double closure_defect_deg{0};

  FrameSample frame_at(double sv) const;
};

FramedCurve build_frame(const PolyCurve& curve);

// Bounding-volume tree over curve segments for nearest-point queries.
class SegmentBVH {
 public:
  explicit SegmentBVH(const PolyCurve& curve);
  // Returns distance; optionally the nearest segment and its local parameter.
  double distance(Vec3 p, int* seg = nullptr, double* t = nullptr) const;

 private:
  struct Node {
    Vec3 lo, hi;
    int left{-1}, right{-1};  // children, or leaf range below
    int begin{0}, end{0};
  };
  std::vector<Node> nodes_;
  std::vector<int> order_;
  std::vector<Vec3> a_, b_;
  std::vector<double> s_at_a_;
  std::vector<double> seg_len_;
  int build(std::vector<int>& idx, int begin, int end);
  friend struct Tube;
};

struct CurveCoords {
  double s, v, w;
};

struct Tube {
  FramedCurve fc;
  double delta;
  SegmentBVH bvh;

  Tube(FramedCurve f, double d);

  // Coordinates iff dist(x, curve) < delta.
  std::optional<CurveCoords> coords(Vec3 x) const;
  Vec3 reconstruct(const CurveCoords& c) const;
};

// Throws GeometryError when delta is at or above the estimated reach.
Tube make_tube(FramedCurve fc, double delta);

// Volume element of the tubular coordinates at (s, v, w).
double volume_jacobian(double s, double v, double w, const Tube& tube);

// Trapezoid of rho^2 along the part of the curve inside the domain
// (whole curve when domain is null). rho is trilinearly interpolated.
double weighted_length(const PolyCurve& curve, const ScalarField& rho,
                       const Domain* domain);
// Plain arc length of curve ∩ Ω.
double length_inside(const PolyCurve& curve, const Domain& domain);

struct Crossing {
  double s;          // arc length of the crossing
  Vec3 x;            // crossing point
  double angle_deg;  // angle between tangent and the boundary tangent plane
  bool flagged;      // below the 5 degree guard
};

struct TransversalityReport {
  std::vector<Crossing> crossings;
  bool ok{true};  // false if any flagged or a grazing touch was detected
};

TransversalityReport transversality(const PolyCurve& curve, const Domain& domain);

// Straight extension of each endpoint along its exit tangent by ext_len,
// closed by an arc held clearance outside the ball. Endpoints must exit Ω.
PolyCurve extend_and_close(const PolyCurve& curve, const Domain& domain,
                           double ext_len, double clearance);

// Distance to the curve sampled at cell centers or nodes.
ScalarField curve_distance_field(const Grid& g, const PolyCurve& curve,
                                 Placement placement);

// CSV with a "# closed=0|1" header line and rows s,x,y,z (frames appended
// when present).
PolyCurve read_curve_csv(const std::string& path);
void write_curve_csv(const std::string& path, const PolyCurve& c);
void write_curve_csv(const std::string& path, const FramedCurve& fc);

}  // namespace glpin
