#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "specbill/errors.hpp"

namespace specbill {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 normalized(Vec2 a) {
  double n = norm(a);
  return {a.x / n, a.y / n};
}
inline Vec2 mirror_x(Vec2 a) { return {a.x, -a.y}; }  // reflection across y = 0

// Taylor data of the boundary graph y = f(x) at a bouncing-ball endpoint.
// f(0) = L/2 and f'(0) = 0 are implicit; coeffs maps order n >= 2 to f^(n)(0).
struct GraphGerm {
  double L = 0.0;
  std::map<int, double> coeffs;

  double coeff(int n) const {
    auto it = coeffs.find(n);
    return it == coeffs.end() ? 0.0 : it->second;
  }
  bool has(int n) const { return coeffs.count(n) > 0; }
  int max_order() const { return coeffs.empty() ? 0 : coeffs.rbegin()->first; }
};

// f(x) = L/2 + sum_{n>=2} coeffs[n] x^n / n!  and its first two derivatives.
double germ_eval(const GraphGerm& germ, double x);
double germ_eval_d1(const GraphGerm& germ, double x);
double germ_eval_d2(const GraphGerm& germ, double x);

// Position, phi-derivatives, exterior unit normal, and curvature at one
// parameter. Curvature is signed positive where the obstacle is convex.
struct CurveSample {
  Vec2 q;
  Vec2 dq;
  Vec2 d2q;
  double speed = 0.0;
  Vec2 normal;
  double curvature = 0.0;
};

// Closed analytic boundary families plus local graph patches. Closed curves
// are parametrized counterclockwise with the obstacle interior on the left,
// so the exterior unit normal is (t_y, -t_x).
class BoundaryCurve {
 public:
  enum class Kind { Circle, Ellipse, PerturbedCircle, GraphPatch };

  static BoundaryCurve circle(Vec2 center, double radius);
  static BoundaryCurve ellipse(Vec2 center, double semi_axis_x, double semi_axis_y);
  // R(phi) = radius * (1 + sum_m cosine_coeffs[m-1] * cos(m (phi + pi/2))).
  // The phase puts the extremum of R on the downward axis so the bottom point
  // keeps a horizontal tangent and stays on x = 0.
  static BoundaryCurve perturbed_circle(Vec2 center, double radius,
                                        std::vector<double> cosine_coeffs);
  // Upper graph y = f(x) over |x| <= half_width with f from the germ.
  static BoundaryCurve graph_patch(GraphGerm germ, double half_width);

  Kind kind() const { return kind_; }
  bool closed() const { return kind_ != Kind::GraphPatch; }

  CurveSample sample(double phi) const;
  Vec2 point(double phi) const { return sample(phi).q; }
  Vec2 tangent(double phi) const;
  Vec2 normal(double phi) const { return sample(phi).normal; }
  double curvature(double phi) const { return sample(phi).curvature; }

  // Strictly inside the obstacle bounded by this curve.
  bool contains(Vec2 p) const;

  // Smallest ray parameter t > tmin with origin + t*dir on the curve.
  std::optional<double> ray_hit(Vec2 origin, Vec2 dir, double tmin) const;

  // Parameter of a point assumed to lie on the curve.
  double phi_of_point(Vec2 p) const;

  // Parameter of the bouncing-ball endpoint (lowest axis point).
  double bottom_phi() const;

  Vec2 center() const { return center_; }
  double base_radius() const { return radius_; }
  const std::vector<double>& cosine_coeffs() const { return pert_; }
  double semi_axis_x() const { return a_; }
  double semi_axis_y() const { return b_; }
  double half_width() const { return half_width_; }
  const GraphGerm& patch_germ() const { return germ_; }

 private:
  BoundaryCurve() = default;
  void validate() const;
  double polar_radius(double phi) const;       // PerturbedCircle only
  double polar_radius_d1(double phi) const;
  double polar_radius_d2(double phi) const;

  Kind kind_ = Kind::Circle;
  Vec2 center_;
  double radius_ = 1.0;       // Circle, PerturbedCircle
  double a_ = 1.0, b_ = 1.0;  // Ellipse
  std::vector<double> pert_;  // PerturbedCircle cosine coefficients
  GraphGerm germ_;            // GraphPatch
  double half_width_ = 0.0;   // GraphPatch
};

enum class Component { Upper, Lower };
inline Component other(Component c) {
  return c == Component::Upper ? Component::Lower : Component::Upper;
}

// Mirror-symmetric two-component obstacle: lower = reflection of upper across
// y = 0, never stored separately. Construction validates that the upper
// bouncing-ball endpoint sits at (0, L/2) with a vertical normal and that the
// components stay disjoint (upper strictly above the axis).
class ObstaclePair {
 public:
  ObstaclePair(BoundaryCurve upper, double gap);

  const BoundaryCurve& upper() const { return upper_; }
  double gap() const { return L_; }

  CurveSample sample(Component comp, double phi) const;
  bool contains(Component comp, Vec2 p) const;
  bool contains(Vec2 p) const {
    return contains(Component::Upper, p) || contains(Component::Lower, p);
  }

  double endpoint_phi() const { return upper_.bottom_phi(); }
  Vec2 endpoint(Component comp) const {
    return comp == Component::Upper ? Vec2{0.0, L_ / 2.0} : Vec2{0.0, -L_ / 2.0};
  }

  struct RayHit {
    Component comp;
    double phi;
    double t;
    Vec2 q;
  };
  // First boundary intersection over both components; nullopt = escape.
  std::optional<RayHit> first_hit(Vec2 origin, Vec2 dir, double tmin) const;

  // Signed arc length along a component measured from the endpoint, and its
  // inverse; used for Poincare coordinates near the bouncing-ball orbit.
  double arclength_from_endpoint(Component comp, double phi) const;
  double phi_at_arclength(Component comp, double s) const;

 private:
  BoundaryCurve upper_;
  double L_ = 0.0;
};

// Convenience pair factories matching the CLI domain schemas.
ObstaclePair make_two_disk(double radius, double gap);
ObstaclePair make_two_ellipse(double semi_axis_x, double semi_axis_y, double gap);
ObstaclePair make_perturbed_pair(double radius, double gap,
                                 std::vector<double> cosine_coeffs);
ObstaclePair make_germ_pair(const GraphGerm& germ, double half_width);

// Taylor coefficients of the graph chart y = f(x) at the curve's endpoint, up
// to order 2J, via series reversion of the parametric map. endpoint_phi
// defaults to the bottom of the curve; a non-horizontal tangent there raises
// NoGraphChart.
GraphGerm germ_from_curve(const BoundaryCurve& curve, double L, int J);
GraphGerm germ_from_curve_at(const BoundaryCurve& curve, double L, int J,
                             double endpoint_phi);

}  // namespace specbill
