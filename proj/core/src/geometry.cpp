#include "specbill/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "specbill/series.hpp"

namespace specbill {

namespace {

constexpr double kPi = std::numbers::pi;

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Adaptive Simpson for the tiny analytic arc-length integrals used here.
double simpson(const std::function<double(double)>& f, double a, double b,
               double fa, double fm, double fb, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson(f, a, m, fa, flm, fm, tol / 2.0, depth - 1) +
         simpson(f, m, b, fm, frm, fb, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b) {
  if (a == b) return 0.0;
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return simpson(f, a, b, fa, fm, fb, 1e-14 * (1.0 + std::abs(b - a)), 40);
}

}  // namespace

double germ_eval(const GraphGerm& germ, double x) {
  double v = germ.L / 2.0;
  for (const auto& [n, c] : germ.coeffs) v += c * std::pow(x, n) / factorial(n);
  return v;
}

double germ_eval_d1(const GraphGerm& germ, double x) {
  double v = 0.0;
  for (const auto& [n, c] : germ.coeffs) v += c * std::pow(x, n - 1) / factorial(n - 1);
  return v;
}

double germ_eval_d2(const GraphGerm& germ, double x) {
  double v = 0.0;
  for (const auto& [n, c] : germ.coeffs) v += c * std::pow(x, n - 2) / factorial(n - 2);
  return v;
}

BoundaryCurve BoundaryCurve::circle(Vec2 center, double radius) {
  BoundaryCurve c;
  c.kind_ = Kind::Circle;
  c.center_ = center;
  c.radius_ = radius;
  c.validate();
  return c;
}

BoundaryCurve BoundaryCurve::ellipse(Vec2 center, double semi_axis_x, double semi_axis_y) {
  BoundaryCurve c;
  c.kind_ = Kind::Ellipse;
  c.center_ = center;
  c.a_ = semi_axis_x;
  c.b_ = semi_axis_y;
  c.validate();
  return c;
}

BoundaryCurve BoundaryCurve::perturbed_circle(Vec2 center, double radius,
                                              std::vector<double> cosine_coeffs) {
  BoundaryCurve c;
  c.kind_ = Kind::PerturbedCircle;
  c.center_ = center;
  c.radius_ = radius;
  c.pert_ = std::move(cosine_coeffs);
  c.validate();
  return c;
}

BoundaryCurve BoundaryCurve::graph_patch(GraphGerm germ, double half_width) {
  BoundaryCurve c;
  c.kind_ = Kind::GraphPatch;
  c.germ_ = std::move(germ);
  c.half_width_ = half_width;
  c.validate();
  return c;
}

void BoundaryCurve::validate() const {
  switch (kind_) {
    case Kind::Circle:
      if (radius_ <= 0.0) throw std::invalid_argument("circle radius must be > 0");
      return;
    case Kind::Ellipse:
      if (a_ <= 0.0 || b_ <= 0.0) throw std::invalid_argument("ellipse semi-axes must be > 0");
      return;
    case Kind::PerturbedCircle: {
      if (radius_ <= 0.0) throw std::invalid_argument("base radius must be > 0");
      for (int i = 0; i < 2048; ++i) {
        double phi = 2.0 * kPi * i / 2048.0;
        if (polar_radius(phi) <= 0.0)
          throw std::invalid_argument("perturbed circle radius must stay positive");
        CurveSample s = sample(phi);
        if (s.speed <= 0.0) throw std::invalid_argument("degenerate parametrization");
      }
      return;
    }
    case Kind::GraphPatch:
      if (half_width_ <= 0.0) throw std::invalid_argument("patch half width must be > 0");
      return;
  }
}

double BoundaryCurve::polar_radius(double phi) const {
  double r = 1.0;
  for (std::size_t m = 1; m <= pert_.size(); ++m)
    r += pert_[m - 1] * std::cos(m * (phi + kPi / 2.0));
  return radius_ * r;
}

double BoundaryCurve::polar_radius_d1(double phi) const {
  double r = 0.0;
  for (std::size_t m = 1; m <= pert_.size(); ++m)
    r -= pert_[m - 1] * m * std::sin(m * (phi + kPi / 2.0));
  return radius_ * r;
}

double BoundaryCurve::polar_radius_d2(double phi) const {
  double r = 0.0;
  for (std::size_t m = 1; m <= pert_.size(); ++m)
    r -= pert_[m - 1] * m * m * std::cos(m * (phi + kPi / 2.0));
  return radius_ * r;
}

CurveSample BoundaryCurve::sample(double phi) const {
  CurveSample s;
  switch (kind_) {
    case Kind::Circle: {
      double cp = std::cos(phi), sp = std::sin(phi);
      s.q = center_ + radius_ * Vec2{cp, sp};
      s.dq = radius_ * Vec2{-sp, cp};
      s.d2q = radius_ * Vec2{-cp, -sp};
      break;
    }
    case Kind::Ellipse: {
      double cp = std::cos(phi), sp = std::sin(phi);
      s.q = center_ + Vec2{a_ * cp, b_ * sp};
      s.dq = {-a_ * sp, b_ * cp};
      s.d2q = {-a_ * cp, -b_ * sp};
      break;
    }
    case Kind::PerturbedCircle: {
      double cp = std::cos(phi), sp = std::sin(phi);
      double r = polar_radius(phi), r1 = polar_radius_d1(phi), r2 = polar_radius_d2(phi);
      s.q = center_ + r * Vec2{cp, sp};
      s.dq = r1 * Vec2{cp, sp} + r * Vec2{-sp, cp};
      s.d2q = (r2 - r) * Vec2{cp, sp} + 2.0 * r1 * Vec2{-sp, cp};
      break;
    }
    case Kind::GraphPatch: {
      double f = germ_eval(germ_, phi);
      double f1 = germ_eval_d1(germ_, phi);
      double f2 = germ_eval_d2(germ_, phi);
      s.q = {phi, f};
      s.dq = {1.0, f1};
      s.d2q = {0.0, f2};
      break;
    }
  }
  s.speed = norm(s.dq);
  Vec2 t = {s.dq.x / s.speed, s.dq.y / s.speed};
  s.normal = {t.y, -t.x};
  s.curvature = cross(s.dq, s.d2q) / (s.speed * s.speed * s.speed);
  return s;
}

Vec2 BoundaryCurve::tangent(double phi) const {
  CurveSample s = sample(phi);
  return {s.dq.x / s.speed, s.dq.y / s.speed};
}

bool BoundaryCurve::contains(Vec2 p) const {
  switch (kind_) {
    case Kind::Circle:
      return norm(p - center_) < radius_;
    case Kind::Ellipse: {
      double u = (p.x - center_.x) / a_, v = (p.y - center_.y) / b_;
      return u * u + v * v < 1.0;
    }
    case Kind::PerturbedCircle: {
      Vec2 d = p - center_;
      double rho = norm(d);
      if (rho == 0.0) return true;
      return rho < polar_radius(std::atan2(d.y, d.x));
    }
    case Kind::GraphPatch:
      return std::abs(p.x) < half_width_ && p.y > germ_eval(germ_, p.x);
  }
  return false;
}

std::optional<double> BoundaryCurve::ray_hit(Vec2 origin, Vec2 dir, double tmin) const {
  switch (kind_) {
    case Kind::Circle:
    case Kind::Ellipse: {
      double ax = kind_ == Kind::Circle ? radius_ : a_;
      double ay = kind_ == Kind::Circle ? radius_ : b_;
      Vec2 o = {(origin.x - center_.x) / ax, (origin.y - center_.y) / ay};
      Vec2 d = {dir.x / ax, dir.y / ay};
      double A = dot(d, d), B = dot(o, d), C = dot(o, o) - 1.0;
      double disc = B * B - A * C;
      if (disc < 0.0) return std::nullopt;
      double sq = std::sqrt(disc);
      double t1 = (-B - sq) / A, t2 = (-B + sq) / A;
      if (t1 > tmin) return t1;
      if (t2 > tmin) return t2;
      return std::nullopt;
    }
    case Kind::PerturbedCircle: {
      double rmax = 0.0;
      for (int i = 0; i < 512; ++i) rmax = std::max(rmax, polar_radius(2.0 * kPi * i / 512.0));
      double speed = norm(dir);
      double tmax = (norm(origin - center_) + rmax + 1.0) / speed;
      auto outside = [&](double t) {
        Vec2 d = origin + t * dir - center_;
        double rho = norm(d);
        double ang = rho == 0.0 ? 0.0 : std::atan2(d.y, d.x);
        return rho - polar_radius(ang);
      };
      double step = radius_ / (64.0 * speed);
      double t0 = tmin, f0 = outside(t0);
      for (double t = tmin + step; t <= tmax; t += step) {
        double f1 = outside(t);
        if (f0 > 0.0 && f1 <= 0.0) {
          double lo = t0, hi = t;
          for (int i = 0; i < 100; ++i) {
            double mid = 0.5 * (lo + hi);
            (outside(mid) > 0.0 ? lo : hi) = mid;
          }
          return 0.5 * (lo + hi);
        }
        t0 = t;
        f0 = f1;
      }
      return std::nullopt;
    }
    case Kind::GraphPatch: {
      // Boundary point: y = f(x), |x| <= w. Bracket the sign change of
      // f(x(t)) - y(t) over steps where the x-window applies.
      auto g = [&](double t) {
        Vec2 p = origin + t * dir;
        return germ_eval(germ_, p.x) - p.y;
      };
      auto in_window = [&](double t) {
        return std::abs((origin + t * dir).x) <= half_width_;
      };
      double speed = norm(dir);
      double reach = (norm(origin) + half_width_ + std::abs(germ_.L) + 10.0) / speed;
      double step = half_width_ / (64.0 * speed);
      double t0 = tmin;
      bool have0 = in_window(t0);
      double f0 = have0 ? g(t0) : 0.0;
      for (double t = tmin + step; t <= reach; t += step) {
        bool have1 = in_window(t);
        double f1 = have1 ? g(t) : 0.0;
        if (have0 && have1 && f0 > 0.0 && f1 <= 0.0) {
          double lo = t0, hi = t;
          for (int i = 0; i < 100; ++i) {
            double mid = 0.5 * (lo + hi);
            (g(mid) > 0.0 ? lo : hi) = mid;
          }
          double th = 0.5 * (lo + hi);
          if (in_window(th)) return th;
        }
        t0 = t;
        have0 = have1;
        f0 = f1;
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

double BoundaryCurve::phi_of_point(Vec2 p) const {
  switch (kind_) {
    case Kind::Circle: {
      Vec2 d = p - center_;
      return std::atan2(d.y, d.x);
    }
    case Kind::Ellipse: {
      return std::atan2((p.y - center_.y) / b_, (p.x - center_.x) / a_);
    }
    case Kind::PerturbedCircle: {
      Vec2 d = p - center_;
      return std::atan2(d.y, d.x);
    }
    case Kind::GraphPatch:
      return p.x;
  }
  return 0.0;
}

double BoundaryCurve::bottom_phi() const {
  return closed() ? 3.0 * kPi / 2.0 : 0.0;
}

ObstaclePair::ObstaclePair(BoundaryCurve upper, double gap) : upper_(std::move(upper)), L_(gap) {
  if (L_ <= 0.0) throw ComponentsIntersect("gap must be > 0");
  CurveSample end = upper_.sample(upper_.bottom_phi());
  if (std::abs(end.q.x) > 1e-9 || std::abs(end.q.y - L_ / 2.0) > 1e-9)
    throw std::invalid_argument("upper endpoint must sit at (0, L/2)");
  if (std::abs(end.normal.x) > 1e-9 || std::abs(end.normal.y + 1.0) > 1e-9)
    throw NoGraphChart("endpoint normal must be vertical");
  // Mirror symmetry makes disjointness equivalent to the upper component
  // staying strictly above y = 0.
  if (upper_.closed()) {
    for (int i = 0; i < 4096; ++i) {
      double phi = 2.0 * kPi * i / 4096.0;
      if (upper_.point(phi).y <= 0.0)
        throw ComponentsIntersect("upper component reaches the symmetry axis");
    }
  } else {
    for (int i = 0; i <= 4096; ++i) {
      double x = -upper_.half_width() + 2.0 * upper_.half_width() * i / 4096.0;
      if (germ_eval(upper_.patch_germ(), x) <= 0.0)
        throw ComponentsIntersect("patch reaches the symmetry axis");
    }
  }
}

CurveSample ObstaclePair::sample(Component comp, double phi) const {
  CurveSample s = upper_.sample(phi);
  if (comp == Component::Lower) {
    s.q = mirror_x(s.q);
    s.dq = mirror_x(s.dq);
    s.d2q = mirror_x(s.d2q);
    s.normal = mirror_x(s.normal);
    // speed and convexity-signed curvature are mirror invariants
  }
  return s;
}

bool ObstaclePair::contains(Component comp, Vec2 p) const {
  return upper_.contains(comp == Component::Upper ? p : mirror_x(p));
}

std::optional<ObstaclePair::RayHit> ObstaclePair::first_hit(Vec2 origin, Vec2 dir,
                                                            double tmin) const {
  std::optional<RayHit> best;
  auto consider = [&](Component comp, std::optional<double> t, Vec2 o, Vec2 d) {
    if (!t) return;
    if (!best || *t < best->t) {
      Vec2 frame_q = o + *t * d;  // point in the upper curve's frame
      double phi = upper_.phi_of_point(frame_q);
      Vec2 world_q = comp == Component::Upper ? frame_q : mirror_x(frame_q);
      best = RayHit{comp, phi, *t, world_q};
    }
  };
  consider(Component::Upper, upper_.ray_hit(origin, dir, tmin), origin, dir);
  consider(Component::Lower, upper_.ray_hit(mirror_x(origin), mirror_x(dir), tmin),
           mirror_x(origin), mirror_x(dir));
  return best;
}

double ObstaclePair::arclength_from_endpoint(Component comp, double phi) const {
  (void)comp;  // both components share the upper parametrization's speed
  double phi0 = upper_.bottom_phi();
  return integrate([&](double t) { return upper_.sample(t).speed; }, phi0, phi);
}

double ObstaclePair::phi_at_arclength(Component comp, double s) const {
  (void)comp;
  double phi = upper_.bottom_phi();
  for (int i = 0; i < 50; ++i) {
    double g = arclength_from_endpoint(Component::Upper, phi) - s;
    double step = g / upper_.sample(phi).speed;
    phi -= step;
    if (std::abs(step) < 1e-14) break;
  }
  return phi;
}

ObstaclePair make_two_disk(double radius, double gap) {
  return ObstaclePair(BoundaryCurve::circle({0.0, gap / 2.0 + radius}, radius), gap);
}

ObstaclePair make_two_ellipse(double semi_axis_x, double semi_axis_y, double gap) {
  return ObstaclePair(
      BoundaryCurve::ellipse({0.0, gap / 2.0 + semi_axis_y}, semi_axis_x, semi_axis_y), gap);
}

ObstaclePair make_perturbed_pair(double radius, double gap, std::vector<double> cosine_coeffs) {
  double r_bottom = 1.0;
  for (double a : cosine_coeffs) r_bottom += a;
  r_bottom *= radius;
  return ObstaclePair(
      BoundaryCurve::perturbed_circle({0.0, gap / 2.0 + r_bottom}, radius,
                                      std::move(cosine_coeffs)),
      gap);
}

ObstaclePair make_germ_pair(const GraphGerm& germ, double half_width) {
  return ObstaclePair(BoundaryCurve::graph_patch(germ, half_width), germ.L);
}

namespace {

// phi-series of (x - x(phi0), y) around phi0 up to `order`, per family.
void parametric_series(const BoundaryCurve& curve, double phi0, int order, PowerSeries& xs,
                       PowerSeries& ys) {
  PowerSeries cosw = PowerSeries::cosine(1.0, order);
  PowerSeries sinw = PowerSeries::sine(1.0, order);
  switch (curve.kind()) {
    case BoundaryCurve::Kind::Circle:
    case BoundaryCurve::Kind::Ellipse: {
      double ax = curve.semi_axis_x(), ay = curve.semi_axis_y();
      if (curve.kind() == BoundaryCurve::Kind::Circle) ax = ay = curve.base_radius();
      double c0 = std::cos(phi0), s0 = std::sin(phi0);
      // x(phi0+psi) - x(phi0) = ax [cos(phi0)(cos psi - 1) - sin(phi0) sin psi]
      PowerSeries cm1 = cosw - PowerSeries::constant(1.0, order);
      xs = ax * (c0 * cm1 - s0 * sinw);
      ys = ay * (s0 * cm1 + c0 * sinw);
      ys.at(0) = curve.point(phi0).y;
      break;
    }
    case BoundaryCurve::Kind::PerturbedCircle: {
      // R(phi0+psi) = radius (1 + sum_m a_m [cos(theta_m) cos(m psi)
      //                                    - sin(theta_m) sin(m psi)]),
      // theta_m = m (phi0 + pi/2); then rotate by (cos, sin)(phi0 + psi).
      const auto& a = curve.cosine_coeffs();
      PowerSeries R = PowerSeries::constant(1.0, order);
      for (std::size_t m = 1; m <= a.size(); ++m) {
        double theta = m * (phi0 + kPi / 2.0);
        R = R + a[m - 1] * (std::cos(theta) * PowerSeries::cosine(double(m), order) -
                            std::sin(theta) * PowerSeries::sine(double(m), order));
      }
      R = curve.base_radius() * R;
      double c0 = std::cos(phi0), s0 = std::sin(phi0);
      PowerSeries cosr = c0 * cosw - s0 * sinw;  // cos(phi0 + psi)
      PowerSeries sinr = s0 * cosw + c0 * sinw;  // sin(phi0 + psi)
      xs = R * cosr;
      xs.at(0) = 0.0;  // subtract x(phi0) exactly
      ys = R * sinr;
      ys.at(0) = curve.point(phi0).y;
      break;
    }
    case BoundaryCurve::Kind::GraphPatch: {
      xs = PowerSeries::identity(order);
      const GraphGerm& g = curve.patch_germ();
      ys = PowerSeries(order);
      // Taylor shift of the patch polynomial to x = phi0.
      std::vector<double> poly(std::max(g.max_order(), 0) + 1, 0.0);
      poly[0] = g.L / 2.0;
      for (const auto& [n, c] : g.coeffs)
        if (n < static_cast<int>(poly.size())) poly[n] = c / factorial(n);
      int np = static_cast<int>(poly.size()) - 1;
      for (int k = 0; k <= std::min(order, np); ++k) {
        // d^k poly / dx^k at phi0, divided by k!
        double v = 0.0;
        for (int n = np; n >= k; --n) {
          double binom = 1.0;
          for (int j = 0; j < k; ++j) binom *= (n - j);
          v += poly[n] * binom * std::pow(phi0, n - k);
        }
        ys.at(k) = v / factorial(k);
      }
      break;
    }
  }
}

}  // namespace

GraphGerm germ_from_curve(const BoundaryCurve& curve, double L, int J) {
  return germ_from_curve_at(curve, L, J, curve.bottom_phi());
}

GraphGerm germ_from_curve_at(const BoundaryCurve& curve, double L, int J, double endpoint_phi) {
  if (J < 1) throw std::invalid_argument("J must be >= 1");
  int order = 2 * J;
  PowerSeries xs, ys;
  parametric_series(curve, endpoint_phi, order, xs, ys);
  double speed_scale = std::max(1.0, std::abs(xs[1]));
  if (std::abs(ys[1]) > 1e-9 * speed_scale)
    throw NoGraphChart("tangent at the endpoint is not horizontal");
  if (std::abs(xs[1]) < 1e-12)
    throw NoGraphChart("parametrization does not move in x at the endpoint");
  PowerSeries psi_of_x = xs.revert();
  PowerSeries f = ys.compose(psi_of_x);
  if (std::abs(f[0] - L / 2.0) > 1e-8 * std::max(1.0, L))
    throw std::invalid_argument("endpoint height inconsistent with L/2");
  GraphGerm g;
  g.L = L;
  for (int n = 2; n <= order; ++n) g.coeffs[n] = f[n] * factorial(n);
  return g;
}

}  // namespace specbill
