#include "specbill/bem.hpp"

#include <algorithm>
#include <cmath>

#include "specbill/threads.hpp"

namespace specbill {
namespace {

constexpr double kPi = 3.14159265358979323846264338;
const Complex kI(0.0, 1.0);

double wrap_phase(double x) { return std::remainder(x, 2.0 * kPi); }

struct Node {
  Vec2 q;
  double speed = 0.0;
  Vec2 normal;
  double curvature = 0.0;
};

std::vector<std::vector<Node>> scene_nodes(const BoundaryScene& scene, int n) {
  std::vector<std::vector<Node>> nodes(scene.components());
  for (int c = 0; c < scene.components(); ++c) {
    nodes[c].resize(n);
    for (int i = 0; i < n; ++i) {
      CurveSample s = scene.sample(c, 2.0 * kPi * i / n);
      nodes[c][i] = {s.q, s.speed, s.normal, s.curvature};
    }
  }
  return nodes;
}

// N(x, y) = (i kk / 2) H1(kk r) (nu(y).(y - x)/r) |q'(y)|, the double-layer
// density kernel scaled so the discretized operator is I + N.
Complex full_kernel(Complex kk, const Node& x, const Node& y) {
  const Vec2 d = y.q - x.q;
  const double r = norm(d);
  return kI * kk * 0.5 * hankel1(1, kk * r) * (dot(y.normal, d) / r) * y.speed;
}

// Coefficient of log(4 sin^2((t-s)/2)) in N on one component.
Complex log_part(Complex kk, const Node& x, const Node& y) {
  const Vec2 d = y.q - x.q;
  const double r = norm(d);
  return -(kk / (2.0 * kPi)) * bessel_j1(kk * r) * (dot(y.normal, d) / r) * y.speed;
}

// Kress weights R[d] for the log factor at node distance d on an n-grid.
std::vector<double> kress_weights(int n) {
  std::vector<double> R(n);
  for (int d = 0; d < n; ++d) {
    const double delta = 2.0 * kPi * d / n;
    double s = 0.0;
    for (int m = 1; m < n / 2; ++m) s += std::cos(m * delta) / m;
    R[d] = -(4.0 * kPi / n) * s - (4.0 * kPi / (n * n)) * std::cos(0.5 * n * delta);
  }
  return R;
}

Complex principal_log_det(const Eigen::MatrixXcd& nmat) {
  const int dim = int(nmat.rows());
  if (dim == 0) return Complex(0.0, 0.0);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(dim, dim) + nmat;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  Complex ld(0.0, 0.0);
  for (int i = 0; i < dim; ++i) ld += std::log(lu.matrixLU()(i, i));
  if (lu.permutationP().determinant() < 0) ld += Complex(0.0, kPi);
  return Complex(ld.real(), wrap_phase(ld.imag()));
}

}  // namespace

BoundaryScene BoundaryScene::free_space() { return BoundaryScene(); }

BoundaryScene BoundaryScene::single(BoundaryCurve curve) {
  if (!curve.closed())
    throw std::invalid_argument("BoundaryScene::single requires a closed curve");
  BoundaryScene s;
  s.components_ = 1;
  s.curve_ = std::move(curve);
  return s;
}

BoundaryScene BoundaryScene::mirror_pair(ObstaclePair pair) {
  if (!pair.upper().closed())
    throw std::invalid_argument("BoundaryScene::mirror_pair requires closed components");
  BoundaryScene s;
  s.components_ = 2;
  s.pair_ = std::move(pair);
  return s;
}

CurveSample BoundaryScene::sample(int component, double phi) const {
  if (component < 0 || component >= components_)
    throw std::invalid_argument("BoundaryScene::sample: component out of range");
  if (curve_) return curve_->sample(phi);
  return pair_->sample(component == 0 ? Component::Upper : Component::Lower, phi);
}

std::optional<double> BoundaryScene::gap_scale() const {
  if (pair_) return pair_->gap();
  return std::nullopt;
}

Complex kernel(const BoundaryScene& scene, ComplexWavenumber kw, int comp_x,
               double phi_x, int comp_y, double phi_y) {
  const CurveSample sx = scene.sample(comp_x, phi_x);
  const CurveSample sy = scene.sample(comp_y, phi_y);
  const Vec2 d = sy.q - sx.q;
  const double r = norm(d);
  if (r < 1e-13 * (1.0 + norm(sx.q)))
    throw DiagonalSingularity("kernel at coincident points; use kernel_diagonal");
  const Complex kk = kw.value();
  return -kI * kk * 0.25 * hankel1(1, kk * r) * (dot(sy.normal, d) / r) * sy.speed;
}

Complex kernel_diagonal(const BoundaryScene& scene, int comp, double phi) {
  const CurveSample s = scene.sample(comp, phi);
  return Complex(-s.curvature * s.speed / (4.0 * kPi), 0.0);
}

NystromOperator assemble(const BoundaryScene& scene, ComplexWavenumber kw, int n) {
  if (n < 16 || n % 2 != 0)
    throw std::invalid_argument("assemble: n must be even and >= 16");
  NystromOperator op;
  op.n = n;
  op.components = scene.components();
  op.wavenumber = kw;
  const int dim = op.components * n;
  op.matrix = Eigen::MatrixXcd::Zero(dim, dim);
  if (dim == 0) return op;

  const Complex kk = kw.value();
  const auto nodes = scene_nodes(scene, n);
  const auto R = kress_weights(n);
  const double h = 2.0 * kPi / n;

  // Same-component block: split off the periodic log singularity.
  // Mirror symmetry makes the lower-lower block equal the upper-upper one
  // and the two cross blocks equal, so only component 0 rows are computed.
  Eigen::MatrixXcd self(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        self(i, j) = nodes[0][i].curvature * nodes[0][i].speed / n;
        continue;
      }
      const Complex nfull = full_kernel(kk, nodes[0][i], nodes[0][j]);
      const Complex n1 = log_part(kk, nodes[0][i], nodes[0][j]);
      const double sn = 2.0 * std::sin(0.5 * h * (i - j));
      const Complex n2 = nfull - n1 * std::log(sn * sn);
      self(i, j) = R[std::abs(i - j)] * n1 + h * n2;
    }
  }
  op.matrix.block(0, 0, n, n) = self;

  if (op.components == 2) {
    Eigen::MatrixXcd cross(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        cross(i, j) = h * full_kernel(kk, nodes[0][i], nodes[1][j]);
    op.matrix.block(0, n, n, n) = cross;
    op.matrix.block(n, 0, n, n) = cross;
    op.matrix.block(n, n, n, n) = self;
  }

  const double peak = op.matrix.cwiseAbs().maxCoeff();
  if (!(peak < 1e12))
    throw NoConvergence("assemble: operator entries overflow the conditioning guard");
  return op;
}

Complex log_det(const NystromOperator& op) { return principal_log_det(op.matrix); }

namespace {

// Branch-continuous phase step between two path samples; bisects segments
// whose principal phase step is close to the wrap limit.
double phase_step(const BoundaryScene& scene, int n, ComplexWavenumber a, Complex lda,
                  ComplexWavenumber b, Complex ldb, int depth) {
  const double d = wrap_phase(ldb.imag() - lda.imag());
  if (std::abs(d) <= 0.99 * kPi) return d;
  if (depth == 0)
    throw PhaseJump("log_det_path: unresolved phase jump after refinement");
  const ComplexWavenumber mid{0.5 * (a.k + b.k), 0.5 * (a.tau + b.tau)};
  const Complex ldm = log_det(assemble(scene, mid, n));
  return phase_step(scene, n, a, lda, mid, ldm, depth - 1) +
         phase_step(scene, n, mid, ldm, b, ldb, depth - 1);
}

}  // namespace

std::vector<Complex> log_det_path(const BoundaryScene& scene,
                                  const std::vector<ComplexWavenumber>& path, int n) {
  std::vector<Complex> out(path.size());
  if (path.empty()) return out;
  std::vector<Complex> principal(path.size());
  parallel_for(path.size(), [&](std::size_t i) {
    principal[i] = log_det(assemble(scene, path[i], n));
  });
  out[0] = principal[0];
  double im = principal[0].imag();
  for (std::size_t i = 1; i < path.size(); ++i) {
    im += phase_step(scene, n, path[i - 1], principal[i - 1], path[i], principal[i], 12);
    out[i] = Complex(principal[i].real(), im);
  }
  return out;
}

Complex log_det_derivative(const BoundaryScene& scene, ComplexWavenumber kw, int n,
                           double dk) {
  const Complex lp = log_det(assemble(scene, {kw.k + dk, kw.tau}, n));
  const Complex lm = log_det(assemble(scene, {kw.k - dk, kw.tau}, n));
  const double dre = lp.real() - lm.real();
  const double dim = wrap_phase(lp.imag() - lm.imag());
  return Complex(dre, dim) / (2.0 * dk);
}

Complex trace_derivative(const BoundaryScene& scene, ComplexWavenumber kw, int n,
                         double dk) {
  const NystromOperator mid = assemble(scene, kw, n);
  const NystromOperator plus = assemble(scene, {kw.k + dk, kw.tau}, n);
  const NystromOperator minus = assemble(scene, {kw.k - dk, kw.tau}, n);
  const int dim = int(mid.matrix.rows());
  if (dim == 0) return Complex(0.0, 0.0);
  const Eigen::MatrixXcd dn = (plus.matrix - minus.matrix) / (2.0 * dk);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(dim, dim) + mid.matrix;
  return Eigen::PartialPivLU<Eigen::MatrixXcd>(a).solve(dn).trace();
}

Complex trace_power(const NystromOperator& op, int power) {
  if (power < 1) throw std::invalid_argument("trace_power: power must be >= 1");
  Eigen::MatrixXcd acc = op.matrix;
  for (int p = 1; p < power; ++p) acc = acc * op.matrix;
  return acc.trace();
}

namespace {

Complex newton_derivative(const BoundaryScene& scene, int n, Complex z, double h) {
  const Complex lp = log_det(assemble(scene, {z.real() + h, z.imag()}, n));
  const Complex lm = log_det(assemble(scene, {z.real() - h, z.imag()}, n));
  const double dre = lp.real() - lm.real();
  const double dim = wrap_phase(lp.imag() - lm.imag());
  return Complex(dre, dim) / (2.0 * h);
}

}  // namespace

std::vector<ResonanceCandidate> resonance_scan(const BoundaryScene& scene, double k0,
                                               double k1, double tau0, double tau1,
                                               const ResonanceScanOptions& opt) {
  if (!(k0 < k1) || !(tau0 < tau1))
    throw std::invalid_argument("resonance_scan: empty rectangle");
  if (std::min(std::abs(tau0), std::abs(tau1)) > 2.0 || std::max(std::abs(tau0), std::abs(tau1)) > 2.0)
    throw std::invalid_argument("resonance_scan: |tau| > 2 exceeds the conditioning guard");
  const int gr = std::max(opt.grid_re, 4);
  const int gi = std::max(opt.grid_im, 4);
  const double dre = (k1 - k0) / gr;
  const double dim = (tau1 - tau0) / gi;

  // Coarse |det| landscape.
  Eigen::MatrixXd mag(gr + 1, gi + 1);
  std::vector<std::pair<int, int>> idx;
  for (int i = 0; i <= gr; ++i)
    for (int j = 0; j <= gi; ++j) idx.emplace_back(i, j);
  parallel_for(idx.size(), [&](std::size_t t) {
    const auto [i, j] = idx[t];
    const ComplexWavenumber kw{k0 + i * dre, tau0 + j * dim};
    mag(i, j) = log_det(assemble(scene, kw, opt.n)).real();
  });

  // Re log|det| is harmonic off the zero set, so its five-point anomaly
  // vanishes on the smooth sub-axis envelope and spikes negative within a
  // cell of a zero. Raw grid minima would not do: the envelope gradient in
  // Im k swamps the dip of a zero once the cell is coarse.
  Eigen::MatrixXd resid = Eigen::MatrixXd::Zero(gr + 1, gi + 1);
  for (int i = 1; i < gr; ++i)
    for (int j = 1; j < gi; ++j)
      resid(i, j) = mag(i, j) - 0.25 * (mag(i - 1, j) + mag(i + 1, j) +
                                        mag(i, j - 1) + mag(i, j + 1));
  std::vector<Complex> seeds;
  for (int i = 1; i < gr; ++i) {
    for (int j = 1; j < gi; ++j) {
      if (resid(i, j) > -0.2) continue;
      bool minimal = true;
      for (int a = -1; a <= 1 && minimal; ++a)
        for (int b = -1; b <= 1 && minimal; ++b) {
          if (a == 0 && b == 0) continue;
          const int ii = i + a, jj = j + b;
          if (ii < 1 || ii > gr - 1 || jj < 1 || jj > gi - 1) continue;
          if (resid(ii, jj) < resid(i, j)) minimal = false;
        }
      if (minimal) seeds.emplace_back(k0 + i * dre, tau0 + j * dim);
    }
  }

  std::vector<ResonanceCandidate> out;
  for (Complex z : seeds) {
    // Three-point pole fit. With u = (log det)' = 1/(z - z0) + b the constant
    // background cancels from the probe difference u(z) - u(z + d), leaving
    // the quadratic s^2 + d s - d / du = 0 for s = z - z0. A plain Newton
    // step -1/u contracts only within ~1/|b| of the zero, and below the axis
    // the smooth phase term makes |b| ~ 50 for a two-component scene at
    // k ~ 10, much less than one coarse cell. One probe pair leaves a root
    // ambiguity (the pole as seen from either probe); the pair at imaginary
    // offset shares only the true root, so the closest match across the two
    // root sets picks it.
    double h = 1e-5;
    double last_step = dre;
    bool converged = false;
    const double clamp = 1.5 * std::max(dre, dim);
    for (int it = 0; it < opt.newton_max; ++it) {
      const double delta =
          std::max(1e-7, std::min(0.25 * std::min(dre, dim), 0.5 * last_step));
      Complex u1, u2, u3;
      try {
        u1 = newton_derivative(scene, opt.n, z, h);
        u2 = newton_derivative(scene, opt.n, z + Complex(delta, 0.0), h);
        u3 = newton_derivative(scene, opt.n, z + Complex(0.0, delta), h);
      } catch (const Error&) {
        break;
      }
      const Complex d12 = u1 - u2, d13 = u1 - u3;
      if (std::abs(d12) < 1e-14 || std::abs(d13) < 1e-14) break;
      const auto roots = [](Complex d, Complex du) {
        const Complex disc = std::sqrt(d * d + 4.0 * d / du);
        return std::pair{0.5 * (-d + disc), 0.5 * (-d - disc)};
      };
      const auto [a1, a2] = roots(Complex(delta, 0.0), d12);
      const auto [b1, b2] = roots(Complex(0.0, delta), d13);
      Complex s = a1;
      double best = std::abs(a1 - b1);
      for (Complex x : {a1, a2})
        for (Complex y : {b1, b2})
          if (std::abs(x - y) < best) {
            best = std::abs(x - y);
            s = x;
          }
      if (std::abs(s) > clamp) s *= clamp / std::abs(s);
      z -= s;
      last_step = std::abs(s);
      h = std::max(1e-9, std::min(1e-5, 0.1 * last_step));
      if (z.real() < k0 - 0.2 * (k1 - k0) || z.real() > k1 + 0.2 * (k1 - k0) ||
          z.imag() < tau0 - 0.2 * (tau1 - tau0) || z.imag() > tau1 + 0.2 * (tau1 - tau0))
        break;
      if (last_step < opt.newton_tol) {
        converged = true;
        break;
      }
    }
    if (!converged) continue;
    if (z.real() < k0 || z.real() > k1 || z.imag() < tau0 || z.imag() > tau1) continue;
    // Resonance mode: a rectangle in the closed lower half-plane drops the
    // axis zeros (interior eigenvalues of the components, not poles).
    if (tau1 <= 0.0 && z.imag() > -opt.axis_tol) continue;

    ResonanceCandidate cand;
    cand.k = z;
    cand.converged = true;
    cand.abs_det = std::exp(log_det(assemble(scene, {z.real(), z.imag()}, opt.n)).real());

    // Phase winding of det on a small circle around the refined point.
    const double rc = std::max(2e-3, 5.0 * last_step);
    double total = 0.0;
    double prev = 0.0;
    for (int p = 0; p <= opt.contour_points; ++p) {
      const double ang = 2.0 * kPi * p / opt.contour_points;
      const Complex w = z + rc * std::exp(kI * ang);
      const double ph = log_det(assemble(scene, {w.real(), w.imag()}, opt.n)).imag();
      if (p > 0) total += wrap_phase(ph - prev);
      prev = ph;
    }
    cand.winding = int(std::lround(total / (2.0 * kPi)));
    out.push_back(cand);
  }

  std::sort(out.begin(), out.end(), [](const ResonanceCandidate& a,
                                       const ResonanceCandidate& b) {
    return a.k.real() < b.k.real();
  });
  std::vector<ResonanceCandidate> dedup;
  for (const auto& c : out) {
    if (!dedup.empty() && std::abs(c.k - dedup.back().k) < 100.0 * opt.newton_tol) {
      if (c.abs_det < dedup.back().abs_det) dedup.back() = c;
    } else {
      dedup.push_back(c);
    }
  }
  return dedup;
}

PoissonResult poisson_spectrum(const BoundaryScene& scene, double k0, double k1,
                               const PoissonOptions& opt) {
  if (!(k1 > k0)) throw std::invalid_argument("poisson_spectrum: need k1 > k0");
  if (!(opt.tau > 0.0)) throw std::invalid_argument("poisson_spectrum: need tau > 0");
  double gap = opt.min_gap;
  if (gap <= 0.0) gap = scene.gap_scale().value_or(0.0);
  if (gap > 0.0 && 2.0 * kPi / (k1 - k0) > gap)
    throw WindowTooNarrow("poisson_spectrum: window resolves no length gap");

  // Default sample density dk = 0.05. Content from poles above the line
  // (decaying like e^{-tau |t|} on the negative-t side) aliases back into the
  // reported half-spectrum at 2 pi / dk - t, so dk must keep the alias period
  // long enough that the wrapped copies arrive dead.
  const int m = opt.samples > 0 ? opt.samples : int(std::lround((k1 - k0) / 0.05)) + 1;
  if (m < 16) throw std::invalid_argument("poisson_spectrum: too few samples");
  const double dk = (k1 - k0) / (m - 1);

  // Branch-safe derivative of log det along the line Im k = -tau, between the
  // real axis and the resonance chain. In the e^{-ikt} transform a pole below
  // the sample line lands at its positive orbit time t while a pole above it
  // lands at negative t, so det zeros on the real axis (interior eigenvalues
  // of the obstacle components) drop out of the reported half-spectrum and
  // only the exterior chain remains.
  const double hd = 5e-5;
  std::vector<Complex> u(m);
  parallel_for(std::size_t(m), [&](std::size_t i) {
    const double k = k0 + double(i) * dk;
    u[i] = log_det_derivative(scene, {k, -opt.tau}, opt.n, hd);
  });

  PoissonResult res;
  res.cell = 2.0 * kPi / (m * dk);
  const int jmax = m / 2;
  res.t.resize(jmax + 1);
  res.amplitude.resize(jmax + 1);
  for (int j = 0; j <= jmax; ++j) {
    res.t[j] = res.cell * j;
    Complex acc(0.0, 0.0);
    for (int i = 0; i < m; ++i) {
      const double w = 0.5 * (1.0 - std::cos(2.0 * kPi * i / (m - 1)));
      acc += w * u[i] * std::exp(-kI * (2.0 * kPi * double(i) * double(j) / double(m)));
    }
    res.amplitude[j] = std::abs(dk * acc);
  }

  // Median level over the searchable range sets the peak floor.
  std::vector<double> inside;
  for (int j = 0; j <= jmax; ++j)
    if (res.t[j] >= opt.t_min) inside.push_back(res.amplitude[j]);
  if (!inside.empty()) {
    std::nth_element(inside.begin(), inside.begin() + inside.size() / 2, inside.end());
    res.noise_floor = opt.peak_factor * inside[inside.size() / 2];
  }
  for (int j = 1; j < jmax; ++j) {
    if (res.t[j] < opt.t_min) continue;
    if (res.amplitude[j] > res.amplitude[j - 1] &&
        res.amplitude[j] >= res.amplitude[j + 1] &&
        res.amplitude[j] > res.noise_floor)
      res.peaks.push_back({res.t[j], res.amplitude[j]});
  }
  std::sort(res.peaks.begin(), res.peaks.end(),
            [](const PoissonPeak& a, const PoissonPeak& b) {
              return a.amplitude > b.amplitude;
            });
  return res;
}

}  // namespace specbill
