#include "specbill/billiard.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace specbill {

namespace {

constexpr double kPi = std::numbers::pi;

struct Vertex {
  CurveSample s;
};

std::vector<Vertex> sample_vertices(const ObstaclePair& pair, const SignPattern& pattern,
                                    const std::vector<double>& angles) {
  if (pattern.size() < 2) throw std::invalid_argument("pattern needs M >= 2");
  if (pattern.size() != angles.size())
    throw std::invalid_argument("pattern and angle counts differ");
  std::vector<Vertex> v(pattern.size());
  for (std::size_t j = 0; j < pattern.size(); ++j) v[j].s = pair.sample(pattern[j], angles[j]);
  return v;
}

void check_diagonal(const SignPattern& pattern, const std::vector<Vertex>& v) {
  std::size_t m = v.size();
  for (std::size_t j = 0; j < m; ++j) {
    std::size_t k = (j + 1) % m;
    if (pattern[j] == pattern[k] && norm(v[k].s.q - v[j].s.q) < 1e-12)
      throw DiagonalSingularity("consecutive same-component points coincide");
  }
}

double wrap_angle(double phi) {
  double w = std::fmod(phi, 2.0 * kPi);
  if (w < 0.0) w += 2.0 * kPi;
  return w;
}

// Canonical representative: smallest lexicographic rotation of the
// (pattern, quantized angles) word, with the reversed orbit identified.
void canonicalize(const ObstaclePair& pair, OrbitCandidate& orbit) {
  std::size_t m = orbit.pattern.size();
  bool periodic = pair.upper().closed();
  auto quantize = [](double a) { return std::llround(a * 1e8); };

  auto word = [&](const SignPattern& p, const std::vector<double>& a) {
    std::vector<long long> w;
    w.reserve(2 * m);
    for (std::size_t j = 0; j < m; ++j) {
      w.push_back(p[j] == Component::Upper ? 0 : 1);
      w.push_back(quantize(a[j]));
    }
    return w;
  };

  SignPattern best_p = orbit.pattern;
  std::vector<double> best_a = orbit.angles;
  if (periodic)
    for (auto& a : best_a) a = wrap_angle(a);
  std::vector<long long> best_w = word(best_p, best_a);

  auto consider = [&](const SignPattern& p0, const std::vector<double>& a0) {
    for (std::size_t s = 0; s < m; ++s) {
      SignPattern p(m);
      std::vector<double> a(m);
      for (std::size_t j = 0; j < m; ++j) {
        p[j] = p0[(j + s) % m];
        a[j] = a0[(j + s) % m];
      }
      std::vector<long long> w = word(p, a);
      if (w < best_w) {
        best_w = std::move(w);
        best_p = std::move(p);
        best_a = std::move(a);
      }
    }
  };

  SignPattern fwd = orbit.pattern;
  std::vector<double> fa = orbit.angles;
  if (periodic)
    for (auto& a : fa) a = wrap_angle(a);
  consider(fwd, fa);
  SignPattern rev(fwd.rbegin(), fwd.rend());
  std::vector<double> ra(fa.rbegin(), fa.rend());
  consider(rev, ra);

  orbit.pattern = best_p;
  orbit.angles = best_a;
}

}  // namespace

double length(const ObstaclePair& pair, const SignPattern& pattern,
              const std::vector<double>& angles) {
  auto v = sample_vertices(pair, pattern, angles);
  check_diagonal(pattern, v);
  std::size_t m = v.size();
  double total = 0.0;
  for (std::size_t j = 0; j < m; ++j) total += norm(v[(j + 1) % m].s.q - v[j].s.q);
  return total;
}

std::vector<double> length_gradient(const ObstaclePair& pair, const SignPattern& pattern,
                                    const std::vector<double>& angles) {
  auto v = sample_vertices(pair, pattern, angles);
  check_diagonal(pattern, v);
  std::size_t m = v.size();
  std::vector<double> g(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    const Vec2& q = v[j].s.q;
    Vec2 u_in = normalized(q - v[(j + m - 1) % m].s.q);
    Vec2 u_out = normalized(v[(j + 1) % m].s.q - q);
    g[j] = dot(v[j].s.dq, u_in - u_out);
  }
  return g;
}

std::vector<double> snell_residuals(const ObstaclePair& pair, const SignPattern& pattern,
                                    const std::vector<double>& angles) {
  auto v = sample_vertices(pair, pattern, angles);
  check_diagonal(pattern, v);
  std::size_t m = v.size();
  std::vector<double> res(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    const Vec2& q = v[j].s.q;
    Vec2 u_in = normalized(q - v[(j + m - 1) % m].s.q);
    Vec2 u_out = normalized(v[(j + 1) % m].s.q - q);
    Vec2 t = {v[j].s.dq.x / v[j].s.speed, v[j].s.dq.y / v[j].s.speed};
    res[j] = std::abs(dot(u_in - u_out, t));
  }
  return res;
}

Eigen::MatrixXd length_hessian(const ObstaclePair& pair, const SignPattern& pattern,
                               const std::vector<double>& angles) {
  auto v = sample_vertices(pair, pattern, angles);
  check_diagonal(pattern, v);
  int m = static_cast<int>(v.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
  for (int a = 0; a < m; ++a) {
    int b = (a + 1) % m;
    Vec2 d = v[b].s.q - v[a].s.q;
    double l = norm(d);
    const Vec2 &da = v[a].s.dq, &d2a = v[a].s.d2q;
    const Vec2 &db = v[b].s.dq, &d2b = v[b].s.d2q;
    double daa = (dot(da, da) - dot(d, d2a)) / l - dot(d, da) * dot(d, da) / (l * l * l);
    double dbb = (dot(db, db) + dot(d, d2b)) / l - dot(d, db) * dot(d, db) / (l * l * l);
    double dab = -dot(da, db) / l + dot(d, da) * dot(d, db) / (l * l * l);
    h(a, a) += daa;
    h(b, b) += dbb;
    h(a, b) += dab;
    h(b, a) += dab;
  }
  return h;
}

double cartesian_length(const GraphGerm& upper, const GraphGerm& lower,
                        const SignPattern& pattern, const std::vector<double>& xs,
                        double chart_radius) {
  if (pattern.size() != xs.size()) throw std::invalid_argument("pattern and xs counts differ");
  if (pattern.size() < 2) throw std::invalid_argument("pattern needs M >= 2");
  std::size_t m = xs.size();
  std::vector<Vec2> pt(m);
  for (std::size_t p = 0; p < m; ++p) {
    if (std::abs(xs[p]) > chart_radius) throw OutOfChart("abscissa outside germ chart");
    if (pattern[p] == Component::Upper)
      pt[p] = {xs[p], germ_eval(upper, xs[p])};
    else
      pt[p] = {xs[p], -germ_eval(lower, xs[p])};
  }
  double total = 0.0;
  for (std::size_t p = 0; p < m; ++p) {
    std::size_t q = (p + 1) % m;
    double l = norm(pt[q] - pt[p]);
    if (pattern[p] == pattern[q] && l < 1e-12)
      throw DiagonalSingularity("consecutive same-component points coincide");
    total += l;
  }
  return total;
}

OrbitCandidate find_orbit(const ObstaclePair& pair, const SignPattern& pattern,
                          const std::vector<double>& seed_angles,
                          const OrbitSearchOptions& opts) {
  std::vector<double> x = seed_angles;
  std::size_t m = x.size();

  auto grad_norm2 = [&](const std::vector<double>& a) {
    std::vector<double> g = length_gradient(pair, pattern, a);
    double s = 0.0;
    for (double v : g) s += v * v;
    return s;
  };
  auto min_link = [&](const std::vector<double>& a) {
    auto v = sample_vertices(pair, pattern, a);
    double mn = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) mn = std::min(mn, norm(v[(j + 1) % m].s.q - v[j].s.q));
    return mn;
  };

  if (min_link(x) < opts.collapse_tol)
    throw CollapsedLink("seed configuration has a collapsed link");

  bool converged = false;
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    std::vector<double> g = length_gradient(pair, pattern, x);
    double gsup = 0.0;
    for (double v : g) gsup = std::max(gsup, std::abs(v));
    if (gsup < opts.grad_tol) {
      converged = true;
      break;
    }
    Eigen::MatrixXd h = length_hessian(pair, pattern, x);
    Eigen::VectorXd rhs(m);
    for (std::size_t j = 0; j < m; ++j) rhs(j) = -g[j];
    Eigen::FullPivLU<Eigen::MatrixXd> lu(h);
    if (!lu.isInvertible()) throw NoConvergence("singular Hessian in Newton step");
    Eigen::VectorXd delta = lu.solve(rhs);

    double g0 = grad_norm2(x);
    double lambda = 1.0;
    std::vector<double> trial(m);
    bool accepted = false;
    for (int halve = 0; halve < 30; ++halve) {
      for (std::size_t j = 0; j < m; ++j) trial[j] = x[j] + lambda * delta(j);
      try {
        if (grad_norm2(trial) < g0) {
          accepted = true;
          break;
        }
      } catch (const Error&) {
        // trial stepped onto a singular configuration; retreat
      }
      lambda *= 0.5;
    }
    if (!accepted) throw NoConvergence("line search failed to reduce the gradient");
    double step = 0.0;
    for (std::size_t j = 0; j < m; ++j) step = std::max(step, std::abs(trial[j] - x[j]));
    x = trial;
    if (min_link(x) < opts.collapse_tol)
      throw CollapsedLink("link length fell below threshold during iteration");
    if (step < opts.step_tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::vector<double> g = length_gradient(pair, pattern, x);
    double gsup = 0.0;
    for (double v : g) gsup = std::max(gsup, std::abs(v));
    if (gsup >= opts.grad_tol) throw NoConvergence("Newton iteration exhausted");
  }

  OrbitCandidate orbit;
  orbit.pattern = pattern;
  orbit.angles = x;
  orbit.length = length(pair, pattern, x);
  std::vector<double> g = length_gradient(pair, pattern, x);
  orbit.grad_norm = 0.0;
  for (double v : g) orbit.grad_norm = std::max(orbit.grad_norm, std::abs(v));
  orbit.snell_residuals = snell_residuals(pair, pattern, x);
  if (min_link(x) < opts.collapse_tol) throw CollapsedLink("converged orbit has a collapsed link");

  // Ghost detection: sample each link's interior against the inside test.
  auto v = sample_vertices(pair, pattern, x);
  for (std::size_t j = 0; j < m && !orbit.ghost; ++j) {
    Vec2 a = v[j].s.q, b = v[(j + 1) % m].s.q;
    for (int i = 1; i <= opts.ghost_samples; ++i) {
      double t = double(i) / double(opts.ghost_samples + 1);
      if (pair.contains(a + t * (b - a))) {
        orbit.ghost = true;
        break;
      }
    }
  }
  canonicalize(pair, orbit);
  return orbit;
}

std::optional<Bounce> billiard_map(const ObstaclePair& pair, Vec2 q, Vec2 v) {
  auto hit = pair.first_hit(q, v, 1e-9);
  if (!hit) return std::nullopt;
  CurveSample s = pair.sample(hit->comp, hit->phi);
  Vec2 n = s.normal;
  Vec2 refl = v - 2.0 * dot(v, n) * n;
  return Bounce{hit->comp, hit->phi, hit->q, refl, hit->t * norm(v)};
}

namespace {

// Two bounces of the return map in boundary coordinates (s, p) on the upper
// component: launch, reflect at the lower component, reflect again at the
// upper one, read off the outgoing state.
std::pair<double, double> return_map(const ObstaclePair& pair, double s, double p) {
  double phi = pair.phi_at_arclength(Component::Upper, s);
  CurveSample cs = pair.sample(Component::Upper, phi);
  Vec2 t = {cs.dq.x / cs.speed, cs.dq.y / cs.speed};
  Vec2 v = p * t + std::sqrt(1.0 - p * p) * cs.normal;
  auto b1 = billiard_map(pair, cs.q, v);
  if (!b1 || b1->comp != Component::Lower)
    throw NoConvergence("return map left the bouncing-ball section");
  auto b2 = billiard_map(pair, b1->q, b1->v);
  if (!b2 || b2->comp != Component::Upper)
    throw NoConvergence("return map left the bouncing-ball section");
  CurveSample cs2 = pair.sample(Component::Upper, b2->phi);
  Vec2 t2 = {cs2.dq.x / cs2.speed, cs2.dq.y / cs2.speed};
  double s2 = pair.arclength_from_endpoint(Component::Upper, b2->phi);
  double p2 = dot(b2->v, t2);
  return {s2, p2};
}

}  // namespace

PoincareData poincare(const ObstaclePair& pair, double fd_step) {
  auto jac = [&](double h) {
    auto [sp_s, sp_p] = return_map(pair, h, 0.0);
    auto [sm_s, sm_p] = return_map(pair, -h, 0.0);
    auto [pp_s, pp_p] = return_map(pair, 0.0, h);
    auto [pm_s, pm_p] = return_map(pair, 0.0, -h);
    Eigen::Matrix2d m;
    m << (sp_s - sm_s) / (2 * h), (pp_s - pm_s) / (2 * h),
        (sp_p - sm_p) / (2 * h), (pp_p - pm_p) / (2 * h);
    return m;
  };
  PoincareData d;
  // Richardson pair kills the O(h^2) truncation term.
  d.monodromy = (4.0 * jac(fd_step / 2) - jac(fd_step)) / 3.0;
  d.trace = d.monodromy.trace();
  if (!(std::abs(d.trace) > 2.0 + 1e-8))
    throw NotHyperbolic("bouncing-ball return map is not hyperbolic");
  d.alpha = std::acosh(std::abs(d.trace) / 2.0);
  d.cosh_half_alpha = std::sqrt((std::abs(d.trace) / 2.0 + 1.0) / 2.0);
  return d;
}

namespace {

std::vector<SignPattern> necklace_patterns(int max_bounces) {
  std::vector<SignPattern> out;
  for (int m = 2; m <= max_bounces; ++m) {
    std::vector<SignPattern> seen;
    for (int mask = 0; mask < (1 << m); ++mask) {
      SignPattern p(m);
      for (int j = 0; j < m; ++j)
        p[j] = (mask >> j) & 1 ? Component::Lower : Component::Upper;
      // canonical under rotation + reversal + component swap is NOT applied:
      // the mirror symmetry swaps components but general pairs need both only
      // up to rotation/reversal.
      SignPattern best = p;
      auto consider = [&](const SignPattern& q) {
        for (int s = 0; s < m; ++s) {
          SignPattern rot(m);
          for (int j = 0; j < m; ++j) rot[j] = q[(j + s) % m];
          if (rot < best) best = rot;
        }
      };
      consider(p);
      SignPattern rev(p.rbegin(), p.rend());
      consider(rev);
      if (std::find(seen.begin(), seen.end(), best) == seen.end()) {
        seen.push_back(best);
        out.push_back(best);
      }
    }
  }
  return out;
}

}  // namespace

std::vector<OrbitCandidate> enumerate_orbits(const ObstaclePair& pair, double l_max,
                                             int max_bounces, const SpectrumOptions& opts,
                                             bool include_ghosts) {
  bool periodic = pair.upper().closed();
  double lo = periodic ? 0.0 : -pair.upper().half_width();
  double hi = periodic ? 2.0 * kPi : pair.upper().half_width();
  double endpoint = pair.endpoint_phi();

  std::vector<OrbitCandidate> found;
  for (const SignPattern& pattern : necklace_patterns(max_bounces)) {
    int m = static_cast<int>(pattern.size());
    std::vector<std::vector<double>> seeds;
    seeds.push_back(std::vector<double>(m, endpoint));

    double total = std::pow(double(opts.lattice), m);
    if (total <= double(opts.max_seeds)) {
      std::vector<int> idx(m, 0);
      for (;;) {
        std::vector<double> s(m);
        for (int j = 0; j < m; ++j)
          s[j] = lo + (hi - lo) * (idx[j] + 0.5) / double(opts.lattice);
        seeds.push_back(std::move(s));
        int j = 0;
        while (j < m && ++idx[j] == opts.lattice) idx[j++] = 0;
        if (j == m) break;
      }
    } else {
      unsigned long long h = opts.seed * 1000003ULL + 17ULL;
      for (Component c : pattern) h = h * 31ULL + (c == Component::Upper ? 1ULL : 2ULL);
      h = h * 131ULL + static_cast<unsigned long long>(m);
      std::mt19937_64 rng(h);
      std::uniform_real_distribution<double> uni(lo, hi);
      for (int i = 0; i < opts.max_seeds; ++i) {
        std::vector<double> s(m);
        for (int j = 0; j < m; ++j) s[j] = uni(rng);
        seeds.push_back(std::move(s));
      }
    }

    for (const auto& seed : seeds) {
      try {
        OrbitCandidate orbit = find_orbit(pair, pattern, seed, opts.search);
        if (orbit.length <= l_max + 1e-9) found.push_back(std::move(orbit));
      } catch (const Error&) {
        // non-convergent or singular seed; skip
      }
    }
  }

  std::sort(found.begin(), found.end(), [](const OrbitCandidate& a, const OrbitCandidate& b) {
    if (a.length != b.length) return a.length < b.length;
    if (a.pattern.size() != b.pattern.size()) return a.pattern.size() < b.pattern.size();
    return a.angles < b.angles;
  });
  std::vector<OrbitCandidate> unique;
  double last_len[2] = {-1.0, -1.0};  // per ghost flag
  for (auto& o : found) {
    if (!include_ghosts && o.ghost) continue;
    int g = o.ghost ? 1 : 0;
    if (last_len[g] >= 0.0 && std::abs(last_len[g] - o.length) < 1e-9) continue;
    last_len[g] = o.length;
    unique.push_back(std::move(o));
  }
  return unique;
}

std::vector<OrbitCandidate> length_spectrum(const ObstaclePair& pair, double l_max,
                                            int max_bounces, const SpectrumOptions& opts) {
  return enumerate_orbits(pair, l_max, max_bounces, opts, false);
}

}  // namespace specbill
