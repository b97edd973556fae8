#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "specbill/geometry.hpp"

namespace specbill {

// Cyclic sequence of component labels; indices are taken mod M everywhere.
using SignPattern = std::vector<Component>;

struct OrbitCandidate {
  SignPattern pattern;
  std::vector<double> angles;
  double length = 0.0;
  double grad_norm = 0.0;  // sup norm of the length gradient
  std::vector<double> snell_residuals;
  bool ghost = false;  // some link crosses an obstacle interior
};

struct PoincareData {
  Eigen::Matrix2d monodromy;  // return map Jacobian in (arc length, tangential momentum)
  double trace = 0.0;
  double alpha = 0.0;            // Floquet exponent, eigenvalues e^{+-alpha}
  double cosh_half_alpha = 0.0;  // c = cosh(alpha/2) = sqrt((trace/2 + 1)/2)
};

// Sum of Euclidean link lengths |q_{s_j}(phi_j) - q_{s_{j+1}}(phi_{j+1})| over
// the closed cycle. Raises DiagonalSingularity when two consecutive
// same-component points coincide within 1e-12.
double length(const ObstaclePair& pair, const SignPattern& pattern,
              const std::vector<double>& angles);

// d length / d phi_j = q'_j . (u_in - u_out) with u_* the unit link
// directions; vanishes exactly at Snell polygons.
std::vector<double> length_gradient(const ObstaclePair& pair, const SignPattern& pattern,
                                    const std::vector<double>& angles);

// Analytic Hessian of length(); drives the Newton search and the
// circulant-bridge checks.
Eigen::MatrixXd length_hessian(const ObstaclePair& pair, const SignPattern& pattern,
                               const std::vector<double>& angles);

// Dimensionless per-vertex reflection-law defects |(u_in - u_out) . t_j|.
std::vector<double> snell_residuals(const ObstaclePair& pair, const SignPattern& pattern,
                                    const std::vector<double>& angles);

// Length functional in graph coordinates: vertices (x_p, +-f_{s_p}(x_p)) with
// f reconstructed from the germ Taylor polynomial, cyclic over 2r links.
// Raises OutOfChart when |x_p| > chart_radius.
double cartesian_length(const GraphGerm& upper, const GraphGerm& lower,
                        const SignPattern& pattern, const std::vector<double>& xs,
                        double chart_radius = 1.0);

struct OrbitSearchOptions {
  int max_iter = 50;
  double grad_tol = 1e-10;
  double step_tol = 1e-12;
  double collapse_tol = 1e-8;
  int ghost_samples = 64;
};

// Newton search on the length gradient with analytic Hessian and a
// step-halving line search on |grad|. Converged orbits are canonicalized
// (smallest lexicographic rotation; reversal identified with the original).
OrbitCandidate find_orbit(const ObstaclePair& pair, const SignPattern& pattern,
                          const std::vector<double>& seed_angles,
                          const OrbitSearchOptions& opts = {});

struct Bounce {
  Component comp;
  double phi;
  Vec2 q;
  Vec2 v;  // reflected (outgoing) direction
  double travel;
};

// One exterior billiard bounce: first boundary intersection of the ray and
// specular reflection there. nullopt = Escape (the ray meets no obstacle),
// a distinguished outcome rather than an error.
std::optional<Bounce> billiard_map(const ObstaclePair& pair, Vec2 q, Vec2 v);

// Linearization of the period-2 return map at the bouncing-ball orbit by
// central finite differences in (arc length, tangential momentum).
// Raises NotHyperbolic when |trace| <= 2 (within FD noise).
PoincareData poincare(const ObstaclePair& pair, double fd_step = 1e-5);

struct SpectrumOptions {
  int lattice = 8;         // seed angles per variable
  int max_seeds = 2048;    // cap per pattern; excess subsampled by seeded RNG
  unsigned long long seed = 0;
  OrbitSearchOptions search;
};

// Multi-start Newton over all sign patterns up to max_bounces; converged
// orbits deduplicated by canonical representative and by length within 1e-9.
// Ghost orbits are flagged; kept in the returned list only when
// include_ghosts is set (the length spectrum proper excludes them).
std::vector<OrbitCandidate> enumerate_orbits(const ObstaclePair& pair, double l_max,
                                             int max_bounces, const SpectrumOptions& opts = {},
                                             bool include_ghosts = false);

// Ghost-free ascending length spectrum.
std::vector<OrbitCandidate> length_spectrum(const ObstaclePair& pair, double l_max,
                                            int max_bounces, const SpectrumOptions& opts = {});

}  // namespace specbill
