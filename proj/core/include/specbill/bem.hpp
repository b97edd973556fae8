#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

#include "specbill/errors.hpp"
#include "specbill/geometry.hpp"
#include "specbill/hankel.hpp"

namespace specbill {

// k + i tau; tau > 0 damps the free resolvent, tau < 0 probes below the axis.
struct ComplexWavenumber {
  double k = 0.0;
  double tau = 0.0;
  Complex value() const { return Complex(k, tau); }
};

// Collection of closed scattering boundaries: either one closed curve or a
// mirror pair. Component index 0 is the single curve / upper obstacle,
// index 1 the mirrored lower obstacle. free_space() has no components.
class BoundaryScene {
 public:
  static BoundaryScene free_space();
  static BoundaryScene single(BoundaryCurve curve);
  static BoundaryScene mirror_pair(ObstaclePair pair);

  int components() const { return components_; }
  CurveSample sample(int component, double phi) const;
  // Half the shortest bouncing-ball length when known (pair: the gap L),
  // used as the default resolvable-gap scale for the Poisson window check.
  std::optional<double> gap_scale() const;
  const ObstaclePair* pair() const { return pair_ ? &*pair_ : nullptr; }

 private:
  BoundaryScene() = default;
  int components_ = 0;
  std::optional<BoundaryCurve> curve_;
  std::optional<ObstaclePair> pair_;
};

// Nystrom discretization of I + N at one wavenumber; n nodes per component,
// equispaced in parameter. matrix is the dense N block matrix.
struct NystromOperator {
  int n = 0;
  int components = 0;
  ComplexWavenumber wavenumber;
  Eigen::MatrixXcd matrix;
};

// Normal-derivative half kernel
//   K(x, y) = -(i kk / 4) H1(kk |x-y|) (nu(y) . (y - x) / |x-y|) |q'(y)|
// with kk = k + i tau; the diagonal limit is -kappa(y) |q'(y)| / (4 pi).
// The assembled operator is N = -2K.
Complex kernel(const BoundaryScene& scene, ComplexWavenumber kw, int comp_x,
               double phi_x, int comp_y, double phi_y);
Complex kernel_diagonal(const BoundaryScene& scene, int comp, double phi);

// Nystrom matrix for N: logarithmic-splitting quadrature on same-component
// blocks, plain trapezoid on cross blocks. n must be even and >= 16.
NystromOperator assemble(const BoundaryScene& scene, ComplexWavenumber kw, int n);

// Principal-branch log det(I + N) from an LU factorization.
Complex log_det(const NystromOperator& op);

// log det(I + N) along a wavenumber path with branch tracked continuously;
// consecutive phase steps near pi are bisected adaptively (PhaseJump when a
// jump survives the refinement limit).
std::vector<Complex> log_det_path(const BoundaryScene& scene,
                                  const std::vector<ComplexWavenumber>& path, int n);

// d/dk log det(I + N(k + i tau)) by a branch-safe central difference.
Complex log_det_derivative(const BoundaryScene& scene, ComplexWavenumber kw, int n,
                           double dk = 1e-4);

// Tr[(I + N)^{-1} dN/dk] by central differencing the matrix; independent
// route to the same derivative.
Complex trace_derivative(const BoundaryScene& scene, ComplexWavenumber kw, int n,
                         double dk = 1e-4);

// Tr N^M diagnostic.
Complex trace_power(const NystromOperator& op, int power);

struct ResonanceCandidate {
  Complex k;           // refined zero of det(I + N)
  double abs_det;      // |det| at the refined point
  int winding;         // phase winding of det on a small contour
  bool converged;      // Newton reached tolerance
};

struct ResonanceScanOptions {
  int grid_re = 120;
  int grid_im = 16;
  int n = 128;
  int newton_max = 30;
  double newton_tol = 1e-8;
  int contour_points = 32;
  // Zeros with Im k > -axis_tol are dropped when the rectangle lies in the
  // closed lower half-plane: det(I + N) vanishes at the interior Dirichlet
  // eigenvalues of the obstacle components, and those axis zeros are not
  // scattering poles. A rectangle straddling the axis reports everything.
  double axis_tol = 1e-3;
};

// Locate zeros of det(I + N) in the rectangle [k0,k1] x [tau0,tau1]
// (tau1 <= 0 for resonances): seeds from the five-point anomaly of the
// harmonic Re log det grid, refined by a background-cancelling two-point
// pole fit on (log det)'.
std::vector<ResonanceCandidate> resonance_scan(const BoundaryScene& scene, double k0,
                                               double k1, double tau0, double tau1,
                                               const ResonanceScanOptions& opt);

struct PoissonPeak {
  double t = 0.0;
  double amplitude = 0.0;
};

struct PoissonOptions {
  double tau = 0.1;      // contour depth: samples run along Im k = -tau
  int n = 192;           // quadrature nodes per component
  int samples = 0;       // k-grid count; 0 picks round((k1-k0)/0.1)+1
  double peak_factor = 5.0;  // peaks must exceed peak_factor * median level
  double t_min = 1.0;        // ignore the smooth lobe at t ~ 0
  double min_gap = 0.0;      // expected length gap; 0 derives from the scene
};

struct PoissonResult {
  std::vector<double> t;          // time bins 2 pi j / (samples dk)
  std::vector<double> amplitude;  // |windowed DFT| of the trace derivative
  std::vector<PoissonPeak> peaks; // local maxima above the floor, by amplitude
  double noise_floor = 0.0;
  double cell = 0.0;              // bin spacing in t
};

// Windowed Fourier transform of k -> d/dk log det(I + N(k - i tau)) over
// [k0, k1]; peaks sit at lengths of trapped orbits. The sample line runs
// below the real axis so that axis zeros (interior eigenvalues of the
// obstacle components) fall on the negative-t side of the transform and only
// zeros below the line, the resonances, produce positive-t peaks; tau must
// stay above the chain depth. Throws WindowTooNarrow when 2 pi / (k1 - k0)
// exceeds the resolvable gap.
PoissonResult poisson_spectrum(const BoundaryScene& scene, double k0, double k1,
                               const PoissonOptions& opt);

}  // namespace specbill
