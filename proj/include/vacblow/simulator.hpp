/** @file simulator.hpp
 *  Self-similar runs (direct and perturbation form) and physical-space runs
 *  up to the gradient blowup, with boundary Taylor extraction, blowup-time
 *  fits and Hölder exponent fits.
 */
#pragma once
#include <string>
#include <vector>

#include "vacblow/grid.hpp"
#include "vacblow/linops.hpp"
#include "vacblow/localization.hpp"
#include "vacblow/modulation.hpp"

namespace vacblow {

enum class Scheme { Upwind, SemiLagrangian };
Scheme parse_scheme(const std::string& name);  ///< "upwind" | "semilag"; ConfigError otherwise
std::string to_string(Scheme s);

struct StepConfig {
  Scheme scheme = Scheme::Upwind;
  double cfl_max = 0.9;
  bool parallel = true;
};

// ---- self-similar, direct form: zhat, what --------------------------------

struct SelfSimilarState {
  double tau = 0;
  GridField z, w;
};

/// (zbar, 0) sampled on g.
SelfSimilarState steady_state(const ProfileParams& p, const GridPtr& g, double tau);

/// Largest stable dt for the direct form at cfl target.
double selfsimilar_dt(const SelfSimilarState& st, const GasScaling& s, double cfl);

/// One step of the direct system; origin pinned at 0. CflError(required dt) if dt is too large.
SelfSimilarState step_selfsimilar(const SelfSimilarState& st, const GasScaling& s, double dt, const StepConfig& cfg);

// ---- self-similar, perturbation form: Z, W with modulated polynomials -------

struct PerturbationState {
  double tau = 0;
  GridField Z, W;
  ModulationState mod;  ///< z_i, w_i, i = 2..n_mu-1
};

/// Time-independent profile samples plus the localization, reused across steps.
class PerturbationStepper {
 public:
  PerturbationStepper(const Localization& L, GridPtr g);
  double dt_for(const PerturbationState& st, double cfl) const;
  PerturbationState step(const PerturbationState& st, double dt, const StepConfig& cfg) const;
  /// zhat = ring + Mz + Z, what = Mw + W
  SelfSimilarState to_direct(const PerturbationState& st) const;
  /// Z = zhat - ring - Mz, W = what - Mw for the given modulation state
  PerturbationState from_direct(const SelfSimilarState& d, const ModulationState& mod) const;
  const Localization& localization() const { return L_; }
  const GridPtr& grid() const { return g_; }

 private:
  struct Ring {
    std::vector<double> ring, dring, Sz;
  };
  Ring ring_at(double tau) const;

  Localization L_;
  GridPtr g_;
  std::vector<double> zb_, dzb_;
};

// ---- boundary Taylor coefficients -------------------------------------------

/// d^i f(0) for i = 0..order from one-sided weights on order+3 nodes.
/// ExtractionError unless those nodes are uniformly spaced.
std::vector<double> taylor_at_origin(const GridField& f, int order);

struct BoundaryTaylor {
  std::vector<double> z, w;  ///< index i holds d^i at 0, i = 0..order
};

/// Coefficients of zhat - zbar and what. DomainError if order > n_mu - 1.
BoundaryTaylor extract_boundary_taylor(const SelfSimilarState& st, const ProfileParams& p, int order);

// ---- self-similar run driver ---------------------------------------------------

struct SsInit {
  ModulationState mod;  ///< tau field ignored; z_i, w_i at tau0
  bool project = false;  ///< project the modulation data to the trapping manifold
  /// (Z, W) seed amplitude: eps * y^{n_mu} e^{-y} for both components
  double seed = 0.0;
};

enum class SsMode { Perturbation, Direct };

struct SsRunConfig {
  SsMode mode = SsMode::Perturbation;
  double h = 0.02;
  double y_max = -1;  ///< default 4 y0 e^{tau span}
  double tau_span = 3.0;
  double cfl = 0.8;
  int record_every = 10;
  double stop_factor = 10.0;  ///< early stop when the diagnostic exceeds factor * max(initial, floor)
  double stop_floor = 0.1;  ///< above the O(1e-2) response to the cutoff source
  StepConfig step;
};

struct SsRecord {
  double tau;
  EnergyNorms norms;
  std::vector<double> z_mod, w_mod;  ///< modulation ODE values
  std::vector<double> z_ext, w_ext;  ///< extracted from Mz + Z, Mw + W
  double sup_dz = 0;                 ///< sup |d_y ztilde|, ztilde = Mz + Z
  double sup_dw = 0;
};

struct RunReport {
  std::vector<SsRecord> series;
  bool early_stop = false;
  std::string stop_reason;
  double dt = 0;
  std::size_t nodes = 0;
};

RunReport run_selfsimilar(const Localization& L, const SsInit& init, const SsRunConfig& cfg);
void write_run_csv(const RunReport& r, const std::string& path);

// ---- physical space -----------------------------------------------------------

struct PhysicalState {
  double t = 0;
  GridField z, w;
};

/// Nodes 0 = x_0 < ... < x_n = x_max with geometric cells, first cell h_first.
GridPtr physical_grid(int n_cells, double x_max, double h_first);

/// z = delta (-t0)^{delta-1} ring(tau0, x/(-t0)^delta), w = 0.
PhysicalState physical_from_selfsimilar(const Localization& L, double t0, const GridPtr& x);

double physical_dt(const PhysicalState& st, const GasScaling& s, double cfl);
/// DomainError unless t + dt < 0; CflError if dt is too large.
PhysicalState step_physical(const PhysicalState& st, const GasScaling& s, double dt, const StepConfig& cfg);

struct PhysicalRecord {
  double t, max_slope, inv_slope, boundary_slope, argmax_x;
};

struct PhysicalRunConfig {
  int n_cells = 1 << 13;
  double x_max = -1;    ///< default 3 y0 (-t0)^delta
  double h_first = -1;  ///< default 1e-10 x_max
  double t_stop = 0;    ///< 0: default 1e-3 t0
  double cfl = 0.8;
  StepConfig step;
};

struct PhysicalRun {
  std::vector<PhysicalRecord> series;
  PhysicalState final_state;
  bool resolution_exhausted = false;
  bool positivity_ok = true;  ///< c > 0 on (0, x_pos]
  double x_pos = 0;           ///< right end of the checked region
  int steps = 0;
};

PhysicalRun run_physical(const Localization& L, double t0, const PhysicalRunConfig& cfg);
void write_physical_csv(const PhysicalRun& r, const std::string& path);

struct BlowupReport {
  double slope = 0, slope_stderr = 0;  ///< d(1/max|z_x|)/dt
  double T = 0, T_stderr = 0;          ///< root of the linear fit
  double boundary_law_slope = 0;       ///< d(1/z_x(t,0))/dt
  double boundary_law_stderr = 0;
  double location = 0;                 ///< argmax of |z_x| at the last record
};

/// Linear fits over records with t in [t_lo, t_hi]. FitError with fewer than 3 records.
BlowupReport blowup_detect(const std::vector<PhysicalRecord>& series, double t_lo, double t_hi);

/// First-order Richardson combination 2 T_fine - T_coarse.
double richardson_blowup(double T_coarse, double T_fine);

struct HolderFit {
  double exponent = 0, stderr_ = 0, naive = 0;
  double x_lo = 0, x_hi = 0;
  int points = 0;
};

/// |z| ~ c x^p over x in [lo (-t)^delta, hi (-t)^delta]; FitError if the
/// window leaves the grid or holds fewer than 8 nodes.
HolderFit holder_fit(const PhysicalState& st, const GasScaling& s, double lo = 10.0, double hi = 1e3);

}  // namespace vacblow
