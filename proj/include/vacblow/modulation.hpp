/** @file modulation.hpp
 *  Boundary Taylor coefficients z_i = d^i Z(0), w_i = d^i W(0), i >= 2,
 *  their ODE hierarchy, the constraint values q_i, classification of
 *  trajectories, the localized fields M_z, M_w and the time-shift system.
 */
#pragma once
#include <string>
#include <vector>

#include "vacblow/scaling.hpp"

namespace vacblow {

/// z[k], w[k] hold index i = k + 2. Public states carry i = 2..i_max; internal
/// ones may run up to ceil(beta).
struct ModulationState {
  double tau = 0.0;
  std::vector<double> z, w;

  int top_index() const { return static_cast<int>(z.size()) + 1; }
  double zi(int i) const { return z.at(i - 2); }
  double wi(int i) const { return w.at(i - 2); }
};

/// Zero state with i = 2..i_max.
ModulationState zero_state(const GasScaling& s, double tau = 0.0);

struct NonlinearPair {
  double Nz = 0.0, Nw = 0.0;
};

/// Quadratic boundary terms; IndexError unless 2 <= i <= min(top index, ceil(beta)).
NonlinearPair boundary_nonlinear(const GasScaling& s, const ModulationState& st, int i);

/// Time derivative, returned as a state of the same shape (tau field = 1).
ModulationState rhs_modulation(const GasScaling& s, const ModulationState& st);

/// Classical RK4 with fixed dt. ConfigError when dt * max rate >= 0.1.
/// Keeps every `stride`-th state plus the last.
std::vector<ModulationState> integrate_modulation(const GasScaling& s, const ModulationState& st0, double tau_end,
                                                  double dt, int stride = 1);

double q2_closed_form(const GasScaling& s, double w2);

struct QOracleOptions {
  double horizon1 = 20.0;
  double horizon2 = 40.0;
  double dt = 1e-3;
  double tol = 1e-8;  ///< allowed relative change between horizons after extrapolation
};

/// q_2..q_order for w = (w_2, ..., w_order), each with all lower constraints imposed.
std::vector<double> q_values(const GasScaling& s, const std::vector<double>& w, int order,
                             const QOracleOptions& opt = {});
/// q_i alone; w holds at least w_2..w_i.
double q_polynomial(const GasScaling& s, const std::vector<double>& w, int i, const QOracleOptions& opt = {});

/// Number of constrained z_j: min(floor(beta), i_max).
int constraint_order(const GasScaling& s);

bool is_on_manifold(const GasScaling& s, const ModulationState& st, double tol = 1e-9,
                    const QOracleOptions& opt = {});
/// z_j := q_j(w) for constrained j, other z zero; w_2 := 0 when mu is in H.
ModulationState project_to_manifold(const GasScaling& s, std::vector<double> w, double tau = 0.0,
                                    const QOracleOptions& opt = {});

enum class TrajectoryClass { Decaying, Growing, Indeterminate, Zero };

struct Classification {
  TrajectoryClass kind = TrajectoryClass::Zero;
  double rate = 0.0;    ///< decay rate (Decaying) or growth rate of the index (Growing)
  double stderr_ = 0.0;
  int index = 0;        ///< first growing z index when Growing
};

/// Log-linear fit over the late half of the trajectory.
Classification classify(const GasScaling& s, const std::vector<ModulationState>& traj);
std::string to_string(TrajectoryClass c);

/// phi = 1 on [0,1/2], 0 on [1,inf), quintic smoothstep between.
double phi_cut(double y);
double dphi_cut(double y);

struct ModField {
  double Mz = 0, Mw = 0, dMz = 0, dMw = 0;
};

/// M = sum phi(y) c_i y^i / i!. Linear in the state, so passing
/// rhs_modulation(state) yields the tau-derivatives.
ModField modulation_fields(const GasScaling& s, const ModulationState& st, double y);

struct TimeShiftState {
  double tau = 0, w1 = 0, T = 0, Tstar_estimate = 0;
};

struct TimeShiftResult {
  std::vector<TimeShiftState> traj;
  double Tstar = 0;          ///< T at tau_end plus the tail bound
  double tail_bound = 0;
  double ceiling = 0;        ///< e^{-mu tau0} B eps0 / (mu (mu - B eps0))
  bool strictly_decreasing = true;
  double max_z1_residual = 0;
};

double time_shift_w1_rate(const GasScaling& s, double w1);
TimeShiftResult time_shift_integrate(const GasScaling& s, double eps0, double tau0, double tau_end,
                                     double dt = 1e-3);

void write_trajectory_csv(const std::vector<ModulationState>& traj, const std::string& path);

}  // namespace vacblow
