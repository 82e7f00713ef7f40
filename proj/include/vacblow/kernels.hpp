/** @file kernels.hpp
 *  One explicit step of  f_t + v f_y + c f = s  on a nonuniform grid.
 *
 *  Each kernel exists in a serial reference form and an OpenMP form; the two
 *  perform the same arithmetic per node and agree bit for bit.
 *  Node 0 is updated like any other node; callers pin it when needed.
 */
#pragma once
#include <vector>

namespace vacblow {

struct TransportCoeffs {
  const std::vector<double>* vel = nullptr;
  const std::vector<double>* decay = nullptr;   ///< may be null (c = 0)
  const std::vector<double>* source = nullptr;  ///< may be null (s = 0)
};

/// First-order upwind; one-sided by the sign of v, zero gradient for inflow at the right end.
void upwind_step_serial(const std::vector<double>& y, const std::vector<double>& f, const TransportCoeffs& k,
                        double dt, std::vector<double>& out);
void upwind_step_omp(const std::vector<double>& y, const std::vector<double>& f, const TransportCoeffs& k,
                     double dt, std::vector<double>& out);

/// Foot point y_i - dt v_i, cubic Lagrange interpolation on the four surrounding nodes.
void semilag_step_serial(const std::vector<double>& y, const std::vector<double>& f, const TransportCoeffs& k,
                         double dt, std::vector<double>& out);
void semilag_step_omp(const std::vector<double>& y, const std::vector<double>& f, const TransportCoeffs& k,
                      double dt, std::vector<double>& out);

/// max_i dt |v_i| / (upwind spacing at i)
double cfl_number(const std::vector<double>& y, const std::vector<double>& vel, double dt);

/// Largest dt with cfl_number(y, vel, dt) <= target.
double cfl_dt(const std::vector<double>& y, const std::vector<double>& vel, double target);

}  // namespace vacblow
