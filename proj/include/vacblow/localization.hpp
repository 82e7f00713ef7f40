/** @file localization.hpp
 *  Flow map of the profile velocity, transported cutoff chi, ring_z = chi zbar
 *  and the far-field source S_z.
 *
 *  Along y' = y + (gamma+1)/4 zbar(y) the steady equation gives
 *  d zbar/dtau = (1-mu) zbar, so zeta = -zbar grows exactly like
 *  e^{(1-mu) dtau}. The flow map and its inverse use this invariant.
 */
#pragma once
#include <string>
#include <utility>
#include <vector>

#include "vacblow/jet.hpp"
#include "vacblow/profile.hpp"

namespace vacblow {

struct CutoffConfig {
  double y0 = 20.085536923187668;  // e^3
  double tau0 = 3.0;
  /// chi0 = S((y-y0)/y0), S built from exp(-lambda/x); max |S'| = 2 lambda.
  double chi0_lambda = 0.9;
};

/// y0 defaults to e^{tau0}; throws DomainError unless y0 > 1.
CutoffConfig make_cutoff_config(double tau0 = 3.0, double y0 = -1.0);

struct Localization {
  ProfileParams profile;
  CutoffConfig cutoff;
};

// chi0 and its jet
double chi0(const CutoffConfig& c, double p);
double dchi0(const CutoffConfig& c, double p);
Jet chi0_jet(const CutoffConfig& c, const Jet& p);

/// Y(tau, p) with Y(tau0, p) = p.
double flow_map(const Localization& L, double p, double tau);
/// Same map by RK4 on d(log Y)/dtau = 1 - (gamma+1)/2 Ubar(Y).
double flow_map_ode(const Localization& L, double p, double tau, double dtau = 1e-2);
/// Label p with flow_map(p, tau) = y; checks p against the sandwich window.
double inverse_flow(const Localization& L, double y, double tau);
/// Monotone bisection for the label inside [lo, hi]; NumericalError if not bracketed.
double inverse_flow_in(const Localization& L, double y, double tau, double lo, double hi);

double chi(const Localization& L, double tau, double y);
double dchi(const Localization& L, double tau, double y);
Jet chi_jet(const Localization& L, double tau, double y, int order);

double ring_z(const Localization& L, double tau, double y);
double dring_z(const Localization& L, double tau, double y);
Jet ring_z_jet(const Localization& L, double tau, double y, int order);

/// (gamma+1)/4 zbar (1-chi) d_y ring_z
double source_Sz(const Localization& L, double tau, double y);
Jet source_Sz_jet(const Localization& L, double tau, double y, int order);

/// Open interval where 0 < chi < 1: (Y(tau, y0), Y(tau, 2 y0)).
std::pair<double, double> transition_zone(const Localization& L, double tau);

/// Integral of (d^i S_z)^2 over the support.
double source_norm_sq(const Localization& L, double tau, int i, int panels = 400);

struct SourceDecayFit {
  int i;
  double rate;       ///< fitted decay rate of the squared norm
  double bound;      ///< (1-mu)(2i+4mu-3)
  double C0;         ///< norm / (y0^{3-4mu-2i} e^{-bound dtau}) at tau0
  double C_max;      ///< same ratio, max over the sampled tau
};

std::vector<SourceDecayFit> fit_source_decay(const Localization& L, double dtau_span, int samples = 11);

void write_localization_csv(const Localization& L, const std::vector<double>& taus,
                            const std::vector<double>& ys, const std::string& path);

}  // namespace vacblow
