#pragma once

#include <string>
#include <vector>

#include "virfrob/monodromy.hpp"
#include "virfrob/series.hpp"

namespace virfrob {

// A Frobenius manifold presented through its potential in flat coordinates.
// The ring puts the n flat variables first; exponential directions carry
// Novikov markers (see series::VarSet), so the potential is a polynomial
// object at every total-degree cutoff.  Bundled potentials are exact through
// their cutoff: every omitted quantum term has higher total degree.
struct FrobeniusModel {
  std::string id;
  int n = 0;
  MonodromyData monodromy;           // eta, mu, R_k, unit direction, charge
  series::VarSetPtr vars;            // flat variables first, then markers
  series::Series potential;
  std::vector<Rat> euler_degrees;    // E = sum_a (deg_a t^a + c_a) d_a
  std::vector<Rat> euler_constants;  // c_a, the R_1 column of the unit

  int cutoff() const { return potential.cutoff; }
  int unit() const { return monodromy.unit_index; }
  const QMat& eta() const { return monodromy.eta; }
  const QMat& eta_inv() const { return monodromy.eta_inv; }

  series::Series zero() const;
  series::Series constant(const Rat& c) const;
  series::Series flat_var(int a) const;
  series::Series euler_component(int a) const;  // deg_a t^a + c_a
  series::Series euler_apply(const series::Series& s) const;
};

// Bundled models, same ids as bundled_monodromy: trivial-n1, cp1, p1xp1,
// cp3.  For p1xp1 and cp3 the quantum tail of the potential is rebuilt from
// the gw recursions through the requested cutoff.
FrobeniusModel bundled_frobenius(const std::string& id, int cutoff);
std::vector<std::string> bundled_frobenius_ids();

// Bundle files: model name, the potential split into a polynomial part and
// a list of marker (Q-) monomial terms, Euler data, the charge, and the id
// of the monodromy bundle it refers to.
FrobeniusModel frobenius_from_json(const std::string& text);
std::string frobenius_to_json(const FrobeniusModel& m);

// Reconstruct a series from its full gradient along the plain directions,
// d_a s = g[a].  Marker sectors are pinned through their tied direction and
// the remaining constant of integration is set to zero; the coefficients are
// filled in ascending polynomial degree, so truncation never leaks downward.
// The result is checked against every component of g; a mismatch within the
// certified window means the input was not a gradient and is a hard error.
series::Series integrate_gradient(series::VarSetPtr vs, int cutoff,
                                  const std::vector<series::Series>& g);

// Third derivatives of the potential: low(a,b,g) = c_{abg} and the raised
// tensor up(a,b,g) = c^g_{ab}.  Construction verifies the unit axiom
// c_{eab} = eta_{ab} and the associativity residual through `order`; any
// violation is a hard error.  Requires order <= cutoff - 3.
struct StructureConstants {
  int n = 0;
  int order = 0;
  std::vector<series::Series> lo;   // c_{abg}, index (a*n+b)*n+g
  std::vector<series::Series> up_;  // c^g_{ab}, same index layout

  const series::Series& low(int a, int b, int g) const {
    return lo[(a * n + b) * n + g];
  }
  const series::Series& up(int a, int b, int g) const {
    return up_[(a * n + b) * n + g];
  }
};
StructureConstants structure_constants(const FrobeniusModel& m, int order);

// Deformed flat coordinates theta_{alpha,p} together with their gradients,
// alpha = 0..n-1, p = 0..p_max, solved level by level from
//   d_g d_b theta_{alpha,p+1} = c^e_{gb} d_e theta_{alpha,p},
// with integration constants fixed by the Euler grading and the z-pairing
// normalization.  Constants that neither condition determines are set to
// zero and recorded in `notes`, one line per free slot.
struct ThetaTable {
  std::string model_id;
  int p_max = 0;
  int order = 0;
  // th[p][alpha]; grad[p][alpha][gamma] = d_gamma theta_{alpha,p}
  std::vector<std::vector<series::Series>> th;
  std::vector<std::vector<std::vector<series::Series>>> grad;
  std::vector<std::string> notes;

  const series::Series& at(int alpha, int p) const { return th[p][alpha]; }
};
ThetaTable theta(const FrobeniusModel& m, int p_max, int order);

// Two-point correlators Omega_{alpha,p;beta,q} for p + q <= p_max, where
// p_max = theta.p_max - 1.
struct OmegaTable {
  int n = 0;
  int p_max = 0;
  std::vector<series::Series> e;

  const series::Series& at(int alpha, int p, int beta, int q) const;
};
OmegaTable omega(const FrobeniusModel& m, const ThetaTable& th);

// Genus-zero data over the coupling ring: variables T^{alpha,p} for
// p = 0..level followed by one marker per model marker, tied to the
// matching T^{alpha,0}.  t0 is the fixed point of t = grad Phi_T(t).
struct Genus0 {
  std::string model_id;
  int n = 0;
  int unit = 0;
  int level = 0;
  int order = 0;
  series::VarSetPtr tvars;
  std::vector<series::Series> t0;

  int tindex(int alpha, int p) const { return p * n + alpha; }
  series::Series tvar(int alpha, int p) const;
  // T^{alpha,p} shifted by the dilaton convention (unit, 1) -> -1.
  series::Series tilde(int alpha, int p) const;
};
Genus0 genus0_solution(const FrobeniusModel& m, const ThetaTable& th,
                       int level, int order);

// F0 = 1/2 sum Omega_{alpha,p;beta,q}(t0) Ttilde^{alpha,p} Ttilde^{beta,q};
// requires th.p_max >= 2 * g0.level + 1 so every quadratic pair is covered.
series::Series genus0_free_energy(const FrobeniusModel& m,
                                  const ThetaTable& th, const Genus0& g0);

// Canonical coordinates around a basepoint, with markers eliminated through
// exp of their tied variable (so the basepoint pins them at 1).  Limited to
// n <= 2, where the eigenvalues stay in the rational series ring.  The
// normalized frame psi_{i alpha} = f_{i alpha} / h_i involves square roots
// of h_i^2 = <f_i, f_i>, so only root-free combinations are exposed; the
// ordering of the u_i is by ascending value at the basepoint.
struct CanonicalFrame {
  series::VarSetPtr vars;  // flat variables only
  int n = 0;
  int unit = 0;
  QMat eta;
  std::vector<series::Series> u;     // canonical coordinates
  std::vector<series::Series> f;     // idempotents, f[i*n+a] = f_i^a
  std::vector<series::Series> hsq;   // h_i^2 = psi_{i1}^2
  std::vector<series::Series> ucal;  // U^a_b = E^e c^a_{eb}, index a*n+b
  std::vector<series::Series> hvec;  // H_a = c^nu_{nu a}

  // psi_{ia} psi_{ib} and psi_{ia} / psi_{i1}
  series::Series psi_pair(int i, int a, int b) const;
  series::Series psi_ratio(int i, int a) const;
};
CanonicalFrame canonical_frame(const FrobeniusModel& m,
                               const std::vector<Rat>& basepoint, int order);

// The G-function normalized by G(0) = 0.  Built directly from the defining
// rows for n <= 2 and from the gw genus-one tables for p1xp1 and cp3; in
// every case the full derivative system along e, E, E^2, ..., E^{n-1} is
// verified on the result and any violation is a hard error.
series::Series g_function(const FrobeniusModel& m, int order);

// F^(1)(t, t_X) = G(t) + 1/24 log det(c^a_{bg}(t) t_X^g) on the jet ring
// whose variables are the model ring followed by x^a = t_X^a - delta_unit.
series::Series genus1_density(const FrobeniusModel& m, int order);

// F1 = F^(1) at t = t0, t_X = d t0 / d T^{unit,0}, as a series over the
// coupling ring of g0.
series::Series genus1_free_energy(const FrobeniusModel& m,
                                  const ThetaTable& th, const Genus0& g0);

}  // namespace virfrob
