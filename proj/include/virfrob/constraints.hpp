#pragma once

#include <string>
#include <vector>

#include "virfrob/frobenius.hpp"
#include "virfrob/virasoro.hpp"

namespace virfrob {

// Everything needed to evaluate constraint residuals on one model: the
// deformed flat data, the genus-0 fixed point, and the free energies over
// the coupling ring.  The ring is built two orders above the advertised
// residual order so that first and second derivatives of F0 stay certified
// through the order actually reported.
struct ConstraintData {
  FrobeniusModel model;
  ThetaTable th;
  Genus0 g0;
  series::Series f0;
  series::Series f1;  // present only when built with genus-1 input
  bool has_genus1 = false;

  int level() const { return g0.level; }
  int order() const { return g0.order - 2; }
  // descendent level of coupling variable i, or -1 for the Novikov markers
  int slot(int i) const {
    return i < model.n * (level() + 1) ? i / model.n : -1;
  }
};

// Builds the data at coupling level `level` for residuals through total
// order `order`.  Requires a potential cutoff of at least order + 5 (the
// structure constants sit three orders below the cutoff and the working
// ring two above the residual order).  With genus-1 input requested the
// model must be semisimple at the origin; for n <= 2 this is certified by
// the canonical frame construction and a failure is a refusal, not a bug.
ConstraintData constraint_data(const FrobeniusModel& m, int level, int order,
                               bool with_genus1);
ConstraintData constraint_data(const std::string& id, int level, int order,
                               bool with_genus1);

struct ConstraintReport {
  std::string model_id;
  int m = 0;
  int genus = 0;
  int order = 0;      // requested residual order
  int certified = 0;  // order actually certified by the series arithmetic
  int window = 0;     // descendent levels covered: level - max(m, 0)
  // trusted block of the residual: total degree <= min(order, certified)
  // and every coupling slot <= window.  Terms above the window would need
  // couplings beyond the level-L table and are not claims.
  series::Series residual;
  bool pass = false;  // the trusted block is identically zero
};

// The genus-0 quadratic form of the operator against F0, summed over all
// table entries whose descendent levels are <= slot_cap:
//   sum dd^{ij} dF0_i dF0_j + sum td_i^j x^i dF0_j + sum tt_{ij} x^i x^j
// with x^i the shifted coupling.  Exposed so the commutator closure test
// can assemble the same sum from a derived operator.
series::Series genus0_accumulate(const ConstraintData& cd,
                                 const VirasoroOperator& op, int slot_cap);

// Genus-0 residual A_{m,0}; any m the operator family defines.
ConstraintReport evaluate_A0(const ConstraintData& cd, int m);

// Genus-1 residual A_{m,1} for m in [-1, 2]; higher levels follow from the
// commutation relation rather than direct evaluation.
ConstraintReport evaluate_A1(const ConstraintData& cd, int m);

std::string constraints_report_json(const std::vector<ConstraintReport>& rows);

}  // namespace virfrob
