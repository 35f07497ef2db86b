#pragma once

#include <string>
#include <vector>

#include "virfrob/monodromy.hpp"

namespace virfrob {

// One operator level as finite coefficient tables over the shifted coupling
// variables: indices flatten (alpha, p) with 0 <= alpha < n, 0 <= p <= cutoff.
// The operator is
//   sum_{ij} dd^{ij} d_i d_j + sum_{ij} td_i^j x^i d_j + sum_{ij} tt_{ij} x^i x^j + c0
// with both ordered index pairs counted in the dd/tt double sums; dd and tt
// are kept exactly symmetric.  x^i stands for the shifted coupling (the
// (unit, 1) slot carries the dilaton shift baked into its meaning) and d_j
// for the partial derivative along coupling j.
struct VirasoroOperator {
  int n = 0;
  int level = 0;
  int cutoff = 0;
  QMat dd, td, tt;
  Rat c0;

  VirasoroOperator() = default;
  VirasoroOperator(int n_, int level_, int cutoff_)
      : n(n_), level(level_), cutoff(cutoff_),
        dd(dim(), dim()), td(dim(), dim()), tt(dim(), dim()) {}

  int dim() const { return n * (cutoff + 1); }
  int idx(int alpha, int p) const { return p * n + alpha; }
  int index_alpha(int i) const { return i % n; }
  int index_p(int i) const { return i / n; }

  bool is_zero() const {
    return dd.is_zero() && td.is_zero() && tt.is_zero() && c0 == 0;
  }
  VirasoroOperator& axpy(const Rat& s, const VirasoroOperator& o);
};

// Assembles level m by the normal-ordered bilinear construction, resolving
// the oscillator double sum into the four tables.  Preconditions: cutoff P
// >= |m| + (n-1)*K; m <= -2 additionally needs mu off the half-integer
// lattice (HalfIntegerResonance otherwise).
VirasoroOperator build_operator(const MonodromyData& md, int m, int P);

// Direct transcription of the displayed formulas for m in {-2,...,2}.
// Same preconditions as build_operator.
VirasoroOperator closed_form_operator(const MonodromyData& md, int m, int P);

// Exact commutator of two table operators (same n and cutoff).  Entries with
// an index above cutoff - |level_1| - |level_2| - (n-1)K are truncation
// artifacts; check_virasoro_relations restricts to the trusted block.
VirasoroOperator commutator(const VirasoroOperator& x, const VirasoroOperator& y);

struct Discrepancy {
  std::string table;  // "dd", "td", "tt", "const"
  int a_alpha = 0, a_p = 0, b_alpha = 0, b_q = 0;
  Rat expected, got;
};

struct PairCheck {
  int i = 0, j = 0;
  bool defined = true;     // false: operator construction threw
  std::string error;       // exception text when !defined
  bool pass = false;
  int window = 0;          // max trusted descendent level
  bool has_discrepancy = false;
  Discrepancy first;
};

// Compares [L_i, L_j] with (i-j) L_{i+j} + delta_{i+j,0} n (i^3-i)/12 inside
// the trust window, for all pairs i < j in [m_lo, m_hi] plus the diagonal
// pairs (commutator must vanish identically).  Rows for levels that are
// undefined on this model carry defined = false.
std::vector<PairCheck> check_virasoro_relations(const MonodromyData& md,
                                                int m_lo, int m_hi, int P);

std::string relations_report_json(const std::vector<PairCheck>& rows);
std::string operator_dump_json(const VirasoroOperator& op);

}  // namespace virfrob
