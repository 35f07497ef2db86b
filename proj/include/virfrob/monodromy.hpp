#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "virfrob/matrix.hpp"

namespace virfrob {

// Raised when a matrix function of mu is evaluated where some eigenvalue
// (after shift) lies on the half-integer lattice that the negative-branch
// operators must avoid.  Callers treat this as "operator not defined here".
struct HalfIntegerResonance : std::domain_error {
  using std::domain_error::domain_error;
};

struct ValidationEntry {
  std::string invariant;
  bool pass = false;
  std::string first_violation;  // empty when pass
};
using ValidationReport = std::vector<ValidationEntry>;

inline bool all_pass(const ValidationReport& rep) {
  for (const auto& e : rep)
    if (!e.pass) return false;
  return true;
}

// Linear-algebra data attached to a model at the origin: a flat pairing eta,
// the grading operator mu (diagonal in the chosen flat basis), and the
// nilpotent corrections R_k shifting the grading by k.
struct MonodromyData {
  std::string id;         // registry name, not serialized
  int n = 0;
  QMat eta;
  std::vector<Rat> mu;    // diagonal entries of the grading operator
  std::map<int, QMat> r;  // R_k, k >= 1; absent keys are zero
  int unit_index = 0;     // 0-based flat index of the unit direction
  Rat charge_d;

  // Filled by finalize()/validate().
  QMat eta_inv;
  int spread = 0;  // largest integer gap in the mu spectrum

  // Structural preconditions (shapes, invertible eta); throws on failure and
  // fills the derived fields.  validate() calls this first.
  void finalize();

  // Checks the defining relations, one report entry per invariant:
  //   eta symmetric,
  //   mu^T eta + eta mu = 0,
  //   mu e = -(d/2) e on the unit direction,
  //   [mu, R_k] = k R_k,
  //   R_k^T eta + (-1)^k eta R_k = 0,
  //   R_k = 0 unless some mu gap equals k.
  // Violations are report entries, not exceptions.
  ValidationReport validate();

  // validate() + throw std::invalid_argument on the first failing entry.
  void require_valid();

  int max_r_index() const { return r.empty() ? 0 : r.rbegin()->first; }
  QMat r_part(int k) const;
  QMat r_total() const;

  // Component of a matrix along grade k: entries (a,b) with mu_a - mu_b = k.
  QMat component(const QMat& m, int k) const;

  // [R^l]_k: grade-k part of the l-th power of R = sum_k R_k.  Zero unless
  // l <= k <= spread (except [R^0]_0 = 1).
  QMat r_power_component(int k, int l) const;

  // P_m evaluated on mu + shift:
  //   m >= 0 :  sum_l R^l * c_l  with  c_l the x^l coefficient of
  //             prod_{j=0..m} (x + mu + shift + j - 1/2)   (diagonal),
  //   m == -1:  identity,
  //   m <= -2:  same with the product prod_{j=1..-m-1} (x+mu+shift-j-1/2)
  //             inverted as a Taylor series in x through order `spread`.
  // The m <= -2 branch requires mu_a + shift off the half-integer lattice
  // for every a and throws HalfIntegerResonance naming the offender.
  QMat pm(int m, const Rat& shift) const;
};

MonodromyData monodromy_from_json(const std::string& text);
std::string monodromy_to_json(const MonodromyData& md);

// Bundled reference models by id: trivial-n1, cp1, p1xp1, cp3.
const MonodromyData& bundled_monodromy(const std::string& id);
std::vector<std::string> bundled_monodromy_ids();
std::string bundled_monodromy_json(const std::string& id);

}  // namespace virfrob
