#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "virfrob/matrix.hpp"

namespace virfrob::gw {

// Bidegree index (k, l): degrees along the two rulings of P1 x P1, or
// (curve degree, z1 power) for the CP3 tables.
using Index = std::pair<int, int>;

// Curve counts on P1 x P1.  n0[(k,l)] is the number of rational curves of
// bidegree (k,l) through 2(k+l)-1 points, n1[(k,l)] the elliptic count
// through 2(k+l) points.  Both tables cover 1 <= k+l <= max_total.
struct P1P1Table {
  int max_total = 0;
  bool has_elliptic = false;
  std::map<Index, Int> n0;
  std::map<Index, Int> n1;
};

// Rational counts from the quadratic recursion seeded by n0[(1,0)] = 1.
P1P1Table p1p1_rational(int max_total);

// Rational plus elliptic counts.  The elliptic table is produced by solving
// the genus-one potential system sector by sector; the unused equation of
// the overdetermined system is verified to vanish and any violation is a
// hard error, as is a non-integer count.
P1P1Table p1p1_elliptic(int max_total);

// The exact 3x3 linear system pinning the genus-one gradient sector at
// bidegree (k,l), k,l >= 1: unknowns (u, v, w) = coefficients of
// (dG/dt2, dG/dt3, t4 dG/dt4) on Q1^k Q2^l.  Row 1 is the Euler relation
// 2u + 2v - w = 0, row 2 reduces the second equation of the system by the
// already-known lower sectors, row 3 is the ansatz proportionality
// l*u - k*v = 0.  Solving it reproduces n1[(k,l)] = (2k+2l)! * u / k.
struct SectorSystem {
  QMat a;
  std::vector<Rat> b;
};
SectorSystem p1p1_g_sector_system(const P1P1Table& t, int k, int l);

// Curve counts on CP3.  A row holds the number n0 of rational curves of the
// given degree through `points` points and `lines` lines, where a point cuts
// the dimension by two and a line by one: lines = 4*degree - 2*points.  n1 is
// the raw genus-one potential coefficient (rational in general) and
// elliptic = n1 + (2*degree - 1)/12 * n0 the integer elliptic count.
struct Cp3Row {
  int degree = 0;
  int points = 0;
  int lines = 0;
  Int n0;
  Rat n1;
  Int elliptic;
};

struct Cp3Table {
  int max_degree = 0;
  bool has_elliptic = false;
  std::vector<Cp3Row> rows;  // sorted by (degree, points)
  Rat g2_constant;           // constant term of dG/dt2 when elliptic

  const Cp3Row* find(int degree, int points) const;
};

// Rational counts of degree <= max_degree, derived by imposing associativity
// of the quantum product on the two-exponential ansatz degree by degree.
// The linear system for each degree is overdetermined; inconsistency or a
// non-unique solution is a hard error, as is a non-integer count.
Cp3Table cp3_rational(int max_degree);

// Rational plus elliptic counts.  The two remaining equations of the
// genus-one system are solved jointly per degree as an overdetermined exact
// system; the elliptic combination must be an integer.
Cp3Table cp3_elliptic(int max_degree);

// Serialization.  CSV columns are fixed; genus-one columns are left empty
// when the table has no elliptic part.  JSON mirrors the CSV with all
// numeric values as decimal strings.
std::string p1p1_csv(const P1P1Table& t);
std::string p1p1_json(const P1P1Table& t);
std::string cp3_csv(const Cp3Table& t);
std::string cp3_json(const Cp3Table& t);

}  // namespace virfrob::gw
