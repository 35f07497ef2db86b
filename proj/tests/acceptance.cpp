// Acceptance gate. Runs the seven headline checks end to end and prints one
// pass/fail line per criterion. Every comparison is exact; there are no
// tolerances anywhere. Exit status is the number of failing criteria.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <string>

#include "virfrob/constraints.hpp"
#include "virfrob/frobenius.hpp"
#include "virfrob/gw.hpp"
#include "virfrob/virasoro.hpp"

using namespace virfrob;
using series::Mono;
using series::Series;
using series::mono_deg;

namespace {

int failures = 0;

template <typename F>
void run(int num, const char* label, F body) {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  std::string err;
  try {
    ok = body();
  } catch (const std::exception& e) {
    err = e.what();
  }
  double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  std::printf("criterion %d (%s): %s  [%.2fs]\n", num, label,
              ok ? "PASS" : "FAIL", secs);
  if (!err.empty()) std::printf("  exception: %s\n", err.c_str());
  if (!ok) ++failures;
  std::fflush(stdout);
}

bool zero_through(const Series& s, int window) {
  for (const auto& [m, c] : s.t)
    if (mono_deg(m) <= window && c != 0) return false;
  return true;
}

Series half_pairing_r1(const FrobeniusModel& m) {
  Series s = m.zero();
  auto it = m.monodromy.r.find(1);
  if (it == m.monodromy.r.end()) return s;
  for (int a = 0; a < m.n; ++a)
    for (int b = 0; b < m.n; ++b)
      for (int g = 0; g < m.n; ++g) {
        Rat w = m.eta().at(a, b) * it->second.at(b, g) / 2;
        if (w != 0) s += m.flat_var(a) * m.flat_var(g) * w;
      }
  return s;
}

Series kill_range(Series s, int lo, int hi) {
  for (int i = lo; i < hi; ++i) s = s.at_zero(i);
  return s;
}

Series pad_into(const Series& s, series::VarSetPtr big, int cutoff) {
  Series r(big, cutoff);
  r.certified = std::min(s.certified, cutoff);
  for (const auto& [mm, c] : s.t) {
    if (mono_deg(mm) > cutoff) continue;
    Mono dst = mm + Mono(big->n() - mm.size(), '\0');
    r.set_term(dst, c);
  }
  return r;
}

struct BidegreeRow {
  int k, l;
  const char* n0;
  const char* n1;
};

// Every non-boundary bidegree with k + l <= 14, rational and elliptic.
const BidegreeRow kBidegreeTable[] = {
    {2, 2, "12", "1"},
    {3, 2, "96", "20"},
    {4, 2, "640", "240"},
    {3, 3, "3510", "1920"},
    {5, 2, "3840", "2240"},
    {4, 3, "87544", "87612"},
    {6, 2, "21504", "17920"},
    {5, 3, "1763415", "2763840"},
    {4, 4, "6508640", "12017160"},
    {7, 2, "114688", "129024"},
    {6, 3, "30940512", "69488120"},
    {5, 4, "348005120", "1009712640"},
    {8, 2, "589824", "860160"},
    {7, 3, "492675292", "1495782720"},
    {6, 4, "15090252800", "62820007680"},
    {5, 5, "43628131782", "199215950976"},
    {9, 2, "2949120", "5406720"},
    {8, 3, "7299248880", "28742077000"},
    {7, 4, "565476495360", "3183404098560"},
    {6, 5, "4114504926336", "26965003723840"},
    {10, 2, "14417920", "32440320"},
    {9, 3, "102276100605", "506333947840"},
    {8, 4, "19021741768704", "138871679557632"},
    {7, 5, "318794127432450", "2824624505793600"},
    {6, 6, "780252921765888", "7337244206710400"},
    {11, 2, "69206016", "187432960"},
    {10, 3, "1370760207040", "8327258171820"},
    {9, 4, "588743395737600", "5402199925555200"},
    {8, 5, "21377025195016320", "245508475513868160"},
    {7, 6, "115340307031443456", "1465539494120378880"},
    {12, 2, "327155712", "1049624576"},
    {11, 3, "17716885497906", "129517853380160"},
    {10, 4, "17053897886924800", "191937248700825600"},
    {9, 5, "1282815980041107375", "18505625758298112000"},
    {8, 6, "14211230949697683456", "233887641913890478080"},
    {7, 7, "30814236194426422332", "528646007400035492736"},
};

bool crit_bidegree_counts() {
  auto t = gw::p1p1_elliptic(14);
  bool ok = t.max_total == 14 && t.has_elliptic;
  for (const auto& r : kBidegreeTable) {
    ok = ok && t.n0.at({r.k, r.l}) == Int(r.n0);
    ok = ok && t.n0.at({r.l, r.k}) == Int(r.n0);
    ok = ok && t.n1.at({r.k, r.l}) == Int(r.n1);
    ok = ok && t.n1.at({r.l, r.k}) == Int(r.n1);
  }
  for (int k = 1; k <= 13; ++k)
    ok = ok && t.n0.at({k, 1}) == 1 && t.n1.at({k, 1}) == 0;
  return ok;
}

bool crit_bracket_relations() {
  // levels -2 and below need mu off the half-integer lattice, so the two
  // resonant models start at -1
  struct Range {
    const char* id;
    int lo;
  };
  const Range specs[] = {
      {"trivial-n1", -2}, {"cp1", -1}, {"p1xp1", -2}, {"cp3", -1}};
  bool ok = true;
  for (const auto& s : specs) {
    MonodromyData md = bundled_monodromy(s.id);
    auto rows = check_virasoro_relations(md, s.lo, 3, 8);
    ok = ok && !rows.empty();
    for (const auto& row : rows) ok = ok && row.defined && row.pass;
  }
  return ok;
}

bool crit_closed_forms() {
  bool ok = true;
  for (const auto* id : {"trivial-n1", "cp1", "p1xp1", "cp3"}) {
    MonodromyData md = bundled_monodromy(id);
    for (int m = -2; m <= 2; ++m) {
      VirasoroOperator a, b;
      try {
        a = build_operator(md, m, 8);
        b = closed_form_operator(md, m, 8);
      } catch (const HalfIntegerResonance&) {
        ok = ok && m == -2;
        continue;
      }
      ok = ok && a.dd == b.dd && a.td == b.td && a.tt == b.tt && a.c0 == b.c0;
    }
  }
  return ok;
}

bool crit_genus0_constraints() {
  struct Spec {
    const char* id;
    int order;
  };
  const Spec specs[] = {{"trivial-n1", 5}, {"cp1", 4}, {"p1xp1", 4}};
  bool ok = true;
  for (const auto& s : specs) {
    ConstraintData cd = constraint_data(s.id, 8, s.order, false);
    for (int m = -1; m <= 3; ++m) {
      ConstraintReport rep = evaluate_A0(cd, m);
      ok = ok && rep.pass && rep.certified >= s.order;
    }
  }
  return ok;
}

bool crit_genus1_constraints() {
  FrobeniusModel cp1 = bundled_frobenius("cp1", 8);
  Series g = g_function(cp1, 5);
  Series want = Series::variable(cp1.vars, 5, 1) * rat(-1, 24);
  bool ok = (g - want).is_zero();
  Series eg = cp1.euler_apply(g);
  ok = ok && (eg - Series::constant(cp1.vars, 5, rat(-1, 12))).is_zero();

  ConstraintData cd = constraint_data("cp1", 8, 3, true);
  for (int m = -1; m <= 2; ++m) {
    ConstraintReport rep = evaluate_A1(cd, m);
    int need = m <= 0 ? 3 : 2;
    ok = ok && rep.pass && rep.certified >= need;
  }
  return ok;
}

bool crit_structural_suite() {
  bool ok = true;
  for (const auto& id : bundled_frobenius_ids()) {
    FrobeniusModel m = bundled_frobenius(id, 8);
    // the construction itself verifies the unit axiom and associativity
    structure_constants(m, 5);
    // quasi-homogeneity with the R1 tail, exact through the certified order
    Series res = m.euler_apply(m.potential) -
                 m.potential * (Rat(3) - m.monodromy.charge_d) -
                 half_pairing_r1(m);
    ok = ok && res.certified >= 7 && zero_through(res, res.certified);
    // pairing and grading of the deformed coordinates verified on build
    theta(m, 3, 4);
  }

  // two-point correlators: unit shift and Euler grading with the R1 tail
  {
    FrobeniusModel m = bundled_frobenius("cp1", 9);
    ThetaTable tt = theta(m, 4, 6);
    OmegaTable om = omega(m, tt);
    const QMat& r1 = m.monodromy.r.at(1);
    for (int p = 0; p <= om.p_max; ++p)
      for (int q = 0; p + q <= om.p_max; ++q)
        for (int al = 0; al < m.n; ++al)
          for (int be = 0; be < m.n; ++be) {
            Series shift = om.at(al, p, be, q).derivative(m.unit());
            if (p > 0) shift -= om.at(al, p - 1, be, q);
            if (q > 0) shift -= om.at(al, p, be, q - 1);
            if (p == 0 && q == 0)
              shift -= Series::constant(m.vars, 6, m.eta().at(al, be));
            int window = std::min(shift.certified, 5);
            ok = ok && window >= 4 && zero_through(shift, window);

            Rat wt = Rat(p + q + 1) + m.monodromy.mu[al] + m.monodromy.mu[be];
            Series gr = m.euler_apply(om.at(al, p, be, q)) -
                        om.at(al, p, be, q) * wt;
            for (int e = 0; e < m.n; ++e) {
              if (p >= 1 && r1.at(e, al) != 0)
                gr -= om.at(e, p - 1, be, q) * r1.at(e, al);
              if (q >= 1 && r1.at(e, be) != 0)
                gr -= om.at(al, p, e, q - 1) * r1.at(e, be);
            }
            if (p == 0 && q == 0) {
              Rat b(0);
              for (int e = 0; e < m.n; ++e)
                b += m.eta().at(al, e) * r1.at(e, be);
              gr -= Series::constant(m.vars, 6, b);
            }
            window = std::min(gr.certified, 5);
            ok = ok && window >= 4 && zero_through(gr, window);
          }
  }

  // genus-one density: restriction to the G-function, unit flatness, and
  // the jet scaling row
  for (const auto* id : {"cp1", "p1xp1"}) {
    FrobeniusModel m = bundled_frobenius(id, 6);
    const int order = 3;
    Series d = genus1_density(m, order);
    const int nv = m.vars->n();
    ok = ok && d.vars->n() == nv + m.n;

    Series rest = kill_range(d, nv, nv + m.n);
    Series gfun = pad_into(g_function(m, order), d.vars, order);
    Series res = rest - gfun;
    ok = ok && zero_through(res, std::min(res.certified, order));

    ok = ok && d.derivative(m.unit()).is_zero();

    Series scale(d.vars, order);
    for (int a = 0; a < m.n; ++a) {
      Series coef = Series::variable(d.vars, order, nv + a);
      if (a == m.unit()) coef += Series::constant(d.vars, order, Rat(1));
      scale += coef * d.derivative(nv + a);
    }
    scale -= Series::constant(d.vars, order, Rat(m.n) / 24);
    ok = ok && zero_through(scale, std::min(scale.certified, order - 1));
  }

  // the elliptic recursion on p1xp1 is overdetermined; every solve is
  // consistency-checked internally and throws on any mismatch
  gw::p1p1_elliptic(10);
  return ok;
}

bool crit_space_curves() {
  auto t = gw::cp3_elliptic(3);
  bool ok = t.has_elliptic && t.g2_constant == Rat(-1, 4);
  const gw::Cp3Row* two_points = t.find(1, 2);
  const gw::Cp3Row* four_lines = t.find(1, 0);
  ok = ok && two_points && two_points->n0 == 1;
  ok = ok && four_lines && four_lines->n0 == 2;
  for (const auto& r : t.rows)
    if (r.degree == 1) ok = ok && r.elliptic == 0;
  return ok;
}

}  // namespace

int main() {
  run(1, "bidegree curve counts through total degree 14", crit_bidegree_counts);
  run(2, "virasoro bracket relations at cutoff 8", crit_bracket_relations);
  run(3, "bilinear construction matches closed forms", crit_closed_forms);
  run(4, "genus-zero constraints vanish", crit_genus0_constraints);
  run(5, "genus-one constraints and the cp1 G-function", crit_genus1_constraints);
  run(6, "structural identity suite", crit_structural_suite);
  run(7, "space curve counts and the degree-two invariant", crit_space_curves);
  if (failures == 0)
    std::printf("acceptance: all 7 criteria pass\n");
  else
    std::printf("acceptance: %d of 7 criteria failing\n", failures);
  return failures;
}
