#include "virfrob/frobenius.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "virfrob/gw.hpp"

namespace virfrob {

using series::Mono;
using series::Series;
using series::VarSetPtr;
using series::mono_one;
using series::mono_var;
using series::mono_deg;

namespace {

std::string slot_name(const FrobeniusModel& m, int alpha, int p) {
  return "theta(alpha=" + std::to_string(alpha + 1) +
         ",p=" + std::to_string(p) + ") of " + m.id;
}

// eta^{rho sigma} contraction of two lowered gradient vectors.
Series pair_lower(const FrobeniusModel& m, const std::vector<Series>& u,
                  const std::vector<Series>& v) {
  Series s(u[0].vars, u[0].cutoff);
  for (int r = 0; r < m.n; ++r)
    for (int c = 0; c < m.n; ++c) {
      const Rat& w = m.eta_inv().at(r, c);
      if (w != 0) s += u[r] * v[c] * w;
    }
  return s;
}

int poly_deg(const VarSetPtr& vs, const Mono& m) {
  int d = 0;
  for (int i = 0; i < vs->n(); ++i)
    if (!vs->is_marker(i)) d += static_cast<unsigned char>(m[i]);
  return d;
}

// total marker exponent of m whose markers are tied to direction a
long marker_weight(const VarSetPtr& vs, const Mono& m, int a) {
  long w = 0;
  for (int q = 0; q < vs->n(); ++q)
    if (vs->v[q].tied_to == a) w += static_cast<unsigned char>(m[q]);
  return w;
}

}  // namespace

Series FrobeniusModel::zero() const { return Series(vars, cutoff()); }

Series FrobeniusModel::constant(const Rat& c) const {
  return Series::constant(vars, cutoff(), c);
}

Series FrobeniusModel::flat_var(int a) const {
  return Series::variable(vars, cutoff(), a);
}

Series FrobeniusModel::euler_component(int a) const {
  Series s = flat_var(a) * euler_degrees[a];
  s += constant(euler_constants[a]);
  return s;
}

Series FrobeniusModel::euler_apply(const Series& s) const {
  Series r(vars, std::min(cutoff(), s.cutoff));
  for (int a = 0; a < n; ++a) r += euler_component(a) * s.derivative(a);
  return r;
}

Series integrate_gradient(VarSetPtr vs, int cutoff,
                          const std::vector<Series>& g) {
  const int nv = vs->n();
  bool marked = false;
  for (int i = 0; i < nv; ++i)
    if (vs->is_marker(i)) marked = true;

  int certg = cutoff;
  for (int a = 0; a < nv; ++a)
    if (!vs->is_marker(a)) certg = std::min(certg, g[a].certified);

  Series out(vs, cutoff);
  // Candidate monomials grouped by polynomial degree; the recursion fills
  // them in ascending order, so each coefficient only needs already-known
  // ones.  A pure-marker seed would make the sector base couple upward and
  // leave it undetermined by gradient data alone; quasi-homogeneous inputs
  // never produce one (marker weights exceed every variable degree), so it
  // is rejected rather than guessed.
  std::map<int, std::set<Mono>> cand;
  for (int a = 0; a < nv; ++a) {
    if (vs->is_marker(a)) continue;
    for (const auto& [m, c] : g[a].t) {
      if (poly_deg(vs, m) == 0 && marker_weight(vs, m, a) > 0)
        throw std::runtime_error(
            "marker-sector base is not determined by gradient data");
      if (mono_deg(m) + 1 <= cutoff) {
        Mono m2 = m;
        ++m2[a];
        cand[poly_deg(vs, m2)].insert(m2);
      }
    }
  }

  int top = cand.empty() ? -1 : cand.rbegin()->first;
  for (int d = 0; d <= std::max(top, 0); ++d) {
    auto it = cand.find(d);
    if (it == cand.end()) continue;
    // the set may grow for higher degrees while we work through this one
    for (const Mono& m : it->second) {
      Rat value;
      {
        int a = -1;
        for (int q = 0; q < nv && a < 0; ++q)
          if (!vs->is_marker(q) && m[q] != 0) a = q;
        if (a < 0) continue;
        Mono prev = m;
        --prev[a];
        Rat e(static_cast<unsigned char>(m[a]));
        value = (g[a].coeff(prev) - out.coeff(prev) * marker_weight(vs, prev, a)) / e;
      }
      if (value == 0) continue;
      out.set_term(m, value);
      // a nonzero coefficient feeds the marker term of every tied direction
      if (mono_deg(m) + 1 <= cutoff)
        for (int a = 0; a < nv; ++a)
          if (!vs->is_marker(a) && marker_weight(vs, m, a) > 0) {
            Mono m2 = m;
            ++m2[a];
            int d2 = poly_deg(vs, m2);
            cand[d2].insert(m2);
            top = std::max(top, d2);
          }
    }
  }

  for (int a = 0; a < nv; ++a) {
    if (vs->is_marker(a)) continue;
    Series res = out.derivative(a) - g[a];
    int window = std::min(certg, cutoff - 1);
    for (const auto& [m, c] : res.t)
      if (mono_deg(m) <= window)
        throw std::runtime_error("gradient is not integrable in direction " +
                                 vs->v[a].name);
  }
  out.certified = marked ? certg : std::min(cutoff, certg + 1);
  return out;
}

namespace {

FrobeniusModel finish_model(std::string id, MonodromyData md, VarSetPtr vs,
                            Series potential) {
  FrobeniusModel m;
  m.id = std::move(id);
  m.monodromy = std::move(md);
  m.monodromy.require_valid();
  m.n = m.monodromy.n;
  m.vars = std::move(vs);
  m.potential = std::move(potential);
  const Rat mu1 = m.monodromy.mu[m.monodromy.unit_index];
  m.euler_degrees.resize(m.n);
  m.euler_constants.resize(m.n, Rat(0));
  for (int a = 0; a < m.n; ++a) {
    m.euler_degrees[a] = Rat(1) + mu1 - m.monodromy.mu[a];
    auto it = m.monodromy.r.find(1);
    if (it != m.monodromy.r.end())
      m.euler_constants[a] = it->second.at(a, m.monodromy.unit_index);
  }
  return m;
}

void add_poly(Series& f, const Rat& c, const std::vector<int>& exps) {
  Mono m = mono_one(f.vars->n());
  for (std::size_t i = 0; i < exps.size(); ++i)
    m[i] = static_cast<char>(exps[i]);
  f.add_term(m, c);
}

FrobeniusModel make_trivial(int cutoff) {
  auto vs = series::make_vars({{"t1", -1}});
  Series f(vs, cutoff);
  add_poly(f, rat(1, 6), {3});
  return finish_model("trivial-n1", bundled_monodromy("trivial-n1"), vs, f);
}

FrobeniusModel make_cp1(int cutoff) {
  auto vs = series::make_vars({{"t1", -1}, {"t2", -1}, {"Q", 1}});
  Series f(vs, cutoff);
  add_poly(f, rat(1, 2), {2, 1, 0});
  add_poly(f, Rat(1), {0, 0, 1});
  return finish_model("cp1", bundled_monodromy("cp1"), vs, f);
}

FrobeniusModel make_p1xp1(int cutoff) {
  auto vs = series::make_vars({{"t1", -1},
                               {"t2", -1},
                               {"t3", -1},
                               {"t4", -1},
                               {"Q1", 1},
                               {"Q2", 2}});
  Series f(vs, cutoff);
  add_poly(f, rat(1, 2), {2, 0, 0, 1, 0, 0});
  add_poly(f, Rat(1), {1, 1, 1, 0, 0, 0});
  int kl_max = (cutoff + 1) / 3;
  if (kl_max >= 1) {
    gw::P1P1Table tab = gw::p1p1_rational(kl_max);
    for (const auto& [kl, count] : tab.n0) {
      int k = kl.first, l = kl.second, s = k + l;
      if (3 * s - 1 > cutoff) continue;
      Rat c = Rat(count) / factorial(2 * s - 1);
      add_poly(f, c, {0, 0, 0, 2 * s - 1, k, l});
    }
  }
  return finish_model("p1xp1", bundled_monodromy("p1xp1"), vs, f);
}

FrobeniusModel make_cp3(int cutoff) {
  auto vs = series::make_vars(
      {{"t1", -1}, {"t2", -1}, {"t3", -1}, {"t4", -1}, {"Q", 1}});
  Series f(vs, cutoff);
  add_poly(f, rat(1, 2), {2, 0, 0, 1, 0});
  add_poly(f, Rat(1), {1, 1, 1, 0, 0});
  add_poly(f, rat(1, 6), {0, 3, 0, 0, 0});
  int k_max = (cutoff + 2) / 3;  // a row of degree k has total degree >= 3k
  if (k_max >= 1) {
    gw::Cp3Table tab = gw::cp3_rational(k_max);
    for (const auto& row : tab.rows) {
      if (5 * row.degree - row.points > cutoff) continue;
      Rat c = Rat(row.n0) / (factorial(row.lines) * factorial(row.points));
      add_poly(f, c, {0, 0, row.lines, row.points, row.degree});
    }
  }
  return finish_model("cp3", bundled_monodromy("cp3"), vs, f);
}

}  // namespace

FrobeniusModel bundled_frobenius(const std::string& id, int cutoff) {
  if (cutoff < 3)
    throw std::invalid_argument("cutoff must be at least 3 to hold the cubic terms");
  if (id == "trivial-n1") return make_trivial(cutoff);
  if (id == "cp1") return make_cp1(cutoff);
  if (id == "p1xp1") return make_p1xp1(cutoff);
  if (id == "cp3") return make_cp3(cutoff);
  throw std::invalid_argument("unknown model id: " + id);
}

std::vector<std::string> bundled_frobenius_ids() {
  return {"trivial-n1", "cp1", "p1xp1", "cp3"};
}

StructureConstants structure_constants(const FrobeniusModel& m, int order) {
  if (order > m.cutoff() - 3)
    throw std::invalid_argument(
        "structure constants at order " + std::to_string(order) +
        " need potential cutoff >= " + std::to_string(order + 3));
  StructureConstants sc;
  sc.n = m.n;
  sc.order = order;
  sc.lo.assign(static_cast<std::size_t>(m.n) * m.n * m.n, Series());
  sc.up_.assign(static_cast<std::size_t>(m.n) * m.n * m.n, Series());

  std::vector<Series> d1(m.n);
  for (int a = 0; a < m.n; ++a) d1[a] = m.potential.derivative(a);
  for (int a = 0; a < m.n; ++a)
    for (int b = a; b < m.n; ++b) {
      Series d2 = d1[a].derivative(b);
      for (int g = b; g < m.n; ++g) {
        Series c = d2.derivative(g).truncated(order);
        int pos[6] = {(a * m.n + b) * m.n + g, (a * m.n + g) * m.n + b,
                      (b * m.n + a) * m.n + g, (b * m.n + g) * m.n + a,
                      (g * m.n + a) * m.n + b, (g * m.n + b) * m.n + a};
        for (int p : pos) sc.lo[p] = c;
      }
    }
  for (int a = 0; a < m.n; ++a)
    for (int b = 0; b < m.n; ++b)
      for (int g = 0; g < m.n; ++g) {
        Series s(m.vars, order);
        for (int e = 0; e < m.n; ++e) {
          const Rat& w = m.eta_inv().at(g, e);
          if (w != 0) s += sc.low(a, b, e) * w;
        }
        sc.up_[(a * m.n + b) * m.n + g] = s;
      }

  const int u = m.unit();
  for (int b = 0; b < m.n; ++b)
    for (int g = 0; g < m.n; ++g) {
      Series res = sc.low(u, b, g) - Series::constant(m.vars, order, m.eta().at(b, g));
      if (!res.is_zero())
        throw std::runtime_error("unit axiom fails for " + m.id + " at (" +
                                 std::to_string(b + 1) + "," +
                                 std::to_string(g + 1) + ")");
    }

  // associativity: sum_e c^e_{ab} c_{egd} symmetric under b <-> g
  for (int a = 0; a < m.n; ++a)
    for (int d = 0; d < m.n; ++d)
      for (int b = 0; b < m.n; ++b)
        for (int g = b + 1; g < m.n; ++g) {
          Series lhs(m.vars, order), rhs(m.vars, order);
          for (int e = 0; e < m.n; ++e) {
            lhs += sc.up(a, b, e) * sc.low(e, g, d);
            rhs += sc.up(a, g, e) * sc.low(e, b, d);
          }
          Series res = lhs - rhs;
          for (const auto& [mm, cc] : res.t)
            if (mono_deg(mm) <= res.certified)
              throw std::runtime_error("associativity fails for " + m.id);
        }
  return sc;
}

ThetaTable theta(const FrobeniusModel& m, int p_max, int order) {
  StructureConstants sc = structure_constants(m, order);
  ThetaTable tt;
  tt.model_id = m.id;
  tt.p_max = p_max;
  tt.order = order;
  tt.th.assign(p_max + 1, std::vector<Series>(m.n));
  tt.grad.assign(p_max + 1,
                 std::vector<std::vector<Series>>(m.n, std::vector<Series>(m.n)));

  auto cnst = [&](const Rat& c) { return Series::constant(m.vars, order, c); };
  std::vector<Series> ecomp(m.n);
  for (int a = 0; a < m.n; ++a)
    ecomp[a] = Series::variable(m.vars, order, a) * m.euler_degrees[a] +
               cnst(m.euler_constants[a]);

  // ucal[e][g] = E^b c^e_{bg}
  std::vector<std::vector<Series>> ucal(m.n, std::vector<Series>(m.n));
  for (int e = 0; e < m.n; ++e)
    for (int g = 0; g < m.n; ++g) {
      Series s(m.vars, order);
      for (int b = 0; b < m.n; ++b) s += ecomp[b] * sc.up(b, g, e);
      ucal[e][g] = s;
    }

  const Rat mu1 = m.monodromy.mu[m.unit()];
  for (int al = 0; al < m.n; ++al) {
    Series t0(m.vars, order);
    for (int b = 0; b < m.n; ++b) {
      const Rat& w = m.eta().at(al, b);
      if (w != 0) t0 += Series::variable(m.vars, order, b) * w;
    }
    tt.th[0][al] = t0;
    for (int g = 0; g < m.n; ++g) tt.grad[0][al][g] = cnst(m.eta().at(al, g));
  }

  for (int p = 1; p <= p_max; ++p) {
    std::vector<std::pair<int, int>> resonant;
    for (int al = 0; al < m.n; ++al) {
      // R-matrix tails of the graded flatness relation, one per direction
      std::vector<Series> tails(m.n, Series(m.vars, order));
      for (const auto& [k, rk] : m.monodromy.r) {
        if (k > p) continue;
        for (int b = 0; b < m.n; ++b) {
          const Rat& w = rk.at(b, al);
          if (w == 0) continue;
          for (int g = 0; g < m.n; ++g) tails[g] += tt.grad[p - k][b][g] * w;
        }
      }
      for (int g = 0; g < m.n; ++g) {
        Series rhs(m.vars, order);
        for (int e = 0; e < m.n; ++e)
          rhs += ucal[e][g] * tt.grad[p - 1][al][e];
        rhs -= tails[g];
        Rat co = Rat(p) + m.monodromy.mu[al] + m.monodromy.mu[g];
        if (co != 0) {
          tt.grad[p][al][g] = rhs * (Rat(1) / co);
        } else {
          for (const auto& [mm, cc] : rhs.t)
            if (mono_deg(mm) <= rhs.certified)
              throw std::runtime_error("graded flatness obstruction in " +
                                       slot_name(m, al, p));
          std::vector<Series> gv(m.n);
          for (int b = 0; b < m.n; ++b) {
            Series s(m.vars, order);
            for (int e = 0; e < m.n; ++e)
              s += sc.up(g, b, e) * tt.grad[p - 1][al][e];
            gv[b] = s;
          }
          tt.grad[p][al][g] = integrate_gradient(m.vars, order, gv);
          resonant.emplace_back(al, g);
        }
      }
    }

    // Fix the remaining constants with the pairing normalization
    //   d_g theta_{al,p} + (-1)^p d_al theta_{g,p}
    //     = -sum_{j=1}^{p-1} (-1)^j <grad theta_{al,p-j}, grad theta_{g,j}>.
    std::set<std::pair<int, int>> seen;
    for (const auto& [al, g] : resonant) {
      if (seen.count({al, g})) continue;
      seen.insert({al, g});
      seen.insert({g, al});
      Series rhs(m.vars, order);
      for (int j = 1; j <= p - 1; ++j) {
        Series pr = pair_lower(m, tt.grad[p - j][al], tt.grad[j][g]);
        rhs += (j % 2) ? -pr : pr;
      }
      rhs = -rhs;
      Rat sgn = (p % 2) ? Rat(-1) : Rat(1);
      Rat rhs0 = rhs.constant_term();
      if (al == g) {
        if (p % 2) {
          tt.notes.push_back(slot_name(m, al, p) + ": coefficient of " +
                             m.vars->v[g].name +
                             " is not fixed by grading or pairing; set to 0");
        } else {
          tt.grad[p][al][g] += cnst(rhs0 / 2);
        }
      } else {
        Rat d = rhs0;  // both slots start with constant term 0
        tt.grad[p][al][g] += cnst(sgn * d / 2);
        tt.grad[p][g][al] += cnst(d / 2);
        tt.notes.push_back(
            slot_name(m, al, p) + " / " + slot_name(m, g, p) +
            ": one combination of the constants in directions " +
            m.vars->v[g].name + ", " + m.vars->v[al].name +
            " is free; split symmetrically");
      }
      Series res = tt.grad[p][al][g] + tt.grad[p][g][al] * sgn - rhs;
      for (const auto& [mm, cc] : res.t)
        if (mono_deg(mm) <= res.certified)
          throw std::runtime_error("pairing normalization fails for " +
                                   slot_name(m, al, p));
    }

    // assemble theta_{al,p} from its gradient
    for (int al = 0; al < m.n; ++al) {
      Series tail(m.vars, order);
      for (const auto& [k, rk] : m.monodromy.r) {
        if (k > p) continue;
        for (int b = 0; b < m.n; ++b) {
          const Rat& w = rk.at(b, al);
          if (w != 0) tail += tt.th[p - k][b] * w;
        }
      }
      Rat co = Rat(p + 1) + mu1 + m.monodromy.mu[al];
      if (co != 0) {
        Series s(m.vars, order);
        for (int g = 0; g < m.n; ++g) s += ecomp[g] * tt.grad[p][al][g];
        tt.th[p][al] = (s - tail) * (Rat(1) / co);
      } else {
        tt.th[p][al] = integrate_gradient(m.vars, order, tt.grad[p][al]);
        tt.notes.push_back(slot_name(m, al, p) +
                           ": additive constant is not fixed by grading; set to 0");
      }

      // verify gradient and grading on the assembled function
      for (int g = 0; g < m.n; ++g) {
        Series res = tt.th[p][al].derivative(g) - tt.grad[p][al][g];
        int window = std::min(res.certified, tt.th[p][al].certified - 1);
        for (const auto& [mm, cc] : res.t)
          if (mono_deg(mm) <= window)
            throw std::runtime_error("gradient mismatch in " + slot_name(m, al, p));
      }
      Series gres(m.vars, order);
      for (int g = 0; g < m.n; ++g) gres += ecomp[g] * tt.grad[p][al][g];
      gres -= tt.th[p][al] * co;
      gres -= tail;
      int window = std::min(gres.certified, tt.th[p][al].certified - 1);
      for (const auto& [mm, cc] : gres.t)
        if (mono_deg(mm) <= window)
          throw std::runtime_error("grading fails for " + slot_name(m, al, p));
    }
  }
  return tt;
}

const Series& OmegaTable::at(int alpha, int p, int beta, int q) const {
  if (p < 0 || q < 0 || p + q > p_max)
    throw std::out_of_range("omega index (p,q) outside the table");
  return e[((p * (p_max + 1) + q) * n + alpha) * n + beta];
}

OmegaTable omega(const FrobeniusModel& m, const ThetaTable& th) {
  if (th.p_max < 1)
    throw std::invalid_argument("omega needs a theta table with p_max >= 1");
  OmegaTable ot;
  ot.n = m.n;
  ot.p_max = th.p_max - 1;
  ot.e.assign(static_cast<std::size_t>(ot.p_max + 1) * (ot.p_max + 1) * m.n * m.n,
              Series());
  for (int p = 0; p <= ot.p_max; ++p)
    for (int q = 0; p + q <= ot.p_max; ++q)
      for (int al = 0; al < m.n; ++al)
        for (int be = 0; be < m.n; ++be) {
          Series s(m.vars, th.order);
          for (int mm = 0; mm <= q; ++mm) {
            Series pr = pair_lower(m, th.grad[p + mm + 1][al], th.grad[q - mm][be]);
            s += (mm % 2) ? -pr : pr;
          }
          ot.e[((p * (ot.p_max + 1) + q) * m.n + al) * m.n + be] = s;
        }
  return ot;
}

}  // namespace virfrob
