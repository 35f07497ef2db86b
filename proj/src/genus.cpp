#include <algorithm>
#include <climits>

#include "virfrob/frobenius.hpp"
#include "virfrob/gw.hpp"

namespace virfrob {

using series::Mono;
using series::Series;
using series::VarSetPtr;
using series::mono_deg;
using series::mono_one;

namespace {

// Substitution engine: maps a series into another ring by assigning every
// source variable (markers included) an image series.  In the default mode
// every image must have valuation >= 1, which makes the composition of a
// merely truncated source well defined: missing source terms of degree d
// could only contribute at target degree >= d.  With allow_const the source
// must be exact through its cutoff (a polynomial); images may then carry
// constant terms.
struct EvalMap {
  VarSetPtr target;
  int cutoff = 0;
  bool allow_const = false;
  std::vector<Series> image;
  // composed image of each source exponent pattern, plus the min certified
  // window among the image factors it used; shared across all sources
  mutable std::map<Mono, std::pair<Series, int>> mc;

  EvalMap(VarSetPtr tg, int co, std::vector<Series> im, bool ac = false)
      : target(std::move(tg)), cutoff(co), allow_const(ac), image(std::move(im)) {
    if (!allow_const)
      for (const auto& s : image)
        if (!s.is_zero() && s.valuation() < 1)
          throw std::invalid_argument("substitution images must have no constant term");
  }

  const std::pair<Series, int>& composed(const Mono& m) const {
    auto it = mc.find(m);
    if (it != mc.end()) return it->second;
    int i = 0;
    while (i < static_cast<int>(m.size()) &&
           static_cast<unsigned char>(m[i]) == 0)
      ++i;
    std::pair<Series, int> val{Series(target, cutoff), cutoff};
    if (i == static_cast<int>(m.size())) {
      val.first = Series::constant(target, cutoff, Rat(1));
    } else {
      Mono prev = m;
      prev[i] = static_cast<char>(static_cast<unsigned char>(m[i]) - 1);
      const auto& sub = composed(prev);
      val.first = sub.first * image[i];
      val.second = std::min(sub.second, image[i].certified);
    }
    return mc.emplace(m, std::move(val)).first->second;
  }

  Series operator()(const Series& s) const {
    if (allow_const && s.certified < s.cutoff)
      throw std::invalid_argument("constant-term substitution needs an exact source");
    Series out(target, cutoff);
    int cert = s.certified >= cutoff ? cutoff : s.certified;
    for (const auto& [m, c] : s.t) {
      if (!allow_const && mono_deg(m) > cutoff) continue;
      const auto& [im, fc] = composed(m);
      cert = std::min(cert, fc);
      out += (im * c).with_certified(cutoff);
    }
    out.certified = std::min(out.certified, cert);
    return out;
  }
};

std::vector<Series> marker_images(const FrobeniusModel& m, const Genus0& g0) {
  int base = g0.n * (g0.level + 1);
  std::vector<Series> im;
  for (int j = g0.n; j < m.vars->n(); ++j) {
    int tied = m.vars->v[j].tied_to;
    Series delta = g0.t0[tied] - g0.tvar(tied, 0);
    im.push_back(Series::variable(g0.tvars, g0.order, base + (j - g0.n)) *
                 series::exp_series(delta));
  }
  return im;
}

EvalMap coupling_eval(const FrobeniusModel& m, const Genus0& g0) {
  std::vector<Series> im = g0.t0;
  for (Series& s : marker_images(m, g0)) im.push_back(std::move(s));
  return EvalMap(g0.tvars, g0.order, std::move(im));
}

// eta^{rho sigma} contraction of two lowered vectors
Series pair_eta(const FrobeniusModel& m, const std::vector<Series>& u,
                const std::vector<Series>& v) {
  Series s(u[0].vars, u[0].cutoff);
  for (int r = 0; r < m.n; ++r)
    for (int c = 0; c < m.n; ++c) {
      const Rat& w = m.eta_inv().at(r, c);
      if (w != 0) s += u[r] * v[c] * w;
    }
  return s;
}

void check_zero(const Series& s, int window, const std::string& what) {
  for (const auto& [m, c] : s.t)
    if (mono_deg(m) <= window)
      throw std::runtime_error(what + " (violation at degree " +
                               std::to_string(mono_deg(m)) + ")");
}

// n x n matrices of series, row-major
using SMat = std::vector<Series>;

SMat smat_mul(int n, const SMat& a, const SMat& b) {
  SMat c(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Series s(a[0].vars, a[0].cutoff);
      for (int e = 0; e < n; ++e) s += a[i * n + e] * b[e * n + j];
      c[i * n + j] = s;
    }
  return c;
}

std::vector<Series> smat_vec(int n, const SMat& a, const std::vector<Series>& v) {
  std::vector<Series> r(n);
  for (int i = 0; i < n; ++i) {
    Series s(a[0].vars, a[0].cutoff);
    for (int e = 0; e < n; ++e) s += a[i * n + e] * v[e];
    r[i] = s;
  }
  return r;
}

Series smat_trace(int n, const SMat& a) {
  Series s(a[0].vars, a[0].cutoff);
  for (int i = 0; i < n; ++i) s += a[i * n + i];
  return s;
}

SMat smat_scale_rows(int n, const std::vector<Rat>& d, const SMat& a) {
  SMat c = a;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c[i * n + j] = c[i * n + j] * d[i];
  return c;
}

Series det_smat(int n, const SMat& a) {
  if (n == 1) return a[0];
  Series s(a[0].vars, a[0].cutoff);
  for (int col = 0; col < n; ++col) {
    if (a[col].is_zero()) continue;
    SMat minor;
    minor.reserve(static_cast<std::size_t>(n - 1) * (n - 1));
    for (int i = 1; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (j != col) minor.push_back(a[i * n + j]);
    Series term = a[col] * det_smat(n - 1, minor);
    s += (col % 2) ? -term : term;
  }
  return s;
}

// pad a series into a ring whose variables start with the source ring's
Series reseat(const Series& s, VarSetPtr big, int cutoff) {
  int pad = big->n() - s.vars->n();
  Series out(big, cutoff);
  out.certified = std::min(cutoff, s.certified);
  for (const auto& [m, c] : s.t)
    if (mono_deg(m) <= cutoff) out.t[m + Mono(static_cast<std::size_t>(pad), '\0')] = c;
  return out;
}

}  // namespace

Series Genus0::tvar(int alpha, int p) const {
  return Series::variable(tvars, order, tindex(alpha, p));
}

Series Genus0::tilde(int alpha, int p) const {
  Series s = tvar(alpha, p);
  if (alpha == unit && p == 1)
    s -= Series::constant(tvars, order, Rat(1));
  return s;
}

Genus0 genus0_solution(const FrobeniusModel& m, const ThetaTable& th,
                       int level, int order) {
  if (level < 1 || level > th.p_max)
    throw std::invalid_argument("genus0 level must lie in [1, theta p_max]");
  if (th.order < order)
    throw std::invalid_argument("theta table order too small for genus0 order");

  Genus0 g0;
  g0.model_id = m.id;
  g0.n = m.n;
  g0.unit = m.unit();
  g0.level = level;
  g0.order = order;

  std::vector<std::pair<std::string, int>> spec;
  for (int p = 0; p <= level; ++p)
    for (int a = 0; a < m.n; ++a)
      spec.emplace_back("T" + std::to_string(a + 1) + "_" + std::to_string(p), -1);
  for (int j = m.n; j < m.vars->n(); ++j)
    spec.emplace_back(m.vars->v[j].name, m.vars->v[j].tied_to);
  g0.tvars = series::make_vars(spec);

  // raised gradients (grad theta_{alpha,p})^gamma in the model ring
  std::vector<std::vector<std::vector<Series>>> gup(
      level + 1, std::vector<std::vector<Series>>(m.n, std::vector<Series>(m.n)));
  for (int p = 1; p <= level; ++p)
    for (int al = 0; al < m.n; ++al)
      for (int g = 0; g < m.n; ++g) {
        Series s(m.vars, th.order);
        for (int r = 0; r < m.n; ++r) {
          const Rat& w = m.eta_inv().at(g, r);
          if (w != 0) s += th.grad[p][al][r] * w;
        }
        gup[p][al][g] = s;
      }

  g0.t0.resize(m.n);
  for (int a = 0; a < m.n; ++a) g0.t0[a] = g0.tvar(a, 0);

  bool stable = false;
  for (int round = 0; round <= order + 1 && !stable; ++round) {
    EvalMap ev = coupling_eval(m, g0);
    std::vector<Series> next(m.n);
    for (int g = 0; g < m.n; ++g) {
      Series s = g0.tvar(g, 0);
      for (int p = 1; p <= level; ++p)
        for (int al = 0; al < m.n; ++al)
          s += g0.tvar(al, p) * ev(gup[p][al][g]);
      next[g] = s;
    }
    stable = true;
    for (int a = 0; a < m.n; ++a)
      if (!(next[a].t == g0.t0[a].t)) stable = false;
    g0.t0 = next;
  }
  if (!stable)
    throw std::runtime_error("genus0 fixed point did not stabilize for " + m.id);
  return g0;
}

Series genus0_free_energy(const FrobeniusModel& m, const ThetaTable& th,
                          const Genus0& g0) {
  const int L = g0.level;
  if (th.p_max < 2 * L + 1)
    throw std::invalid_argument("genus0 free energy needs theta p_max >= 2*level+1");
  EvalMap ev = coupling_eval(m, g0);

  // composed lowered gradients, cg[p][alpha][rho]
  std::vector<std::vector<std::vector<Series>>> cg(
      2 * L + 2,
      std::vector<std::vector<Series>>(m.n, std::vector<Series>(m.n)));
  for (int p = 0; p <= 2 * L + 1; ++p)
    for (int al = 0; al < m.n; ++al)
      for (int r = 0; r < m.n; ++r) cg[p][al][r] = ev(th.grad[p][al][r]);

  // F0 = 1/2 sum_{m} (-1)^m <A_m, B_m> with
  //   A_m[rho]  = sum_{alpha, p <= L} Ttilde^{alpha,p} cg[p+m+1][alpha][rho]
  //   B_m[sigma] = sum_{beta, q >= m} Ttilde^{beta,q} cg[q-m][beta][sigma]
  // which regroups 1/2 sum Ttilde Ttilde Omega_{alpha,p;beta,q}(t0) so that
  // only n pairings of large series occur per shift m.
  Series f0(g0.tvars, g0.order);
  for (int mm = 0; mm <= L; ++mm) {
    std::vector<Series> am(m.n, Series(g0.tvars, g0.order));
    std::vector<Series> bm(m.n, Series(g0.tvars, g0.order));
    for (int al = 0; al < m.n; ++al)
      for (int p = 0; p <= L; ++p) {
        Series t = g0.tilde(al, p);
        for (int r = 0; r < m.n; ++r) am[r] += t * cg[p + mm + 1][al][r];
        if (p >= mm)
          for (int r = 0; r < m.n; ++r) bm[r] += t * cg[p - mm][al][r];
      }
    Series pr = pair_eta(m, am, bm);
    f0 += (mm % 2) ? -pr * rat(1, 2) : pr * rat(1, 2);
  }
  return f0;
}

CanonicalFrame canonical_frame(const FrobeniusModel& m,
                               const std::vector<Rat>& basepoint, int order) {
  if (m.n > 2)
    throw std::invalid_argument("canonical frame is limited to n <= 2");
  if (static_cast<int>(basepoint.size()) != m.n)
    throw std::invalid_argument("basepoint must list n coordinates");
  for (int j = m.n; j < m.vars->n(); ++j)
    if (basepoint[m.vars->v[j].tied_to] != 0)
      throw std::invalid_argument(
          "basepoint must vanish along directions carrying a marker");

  const int big = order + 3;
  if (m.cutoff() < big)
    throw std::invalid_argument("canonical frame at this order needs cutoff >= order + 3");

  CanonicalFrame fr;
  fr.n = m.n;
  fr.unit = m.unit();
  fr.eta = m.eta();
  std::vector<std::pair<std::string, int>> spec;
  for (int a = 0; a < m.n; ++a) spec.emplace_back(m.vars->v[a].name, -1);
  fr.vars = series::make_vars(spec);

  // eliminate markers: marker -> exp(tied variable), flat -> shifted variable
  std::vector<Series> im;
  for (int a = 0; a < m.n; ++a)
    im.push_back(Series::variable(fr.vars, big, a) +
                 Series::constant(fr.vars, big, basepoint[a]));
  for (int j = m.n; j < m.vars->n(); ++j)
    im.push_back(series::exp_series(Series::variable(fr.vars, big,
                                                     m.vars->v[j].tied_to)));
  EvalMap demark(fr.vars, big, std::move(im), true);
  Series f = demark(m.potential);

  // structure constants and the multiplication by E in the shifted frame
  std::vector<Series> d1(m.n);
  for (int a = 0; a < m.n; ++a) d1[a] = f.derivative(a);
  std::vector<Series> clo(static_cast<std::size_t>(m.n) * m.n * m.n);
  for (int a = 0; a < m.n; ++a)
    for (int b = 0; b < m.n; ++b)
      for (int g = 0; g < m.n; ++g)
        clo[(a * m.n + b) * m.n + g] = d1[a].derivative(b).derivative(g).truncated(order);
  auto up = [&](int a, int b, int g) {
    Series s(fr.vars, order);
    for (int e = 0; e < m.n; ++e) {
      const Rat& w = m.eta_inv().at(g, e);
      if (w != 0) s += clo[(a * m.n + b) * m.n + e] * w;
    }
    return s;
  };

  std::vector<Series> ecomp(m.n);
  for (int a = 0; a < m.n; ++a)
    ecomp[a] = (Series::variable(fr.vars, order, a) +
                Series::constant(fr.vars, order, basepoint[a])) *
                   m.euler_degrees[a] +
               Series::constant(fr.vars, order, m.euler_constants[a]);

  fr.ucal.assign(static_cast<std::size_t>(m.n) * m.n, Series());
  for (int a = 0; a < m.n; ++a)
    for (int b = 0; b < m.n; ++b) {
      Series s(fr.vars, order);
      for (int e = 0; e < m.n; ++e) s += ecomp[e] * up(e, b, a);
      fr.ucal[a * m.n + b] = s;
    }

  fr.hvec.resize(m.n);
  for (int a = 0; a < m.n; ++a) {
    Series s(fr.vars, order);
    for (int nu = 0; nu < m.n; ++nu) s += up(nu, a, nu);
    fr.hvec[a] = s;
  }

  if (m.n == 1) {
    fr.u = {fr.ucal[0]};
    fr.f = {Series::constant(fr.vars, order, Rat(1))};
    fr.hsq = {Series::constant(fr.vars, order, m.eta().at(0, 0))};
    return fr;
  }

  Series tr = fr.ucal[0] + fr.ucal[3];
  Series det = fr.ucal[0] * fr.ucal[3] - fr.ucal[1] * fr.ucal[2];
  Series disc = tr * tr - det * 4;
  if (disc.constant_term() == 0)
    throw std::domain_error("model is not semisimple at the basepoint");
  Rat root;
  if (!series::rat_is_square(disc.constant_term(), root))
    throw std::domain_error(
        "canonical coordinates leave the rational series ring at this basepoint");
  Series s = series::sqrt_unit(disc);

  fr.u = {(tr - s) * rat(1, 2), (tr + s) * rat(1, 2)};
  fr.f.assign(4, Series());
  const int e = m.unit();
  for (int i = 0; i < 2; ++i) {
    // (U - u_j) applied to the unit column, scaled by 1/(u_i - u_j)
    Series den = (i == 0) ? -s : s;
    for (int a = 0; a < m.n; ++a) {
      Series num = fr.ucal[a * m.n + e];
      if (a == e) num -= fr.u[1 - i];
      fr.f[i * m.n + a] = series::divide_unit(num, den);
    }
  }
  fr.hsq.resize(2);
  for (int i = 0; i < 2; ++i) {
    Series s2(fr.vars, order);
    for (int a = 0; a < m.n; ++a)
      for (int b = 0; b < m.n; ++b) {
        const Rat& w = m.eta().at(a, b);
        if (w != 0) s2 += fr.f[i * m.n + a] * fr.f[i * m.n + b] * w;
      }
    fr.hsq[i] = s2;
    if (s2.constant_term() == 0)
      throw std::domain_error("degenerate normalization at the basepoint");
  }

  // partition of unity and idempotency
  for (int a = 0; a < m.n; ++a) {
    Series sum = fr.f[a] + fr.f[m.n + a];
    Series want = Series::constant(fr.vars, order, a == e ? Rat(1) : Rat(0));
    check_zero(sum - want, sum.certified, "idempotents do not sum to the unit");
  }
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a < m.n; ++a) {
      Series prod(fr.vars, order);
      for (int b = 0; b < m.n; ++b)
        for (int g = 0; g < m.n; ++g)
          prod += up(b, g, a) * fr.f[i * m.n + b] * fr.f[i * m.n + g];
      Series res = prod - fr.f[i * m.n + a];
      check_zero(res, res.certified, "frame vectors are not idempotent");
    }
  return fr;
}

Series CanonicalFrame::psi_pair(int i, int a, int b) const {
  Series num(vars, u[0].cutoff);
  for (int r = 0; r < n; ++r) {
    const Rat& w = eta.at(a, r);
    if (w != 0) {
      for (int c = 0; c < n; ++c) {
        const Rat& w2 = eta.at(b, c);
        if (w2 != 0) num += f[i * n + r] * f[i * n + c] * (w * w2);
      }
    }
  }
  return series::divide_unit(num, hsq[i]);
}

Series CanonicalFrame::psi_ratio(int i, int a) const {
  Series num(vars, u[0].cutoff);
  for (int r = 0; r < n; ++r) {
    const Rat& w = eta.at(a, r);
    if (w != 0) num += f[i * n + r] * w;
  }
  return series::divide_unit(num, hsq[i]);
}

namespace {

Series g_quantum_p1xp1(const FrobeniusModel& m, int order) {
  Series g(m.vars, order);
  g.add_term(series::mono_var(m.vars->n(), 1), rat(-1, 12));
  g.add_term(series::mono_var(m.vars->n(), 2), rat(-1, 12));
  int kl_max = order / 3;
  if (kl_max >= 1) {
    gw::P1P1Table tab = gw::p1p1_elliptic(kl_max);
    for (const auto& [kl, count] : tab.n1) {
      if (count == 0) continue;
      int k = kl.first, l = kl.second, s2 = k + l;
      if (3 * s2 > order) continue;
      Mono mm = mono_one(m.vars->n());
      mm[3] = static_cast<char>(2 * s2);
      mm[4] = static_cast<char>(k);
      mm[5] = static_cast<char>(l);
      g.add_term(mm, Rat(count) / factorial(2 * s2));
    }
  }
  return g;
}

Series g_quantum_cp3(const FrobeniusModel& m, int order) {
  Series g(m.vars, order);
  g.add_term(series::mono_var(m.vars->n(), 1), rat(-1, 4));
  int k_max = order / 3;
  if (k_max >= 1) {
    gw::Cp3Table tab = gw::cp3_elliptic(k_max);
    for (const auto& row : tab.rows) {
      if (row.n1 == 0 || 5 * row.degree - row.points > order) continue;
      Mono mm = mono_one(m.vars->n());
      mm[2] = static_cast<char>(row.lines);
      mm[3] = static_cast<char>(row.points);
      mm[4] = static_cast<char>(row.degree);
      g.add_term(mm, row.n1 / (factorial(row.lines) * factorial(row.points)));
    }
  }
  return g;
}

}  // namespace

Series g_function(const FrobeniusModel& m, int order) {
  StructureConstants sc = structure_constants(m, order);
  const int e = m.unit();
  Rat trmu2(0);
  for (const Rat& mu : m.monodromy.mu) trmu2 += mu * mu;
  const Rat euler_rhs = Rat(m.n) * m.monodromy.charge_d / 48 - trmu2 / 4;

  std::vector<Series> ecomp(m.n);
  for (int a = 0; a < m.n; ++a)
    ecomp[a] = Series::variable(m.vars, order, a) * m.euler_degrees[a] +
               Series::constant(m.vars, order, m.euler_constants[a]);

  Series g(m.vars, order);
  if (m.n == 1) {
    // flat: G = 0
  } else if (m.n == 2) {
    int o = 1 - e;
    if (m.euler_constants[o] == 0)
      throw std::invalid_argument("G-function construction needs an invertible E-row");
    std::vector<Series> gv(m.n, Series(m.vars, order));
    gv[o] = series::inverse_unit(ecomp[o]) * euler_rhs;
    g = integrate_gradient(m.vars, order, gv);
  } else if (m.id == "p1xp1") {
    g = g_quantum_p1xp1(m, order);
  } else if (m.id == "cp3") {
    g = g_quantum_cp3(m, order);
  } else {
    throw std::invalid_argument("no G-function construction for model " + m.id);
  }

  // verify the full derivative system on the result
  std::vector<Series> dg(m.n);
  for (int a = 0; a < m.n; ++a) dg[a] = g.derivative(a);
  const int window = std::min(g.certified, order) - 1;

  check_zero(dg[e], window, "G-function fails flatness along the unit for " + m.id);

  Series row1(m.vars, order);
  for (int a = 0; a < m.n; ++a) row1 += ecomp[a] * dg[a];
  row1 -= Series::constant(m.vars, order, euler_rhs);
  check_zero(row1, window, "G-function fails the Euler equation for " + m.id);

  if (m.n > 2) {
    SMat ucal(static_cast<std::size_t>(m.n) * m.n);
    for (int a = 0; a < m.n; ++a)
      for (int b = 0; b < m.n; ++b) {
        Series s(m.vars, order);
        for (int e2 = 0; e2 < m.n; ++e2) s += ecomp[e2] * sc.up(e2, b, a);
        ucal[a * m.n + b] = s;
      }
    std::vector<SMat> upow = {SMat()};
    upow[0].assign(static_cast<std::size_t>(m.n) * m.n, Series());
    for (int a = 0; a < m.n; ++a)
      for (int b = 0; b < m.n; ++b)
        upow[0][a * m.n + b] =
            Series::constant(m.vars, order, a == b ? Rat(1) : Rat(0));
    for (int k = 1; k <= m.n - 2; ++k)
      upow.push_back(smat_mul(m.n, upow.back(), ucal));

    std::vector<Series> hv(m.n);
    for (int a = 0; a < m.n; ++a) {
      Series s(m.vars, order);
      for (int nu = 0; nu < m.n; ++nu) s += sc.up(nu, a, nu);
      hv[a] = s;
    }

    for (int k = 2; k <= m.n - 1; ++k) {
      // lhs: derivative of G along E^k = U^{k-1} E
      std::vector<Series> ek = smat_vec(m.n, upow[k - 1], ecomp);
      Series lhs(m.vars, order);
      for (int a = 0; a < m.n; ++a) lhs += ek[a] * dg[a];

      // -1/4 tr(mu U^j mu U^{k-1-j}) summed over j
      Series t1(m.vars, order);
      for (int j = 0; j <= k - 1; ++j) {
        SMat mm = smat_mul(m.n, smat_scale_rows(m.n, m.monodromy.mu, upow[j]),
                           smat_scale_rows(m.n, m.monodromy.mu, upow[k - 1 - j]));
        t1 += smat_trace(m.n, mm);
      }

      // -1/24 <(sum_j U^j mu U^{k-2-j}) E - d/2 U^{k-2} E, H>
      std::vector<Series> vec(m.n, Series(m.vars, order));
      for (int j = 0; j <= k - 2; ++j) {
        SMat mm = smat_mul(m.n, upow[j],
                           smat_scale_rows(m.n, m.monodromy.mu, upow[k - 2 - j]));
        std::vector<Series> w = smat_vec(m.n, mm, ecomp);
        for (int a = 0; a < m.n; ++a) vec[a] += w[a];
      }
      std::vector<Series> w = smat_vec(m.n, upow[k - 2], ecomp);
      for (int a = 0; a < m.n; ++a)
        vec[a] -= w[a] * (m.monodromy.charge_d / 2);

      Series rhs(m.vars, order);
      for (int a = 0; a < m.n; ++a) rhs += vec[a] * hv[a];
      rhs = rhs * rat(-1, 24) - t1 * rat(1, 4);

      check_zero(lhs - rhs, window,
                 "G-function fails the E^" + std::to_string(k) +
                     " equation for " + m.id);
    }
  }
  return g;
}

Series genus1_density(const FrobeniusModel& m, int order) {
  StructureConstants sc = structure_constants(m, order);
  Series g = g_function(m, order);

  std::vector<std::pair<std::string, int>> spec;
  for (const auto& v : m.vars->v) spec.emplace_back(v.name, v.tied_to);
  for (int a = 0; a < m.n; ++a)
    spec.emplace_back("x" + std::to_string(a + 1), -1);
  VarSetPtr jet = series::make_vars(spec);
  const int nsrc = m.vars->n();

  std::vector<Series> tx(m.n);
  for (int a = 0; a < m.n; ++a) {
    tx[a] = Series::variable(jet, order, nsrc + a);
    if (a == m.unit()) tx[a] += Series::constant(jet, order, Rat(1));
  }

  SMat mat(static_cast<std::size_t>(m.n) * m.n);
  for (int a = 0; a < m.n; ++a)
    for (int b = 0; b < m.n; ++b) {
      Series s(jet, order);
      for (int g2 = 0; g2 < m.n; ++g2)
        s += reseat(sc.up(b, g2, a), jet, order) * tx[g2];
      mat[a * m.n + b] = s;
    }

  return reseat(g, jet, order) +
         series::log_unit(det_smat(m.n, mat)) * rat(1, 24);
}

Series genus1_free_energy(const FrobeniusModel& m, const ThetaTable& th,
                          const Genus0& g0) {
  Series den = genus1_density(m, g0.order);

  std::vector<Series> im = g0.t0;
  for (Series& s : marker_images(m, g0)) im.push_back(std::move(s));
  const int xdir = g0.tindex(m.unit(), 0);
  for (int a = 0; a < m.n; ++a) {
    Series s = g0.t0[a].derivative(xdir);
    if (a == m.unit()) s -= Series::constant(g0.tvars, g0.order, Rat(1));
    im.push_back(s);
  }
  EvalMap ev(g0.tvars, g0.order, std::move(im));
  return ev(den);
}

}  // namespace virfrob
