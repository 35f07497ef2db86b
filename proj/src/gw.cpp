#include "virfrob/gw.hpp"

#include <json.hpp>

#include <sstream>
#include <stdexcept>

#include "virfrob/series.hpp"

namespace virfrob::gw {

namespace {

using json = nlohmann::ordered_json;

// Sparse bidegree tables: coefficients of Q1^k Q2^l (p1xp1, Qi = exp(z_i))
// or of z1^l Q^k (cp3, Q = exp(z2)).
using Table = std::map<Index, Rat>;

Rat tget(const Table& t, int k, int l) {
  auto it = t.find({k, l});
  return it == t.end() ? Rat(0) : it->second;
}

void tadd(Table& t, int k, int l, const Rat& c) {
  if (c == 0) return;
  auto [it, fresh] = t.emplace(Index{k, l}, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) t.erase(it);
  }
}

Table operator+(const Table& a, const Table& b) {
  Table r = a;
  for (const auto& [kl, c] : b) tadd(r, kl.first, kl.second, c);
  return r;
}

Table operator-(const Table& a, const Table& b) {
  Table r = a;
  for (const auto& [kl, c] : b) tadd(r, kl.first, kl.second, -c);
  return r;
}

Table operator*(const Rat& s, const Table& a) {
  Table r;
  if (s == 0) return r;
  for (const auto& [kl, c] : a) r[kl] = s * c;
  return r;
}

// Product truncated by a sector predicate (first index for cp3, total
// degree for p1xp1).
template <class Keep>
Table tmul(const Table& a, const Table& b, Keep keep) {
  Table r;
  for (const auto& [ia, ca] : a)
    for (const auto& [ib, cb] : b) {
      int k = ia.first + ib.first, l = ia.second + ib.second;
      if (!keep(k, l)) continue;
      tadd(r, k, l, ca * cb);
    }
  return r;
}

// Coefficient of sector (k,l) in a*b without forming the whole product.
Rat conv_at(const Table& a, const Table& b, int k, int l) {
  Rat acc = 0;
  for (const auto& [ia, ca] : a) {
    int dk = k - ia.first, dl = l - ia.second;
    if (dk < 0 || dl < 0) continue;
    Rat cb = tget(b, dk, dl);
    if (cb != 0) acc += ca * cb;
  }
  return acc;
}

// ---------------------------------------------------------------------
// P1 x P1
// ---------------------------------------------------------------------

// The six coefficient tables of the genus-one system: the two brackets of
// the middle equation and its right-hand side, then the same for the long
// equation.  All are fixed polynomials in the derivatives f_i = df/dz_i of
// the rational-count generating function.
struct P1Brackets {
  int bound = 0;
  Table f, br_a, br_b, rhs_b, br_c2, br_c3, rhs_c;
};

P1Brackets p1_brackets(const std::map<Index, Int>& n0, int bound) {
  P1Brackets s;
  s.bound = bound;
  for (const auto& [kl, v] : n0) {
    if (v == 0) continue;
    int m = kl.first + kl.second;
    s.f[kl] = Rat(v) / Rat(factorial(2 * m - 1));
  }
  auto d1 = [](const Table& a) {
    Table r;
    for (const auto& [kl, c] : a)
      if (kl.first) r[kl] = c * kl.first;
    return r;
  };
  auto d2 = [](const Table& a) {
    Table r;
    for (const auto& [kl, c] : a)
      if (kl.second) r[kl] = c * kl.second;
    return r;
  };
  auto keep = [bound](int k, int l) { return k + l <= bound; };
  auto mul = [&](const Table& a, const Table& b) { return tmul(a, b, keep); };

  Table f1 = d1(s.f), f2 = d2(s.f);
  Table f11 = d1(f1), f12 = d2(f1), f22 = d2(f2);
  Table f112 = d2(f11), f122 = d2(f12);

  s.br_a = f2 - f22 - f12;
  s.br_b = f1 - f12 - f11;
  s.rhs_b = Rat(1, 12) * (f122 + f112);

  s.br_c2 = Rat(4) * f2 - Rat(12) * f22 - Rat(4) * f1 - mul(f22, f1) -
            Rat(8) * f12 - mul(f2, f12) + Rat(2) * mul(f22, f12) +
            mul(f12, f12) + Rat(4) * f11 + mul(f22, f11);
  s.br_c3 = Rat(-4) * f2 + Rat(4) * f22 + Rat(4) * f1 - Rat(8) * f12 -
            mul(f1, f12) + mul(f12, f12) - Rat(12) * f11 - mul(f2, f11) +
            mul(f22, f11) + Rat(2) * mul(f12, f11);
  s.rhs_c = Rat(1, 3) * (Rat(2) * f22 + Rat(4) * f12 + Rat(2) * f11) -
            Rat(1, 12) * (mul(f12, f122) + mul(f122, f11) + mul(f22, f112) +
                          mul(f12, f112));
  return s;
}

std::string sector_str(int k, int l) {
  std::ostringstream os;
  os << "(" << k << "," << l << ")";
  return os.str();
}

}  // namespace

P1P1Table p1p1_rational(int max_total) {
  if (max_total < 1)
    throw std::invalid_argument("p1p1_rational needs max_total >= 1");
  P1P1Table t;
  t.max_total = max_total;
  auto& n0 = t.n0;
  auto get = [&](int k, int l) -> Int {
    auto it = n0.find({k, l});
    return it == n0.end() ? Int(0) : it->second;
  };
  n0[{1, 0}] = 1;
  n0[{0, 1}] = 1;
  for (int m = 2; m <= max_total; ++m)
    for (int k = 0; k <= m; ++k) {
      int l = m - k;
      if (k == 0 || l == 0) {
        n0[{k, l}] = 0;
        continue;
      }
      Int acc = 0;
      for (int k1 = 0; k1 <= k; ++k1)
        for (int l1 = 0; l1 <= l; ++l1) {
          int k2 = k - k1, l2 = l - l1;
          Int na = get(k1, l1);
          if (na == 0) continue;
          Int nb = get(k2, l2);
          if (nb == 0) continue;
          Int pre = Int(k1) * l2 + Int(k2) * l1;
          if (pre == 0 || l2 == 0) continue;
          Int bracket = Int(k1) * binomial(2 * m - 4, 2 * (k1 + l1) - 2) -
                        Int(k2) * binomial(2 * m - 4, 2 * (k1 + l1) - 3);
          acc += pre * l2 * bracket * na * nb;
        }
      n0[{k, l}] = acc;
    }
  for (const auto& [kl, v] : n0)
    if (v != get(kl.second, kl.first))
      throw std::runtime_error("rational table broke k<->l symmetry at " +
                               sector_str(kl.first, kl.second));
  return t;
}

P1P1Table p1p1_elliptic(int max_total) {
  P1P1Table t = p1p1_rational(max_total);
  const int bound = max_total;
  P1Brackets s = p1_brackets(t.n0, bound);
  auto keep = [bound](int k, int l) { return k + l <= bound; };

  // Gradient tables: g2/g3 hold dG/dt2 and dG/dt3, w holds t4*dG/dt4.
  // Only the first two have the constant -1/12 from the linear part of G.
  Table g2, g3, w;
  g2[{0, 0}] = Rat(-1, 12);
  g3[{0, 0}] = Rat(-1, 12);
  std::map<Index, Rat> coef;
  for (int m = 1; m <= bound; ++m)
    for (int k = 0; k <= m; ++k) {
      int l = m - k;
      Rat known = conv_at(s.br_a, g2, k, l) + conv_at(s.br_b, g3, k, l);
      Rat wkl = (tget(s.rhs_b, k, l) - known) / 4;
      Rat c = wkl / Rat(2 * m);
      if ((k == 0 || l == 0) && c != 0)
        throw std::runtime_error(
            "genus-one solve put weight on boundary sector " +
            sector_str(k, l));
      coef[{k, l}] = c;
      tadd(g2, k, l, Rat(k) * c);
      tadd(g3, k, l, Rat(l) * c);
      tadd(w, k, l, wkl);
    }

  // The long equation was not used in the solve; it must be satisfied
  // identically, sector by sector.
  Table res = tmul(s.br_c2, g2, keep) + tmul(s.br_c3, g3, keep) - s.rhs_c;
  if (!res.empty()) {
    auto [kl, r] = *res.begin();
    throw std::runtime_error("genus-one system inconsistent at " +
                             sector_str(kl.first, kl.second) + ": residual " +
                             rat_str(r));
  }

  for (const auto& [kl, c] : coef) {
    auto [k, l] = kl;
    Rat n1 = c * Rat(factorial(2 * (k + l)));
    if (n1.get_den() != 1)
      throw std::runtime_error("non-integer elliptic count at " +
                               sector_str(k, l) + ": " + rat_str(n1));
    t.n1[kl] = n1.get_num();
  }
  for (const auto& [kl, v] : t.n1)
    if (v != t.n1.at({kl.second, kl.first}))
      throw std::runtime_error("elliptic table broke k<->l symmetry at " +
                               sector_str(kl.first, kl.second));
  t.has_elliptic = true;
  return t;
}

SectorSystem p1p1_g_sector_system(const P1P1Table& t, int k, int l) {
  if (!t.has_elliptic)
    throw std::invalid_argument("sector system needs an elliptic table");
  if (k < 1 || l < 1 || k + l > t.max_total)
    throw std::invalid_argument("sector system needs k,l >= 1 within range");
  P1Brackets s = p1_brackets(t.n0, t.max_total);
  Table g2, g3;
  g2[{0, 0}] = Rat(-1, 12);
  g3[{0, 0}] = Rat(-1, 12);
  for (const auto& [kl, v] : t.n1) {
    Rat c = Rat(v) / Rat(factorial(2 * (kl.first + kl.second)));
    tadd(g2, kl.first, kl.second, Rat(kl.first) * c);
    tadd(g3, kl.first, kl.second, Rat(kl.second) * c);
  }
  Rat known = conv_at(s.br_a, g2, k, l) + conv_at(s.br_b, g3, k, l);
  SectorSystem sys;
  sys.a = QMat(3, 3);
  sys.b.assign(3, Rat(0));
  sys.a.at(0, 0) = 2;
  sys.a.at(0, 1) = 2;
  sys.a.at(0, 2) = -1;
  sys.a.at(1, 2) = 4;
  sys.b[1] = tget(s.rhs_b, k, l) - known;
  sys.a.at(2, 0) = l;
  sys.a.at(2, 1) = -k;
  return sys;
}

// ---------------------------------------------------------------------
// CP3
// ---------------------------------------------------------------------

namespace {

using series::Series;

constexpr int kT1 = 0, kT2 = 1, kT3 = 2, kT4 = 3, kQ = 4;

// Third-derivative tensor of a potential, symmetric in all three slots.
struct CTensor {
  std::vector<Series> c;  // index a*16 + b*4 + g
  const Series& at(int a, int b, int g) const { return c[16 * a + 4 * b + g]; }
};

CTensor ctensor(const Series& f) {
  CTensor r;
  r.c.reserve(64);
  std::vector<Series> first, second;
  for (int a = 0; a < 4; ++a) first.push_back(f.derivative(a));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) second.push_back(first[a].derivative(b));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int g = 0; g < 4; ++g) r.c.push_back(second[4 * a + b].derivative(g));
  return r;
}

// cross(A,B)_{ab,gd} = sum_e c_{abe}(A) eta^{ee'} c_{e'gd}(B) with the
// antidiagonal pairing coming from the classical cubic part.
Series wdvv_cross(const CTensor& A, const CTensor& B, int a, int b, int g,
                  int d) {
  Series acc = A.at(a, b, 0) * B.at(3, g, d);
  for (int e = 1; e < 4; ++e) acc += A.at(a, b, e) * B.at(3 - e, g, d);
  return acc;
}

// Coefficients of Q-degree k monomials.  One equation per tensor component
// and monomial, so the key carries both.
using RowKey = std::pair<int, series::Mono>;

void collect_qk(const Series& s, int comp, int k, int slot, int width,
                std::map<RowKey, std::vector<Rat>>& rows) {
  for (const auto& [m, c] : s.t) {
    if (static_cast<unsigned char>(m[kQ]) != k) continue;
    auto it = rows.emplace(RowKey{comp, m}, std::vector<Rat>(width, Rat(0)))
                  .first;
    it->second[slot] += c;
  }
}

}  // namespace

const Cp3Row* Cp3Table::find(int degree, int points) const {
  for (const auto& r : rows)
    if (r.degree == degree && r.points == points) return &r;
  return nullptr;
}

Cp3Table cp3_rational(int max_degree) {
  if (max_degree < 1)
    throw std::invalid_argument("cp3_rational needs max_degree >= 1");
  const int K = max_degree;
  const int cut = 5 * K + 1;
  auto vs = series::make_vars(
      {{"t1", -1}, {"t2", -1}, {"t3", -1}, {"t4", -1}, {"Q", kT2}});
  auto var = [&](int i) { return Series::variable(vs, cut, i); };

  Series f = var(kT1) * var(kT1) * var(kT4) * Rat(1, 2) +
             var(kT1) * var(kT2) * var(kT3) +
             var(kT2) * var(kT2) * var(kT2) * Rat(1, 6);

  Cp3Table t;
  t.max_degree = K;
  for (int k = 1; k <= K; ++k) {
    // Ansatz slots at degree k: monomials t4^l t3^(4k-2l) Q^k, one unknown
    // count per number of point conditions l.
    const int width = 2 * k + 1;
    std::vector<Series> basis;
    for (int l = 0; l <= 2 * k; ++l) {
      Series b(vs, cut);
      series::Mono m = series::mono_one(5);
      m[kT4] = static_cast<char>(l);
      m[kT3] = static_cast<char>(4 * k - 2 * l);
      m[kQ] = static_cast<char>(k);
      b.set_term(m, Rat(1) / Rat(factorial(4 * k - 2 * l) * factorial(l)));
      basis.push_back(b);
    }

    CTensor cf = ctensor(f);
    std::vector<CTensor> cb;
    for (const auto& b : basis) cb.push_back(ctensor(b));

    // Associativity residual, linearised in the unknown degree-k part:
    // slot `width` keeps the part quadratic in the known potential.
    std::map<RowKey, std::vector<Rat>> rows;
    for (int a = 0; a < 4; ++a)
      for (int g = a + 1; g < 4; ++g)
        for (int b = 0; b < 4; ++b)
          for (int d = 0; d < 4; ++d) {
            int comp = ((a * 4 + b) * 4 + g) * 4 + d;
            Series known =
                wdvv_cross(cf, cf, a, b, g, d) - wdvv_cross(cf, cf, g, b, a, d);
            collect_qk(known, comp, k, width, width + 1, rows);
            for (int l = 0; l <= 2 * k; ++l) {
              Series lin = wdvv_cross(cf, cb[l], a, b, g, d) +
                           wdvv_cross(cb[l], cf, a, b, g, d) -
                           wdvv_cross(cf, cb[l], g, b, a, d) -
                           wdvv_cross(cb[l], cf, g, b, a, d);
              collect_qk(lin, comp, k, l, width + 1, rows);
            }
          }

    // At degree one the residual is homogeneous (rescaling the exponential
    // is invisible to associativity), so the single enumerative seed is
    // imposed here: one line passes through two generic points.
    const int extra = k == 1 ? 1 : 0;
    QMat A(static_cast<int>(rows.size()) + extra, width);
    std::vector<Rat> rhs(rows.size() + extra);
    int r = 0;
    if (extra) {
      A.at(0, 2) = 1;
      rhs[0] = 1;
      r = 1;
    }
    for (const auto& [m, row] : rows) {
      for (int l = 0; l < width; ++l) A.at(r, l) = row[l];
      rhs[r] = -row[width];
      ++r;
    }
    auto sol = solve_linear_system(A, rhs);
    if (!sol.consistent)
      throw std::runtime_error(
          "associativity system inconsistent at degree " + std::to_string(k));
    if (!sol.unique)
      throw std::runtime_error(
          "associativity system underdetermined at degree " +
          std::to_string(k));
    for (int l = 0; l <= 2 * k; ++l) {
      if (sol.x[l].get_den() != 1)
        throw std::runtime_error("non-integer rational count at degree " +
                                 std::to_string(k) + ", points " +
                                 std::to_string(l) + ": " + rat_str(sol.x[l]));
      Cp3Row row;
      row.degree = k;
      row.points = l;
      row.lines = 4 * k - 2 * l;
      row.n0 = sol.x[l].get_num();
      t.rows.push_back(row);
      f += basis[l] * sol.x[l];
    }
  }
  return t;
}

Cp3Table cp3_elliptic(int max_degree) {
  Cp3Table t = cp3_rational(max_degree);
  const int K = max_degree;
  auto keep = [K](int k, int) { return k <= K; };
  auto mul = [&](const Table& a, const Table& b) { return tmul(a, b, keep); };

  // Sector tables over z1^l Q^k.  d1 = d/dz1, d2 = d/dz2, z1 shifts l.
  Table f;
  for (const auto& r : t.rows)
    if (r.n0 != 0)
      f[{r.degree, r.points}] =
          Rat(r.n0) / Rat(factorial(r.lines) * factorial(r.points));
  auto d1 = [](const Table& a) {
    Table r;
    for (const auto& [kl, c] : a)
      if (kl.second) r[{kl.first, kl.second - 1}] = c * kl.second;
    return r;
  };
  auto d2 = [](const Table& a) {
    Table r;
    for (const auto& [kl, c] : a)
      if (kl.first) r[kl] = c * kl.first;
    return r;
  };
  auto z1 = [](const Table& a, int j) {
    Table r;
    for (const auto& [kl, c] : a) r[{kl.first, kl.second + j}] = c;
    return r;
  };
  Table f1 = d1(f), f2 = d2(f);
  Table f11 = d1(f1), f12 = d2(f1), f22 = d2(f2);
  Table f222 = d2(f22), f112 = d2(f11), f122 = d2(f12);

  Table one;
  one[{0, 0}] = 1;

  // Brackets of the two nontrivial equations, acting on
  // (G2, h3, g1) = (dG/dt2, t3*dG/dt3, t3^2*dG/dt4).
  Table b_g2 = Rat(4) * f22 - Rat(2) * f2 - z1(f11, 2);
  Table b_h3 = Rat(-4) * one + f22 + Rat(1, 2) * z1(f12, 1);
  Table rhs_b = Rat(1, 6) * (f22 - Rat(2) * f222) + Rat(1, 12) * z1(f112, 2);

  Table c_g2 =
      Rat(16) * f2 - Rat(64) * f22 - Rat(8) * mul(f2, f22) +
      Rat(24) * mul(f22, f22) - Rat(9) * f1 - Rat(24) * z1(f1, 1) +
      Rat(6) * z1(mul(f22, f1), 1) + Rat(14) * f12 + Rat(64) * z1(f12, 1) -
      Rat(12) * z1(mul(f22, f12), 1) + Rat(3) * z1(mul(f1, f12), 2) -
      Rat(8) * z1(mul(f12, f12), 2) +
      mul(Rat(-5) * z1(one, 1) - Rat(16) * z1(one, 2) + Rat(2) * z1(f22, 2) +
              Rat(3) * z1(f12, 3),
          f11);
  Table c_h3 = Rat(1, 4) * (Rat(-16) * f2 + Rat(8) * mul(f22, f22) +
                            Rat(3) * f1 + Rat(6) * f12 + Rat(16) * z1(f12, 1) -
                            Rat(2) * z1(mul(f12, f12), 2) -
                            mul(z1(one, 1) + Rat(8) * z1(one, 2), f11));
  Table c_g1 = Rat(-8) * one + f2 + Rat(3, 2) * z1(f1, 1);
  Table rhs_c =
      Rat(1, 24) *
      (Rat(-12) * f2 + Rat(72) * f22 + Rat(16) * mul(f22, f22) -
       Rat(96) * f222 - Rat(12) * mul(f2, f222) + Rat(16) * mul(f22, f222) +
       Rat(24) * f1 + Rat(18) * z1(f1, 1) + Rat(12) * z1(mul(f222, f1), 1) +
       Rat(16) * f12 - Rat(84) * z1(f12, 1) - Rat(12) * z1(mul(f22, f12), 1) -
       Rat(28) * z1(mul(f222, f12), 1) + Rat(96) * z1(f122, 1) +
       Rat(6) * z1(mul(f2, f122), 1) - Rat(12) * z1(mul(f22, f122), 1) -
       Rat(6) * z1(mul(f1, f122), 2) + Rat(20) * z1(mul(f12, f122), 2) +
       Rat(3) * z1(f11, 1) + Rat(12) * z1(f11, 2) +
       Rat(6) * z1(mul(f222, f11), 2) - Rat(3) * z1(mul(f122, f11), 3) -
       mul(Rat(24) * z1(one, 2) - Rat(2) * z1(f22, 2) + Rat(3) * z1(f12, 3),
           f112));

  // Solve for the genus-one coefficients degree by degree.  Only the
  // constants -4 and -8 in b_h3 and c_g1 touch the current degree, so each
  // equation row is linear in the unknown slots with everything else known.
  Table g;  // exponential part of G
  std::map<Index, Rat> coef;
  for (int k = 1; k <= K; ++k) {
    Table g1 = d1(g), g2 = d2(g);
    Table big_g2 = Rat(-1, 4) * one + g2;
    Table h3 = Rat(-2) * z1(g1, 1) + Rat(4) * g2;
    Table lhs_b = mul(b_g2, big_g2) + mul(b_h3, h3) + Rat(2) * g1;
    Table lhs_c = mul(c_g2, big_g2) + mul(c_h3, h3) + mul(c_g1, g1);

    const int width = 2 * k + 1;
    std::vector<std::vector<Rat>> arows;
    std::vector<Rat> rhs;
    for (int l = 0; l <= 2 * k + 6; ++l) {
      std::vector<Rat> row(width, Rat(0));
      if (l <= 2 * k) row[l] = Rat(-4) * Rat(4 * k - 2 * l);
      if (l + 1 <= 2 * k) row[l + 1] = Rat(2 * (l + 1));
      Rat b = tget(rhs_b, k, l) - tget(lhs_b, k, l);
      bool live = b != 0;
      for (const auto& c : row) live = live || c != 0;
      if (live) {
        arows.push_back(row);
        rhs.push_back(b);
      }
      std::vector<Rat> crow(width, Rat(0));
      if (l + 1 <= 2 * k) crow[l + 1] = Rat(-8) * Rat(l + 1);
      Rat cb = tget(rhs_c, k, l) - tget(lhs_c, k, l);
      live = cb != 0;
      for (const auto& c : crow) live = live || c != 0;
      if (live) {
        arows.push_back(crow);
        rhs.push_back(cb);
      }
    }
    QMat A(static_cast<int>(arows.size()), width);
    for (int r = 0; r < A.rows(); ++r)
      for (int c = 0; c < width; ++c) A.at(r, c) = arows[r][c];
    auto sol = solve_linear_system(A, rhs);
    if (!sol.consistent)
      throw std::runtime_error("genus-one system inconsistent at degree " +
                               std::to_string(k));
    if (!sol.unique)
      throw std::runtime_error("genus-one system underdetermined at degree " +
                               std::to_string(k));
    for (int l = 0; l <= 2 * k; ++l) {
      coef[{k, l}] = sol.x[l];
      tadd(g, k, l, sol.x[l]);
    }
  }

  // Full residual of both equations over every computed sector, and the
  // first equation of the system, which must reduce to the constant -1.
  {
    Table g1 = d1(g), g2 = d2(g);
    Table big_g2 = Rat(-1, 4) * one + g2;
    Table h3 = Rat(-2) * z1(g1, 1) + Rat(4) * g2;
    Table res_a = Rat(4) * big_g2 - h3 - Rat(2) * z1(g1, 1);
    tadd(res_a, 0, 0, Rat(1));
    Table res_b = mul(b_g2, big_g2) + mul(b_h3, h3) + Rat(2) * g1 - rhs_b;
    Table res_c = mul(c_g2, big_g2) + mul(c_h3, h3) + mul(c_g1, g1) - rhs_c;
    for (const Table* res : {&res_a, &res_b, &res_c})
      if (!res->empty()) {
        auto [kl, r] = *res->begin();
        throw std::runtime_error("genus-one residual at degree " +
                                 std::to_string(kl.first) + ", z1 power " +
                                 std::to_string(kl.second) + ": " +
                                 rat_str(r));
      }
    t.g2_constant = tget(big_g2, 0, 0);
  }

  for (auto& row : t.rows) {
    Rat c = coef.at({row.degree, row.points});
    row.n1 = c * Rat(factorial(row.lines) * factorial(row.points));
    Rat e = row.n1 + rat(2 * row.degree - 1, 12) * Rat(row.n0);
    if (e.get_den() != 1)
      throw std::runtime_error("non-integer elliptic count at degree " +
                               std::to_string(row.degree) + ", points " +
                               std::to_string(row.points) + ": " + rat_str(e));
    row.elliptic = e.get_num();
  }
  t.has_elliptic = true;
  return t;
}

// ---------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------

namespace {

std::string int_str(const Int& v) { return v.get_str(); }

}  // namespace

std::string p1p1_csv(const P1P1Table& t) {
  std::ostringstream os;
  os << "k,l,N0,N1\n";
  for (int m = 1; m <= t.max_total; ++m)
    for (int l = 0; 2 * l <= m; ++l) {
      int k = m - l;
      os << k << "," << l << "," << int_str(t.n0.at({k, l})) << ",";
      if (t.has_elliptic) os << int_str(t.n1.at({k, l}));
      os << "\n";
    }
  return os.str();
}

std::string p1p1_json(const P1P1Table& t) {
  json j;
  j["target"] = "p1xp1";
  j["max_total"] = t.max_total;
  j["genus"] = t.has_elliptic ? 1 : 0;
  json rows = json::array();
  for (int m = 1; m <= t.max_total; ++m)
    for (int l = 0; 2 * l <= m; ++l) {
      int k = m - l;
      json row;
      row["k"] = k;
      row["l"] = l;
      row["N0"] = int_str(t.n0.at({k, l}));
      if (t.has_elliptic) row["N1"] = int_str(t.n1.at({k, l}));
      rows.push_back(row);
    }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

std::string cp3_csv(const Cp3Table& t) {
  std::ostringstream os;
  os << "degree,points,lines,N0,N1,elliptic_count\n";
  for (const auto& r : t.rows) {
    os << r.degree << "," << r.points << "," << r.lines << ","
       << int_str(r.n0) << ",";
    if (t.has_elliptic) os << rat_str(r.n1) << "," << int_str(r.elliptic);
    else os << ",";
    os << "\n";
  }
  return os.str();
}

std::string cp3_json(const Cp3Table& t) {
  json j;
  j["target"] = "cp3";
  j["max_degree"] = t.max_degree;
  j["genus"] = t.has_elliptic ? 1 : 0;
  json rows = json::array();
  for (const auto& r : t.rows) {
    json row;
    row["degree"] = r.degree;
    row["points"] = r.points;
    row["lines"] = r.lines;
    row["N0"] = int_str(r.n0);
    if (t.has_elliptic) {
      row["N1"] = rat_str(r.n1);
      row["elliptic_count"] = int_str(r.elliptic);
    }
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

}  // namespace virfrob::gw
