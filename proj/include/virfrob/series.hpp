#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "virfrob/rational.hpp"

namespace virfrob::series {

// Variable table shared by all series of one ring.  A variable is either a
// plain polynomial indeterminate or an exponential marker tied to a plain
// variable v: the marker Q stands for a term exp(t^v), so d/dt^v acts on a
// monomial Q^k ... as multiplication by k on top of the usual polynomial
// derivative.  Markers never appear as derivative directions themselves.
struct VarSet {
  struct Var {
    std::string name;
    int tied_to = -1;  // >= 0: marker for the plain variable with that index
  };
  std::vector<Var> v;

  int n() const { return static_cast<int>(v.size()); }
  int index(const std::string& name) const {
    for (int i = 0; i < n(); ++i)
      if (v[i].name == name) return i;
    return -1;
  }
  bool is_marker(int i) const { return v[i].tied_to >= 0; }
};

using VarSetPtr = std::shared_ptr<const VarSet>;

inline VarSetPtr make_vars(std::vector<std::pair<std::string, int>> spec) {
  auto vs = std::make_shared<VarSet>();
  for (auto& [name, tied] : spec) vs->v.push_back({name, tied});
  for (const auto& var : vs->v)
    if (var.tied_to >= 0 &&
        (var.tied_to >= vs->n() || vs->v[var.tied_to].tied_to >= 0))
      throw std::invalid_argument("marker must be tied to a plain variable");
  return vs;
}

// Dense exponent vector, one byte per variable.
using Mono = std::string;

inline int mono_deg(const Mono& m) {
  int d = 0;
  for (unsigned char c : m) d += c;
  return d;
}

inline Mono mono_one(int nvars) { return Mono(static_cast<std::size_t>(nvars), '\0'); }

inline Mono mono_var(int nvars, int i, int e = 1) {
  Mono m = mono_one(nvars);
  m[i] = static_cast<char>(e);
  return m;
}

// Truncated multivariate power series over Q.
//
// cutoff: monomials of total degree > cutoff are dropped on every operation.
// certified: coefficients of total degree <= certified are exactly those of
// the (conceptually infinite) true series; above that they may be missing
// contributions.  Operations propagate `certified` with valuation-aware
// bounds so downstream checks can state the order actually proven.
class Series {
 public:
  Series() = default;
  Series(VarSetPtr vs, int cutoff)
      : vars(std::move(vs)), cutoff(cutoff), certified(cutoff) {}

  static Series constant(VarSetPtr vs, int cutoff, const Rat& c) {
    Series s(std::move(vs), cutoff);
    if (c != 0) s.t[mono_one(s.vars->n())] = c;
    return s;
  }
  static Series variable(VarSetPtr vs, int cutoff, int i) {
    Series s(std::move(vs), cutoff);
    if (cutoff >= 1) s.t[mono_var(s.vars->n(), i)] = 1;
    return s;
  }

  VarSetPtr vars;
  int cutoff = 0;
  int certified = 0;
  std::map<Mono, Rat> t;

  bool is_zero() const { return t.empty(); }

  int valuation() const {
    if (t.empty()) return certified + 1;
    int v = cutoff + 1;
    for (const auto& [m, c] : t) v = std::min(v, mono_deg(m));
    return v;
  }

  Rat coeff(const Mono& m) const {
    auto it = t.find(m);
    return it == t.end() ? Rat(0) : it->second;
  }
  Rat constant_term() const { return coeff(mono_one(vars->n())); }

  void add_term(const Mono& m, const Rat& c) {
    if (c == 0 || mono_deg(m) > cutoff) return;
    auto [it, fresh] = t.emplace(m, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) t.erase(it);
    }
  }
  void set_term(const Mono& m, const Rat& c) {
    if (mono_deg(m) > cutoff) return;
    if (c == 0)
      t.erase(m);
    else
      t[m] = c;
  }

  Series& operator+=(const Series& o) {
    check_ring(o);
    certified = std::min(certified, o.certified);
    cutoff = std::min(cutoff, o.cutoff);
    for (const auto& [m, c] : o.t) add_term(m, c);
    prune();
    return *this;
  }
  Series& operator-=(const Series& o) {
    check_ring(o);
    certified = std::min(certified, o.certified);
    cutoff = std::min(cutoff, o.cutoff);
    for (const auto& [m, c] : o.t) add_term(m, -c);
    prune();
    return *this;
  }
  Series operator+(const Series& o) const {
    Series r = *this;
    r += o;
    return r;
  }
  Series operator-(const Series& o) const {
    Series r = *this;
    r -= o;
    return r;
  }
  Series operator-() const {
    Series r = *this;
    for (auto& [m, c] : r.t) c = -c;
    return r;
  }
  Series& operator*=(const Rat& s) {
    if (s == 0) {
      t.clear();
      return *this;
    }
    for (auto& [m, c] : t) c *= s;
    return *this;
  }
  Series operator*(const Rat& s) const {
    Series r = *this;
    r *= s;
    return r;
  }
  friend Series operator*(const Rat& s, const Series& x) { return x * s; }

  Series operator*(const Series& o) const {
    check_ring(o);
    Series r(vars, std::min(cutoff, o.cutoff));
    r.certified = std::min({r.cutoff, certified + o.valuation(), o.certified + valuation()});
    // bucket the right factor by total degree so each left term only
    // visits partners it can pair with under the cutoff
    std::vector<std::vector<const std::pair<const Mono, Rat>*>> byd(r.cutoff + 1);
    for (const auto& term : o.t) {
      int d = mono_deg(term.first);
      if (d <= r.cutoff) byd[d].push_back(&term);
    }
    for (const auto& [ma, ca] : t) {
      int da = mono_deg(ma);
      if (da > r.cutoff) continue;
      for (int db = 0; db + da <= r.cutoff; ++db) {
        for (const auto* term : byd[db]) {
          Mono m = ma;
          const Mono& mb = term->first;
          for (std::size_t i = 0; i < m.size(); ++i)
            m[i] = static_cast<char>(static_cast<unsigned char>(m[i]) +
                                     static_cast<unsigned char>(mb[i]));
          r.add_term(m, ca * term->second);
        }
      }
    }
    return r;
  }

  // Derivative along plain variable i, with the marker chain rule.
  Series derivative(int i) const {
    if (vars->is_marker(i))
      throw std::invalid_argument("derivative along a marker variable");
    Series r(vars, cutoff);
    r.certified = std::max(certified - 1, -1);
    for (const auto& [m, c] : t) {
      int e = static_cast<unsigned char>(m[i]);
      if (e > 0) {
        Mono m2 = m;
        m2[i] = static_cast<char>(e - 1);
        r.add_term(m2, c * e);
      }
      for (int q = 0; q < vars->n(); ++q) {
        if (vars->v[q].tied_to != i) continue;
        int k = static_cast<unsigned char>(m[q]);
        if (k > 0) r.add_term(m, c * k);
      }
    }
    return r;
  }

  // Substitute 0 for variable i (drops all monomials containing it).
  Series at_zero(int i) const {
    Series r(vars, cutoff);
    r.certified = certified;
    for (const auto& [m, c] : t)
      if (static_cast<unsigned char>(m[i]) == 0) r.t.emplace(m, c);
    return r;
  }

  Series truncated(int new_cutoff) const {
    Series r(vars, std::min(new_cutoff, cutoff));
    r.certified = std::min(certified, r.cutoff);
    for (const auto& [m, c] : t)
      if (mono_deg(m) <= r.cutoff) r.t.emplace(m, c);
    return r;
  }

  Series with_certified(int c) const {
    Series r = *this;
    r.certified = std::min(c, r.cutoff);
    return r;
  }

  // Max total degree of any term that differs between a and b, looking only
  // at degrees <= through.  Returns true when they agree through that order.
  friend bool same_through(const Series& a, const Series& b, int through) {
    Series d = a - b;
    for (const auto& [m, c] : d.t)
      if (mono_deg(m) <= through && c != 0) return false;
    return true;
  }

  std::string str() const {
    if (t.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : t) {
      if (!out.empty()) out += " + ";
      out += rat_str(c);
      for (int i = 0; i < vars->n(); ++i) {
        int e = static_cast<unsigned char>(m[i]);
        if (e == 0) continue;
        out += "*" + vars->v[i].name;
        if (e > 1) out += "^" + std::to_string(e);
      }
    }
    return out;
  }

  void prune() {
    for (auto it = t.begin(); it != t.end();)
      it = (it->second == 0) ? t.erase(it) : std::next(it);
  }

 private:
  void check_ring(const Series& o) const {
    if (vars.get() != o.vars.get())
      throw std::invalid_argument("series from different rings");
  }
};

// f(u) = sum over k of coef(k) * u^k, for u with valuation >= 1 (so the sum
// is finite at any cutoff).  Shared backbone of exp/log/inverse/sqrt/powers.
template <typename CoefFn>
inline Series analytic_in(const Series& u, const Rat& c0, CoefFn coef) {
  if (u.valuation() < 1 && !u.is_zero())
    throw std::invalid_argument("analytic substitution needs valuation >= 1");
  Series acc = Series::constant(u.vars, u.cutoff, c0);
  acc.certified = std::min(u.certified, u.cutoff);
  Series uk = Series::constant(u.vars, u.cutoff, Rat(1));
  uk.certified = acc.certified;
  for (int k = 1; k <= u.cutoff; ++k) {
    uk = uk * u;
    if (uk.is_zero()) break;
    Rat ck = coef(k);
    if (ck != 0) {
      Series term = uk * ck;
      for (const auto& [m, c] : term.t) acc.add_term(m, c);
    }
  }
  acc.prune();
  return acc;
}

inline Series exp_series(const Series& u) {
  if (u.constant_term() != 0)
    throw std::invalid_argument("exp_series needs zero constant term");
  Rat inv_fact(1);
  return analytic_in(u, Rat(1), [&](int k) {
    inv_fact /= k;
    return inv_fact;
  });
}

inline Series log1p_series(const Series& u) {
  if (u.constant_term() != 0)
    throw std::invalid_argument("log1p_series needs zero constant term");
  return analytic_in(u, Rat(0),
                     [](int k) { return Rat((k % 2) ? 1 : -1, k); });
}

inline Series inverse_unit(const Series& s) {
  Rat c0 = s.constant_term();
  if (c0 == 0) throw std::domain_error("inverse of non-unit series");
  Series u = s * (Rat(1) / c0);
  u.add_term(mono_one(s.vars->n()), Rat(-1));
  u.prune();
  Rat sign(1);
  Series inv = analytic_in(u, Rat(1), [&](int) {
    sign = -sign;
    return sign;
  });
  return inv * (Rat(1) / c0);
}

inline Series divide_unit(const Series& a, const Series& b) {
  return a * inverse_unit(b);
}

inline Series log_unit(const Series& s) {
  // log(s) - log(s(0)) for unit s, i.e. log(s / s0); the additive constant
  // log(s0) is not representable over Q unless s0 = 1, so require that.
  Rat c0 = s.constant_term();
  if (c0 != 1) throw std::domain_error("log_unit expects constant term 1");
  Series u = s;
  u.add_term(mono_one(s.vars->n()), Rat(-1));
  u.prune();
  return log1p_series(u);
}

inline Series pow_int(const Series& s, long e) {
  if (e < 0) return pow_int(inverse_unit(s), -e);
  Series acc = Series::constant(s.vars, s.cutoff, Rat(1));
  acc.certified = s.certified;
  Series base = s;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return acc;
}

inline bool rat_is_square(const Rat& r, Rat& root) {
  if (r < 0) return false;
  const Int num = r.get_num(), den = r.get_den();
  if (mpz_perfect_square_p(num.get_mpz_t()) == 0) return false;
  if (mpz_perfect_square_p(den.get_mpz_t()) == 0) return false;
  Int rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  root = rat(rn, rd);
  return true;
}

// sqrt of a unit series whose constant term is a rational square; the branch
// with positive leading coefficient is returned.
inline Series sqrt_unit(const Series& s) {
  Rat c0 = s.constant_term(), r0;
  if (c0 == 0 || !rat_is_square(c0, r0))
    throw std::domain_error("sqrt of series without rational-square lead");
  Series u = s * (Rat(1) / c0);
  u.add_term(mono_one(s.vars->n()), Rat(-1));
  u.prune();
  // binomial(1/2, k)
  Rat ck(1);
  Series root = analytic_in(u, Rat(1), [&](int k) {
    ck *= Rat(3 - 2 * k, 2 * k);
    return ck;
  });
  return root * r0;
}

// The exponential monomial exp(sum_i k_i z_i) rendered as the Q-monomial
// prod_i Q_{q_vars[i]}^{k_i}; the z_i themselves never enter the ring.
inline Series series_compose_exp(VarSetPtr vs, int cutoff,
                                 const std::vector<int>& q_vars,
                                 const std::vector<int>& k) {
  if (q_vars.size() != k.size())
    throw std::invalid_argument("series_compose_exp: one weight per variable");
  Series s(vs, cutoff);
  Mono m = mono_one(vs->n());
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] < 0)
      throw std::invalid_argument("series_compose_exp: negative weight");
    m[q_vars[i]] = static_cast<char>(static_cast<unsigned char>(m[q_vars[i]]) + k[i]);
  }
  s.add_term(m, Rat(1));
  return s;
}

// Substitute image[v] for each source variable v of g.  Marker variables are
// substituted like any other; the caller is responsible for providing images
// consistent with the marker semantics (e.g. Q -> Q' * exp(delta)).  Every
// image must have valuation >= 1 unless g has bounded exponents anyway.
inline Series compose(const Series& g, VarSetPtr target, int cutoff,
                      const std::vector<Series>& image) {
  if (static_cast<int>(image.size()) != g.vars->n())
    throw std::invalid_argument("compose: one image per source variable");
  int cert = g.certified;
  for (const auto& im : image) cert = std::min(cert, im.certified);
  std::vector<std::vector<Series>> pow(image.size());
  auto power = [&](int v, int e) -> const Series& {
    auto& tab = pow[v];
    if (tab.empty()) {
      tab.push_back(Series::constant(target, cutoff, Rat(1)));
      tab[0].certified = cert;
    }
    while (static_cast<int>(tab.size()) <= e) tab.push_back(tab.back() * image[v]);
    return tab[e];
  };
  Series acc(target, cutoff);
  acc.certified = std::min(cert, cutoff);
  for (const auto& [m, c] : g.t) {
    Series term = Series::constant(target, cutoff, c);
    term.certified = acc.certified;
    for (int v = 0; v < g.vars->n(); ++v) {
      int e = static_cast<unsigned char>(m[v]);
      if (e > 0) term = term * power(v, e);
    }
    for (const auto& [mm, cc] : term.t) acc.add_term(mm, cc);
  }
  acc.prune();
  acc.certified = std::min(cert, cutoff);
  return acc;
}

}  // namespace virfrob::series
