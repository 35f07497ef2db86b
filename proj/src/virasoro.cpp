#include "virfrob/virasoro.hpp"

#include <cstdlib>

#include <json.hpp>

namespace virfrob {

namespace {

Rat half() { return rat(1, 2); }

Rat sign_pow(long e) { return (e % 2) ? Rat(-1) : Rat(1); }

// M + M^T: turns an ordered-pair coefficient table into the symmetric matrix
// whose double sum reproduces the same operator.
QMat sym2(const QMat& w) { return w + w.transpose(); }

int shift_window(const MonodromyData& md) {
  return (md.n - 1) * md.max_r_index();
}

QMat diag_poly(const MonodromyData& md, const Rat& c) {
  // diagonal matrix with entries mu_a + c
  QMat m(md.n, md.n);
  for (int a = 0; a < md.n; ++a) m.at(a, a) = md.mu[a] + c;
  return m;
}

QMat diag_inv_pow(const MonodromyData& md, const Rat& c, long e) {
  // diagonal matrix with entries (mu_a + c)^(-e)
  QMat m(md.n, md.n);
  for (int a = 0; a < md.n; ++a) m.at(a, a) = rat_pow(md.mu[a] + c, -e);
  return m;
}

void require_cutoff(const MonodromyData& md, int m, int P) {
  if (P < std::abs(m) + shift_window(md))
    throw std::invalid_argument(
        "cutoff " + std::to_string(P) + " too small for level " +
        std::to_string(m) + ": need at least " +
        std::to_string(std::abs(m) + shift_window(md)));
}

void require_no_half_integers(const MonodromyData& md) {
  for (const Rat& m : md.mu)
    if (is_integer(m - half()))
      throw HalfIntegerResonance("mu eigenvalue " + rat_str(m) +
                                 " lies on the half-integer lattice");
}

Rat central_constant(const MonodromyData& md) {
  Rat c(0);
  for (const Rat& m : md.mu) c += rat(1, 4) - m * m;
  return c / 4;
}

}  // namespace

VirasoroOperator& VirasoroOperator::axpy(const Rat& s, const VirasoroOperator& o) {
  dd = dd + s * o.dd;
  td = td + s * o.td;
  tt = tt + s * o.tt;
  c0 += s * o.c0;
  return *this;
}

VirasoroOperator build_operator(const MonodromyData& md, int m, int P) {
  require_cutoff(md, m, P);
  const int n = md.n, S = md.spread;
  VirasoroOperator op(n, m, P);
  QMat ddraw(op.dim(), op.dim()), ttraw(op.dim(), op.dim());

  // Oscillator index pairs (k, l) fall into three blocks after normal
  // ordering; each ordered pair contributes half of its bilinear weight.

  // Both non-negative: second derivatives.
  for (int l = 0; l <= P; ++l)
    for (int k = 0; k <= P; ++k) {
      int g = m - 1 - l - k;
      if (g < -S || g > S) continue;
      QMat M = md.component(md.pm(m, Rat(-k)), g);
      if (M.is_zero()) continue;
      QMat W = M * md.eta_inv * (half() * sign_pow(k + 1));
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          ddraw.at(op.idx(c, l), op.idx(d, k)) += W.at(c, d);
    }

  // Mixed: coupling times derivative, two ordered branches.
  for (int p = 0; p <= P; ++p) {
    for (int l = 0; l <= P; ++l) {
      int g = m + p - l;
      if (g < -S || g > S) continue;
      QMat M = md.component(md.pm(m, Rat(p + 1)), g);
      if (M.is_zero()) continue;
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          op.td.at(op.idx(b, p), op.idx(c, l)) += half() * M.at(c, b);
    }
    for (int k = 0; k <= P; ++k) {
      int g = m + p - k;
      if (g < -S || g > S) continue;
      QMat M = md.component(md.pm(m, Rat(-k)), g);
      if (M.is_zero()) continue;
      QMat W = md.eta * M * md.eta_inv * (half() * sign_pow(k + p + 1));
      for (int a = 0; a < n; ++a)
        for (int d = 0; d < n; ++d)
          op.td.at(op.idx(a, p), op.idx(d, k)) += W.at(a, d);
    }
  }

  // Both negative: quadratic in the couplings.
  for (int pl = 0; pl <= P; ++pl)
    for (int pk = 0; pk <= P; ++pk) {
      int g = m + 1 + pl + pk;
      if (g < -S || g > S) continue;
      QMat M = md.component(md.pm(m, Rat(pk + 1)), g);
      if (M.is_zero()) continue;
      QMat W = md.eta * M * (half() * sign_pow(pl));
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          ttraw.at(op.idx(a, pl), op.idx(b, pk)) += W.at(a, b);
    }

  op.dd = sym2(ddraw) * half();
  op.tt = sym2(ttraw) * half();
  if (m == 0) op.c0 = central_constant(md);
  return op;
}

namespace {

// Table-filling helpers for the displayed formulas.  Conventions:
//   <A T^p, d_{T^q}>      -> td[(b,p) -> (a,q)] += A^a_b
//   <A T^p, T^q>          -> ttraw[(b,p),(d,q)] += (A^T eta)_{b d}
//   <d_{T^p} A, d_{T^q} B> -> ddraw[(a,p),(c,q)] += (A eta^{-1} B^T)^{a c}
struct ClosedFormBuilder {
  const MonodromyData& md;
  VirasoroOperator& op;
  QMat ddraw, ttraw;
  int P;

  ClosedFormBuilder(const MonodromyData& m_, VirasoroOperator& o_)
      : md(m_), op(o_), ddraw(o_.dim(), o_.dim()), ttraw(o_.dim(), o_.dim()),
        P(o_.cutoff) {}

  void td(const QMat& A, int p, int q, const Rat& w = Rat(1)) {
    if (p < 0 || q < 0 || p > P || q > P || A.is_zero()) return;
    for (int a = 0; a < md.n; ++a)
      for (int b = 0; b < md.n; ++b)
        op.td.at(op.idx(b, p), op.idx(a, q)) += w * A.at(a, b);
  }
  void tt(const QMat& A, int p, int q, const Rat& w) {
    if (p < 0 || q < 0 || p > P || q > P || A.is_zero()) return;
    QMat W = A.transpose() * md.eta * w;
    for (int b = 0; b < md.n; ++b)
      for (int d = 0; d < md.n; ++d)
        ttraw.at(op.idx(b, p), op.idx(d, q)) += W.at(b, d);
  }
  void dd(const QMat& A, const QMat& B, int p, int q, const Rat& w) {
    QMat W = A * md.eta_inv * B.transpose() * w;
    for (int a = 0; a < md.n; ++a)
      for (int c = 0; c < md.n; ++c)
        ddraw.at(op.idx(a, p), op.idx(c, q)) += W.at(a, c);
  }
  void finish() {
    op.dd = sym2(ddraw) * half();
    op.tt = sym2(ttraw) * half();
  }
};

}  // namespace

VirasoroOperator closed_form_operator(const MonodromyData& md, int m, int P) {
  require_cutoff(md, m, P);
  if (m < -2 || m > 2)
    throw std::invalid_argument("closed forms cover levels -2..2 only");
  const int n = md.n, S = md.spread;
  VirasoroOperator op(n, m, P);
  ClosedFormBuilder f(md, op);
  const QMat I = QMat::identity(n);

  switch (m) {
    case -1: {
      for (int p = 1; p <= P; ++p) f.td(I, p, p - 1);
      f.tt(I, 0, 0, half());
      break;
    }
    case 0: {
      for (int p = 0; p <= P; ++p) f.td(diag_poly(md, p + half()), p, p);
      for (int p = 1; p <= P; ++p)
        for (int r = 1; r <= p; ++r) f.td(md.r_part(r), p, p - r);
      for (int p = 0; p <= P; ++p)
        for (int q = 0; q <= P; ++q)
          f.tt(md.r_part(p + q + 1), p, q, half() * sign_pow(q));
      op.c0 = central_constant(md);
      break;
    }
    case 1: {
      for (int p = 0; p <= P; ++p)
        f.td(diag_poly(md, p + half()) * diag_poly(md, p + rat(3, 2)), p, p + 1);
      for (int p = 0; p <= P; ++p)
        for (int r = 1; r <= p + 1; ++r)
          f.td(md.r_part(r) * (diag_poly(md, p + 1) * 2), p, p - r + 1);
      for (int p = 1; p <= P; ++p)
        for (int r = 2; r <= p + 1; ++r)
          f.td(md.r_power_component(r, 2), p, p - r + 1);
      f.dd(diag_poly(md, half()), diag_poly(md, half()), 0, 0, half());
      for (int p = 0; p <= P; ++p)
        for (int q = 0; q <= P; ++q) {
          f.tt(md.r_part(p + q + 2) * diag_poly(md, p + 1), p, q, sign_pow(q));
          f.tt(md.r_power_component(p + q + 2, 2), p, q, half() * sign_pow(q));
        }
      break;
    }
    case 2: {
      for (int p = 0; p <= P; ++p)
        f.td(diag_poly(md, p + half()) * diag_poly(md, p + rat(3, 2)) *
                 diag_poly(md, p + rat(5, 2)),
             p, p + 2);
      for (int p = 0; p <= P; ++p)
        for (int r = 1; r <= p + 2; ++r) {
          QMat D = diag_poly(md, p + half());
          f.td(md.r_part(r) * (D * D * 3 + D * 6 + I * 2), p, p - r + 2);
        }
      for (int p = 0; p <= P; ++p)
        for (int r = 2; r <= p + 2; ++r)
          f.td(md.r_power_component(r, 2) * (diag_poly(md, p + rat(3, 2)) * 3),
               p, p - r + 2);
      for (int p = 1; p <= P; ++p)
        for (int r = 3; r <= p + 2; ++r)
          f.td(md.r_power_component(r, 3), p, p - r + 2);
      f.dd(I * half() - QMat::diag(md.mu),
           (I * half() - QMat::diag(md.mu)) * (I * rat(3, 2) - QMat::diag(md.mu)),
           1, 0, Rat(1));
      {
        QMat mu2(n, n);
        for (int a = 0; a < n; ++a)
          mu2.at(a, a) = rat(1, 4) + md.mu[a] * 3 - md.mu[a] * md.mu[a] * 3;
        f.dd(md.r_part(1), mu2, 0, 0, half());
      }
      for (int p = 0; p <= P; ++p)
        for (int q = 0; q <= P; ++q) {
          QMat A = md.r_power_component(p + q + 3, 3);
          A = A + md.r_power_component(p + q + 3, 2) *
                      (diag_poly(md, p + rat(3, 2)) * 3);
          QMat D = diag_poly(md, p + rat(3, 2)) * 2;  // 2p + 2mu + 3
          A = A + md.r_part(p + q + 3) * (D * D * rat(3, 4) - I);
          f.tt(A, p, q, half() * sign_pow(q));
        }
      break;
    }
    case -2: {
      require_no_half_integers(md);
      for (int k = 0; k <= S; ++k)
        for (int l = k; l <= S; ++l) {
          QMat R = md.r_power_component(l, k);
          if (R.is_zero()) continue;
          for (int p = l + 2; p <= P; ++p)
            f.td(R * diag_inv_pow(md, p - half(), k + 1), p, p - l - 2,
                 sign_pow(k));
          for (int p = 0; p <= l + 1; ++p)
            f.tt(R * diag_inv_pow(md, p - half(), k + 1), p, l - p + 1,
                 half() * sign_pow(l + p + k + 1));
        }
      break;
    }
  }
  f.finish();
  return op;
}

VirasoroOperator commutator(const VirasoroOperator& x, const VirasoroOperator& y) {
  if (x.n != y.n || x.cutoff != y.cutoff)
    throw std::invalid_argument("commutator needs matching shapes");
  VirasoroOperator z(x.n, x.level + y.level, x.cutoff);
  z.dd = sym2(x.dd * y.td) - sym2(y.dd * x.td);
  z.td = (y.tt * x.dd - x.tt * y.dd) * 4 + x.td * y.td - y.td * x.td;
  z.tt = sym2(x.td * y.tt) - sym2(y.td * x.tt);
  Rat c(0);
  for (int i = 0; i < x.dim(); ++i)
    for (int j = 0; j < x.dim(); ++j)
      c += x.dd.at(i, j) * y.tt.at(i, j) - y.dd.at(i, j) * x.tt.at(i, j);
  z.c0 = 2 * c;
  return z;
}

namespace {

// Locates the first difference between two operators among entries whose
// descendent levels are all <= window; returns false when none.
bool first_difference(const VirasoroOperator& got, const VirasoroOperator& want,
                      int window, Discrepancy& out) {
  auto emit = [&](const std::string& table, int i, int j, const Rat& e,
                  const Rat& g) {
    out.table = table;
    out.a_alpha = got.index_alpha(i);
    out.a_p = got.index_p(i);
    out.b_alpha = got.index_alpha(j);
    out.b_q = got.index_p(j);
    out.expected = e;
    out.got = g;
  };
  const int N = got.dim();
  for (int i = 0; i < N; ++i) {
    if (got.index_p(i) > window) continue;
    for (int j = 0; j < N; ++j) {
      if (got.index_p(j) > window) continue;
      if (got.dd.at(i, j) != want.dd.at(i, j)) {
        emit("dd", i, j, want.dd.at(i, j), got.dd.at(i, j));
        return true;
      }
      if (got.td.at(i, j) != want.td.at(i, j)) {
        emit("td", i, j, want.td.at(i, j), got.td.at(i, j));
        return true;
      }
      if (got.tt.at(i, j) != want.tt.at(i, j)) {
        emit("tt", i, j, want.tt.at(i, j), got.tt.at(i, j));
        return true;
      }
    }
  }
  if (got.c0 != want.c0) {
    emit("const", 0, 0, want.c0, got.c0);
    return true;
  }
  return false;
}

}  // namespace

std::vector<PairCheck> check_virasoro_relations(const MonodromyData& md,
                                                int m_lo, int m_hi, int P) {
  std::map<int, VirasoroOperator> ops;
  std::map<int, std::string> failed;
  auto get = [&](int m) -> const VirasoroOperator* {
    if (failed.count(m)) return nullptr;
    auto it = ops.find(m);
    if (it == ops.end()) {
      try {
        it = ops.emplace(m, build_operator(md, m, P)).first;
      } catch (const HalfIntegerResonance& e) {
        failed[m] = std::string("HalfIntegerResonance: ") + e.what();
        return nullptr;
      }
    }
    return &it->second;
  };

  std::vector<PairCheck> rows;
  for (int i = m_lo; i <= m_hi; ++i)
    for (int j = m_lo; j <= m_hi; ++j) {
      PairCheck row;
      row.i = i;
      row.j = j;
      row.window = P - std::abs(i) - std::abs(j) - shift_window(md);
      const VirasoroOperator* li = get(i);
      const VirasoroOperator* lj = get(j);
      const VirasoroOperator* lij = (i == j) ? li : get(i + j);
      if (!li || !lj || !lij) {
        row.defined = false;
        row.error = !li ? failed[i] : (!lj ? failed[j] : failed[i + j]);
        rows.push_back(row);
        continue;
      }
      VirasoroOperator got = commutator(*li, *lj);
      VirasoroOperator want(md.n, i + j, P);
      if (i != j) want.axpy(Rat(i - j), *lij);
      if (i + j == 0)
        want.c0 += Rat(md.n) * Rat(static_cast<long>(i) * i * i - i) / 12;
      row.has_discrepancy = first_difference(got, want, row.window, row.first);
      row.pass = !row.has_discrepancy;
      rows.push_back(row);
    }
  return rows;
}

std::string relations_report_json(const std::vector<PairCheck>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json row;
    row["i"] = r.i;
    row["j"] = r.j;
    if (!r.defined) {
      row["pass"] = nullptr;
      row["window"] = r.window;
      row["error"] = r.error;
      row["first_discrepancy"] = nullptr;
    } else {
      row["pass"] = r.pass;
      row["window"] = r.window;
      if (r.has_discrepancy) {
        nlohmann::ordered_json d;
        d["table"] = r.first.table;
        d["indices"] = {r.first.a_alpha + 1, r.first.a_p, r.first.b_alpha + 1,
                        r.first.b_q};
        d["expected"] = rat_str(r.first.expected);
        d["got"] = rat_str(r.first.got);
        row["first_discrepancy"] = d;
      } else {
        row["first_discrepancy"] = nullptr;
      }
    }
    arr.push_back(row);
  }
  return arr.dump(2) + "\n";
}

std::string operator_dump_json(const VirasoroOperator& op) {
  nlohmann::ordered_json j;
  j["level"] = op.level;
  j["cutoff"] = op.cutoff;
  auto table = [&](const QMat& t, bool symmetric) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (int i = 0; i < op.dim(); ++i)
      for (int k = symmetric ? i : 0; k < op.dim(); ++k) {
        if (t.at(i, k) == 0) continue;
        arr.push_back({op.index_alpha(i) + 1, op.index_p(i),
                       op.index_alpha(k) + 1, op.index_p(k),
                       rat_str(t.at(i, k))});
      }
    return arr;
  };
  j["dd"] = table(op.dd, true);
  j["td"] = table(op.td, false);
  j["tt"] = table(op.tt, true);
  j["const"] = rat_str(op.c0);
  return j.dump(2) + "\n";
}

}  // namespace virfrob
