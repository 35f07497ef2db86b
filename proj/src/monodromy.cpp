#include "virfrob/monodromy.hpp"

#include <algorithm>

namespace virfrob {

namespace {

std::string entry_name(int a, int b) {
  return "(" + std::to_string(a + 1) + "," + std::to_string(b + 1) + ")";
}

}  // namespace

void MonodromyData::finalize() {
  if (n <= 0) throw std::invalid_argument("n must be positive");
  if (eta.rows() != n || eta.cols() != n)
    throw std::invalid_argument("eta must be n x n");
  if (static_cast<int>(mu.size()) != n)
    throw std::invalid_argument("mu_diag must have n entries");
  if (unit_index < 0 || unit_index >= n)
    throw std::invalid_argument("unit_index out of range");
  for (const auto& [k, rk] : r) {
    if (k < 1) throw std::invalid_argument("r_parts indices must be >= 1");
    if (rk.rows() != n || rk.cols() != n)
      throw std::invalid_argument("R_k must be n x n");
  }
  eta_inv = inverse_exact(eta);  // domain_error if singular

  spread = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Rat gap = mu[a] - mu[b];
      if (is_integer(gap) && gap > spread)
        spread = static_cast<int>(gap.get_num().get_si());
    }
}

ValidationReport MonodromyData::validate() {
  finalize();
  ValidationReport rep;
  auto check = [&rep](const std::string& name) -> ValidationEntry& {
    rep.push_back({name, true, ""});
    return rep.back();
  };

  {
    auto& e = check("eta symmetric");
    for (int a = 0; a < n && e.pass; ++a)
      for (int b = 0; b < n; ++b)
        if (eta.at(a, b) != eta.at(b, a)) {
          e.pass = false;
          e.first_violation = "entry " + entry_name(a, b);
          break;
        }
  }
  {
    // For diagonal mu the antisymmetry rule reads eta_ab (mu_a + mu_b) = 0.
    auto& e = check("mu^T eta + eta mu = 0");
    for (int a = 0; a < n && e.pass; ++a)
      for (int b = 0; b < n; ++b)
        if (eta.at(a, b) != 0 && mu[a] + mu[b] != 0) {
          e.pass = false;
          e.first_violation = "entry " + entry_name(a, b);
          break;
        }
  }
  {
    auto& e = check("mu e = -(d/2) e");
    if (mu[unit_index] != -charge_d / 2) {
      e.pass = false;
      e.first_violation = "mu_" + std::to_string(unit_index + 1) + " = " +
                          rat_str(mu[unit_index]) + ", expected " +
                          rat_str(-charge_d / 2);
    }
  }
  for (const auto& [k, rk] : r) {
    std::string kk = std::to_string(k);
    {
      auto& e = check("[mu, R_" + kk + "] = " + kk + " R_" + kk);
      for (int a = 0; a < n && e.pass; ++a)
        for (int b = 0; b < n; ++b)
          if (rk.at(a, b) != 0 && mu[a] - mu[b] != k) {
            e.pass = false;
            e.first_violation = "entry " + entry_name(a, b);
            break;
          }
    }
    {
      auto& e = check("R_" + kk + "^T eta + (-1)^" + kk + " eta R_" + kk + " = 0");
      QMat skew = rk.transpose() * eta + ((k % 2) ? Rat(-1) : Rat(1)) * (eta * rk);
      for (int a = 0; a < n && e.pass; ++a)
        for (int b = 0; b < n; ++b)
          if (skew.at(a, b) != 0) {
            e.pass = false;
            e.first_violation = "entry " + entry_name(a, b);
            break;
          }
    }
    {
      auto& e = check("R_" + kk + " supported on a realized mu gap");
      bool gap_exists = false;
      for (int a = 0; a < n && !gap_exists; ++a)
        for (int b = 0; b < n; ++b)
          if (mu[a] - mu[b] == k) {
            gap_exists = true;
            break;
          }
      if (!gap_exists && !rk.is_zero()) {
        e.pass = false;
        e.first_violation = "no mu gap equals " + kk + " but R_" + kk + " != 0";
      }
    }
  }
  return rep;
}

void MonodromyData::require_valid() {
  for (const auto& e : validate())
    if (!e.pass)
      throw std::invalid_argument("monodromy data invalid: " + e.invariant +
                                  " fails at " + e.first_violation);
}

QMat MonodromyData::r_part(int k) const {
  auto it = r.find(k);
  return it == r.end() ? QMat(n, n) : it->second;
}

QMat MonodromyData::r_total() const {
  QMat total(n, n);
  for (const auto& [k, rk] : r) total = total + rk;
  return total;
}

QMat MonodromyData::component(const QMat& m, int k) const {
  QMat out(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (mu[a] - mu[b] == k) out.at(a, b) = m.at(a, b);
  return out;
}

QMat MonodromyData::r_power_component(int k, int l) const {
  if (l == 0) return k == 0 ? QMat::identity(n) : QMat(n, n);
  if (k < l || k > spread) return QMat(n, n);
  QMat sum(n, n);
  for (const auto& [i, ri] : r) {
    if (i > k - (l - 1)) break;
    QMat rest = r_power_component(k - i, l - 1);
    if (!rest.is_zero()) sum = sum + ri * rest;
  }
  return sum;
}

QMat MonodromyData::pm(int m, const Rat& shift) const {
  if (m == -1) return QMat::identity(n);

  // Diagonal Taylor coefficients coef[l][a] of the scalar function attached
  // to entry a, then P = sum_l R^l diag(coef[l]).
  std::vector<std::vector<Rat>> coef;
  coef.push_back(std::vector<Rat>(n, Rat(1)));

  if (m >= 0) {
    for (int j = 0; j <= m; ++j) {
      std::vector<std::vector<Rat>> next(coef.size() + 1,
                                         std::vector<Rat>(n, Rat(0)));
      for (std::size_t l = 0; l < coef.size(); ++l)
        for (int a = 0; a < n; ++a) {
          Rat d = mu[a] + shift + j - Rat(1, 2);
          next[l][a] += d * coef[l][a];
          next[l + 1][a] += coef[l][a];
        }
      coef = std::move(next);
    }
  } else {
    for (int a = 0; a < n; ++a)
      if (is_integer(mu[a] + shift - Rat(1, 2)))
        throw HalfIntegerResonance(
            "mu eigenvalue " + rat_str(mu[a]) + " with shift " +
            rat_str(shift) + " lies on the half-integer lattice");
    // 1/(x+d) = sum_i (-1)^i x^i / d^{i+1}, multiplied per factor, truncated
    // at order `spread` (higher x-powers meet only vanishing R-grades).
    for (int j = 1; j <= -m - 1; ++j) {
      std::vector<std::vector<Rat>> next(static_cast<std::size_t>(spread) + 1,
                                         std::vector<Rat>(n, Rat(0)));
      for (int a = 0; a < n; ++a) {
        Rat d = mu[a] + shift - j - Rat(1, 2);
        Rat dpow = 1 / d;  // steps through (-1)^i / d^{i+1}
        for (int i = 0; i <= spread; ++i) {
          for (int l = 0; i + l <= spread && l < static_cast<int>(coef.size()); ++l)
            next[i + l][a] += dpow * coef[l][a];
          dpow = -dpow / d;
        }
      }
      coef = std::move(next);
    }
  }

  QMat p(n, n);
  QMat rl = QMat::identity(n);
  const QMat rt = r_total();
  for (std::size_t l = 0; l < coef.size(); ++l) {
    if (l > 0) {
      rl = rl * rt;
      if (rl.is_zero()) break;
    }
    p = p + rl * QMat::diag(coef[l]);
  }
  return p;
}

}  // namespace virfrob
