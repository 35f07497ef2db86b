#include <json.hpp>

#include <algorithm>
#include <stdexcept>

#include "virfrob/constraints.hpp"

namespace virfrob {

namespace {

using json = nlohmann::ordered_json;
using series::Mono;
using series::Series;
using series::mono_deg;

// lazy first derivatives of a fixed series
struct GradCache {
  const Series* src;
  std::vector<Series> d;
  std::vector<char> have;
  explicit GradCache(const Series& s)
      : src(&s), d(s.vars->n()), have(s.vars->n(), 0) {}
  const Series& operator()(int i) {
    if (!have[i]) {
      d[i] = src->derivative(i);
      have[i] = 1;
    }
    return d[i];
  }
};

Series trusted_block(const ConstraintData& cd, const Series& r, int order,
                     int window) {
  const int through = std::min(order, r.certified);
  Series out(r.vars, r.cutoff);
  for (const auto& [mo, c] : r.t) {
    if (mono_deg(mo) > through) continue;
    bool inside = true;
    for (int i = 0; i < static_cast<int>(mo.size()) && inside; ++i)
      if (static_cast<unsigned char>(mo[i]) != 0 && cd.slot(i) > window)
        inside = false;
    if (inside) out.add_term(mo, c);
  }
  out.certified = through;
  return out;
}

ConstraintReport make_report(const ConstraintData& cd, int m, int genus,
                             const Series& full) {
  ConstraintReport rep;
  rep.model_id = cd.model.id;
  rep.m = m;
  rep.genus = genus;
  rep.order = cd.order();
  rep.certified = std::min(full.certified, rep.order);
  rep.window = cd.level() - std::max(m, 0);
  rep.residual = trusted_block(cd, full, rep.order, rep.window);
  rep.pass = rep.residual.is_zero();
  return rep;
}

std::string mono_str(const series::VarSetPtr& vars, const Mono& mo) {
  std::string out;
  for (int i = 0; i < vars->n(); ++i) {
    int e = static_cast<unsigned char>(mo[i]);
    if (e == 0) continue;
    if (!out.empty()) out += "*";
    out += vars->v[i].name;
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out.empty() ? "1" : out;
}

}  // namespace

ConstraintData constraint_data(const FrobeniusModel& m, int level, int order,
                               bool with_genus1) {
  if (level < 1) throw std::invalid_argument("coupling level must be positive");
  if (order < 1) throw std::invalid_argument("constraint order must be positive");
  const int work = order + 2;
  if (m.cutoff() < work + 3)
    throw std::invalid_argument(
        "cutoff incompatibility: constraint order " + std::to_string(order) +
        " needs a potential cutoff of at least " + std::to_string(work + 3) +
        ", model " + m.id + " has " + std::to_string(m.cutoff()));

  ConstraintData cd;
  cd.model = m;
  cd.th = theta(cd.model, 2 * level + 1, work);
  cd.g0 = genus0_solution(cd.model, cd.th, level, work);
  cd.f0 = genus0_free_energy(cd.model, cd.th, cd.g0);
  if (with_genus1) {
    if (cd.model.n <= 2) {
      // semisimplicity at the origin, certified by the canonical frame
      std::vector<Rat> bp(cd.model.n, Rat(0));
      try {
        canonical_frame(cd.model, bp, 1);
      } catch (const std::domain_error& e) {
        throw std::domain_error(
            "genus-1 constraints need a semisimple model: " +
            std::string(e.what()));
      }
    }
    cd.f1 = genus1_free_energy(cd.model, cd.th, cd.g0);
    cd.has_genus1 = true;
  }
  return cd;
}

ConstraintData constraint_data(const std::string& id, int level, int order,
                               bool with_genus1) {
  return constraint_data(bundled_frobenius(id, order + 5), level, order,
                         with_genus1);
}

Series genus0_accumulate(const ConstraintData& cd, const VirasoroOperator& op,
                         int slot_cap) {
  if (slot_cap > cd.level())
    throw std::invalid_argument("slot cap exceeds the coupling level");
  const int n = cd.model.n;
  const int cap_dim = std::min(op.dim(), n * (slot_cap + 1));
  GradCache df(cd.f0);
  auto coupling = [&](int i) {
    return cd.g0.tilde(op.index_alpha(i), op.index_p(i));
  };

  Series out(cd.g0.tvars, cd.f0.cutoff);
  for (int i = 0; i < cap_dim; ++i)
    for (int j = i; j < cap_dim; ++j) {
      const Rat& w = op.dd.at(i, j);
      if (w == 0) continue;
      out += df(i) * df(j) * (i == j ? w : w * 2);
    }
  for (int i = 0; i < cap_dim; ++i) {
    Series xi;
    bool have = false;
    for (int j = 0; j < cap_dim; ++j) {
      const Rat& w = op.td.at(i, j);
      if (w == 0) continue;
      if (!have) {
        xi = coupling(i);
        have = true;
      }
      out += xi * df(j) * w;
    }
  }
  for (int i = 0; i < cap_dim; ++i)
    for (int j = i; j < cap_dim; ++j) {
      const Rat& w = op.tt.at(i, j);
      if (w == 0) continue;
      out += coupling(i) * coupling(j) * (i == j ? w : w * 2);
    }
  return out;
}

ConstraintReport evaluate_A0(const ConstraintData& cd, int m) {
  const int L = cd.level();
  if (L < m - 1 || L < -m - 1)
    throw std::invalid_argument(
        "cutoff incompatibility: coupling level " + std::to_string(L) +
        " cannot hold the quadratic block at m = " + std::to_string(m));
  const int P = L + std::max(m, 0);
  VirasoroOperator op = build_operator(cd.model.monodromy, m, P);
  Series full = genus0_accumulate(cd, op, L);
  return make_report(cd, m, 0, full);
}

ConstraintReport evaluate_A1(const ConstraintData& cd, int m) {
  if (!cd.has_genus1)
    throw std::invalid_argument(
        "constraint data was built without genus-1 input");
  if (m < -1 || m > 2)
    throw std::invalid_argument(
        "direct genus-1 evaluation covers m in [-1, 2]; higher levels follow "
        "from the commutation relation");
  const int L = cd.level();
  const int P = L + std::max(m, 0);
  VirasoroOperator op = build_operator(cd.model.monodromy, m, P);
  const int cap_dim = cd.model.n * (L + 1);
  GradCache df0(cd.f0), df1(cd.f1);

  Series out(cd.g0.tvars, cd.f0.cutoff);
  for (int i = 0; i < cap_dim; ++i)
    for (int j = i; j < cap_dim; ++j) {
      const Rat& w = op.dd.at(i, j);
      if (w == 0) continue;
      Series bracket =
          df0(i).derivative(j) + df0(i) * df1(j) + df1(i) * df0(j);
      out += bracket * (i == j ? w : w * 2);
    }
  for (int i = 0; i < cap_dim; ++i) {
    Series xi;
    bool have = false;
    for (int j = 0; j < cap_dim; ++j) {
      const Rat& w = op.td.at(i, j);
      if (w == 0) continue;
      if (!have) {
        xi = cd.g0.tilde(op.index_alpha(i), op.index_p(i));
        have = true;
      }
      out += xi * df1(j) * w;
    }
  }
  if (op.c0 != 0)
    out += Series::constant(cd.g0.tvars, cd.f0.cutoff, op.c0);
  return make_report(cd, m, 1, out);
}

std::string constraints_report_json(const std::vector<ConstraintReport>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json j;
    j["model"] = r.model_id;
    j["m"] = r.m;
    j["genus"] = r.genus;
    j["order"] = r.order;
    j["certified"] = r.certified;
    j["window"] = r.window;
    j["pass"] = r.pass;
    json terms = json::array();
    for (const auto& [mo, c] : r.residual.t) {
      if (c == 0) continue;
      json t;
      t["monomial"] = mono_str(r.residual.vars, mo);
      t["value"] = rat_str(c);
      terms.push_back(std::move(t));
    }
    j["residual_terms"] = std::move(terms);
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

}  // namespace virfrob
