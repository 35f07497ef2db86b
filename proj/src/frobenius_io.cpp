#include <json.hpp>

#include "virfrob/frobenius.hpp"

namespace virfrob {

namespace {

using json = nlohmann::ordered_json;
using series::Mono;
using series::Series;
using series::mono_deg;
using series::mono_one;

Rat rat_field(const json& j) {
  if (j.is_number_integer()) return Rat(j.get<long>());
  if (j.is_string()) return rat_parse(j.get<std::string>());
  throw std::invalid_argument("rational fields must be strings like \"p/q\"");
}

void read_terms(Series& f, const json& arr, bool quantum, int nvars, int nflat) {
  for (const auto& term : arr) {
    Rat c = rat_field(term.at("coeff"));
    const auto& pw = term.at("powers");
    if (!pw.is_array() || static_cast<int>(pw.size()) != nvars)
      throw std::invalid_argument("powers must list one entry per variable");
    Mono m = mono_one(nvars);
    for (int i = 0; i < nvars; ++i) {
      int e = pw[i].get<int>();
      if (e < 0 || e > 255) throw std::invalid_argument("bad exponent");
      m[i] = static_cast<char>(e);
    }
    int mdeg = 0;
    for (int i = nflat; i < nvars; ++i) mdeg += static_cast<unsigned char>(m[i]);
    if (quantum != (mdeg > 0))
      throw std::invalid_argument(quantum
                                      ? "quantum terms must carry a marker"
                                      : "polynomial terms must be marker-free");
    if (mono_deg(m) > f.cutoff)
      throw std::invalid_argument("potential term exceeds the stated cutoff");
    if (f.coeff(m) != 0) throw std::invalid_argument("duplicate potential term");
    f.set_term(m, c);
  }
}

}  // namespace

FrobeniusModel frobenius_from_json(const std::string& text) {
  json j = json::parse(text);
  FrobeniusModel m;
  m.id = j.at("name").get<std::string>();
  m.monodromy = bundled_monodromy(j.at("monodromy").get<std::string>());
  m.n = m.monodromy.n;
  if (rat_field(j.at("charge_d")) != m.monodromy.charge_d)
    throw std::invalid_argument("charge_d disagrees with the monodromy bundle");

  int cutoff = j.at("cutoff").get<int>();
  if (cutoff < 3) throw std::invalid_argument("cutoff must be at least 3");

  const auto& names = j.at("variables");
  if (!names.is_array() || static_cast<int>(names.size()) != m.n)
    throw std::invalid_argument("variables must list n names");
  std::vector<std::pair<std::string, int>> spec;
  for (const auto& v : names) spec.emplace_back(v.get<std::string>(), -1);
  for (const auto& mk : j.at("markers")) {
    std::string tied = mk.at("tied_to").get<std::string>();
    int idx = -1;
    for (int i = 0; i < m.n; ++i)
      if (spec[i].first == tied) idx = i;
    if (idx < 0)
      throw std::invalid_argument("marker tied to unknown variable " + tied);
    spec.emplace_back(mk.at("name").get<std::string>(), idx);
  }
  m.vars = series::make_vars(spec);

  Series f(m.vars, cutoff);
  read_terms(f, j.at("polynomial"), false, m.vars->n(), m.n);
  read_terms(f, j.at("quantum"), true, m.vars->n(), m.n);
  m.potential = f;

  const Rat mu1 = m.monodromy.mu[m.monodromy.unit_index];
  const auto& eu = j.at("euler");
  const auto& degs = eu.at("degrees");
  const auto& cons = eu.at("constants");
  if (static_cast<int>(degs.size()) != m.n || static_cast<int>(cons.size()) != m.n)
    throw std::invalid_argument("euler data must list n degrees and n constants");
  for (int a = 0; a < m.n; ++a) {
    Rat deg = rat_field(degs[a]);
    Rat con = rat_field(cons[a]);
    if (deg != Rat(1) + mu1 - m.monodromy.mu[a])
      throw std::invalid_argument("euler degree disagrees with mu");
    Rat want(0);
    auto it = m.monodromy.r.find(1);
    if (it != m.monodromy.r.end())
      want = it->second.at(a, m.monodromy.unit_index);
    if (con != want)
      throw std::invalid_argument("euler constant disagrees with R_1");
    m.euler_degrees.push_back(deg);
    m.euler_constants.push_back(con);
  }
  return m;
}

std::string frobenius_to_json(const FrobeniusModel& m) {
  json j;
  j["name"] = m.id;
  j["monodromy"] = m.monodromy.id;
  j["charge_d"] = rat_str(m.monodromy.charge_d);
  j["cutoff"] = m.cutoff();
  json names = json::array();
  for (int a = 0; a < m.n; ++a) names.push_back(m.vars->v[a].name);
  j["variables"] = names;
  json markers = json::array();
  for (int i = m.n; i < m.vars->n(); ++i)
    markers.push_back(json{{"name", m.vars->v[i].name},
                           {"tied_to", m.vars->v[m.vars->v[i].tied_to].name}});
  j["markers"] = markers;

  json poly = json::array(), quantum = json::array();
  for (const auto& [mm, c] : m.potential.t) {
    json pw = json::array();
    int mdeg = 0;
    for (int i = 0; i < m.vars->n(); ++i) {
      int e = static_cast<unsigned char>(mm[i]);
      pw.push_back(e);
      if (i >= m.n) mdeg += e;
    }
    json term{{"coeff", rat_str(c)}, {"powers", pw}};
    (mdeg > 0 ? quantum : poly).push_back(term);
  }
  j["polynomial"] = poly;
  j["quantum"] = quantum;

  json degs = json::array(), cons = json::array();
  for (int a = 0; a < m.n; ++a) {
    degs.push_back(rat_str(m.euler_degrees[a]));
    cons.push_back(rat_str(m.euler_constants[a]));
  }
  j["euler"] = json{{"degrees", degs}, {"constants", cons}};
  return j.dump(2) + "\n";
}

}  // namespace virfrob
