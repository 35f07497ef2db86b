#include <json.hpp>

#include "virfrob/monodromy.hpp"

namespace virfrob {

namespace {

using json = nlohmann::ordered_json;

Rat rat_field(const json& j) {
  if (j.is_number_integer()) return Rat(j.get<long>());
  if (j.is_string()) return rat_parse(j.get<std::string>());
  throw std::invalid_argument("rational fields must be strings like \"p/q\"");
}

QMat matrix_field(const json& j, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n * n)
    throw std::invalid_argument("matrix field must list n*n entries row-major");
  QMat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) m.at(i, k) = rat_field(j[i * n + k]);
  return m;
}

json matrix_json(const QMat& m) {
  json arr = json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) arr.push_back(rat_str(m.at(i, j)));
  return arr;
}

}  // namespace

MonodromyData monodromy_from_json(const std::string& text) {
  json j = json::parse(text);
  MonodromyData md;
  md.n = j.at("n").get<int>();
  if (md.n <= 0) throw std::invalid_argument("n must be positive");
  md.eta = matrix_field(j.at("eta"), md.n);
  const auto& mu = j.at("mu_diag");
  if (!mu.is_array() || static_cast<int>(mu.size()) != md.n)
    throw std::invalid_argument("mu_diag must list n entries");
  for (const auto& e : mu) md.mu.push_back(rat_field(e));
  for (const auto& part : j.at("r_parts")) {
    int k = part.at("k").get<int>();
    if (k < 1) throw std::invalid_argument("r_parts indices must be >= 1");
    if (md.r.count(k)) throw std::invalid_argument("duplicate r_parts index");
    QMat rk = matrix_field(part.at("matrix"), md.n);
    if (!rk.is_zero()) md.r.emplace(k, std::move(rk));
  }
  md.unit_index = j.at("unit_index").get<int>();
  md.charge_d = rat_field(j.at("charge_d"));
  md.finalize();
  return md;
}

std::string monodromy_to_json(const MonodromyData& md) {
  json j;
  j["n"] = md.n;
  j["eta"] = matrix_json(md.eta);
  json mu = json::array();
  for (const auto& m : md.mu) mu.push_back(rat_str(m));
  j["mu_diag"] = mu;
  json parts = json::array();
  for (const auto& [k, rk] : md.r)
    parts.push_back(json{{"k", k}, {"matrix", matrix_json(rk)}});
  j["r_parts"] = parts;
  j["unit_index"] = md.unit_index;
  j["charge_d"] = rat_str(md.charge_d);
  return j.dump(2) + "\n";
}

namespace {

constexpr const char* kTrivialN1 = R"json({
  "n": 1,
  "eta": ["1"],
  "mu_diag": ["0"],
  "r_parts": [],
  "unit_index": 0,
  "charge_d": "0"
})json";

constexpr const char* kCp1 = R"json({
  "n": 2,
  "eta": ["0", "1",
          "1", "0"],
  "mu_diag": ["-1/2", "1/2"],
  "r_parts": [
    {"k": 1, "matrix": ["0", "0",
                        "2", "0"]}
  ],
  "unit_index": 0,
  "charge_d": "1"
})json";

constexpr const char* kP1xP1 = R"json({
  "n": 4,
  "eta": ["0", "0", "0", "1",
          "0", "0", "1", "0",
          "0", "1", "0", "0",
          "1", "0", "0", "0"],
  "mu_diag": ["-1", "0", "0", "1"],
  "r_parts": [
    {"k": 1, "matrix": ["0", "0", "0", "0",
                        "2", "0", "0", "0",
                        "2", "0", "0", "0",
                        "0", "2", "2", "0"]}
  ],
  "unit_index": 0,
  "charge_d": "2"
})json";

constexpr const char* kCp3 = R"json({
  "n": 4,
  "eta": ["0", "0", "0", "1",
          "0", "0", "1", "0",
          "0", "1", "0", "0",
          "1", "0", "0", "0"],
  "mu_diag": ["-3/2", "-1/2", "1/2", "3/2"],
  "r_parts": [
    {"k": 1, "matrix": ["0", "0", "0", "0",
                        "4", "0", "0", "0",
                        "0", "4", "0", "0",
                        "0", "0", "4", "0"]}
  ],
  "unit_index": 0,
  "charge_d": "3"
})json";

const std::vector<std::pair<std::string, const char*>>& registry() {
  static const std::vector<std::pair<std::string, const char*>> reg = {
      {"trivial-n1", kTrivialN1},
      {"cp1", kCp1},
      {"p1xp1", kP1xP1},
      {"cp3", kCp3},
  };
  return reg;
}

}  // namespace

std::string bundled_monodromy_json(const std::string& id) {
  for (const auto& [name, text] : registry())
    if (name == id) return text;
  throw std::invalid_argument("unknown model id: " + id);
}

const MonodromyData& bundled_monodromy(const std::string& id) {
  static std::map<std::string, MonodromyData> cache;
  auto it = cache.find(id);
  if (it == cache.end()) {
    MonodromyData md = monodromy_from_json(bundled_monodromy_json(id));
    md.id = id;
    md.require_valid();
    it = cache.emplace(id, std::move(md)).first;
  }
  return it->second;
}

std::vector<std::string> bundled_monodromy_ids() {
  std::vector<std::string> ids;
  for (const auto& [name, text] : registry()) ids.push_back(name);
  return ids;
}

}  // namespace virfrob
