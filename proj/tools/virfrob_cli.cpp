// Command line front end.  Every run is a batch computation with a
// machine-readable table or report on stdout (or --out), a one-line human
// summary on stderr, and an exit code that scripts can trust: 0 all checks
// pass, 1 a mathematical check failed, 2 usage or I/O trouble.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "virfrob/constraints.hpp"
#include "virfrob/gw.hpp"

namespace {

using namespace virfrob;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// writes land next to the target and are renamed over it, so a crashed run
// never leaves a half-written table behind
void write_out(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::invalid_argument("cannot write " + tmp);
    out << text;
    out.flush();
    if (!out) throw std::invalid_argument("short write to " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::invalid_argument("cannot move " + tmp + " onto " + path);
}

std::string canonical_id(const std::string& s) {
  if (s == "n1" || s == "trivial-n1") return "trivial-n1";
  if (s == "cp1" || s == "p1xp1" || s == "cp3") return s;
  return "";
}

// bundled short id, or a path to a monodromy json like the files in models/
MonodromyData load_monodromy(const std::string& model) {
  std::string id = canonical_id(model);
  if (!id.empty()) return bundled_monodromy(id);
  return monodromy_from_json(slurp(model));
}

// bundled short id, or a path to a full potential bundle
FrobeniusModel load_frobenius(const std::string& model, int cutoff) {
  std::string id = canonical_id(model);
  if (!id.empty()) return bundled_frobenius(id, cutoff);
  return frobenius_from_json(slurp(model));
}

bool parse_range(const std::string& s, int& lo, int& hi) {
  auto pos = s.find("..");
  if (pos == std::string::npos || pos == 0 || pos + 2 >= s.size())
    return false;
  try {
    std::size_t used = 0;
    lo = std::stoi(s.substr(0, pos), &used);
    if (used != pos) return false;
    std::string tail = s.substr(pos + 2);
    hi = std::stoi(tail, &used);
    if (used != tail.size()) return false;
  } catch (...) {
    return false;
  }
  return lo <= hi;
}

int run_gw(const std::string& target, int genus, int max_total,
           int max_degree, const std::string& format, const std::string& out) {
  std::string table;
  std::size_t rows = 0;
  Int largest = 0;
  if (target == "p1xp1") {
    gw::P1P1Table t =
        genus == 1 ? gw::p1p1_elliptic(max_total) : gw::p1p1_rational(max_total);
    table = format == "json" ? gw::p1p1_json(t) : gw::p1p1_csv(t);
    for (int m = 1; m <= t.max_total; ++m)
      for (int l = 0; 2 * l <= m; ++l) {
        ++rows;
        const Int& v =
            genus == 1 ? t.n1.at({m - l, l}) : t.n0.at({m - l, l});
        if (v > largest) largest = v;
      }
  } else if (target == "cp3") {
    gw::Cp3Table t = genus == 1 ? gw::cp3_elliptic(max_degree)
                                : gw::cp3_rational(max_degree);
    table = format == "json" ? gw::cp3_json(t) : gw::cp3_csv(t);
    rows = t.rows.size();
    for (const auto& r : t.rows) {
      const Int& v = genus == 1 ? r.elliptic : r.n0;
      if (v > largest) largest = v;
    }
  } else {
    throw std::invalid_argument("unknown target: " + target +
                                " (expected p1xp1 or cp3)");
  }
  write_out(out, table);
  std::cerr << target << " genus " << genus << ": " << rows
            << " rows, largest value " << largest.get_str() << "\n";
  return 0;
}

std::string relations_csv(const std::vector<PairCheck>& rows) {
  std::ostringstream os;
  os << "i,j,defined,pass,window,note\n";
  for (const auto& r : rows) {
    os << r.i << "," << r.j << "," << (r.defined ? 1 : 0) << ","
       << (r.pass ? 1 : 0) << "," << r.window << ","
       << (r.defined ? "" : r.error) << "\n";
  }
  return os.str();
}

int run_virasoro(const std::string& model, const std::string& range, int P,
                 bool strict, const std::string& format,
                 const std::string& out) {
  int lo = 0, hi = 0;
  if (!parse_range(range, lo, hi))
    throw std::invalid_argument("bad range: " + range +
                                " (expected lo..hi with lo <= hi)");
  MonodromyData md = load_monodromy(model);
  std::vector<PairCheck> rows = check_virasoro_relations(md, lo, hi, P);
  write_out(out, format == "json" ? relations_report_json(rows)
                                  : relations_csv(rows));
  std::size_t undefined = 0, failed = 0;
  for (const auto& r : rows) {
    if (!r.defined) ++undefined;
    else if (!r.pass) ++failed;
  }
  std::cerr << rows.size() << " pairs, " << failed << " failed, " << undefined
            << " resonant" << (strict && undefined ? " (strict)" : "") << "\n";
  if (failed > 0) return 1;
  if (strict && undefined > 0) return 1;
  return 0;
}

std::string constraints_csv(const std::vector<ConstraintReport>& rows) {
  std::ostringstream os;
  os << "model,m,genus,order,certified,window,pass,violations\n";
  for (const auto& r : rows) {
    os << r.model_id << "," << r.m << "," << r.genus << "," << r.order << ","
       << r.certified << "," << r.window << "," << (r.pass ? 1 : 0) << ","
       << r.residual.t.size() << "\n";
  }
  return os.str();
}

int run_constraints(const std::string& model, int genus,
                    const std::string& range, int order, int level,
                    const std::string& format, const std::string& out) {
  int lo = 0, hi = 0;
  if (!parse_range(range, lo, hi))
    throw std::invalid_argument("bad range: " + range +
                                " (expected lo..hi with lo <= hi)");
  if (genus == 1 && (lo < -1 || hi > 2))
    throw std::invalid_argument(
        "genus-1 evaluation is direct only for m in [-1, 2]");
  FrobeniusModel fm = load_frobenius(model, order + 5);
  ConstraintData cd = constraint_data(fm, level, order, genus == 1);
  std::vector<ConstraintReport> rows;
  for (int m = lo; m <= hi; ++m)
    rows.push_back(genus == 1 ? evaluate_A1(cd, m) : evaluate_A0(cd, m));
  write_out(out, format == "json" ? constraints_report_json(rows)
                                  : constraints_csv(rows));
  std::size_t failed = 0;
  for (const auto& r : rows)
    if (!r.pass) ++failed;
  std::cerr << fm.id << " genus " << genus << ": " << rows.size()
            << " levels, " << failed << " failed\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Virasoro operators, constraint checks and curve count tables"};
  app.require_subcommand(1);

  std::string format = "csv", out;
  auto add_io = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", out,
                    "write the table here (atomic), default stdout");
  };

  auto* gw_cmd = app.add_subcommand("gw", "exact curve count tables");
  std::string gw_target;
  int gw_genus = 0, gw_max_total = 6, gw_max_degree = 3;
  gw_cmd->add_option("--target", gw_target, "p1xp1 or cp3")->required();
  gw_cmd->add_option("--genus", gw_genus, "0 rational, 1 elliptic")
      ->check(CLI::Range(0, 1));
  gw_cmd->add_option("--max-total", gw_max_total,
                     "p1xp1: largest bidegree total k+l");
  gw_cmd->add_option("--max-degree", gw_max_degree, "cp3: largest degree");
  add_io(gw_cmd);

  auto* vir_cmd =
      app.add_subcommand("virasoro", "commutation relations of the operators");
  std::string vir_model, vir_range = "-2..3";
  int vir_P = 8;
  bool vir_strict = false;
  vir_cmd->add_option("--model", vir_model,
                      "bundled id (n1, cp1, p1xp1, cp3) or monodromy json path")
      ->required();
  vir_cmd->add_option("--range", vir_range, "levels lo..hi");
  vir_cmd->add_option("--cutoff", vir_P, "descendent cutoff P");
  vir_cmd->add_flag("--strict", vir_strict,
                    "treat resonant (undefined) levels as failures");
  add_io(vir_cmd);

  auto* con_cmd =
      app.add_subcommand("constraints", "genus 0/1 constraint residuals");
  std::string con_model, con_range;
  int con_genus = 0, con_order = 0, con_level = 8;
  con_cmd->add_option("--model", con_model,
                      "bundled id (n1, cp1, p1xp1, cp3) or potential bundle path")
      ->required();
  con_cmd->add_option("--genus", con_genus, "0 or 1")->check(CLI::Range(0, 1));
  con_cmd->add_option("--range", con_range,
                      "levels lo..hi (default -1..3 genus 0, -1..2 genus 1)");
  con_cmd->add_option("--order", con_order,
                      "residual order (default 4 genus 0, 3 genus 1)");
  con_cmd->add_option("--level", con_level, "coupling level of the table");
  add_io(con_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gw_cmd->parsed())
      return run_gw(gw_target, gw_genus, gw_max_total, gw_max_degree, format,
                    out);
    if (vir_cmd->parsed())
      return run_virasoro(vir_model, vir_range, vir_P, vir_strict, format,
                          out);
    if (con_cmd->parsed()) {
      if (con_range.empty()) con_range = con_genus == 1 ? "-1..2" : "-1..3";
      if (con_order == 0) con_order = con_genus == 1 ? 3 : 4;
      return run_constraints(con_model, con_genus, con_range, con_order,
                             con_level, format, out);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
