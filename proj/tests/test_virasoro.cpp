#include <doctest.h>

#include <json.hpp>
#include <string>

#include "virfrob/virasoro.hpp"

using namespace virfrob;

namespace {

// First mismatch between two operators among entries whose descendent levels
// are all <= window, as a printable string; empty when equal there.
std::string windowed_diff(const VirasoroOperator& a, const VirasoroOperator& b,
                          int window) {
  auto scan = [&](const QMat& x, const QMat& y,
                  const char* name) -> std::string {
    for (int i = 0; i < a.dim(); ++i) {
      if (a.index_p(i) > window) continue;
      for (int j = 0; j < a.dim(); ++j) {
        if (a.index_p(j) > window) continue;
        if (x.at(i, j) != y.at(i, j))
          return std::string(name) + "[(" +
                 std::to_string(a.index_alpha(i)) + "," +
                 std::to_string(a.index_p(i)) + "),(" +
                 std::to_string(a.index_alpha(j)) + "," +
                 std::to_string(a.index_p(j)) + ")] got " +
                 rat_str(x.at(i, j)) + " want " + rat_str(y.at(i, j));
      }
    }
    return "";
  };
  std::string d = scan(a.dd, b.dd, "dd");
  if (d.empty()) d = scan(a.td, b.td, "td");
  if (d.empty()) d = scan(a.tt, b.tt, "tt");
  if (d.empty() && a.c0 != b.c0)
    d = "const got " + rat_str(a.c0) + " want " + rat_str(b.c0);
  return d;
}

std::string full_diff(const VirasoroOperator& a, const VirasoroOperator& b) {
  return windowed_diff(a, b, a.cutoff);
}

bool has_half_integer_mu(const MonodromyData& md) {
  for (const Rat& m : md.mu)
    if (is_integer(m - rat(1, 2))) return true;
  return false;
}

}  // namespace

TEST_CASE("bilinear assembly matches the closed forms exactly") {
  const int P = 8;
  for (const auto& id : bundled_monodromy_ids()) {
    const MonodromyData& md = bundled_monodromy(id);
    for (int m = -2; m <= 2; ++m) {
      CAPTURE(id);
      CAPTURE(m);
      if (m <= -2 && has_half_integer_mu(md)) {
        CHECK_THROWS_AS(build_operator(md, m, P), HalfIntegerResonance);
        CHECK_THROWS_AS(closed_form_operator(md, m, P), HalfIntegerResonance);
        continue;
      }
      VirasoroOperator built = build_operator(md, m, P);
      VirasoroOperator closed = closed_form_operator(md, m, P);
      std::string diff = full_diff(built, closed);
      CHECK_MESSAGE(diff.empty(), id, " m=", m, ": ", diff);

      // storage invariant: both quadratic tables exactly symmetric
      CHECK(built.dd == built.dd.transpose());
      CHECK(built.tt == built.tt.transpose());
    }
  }
}

TEST_CASE("scalar model tables take the textbook values") {
  const MonodromyData& md = bundled_monodromy("trivial-n1");
  const int P = 8;

  VirasoroOperator l0 = build_operator(md, 0, P);
  CHECK(l0.dd.is_zero());
  CHECK(l0.tt.is_zero());
  CHECK(l0.c0 == rat(1, 16));
  for (int p = 0; p <= P; ++p)
    for (int q = 0; q <= P; ++q)
      CHECK(l0.td.at(p, q) == (p == q ? p + rat(1, 2) : Rat(0)));

  VirasoroOperator l1 = build_operator(md, 1, P);
  CHECK(l1.c0 == 0);
  CHECK(l1.tt.is_zero());
  for (int p = 0; p <= P; ++p)
    for (int q = 0; q <= P; ++q) {
      CHECK(l1.dd.at(p, q) == (p == 0 && q == 0 ? rat(1, 8) : Rat(0)));
      CHECK(l1.td.at(p, q) ==
            (q == p + 1 ? (p + rat(1, 2)) * (p + rat(3, 2)) : Rat(0)));
    }

  VirasoroOperator lm2 = build_operator(md, -2, P);
  CHECK(lm2.dd.is_zero());
  CHECK(lm2.c0 == 0);
  for (int p = 0; p <= P; ++p)
    for (int q = 0; q <= P; ++q) {
      CHECK(lm2.td.at(p, q) ==
            (p >= 2 && q == p - 2 ? Rat(1) / (p - rat(1, 2)) : Rat(0)));
      Rat want =
          ((p == 0 && q == 1) || (p == 1 && q == 0)) ? Rat(1) : Rat(0);
      CHECK(lm2.tt.at(p, q) == want);
    }
}

TEST_CASE("string level has unit couplings and half the pairing") {
  for (const auto& id : bundled_monodromy_ids()) {
    const MonodromyData& md = bundled_monodromy(id);
    CAPTURE(id);
    const int P = 8;
    VirasoroOperator op = build_operator(md, -1, P);
    CHECK(op.dd.is_zero());
    CHECK(op.c0 == 0);
    for (int i = 0; i < op.dim(); ++i)
      for (int j = 0; j < op.dim(); ++j) {
        int a = op.index_alpha(i), p = op.index_p(i);
        int b = op.index_alpha(j), q = op.index_p(j);
        Rat td_want = (a == b && p >= 1 && q == p - 1) ? Rat(1) : Rat(0);
        CHECK(op.td.at(i, j) == td_want);
        Rat tt_want = (p == 0 && q == 0) ? md.eta.at(a, b) / 2 : Rat(0);
        CHECK(op.tt.at(i, j) == tt_want);
      }
  }
}

TEST_CASE("grading level constants") {
  CHECK(build_operator(bundled_monodromy("cp1"), 0, 8).c0 == 0);
  CHECK(build_operator(bundled_monodromy("trivial-n1"), 0, 8).c0 == rat(1, 16));
}

TEST_CASE("second-derivative support sits in the grade window") {
  for (const char* id : {"p1xp1", "cp3"}) {
    const MonodromyData& md = bundled_monodromy(id);
    for (int m : {1, 2}) {
      VirasoroOperator op = build_operator(md, m, 8);
      CAPTURE(id);
      CAPTURE(m);
      for (int i = 0; i < op.dim(); ++i)
        for (int j = 0; j < op.dim(); ++j) {
          if (op.dd.at(i, j) == 0) continue;
          int sum = op.index_p(i) + op.index_p(j);
          CHECK(sum <= m - 1);
          CHECK(sum >= m - 1 - md.spread);
        }
    }
  }
}

TEST_CASE("explicit commutators") {
  const MonodromyData& n1 = bundled_monodromy("trivial-n1");
  const int P = 8;

  SUBCASE("level 2 against level -2 on the scalar model") {
    VirasoroOperator z =
        commutator(build_operator(n1, 2, P), build_operator(n1, -2, P));
    VirasoroOperator want(1, 0, P);
    want.axpy(Rat(4), build_operator(n1, 0, P));
    want.c0 += rat(1, 2);  // n (m^3 - m)/12 at m = 2
    std::string diff = windowed_diff(z, want, P - 4);
    CHECK_MESSAGE(diff.empty(), diff);
  }

  SUBCASE("raising against lowering gives twice the grading level") {
    for (const auto& id : bundled_monodromy_ids()) {
      const MonodromyData& md = bundled_monodromy(id);
      CAPTURE(id);
      VirasoroOperator z =
          commutator(build_operator(md, 1, P), build_operator(md, -1, P));
      VirasoroOperator want(md.n, 0, P);
      want.axpy(Rat(2), build_operator(md, 0, P));
      int w = P - 2 - (md.n - 1) * md.max_r_index();
      std::string diff = windowed_diff(z, want, w);
      CHECK_MESSAGE(diff.empty(), id, ": ", diff);
    }
  }

  SUBCASE("an operator commutes with itself identically") {
    for (int m : {-2, 0, 1, 2}) {
      VirasoroOperator op = build_operator(n1, m, P);
      CHECK(commutator(op, op).is_zero());
    }
  }
}

TEST_CASE("relation table closes on every model") {
  struct Range {
    const char* id;
    int lo;
  } ranges[] = {{"trivial-n1", -2}, {"cp1", -1}, {"p1xp1", -2}, {"cp3", -1}};
  for (const auto& r : ranges) {
    const MonodromyData& md = bundled_monodromy(r.id);
    auto rows = check_virasoro_relations(md, r.lo, 3, 8);
    CHECK(rows.size() == static_cast<std::size_t>((3 - r.lo + 1) * (3 - r.lo + 1)));
    for (const auto& row : rows) {
      CAPTURE(r.id);
      CAPTURE(row.i);
      CAPTURE(row.j);
      CHECK(row.defined);
      std::string msg;
      if (row.has_discrepancy)
        msg = row.first.table + " at (" + std::to_string(row.first.a_alpha) +
              "," + std::to_string(row.first.a_p) + "),(" +
              std::to_string(row.first.b_alpha) + "," +
              std::to_string(row.first.b_q) + ") expected " +
              rat_str(row.first.expected) + " got " + rat_str(row.first.got);
      CHECK_MESSAGE(row.pass, r.id, " [", row.i, ",", row.j, "]: ", msg);
    }
  }
}

TEST_CASE("resonant levels are reported per row, not thrown") {
  auto rows = check_virasoro_relations(bundled_monodromy("cp1"), -2, 0, 8);
  int undefined = 0;
  for (const auto& row : rows) {
    if (row.i == -2 || row.j == -2) {
      CHECK(!row.defined);
      CHECK(row.error.find("HalfIntegerResonance") != std::string::npos);
      ++undefined;
    } else {
      CHECK(row.defined);
      CHECK(row.pass);
    }
  }
  CHECK(undefined == 5);
}

TEST_CASE("cutoff preconditions are enforced") {
  CHECK_THROWS_AS(build_operator(bundled_monodromy("cp3"), 0, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_operator(bundled_monodromy("trivial-n1"), 3, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(closed_form_operator(bundled_monodromy("trivial-n1"), 3, 8),
                  std::invalid_argument);
}

TEST_CASE("report serialization carries the row schema") {
  auto rows = check_virasoro_relations(bundled_monodromy("trivial-n1"), -1, 1, 4);
  auto j = nlohmann::json::parse(relations_report_json(rows));
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 9);
  for (const auto& row : j) {
    CHECK(row.contains("i"));
    CHECK(row.contains("j"));
    CHECK(row["pass"].is_boolean());
    CHECK(row["pass"].get<bool>());
    CHECK(row["window"].is_number_integer());
    CHECK(row["first_discrepancy"].is_null());
  }

  auto bad = check_virasoro_relations(bundled_monodromy("cp1"), -2, -2, 8);
  auto jb = nlohmann::json::parse(relations_report_json(bad));
  REQUIRE(jb.size() == 1);
  CHECK(jb[0]["pass"].is_null());
  CHECK(jb[0]["error"].is_string());
}

TEST_CASE("operator dump lists sparse entries with one-based directions") {
  VirasoroOperator op = build_operator(bundled_monodromy("trivial-n1"), 0, 3);
  auto j = nlohmann::json::parse(operator_dump_json(op));
  CHECK(j["level"] == 0);
  CHECK(j["cutoff"] == 3);
  CHECK(j["const"] == "1/16");
  CHECK(j["dd"].empty());
  CHECK(j["tt"].empty());
  REQUIRE(j["td"].size() == 4);
  CHECK(j["td"][0] == nlohmann::json({1, 0, 1, 0, "1/2"}));
  CHECK(j["td"][3] == nlohmann::json({1, 3, 1, 3, "7/2"}));

  VirasoroOperator lm1 = build_operator(bundled_monodromy("cp1"), -1, 3);
  auto jm = nlohmann::json::parse(operator_dump_json(lm1));
  // eta is antidiagonal, so the quadratic block holds the single upper entry
  REQUIRE(jm["tt"].size() == 1);
  CHECK(jm["tt"][0] == nlohmann::json({1, 0, 2, 0, "1/2"}));
}
