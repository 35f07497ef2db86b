#include <doctest.h>

#include <fstream>
#include <sstream>

#include "virfrob/monodromy.hpp"

using namespace virfrob;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool same_data(const MonodromyData& a, const MonodromyData& b) {
  return a.n == b.n && a.eta == b.eta && a.mu == b.mu && a.r == b.r &&
         a.unit_index == b.unit_index && a.charge_d == b.charge_d;
}

}  // namespace

TEST_CASE("bundled models validate cleanly") {
  for (const auto& id : bundled_monodromy_ids()) {
    CAPTURE(id);
    MonodromyData md = bundled_monodromy(id);
    auto rep = md.validate();
    CHECK(!rep.empty());
    for (const auto& e : rep) {
      CAPTURE(e.invariant);
      CAPTURE(e.first_violation);
      CHECK(e.pass);
    }
  }
  CHECK(bundled_monodromy_ids() ==
        std::vector<std::string>{"trivial-n1", "cp1", "p1xp1", "cp3"});
}

TEST_CASE("bundled model files match the built-in registry") {
  for (const auto& id : bundled_monodromy_ids()) {
    CAPTURE(id);
    MonodromyData from_file = monodromy_from_json(
        slurp(std::string(VIRFROB_SOURCE_DIR) + "/models/" + id + ".json"));
    CHECK(same_data(from_file, bundled_monodromy(id)));
  }
}

TEST_CASE("json round-trip") {
  for (const auto& id : bundled_monodromy_ids()) {
    const MonodromyData& md = bundled_monodromy(id);
    MonodromyData back = monodromy_from_json(monodromy_to_json(md));
    CHECK(same_data(md, back));
  }
  CHECK_THROWS(monodromy_from_json("{\"n\": 1}"));
  CHECK_THROWS(monodromy_from_json("not json"));
}

TEST_CASE("perturbed cp1 fails the pairing rule") {
  MonodromyData md = bundled_monodromy("cp1");
  QMat bad(2, 2);
  bad.at(0, 0) = 1;  // diagonal entry: breaks both grading and pairing
  bad.at(1, 0) = 2;
  md.r[1] = bad;
  auto rep = md.validate();
  bool pairing_failed = false, grading_failed = false;
  for (const auto& e : rep) {
    if (e.invariant.find("eta R_1") != std::string::npos && !e.pass)
      pairing_failed = true;
    if (e.invariant.find("[mu, R_1]") != std::string::npos && !e.pass)
      grading_failed = true;
  }
  CHECK(pairing_failed);
  CHECK(grading_failed);
  CHECK(!all_pass(rep));
}

TEST_CASE("graded components") {
  const MonodromyData& cp1 = bundled_monodromy("cp1");
  QMat id2 = QMat::identity(2);
  CHECK(cp1.component(id2, 0) == id2);
  CHECK(cp1.component(id2, 1).is_zero());
  QMat r1 = cp1.r_part(1);
  CHECK(cp1.component(r1, 1) == r1);
  CHECK(cp1.component(r1, 0).is_zero());

  // componentwise decomposition reassembles any matrix exactly
  for (const auto& id : bundled_monodromy_ids()) {
    const MonodromyData& md = bundled_monodromy(id);
    QMat a(md.n, md.n);
    int fill = 1;
    for (int i = 0; i < md.n; ++i)
      for (int j = 0; j < md.n; ++j) a.at(i, j) = fill++;
    QMat sum(md.n, md.n);
    for (int k = -md.spread; k <= md.spread; ++k) sum = sum + md.component(a, k);
    CHECK(sum == a);
  }
}

TEST_CASE("spread matches the mu spectrum") {
  CHECK(bundled_monodromy("trivial-n1").spread == 0);
  CHECK(bundled_monodromy("cp1").spread == 1);
  CHECK(bundled_monodromy("p1xp1").spread == 2);
  CHECK(bundled_monodromy("cp3").spread == 3);
}

TEST_CASE("powers of R by graded component") {
  const MonodromyData& cp1 = bundled_monodromy("cp1");
  CHECK(cp1.r_power_component(0, 0) == QMat::identity(2));
  CHECK(cp1.r_power_component(2, 1).is_zero());  // no R_2
  CHECK(cp1.r_power_component(1, 1) == cp1.r_part(1));
  CHECK(cp1.r_power_component(2, 2).is_zero());  // R_1^2 = 0 here

  const MonodromyData& p2 = bundled_monodromy("p1xp1");
  QMat sq = p2.r_part(1) * p2.r_part(1);
  CHECK(sq.at(3, 0) == 8);
  CHECK(p2.r_power_component(2, 2) == sq);

  const MonodromyData& cp3 = bundled_monodromy("cp3");
  QMat r1 = cp3.r_part(1);
  CHECK(cp3.r_power_component(2, 2) == r1 * r1);
  CHECK(cp3.r_power_component(3, 3) == r1 * (r1 * r1));
  CHECK(cp3.r_power_component(3, 3).at(3, 0) == 64);
  CHECK(cp3.r_power_component(3, 2).is_zero());
  CHECK(cp3.r_power_component(1, 0).is_zero());
}

TEST_CASE("pm matrix special values") {
  for (const auto& id : bundled_monodromy_ids())
    CHECK(bundled_monodromy(id).pm(-1, rat(3, 7)) ==
          QMat::identity(bundled_monodromy(id).n));

  const MonodromyData& n1 = bundled_monodromy("trivial-n1");
  QMat p0 = n1.pm(0, 0);
  CHECK(p0.at(0, 0) == rat(-1, 2));

  // P_0(mu, R) = mu - 1/2 + R
  for (const auto& id : bundled_monodromy_ids()) {
    const MonodromyData& md = bundled_monodromy(id);
    QMat expect = QMat::diag(md.mu) + md.r_total();
    for (int i = 0; i < md.n; ++i) expect.at(i, i) -= rat(1, 2);
    CHECK(md.pm(0, 0) == expect);
  }
}

TEST_CASE("pm half-integer resonance") {
  CHECK_THROWS_AS(bundled_monodromy("cp1").pm(-2, 0), HalfIntegerResonance);
  CHECK_THROWS_AS(bundled_monodromy("cp3").pm(-2, 5), HalfIntegerResonance);
  CHECK_NOTHROW(bundled_monodromy("p1xp1").pm(-2, 0));
  CHECK_NOTHROW(bundled_monodromy("trivial-n1").pm(-3, 1));
  CHECK_NOTHROW(bundled_monodromy("cp1").pm(-2, rat(1, 3)));
}

TEST_CASE("pm symmetry identity") {
  // eta [P_m(mu+z+1)]_q = (-1)^(m+q+1) [P_m(mu-m-z+q)]_q^T eta
  std::vector<Rat> shifts = {rat(1, 3), rat(-2, 7), rat(5, 3), rat(9, 4)};
  for (const auto& id : bundled_monodromy_ids()) {
    const MonodromyData& md = bundled_monodromy(id);
    for (int m = -2; m <= 3; ++m)
      for (const Rat& z : shifts)
        for (int q = 0; q <= md.spread; ++q) {
          QMat lhs = md.eta * md.component(md.pm(m, z + 1), q);
          QMat rhs = md.component(md.pm(m, -m - z + q), q).transpose() * md.eta;
          if (((m + q + 1) % 2 + 2) % 2 == 1) rhs = Rat(-1) * rhs;
          CAPTURE(id);
          CAPTURE(m);
          CAPTURE(q);
          CHECK(lhs == rhs);
        }
  }
}

TEST_CASE("pm degenerate and inverse branches agree on scalars") {
  // n=1: P_m(z) with mu = 0, R = 0 is the scalar product directly.
  const MonodromyData& n1 = bundled_monodromy("trivial-n1");
  Rat z = rat(2, 5);
  // m = 2: (z - 1/2)(z + 1/2)(z + 3/2)
  CHECK(n1.pm(2, z).at(0, 0) ==
        (z - rat(1, 2)) * (z + rat(1, 2)) * (z + rat(3, 2)));
  // m = -3: 1 / ((z - 3/2)(z - 5/2))
  CHECK(n1.pm(-3, z).at(0, 0) ==
        1 / ((z - rat(3, 2)) * (z - rat(5, 2))));
}
