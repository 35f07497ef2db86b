#include <doctest.h>

#include <random>

#include "virfrob/matrix.hpp"
#include "virfrob/rational.hpp"
#include "virfrob/series.hpp"

using namespace virfrob;
using namespace virfrob::series;

TEST_CASE("rational parse and print round-trip") {
  for (const char* s : {"0", "1", "-1", "3/4", "-7/3", "22/7", "123456789123456789"})
    CHECK(rat_str(rat_parse(s)) == s);
  CHECK(rat_str(rat_parse("4/8")) == "1/2");
  CHECK(rat_str(rat_parse("-2/-4")) == "1/2");
  CHECK(rat_str(rat_parse("6/3")) == "2");
  CHECK_THROWS(rat_parse("1/0"));
  CHECK_THROWS(rat_parse(""));
  CHECK_THROWS(rat_parse("a"));
  CHECK_THROWS(rat_parse("1.5"));
  CHECK_THROWS(rat_parse("1/ 2"));
  CHECK_THROWS(rat_parse("1/2/3"));
}

TEST_CASE("factorial, binomial, powers") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(10) == 3628800);
  CHECK(binomial(10, 3) == 120);
  CHECK(binomial(5, 7) == 0);
  CHECK(binomial(5, -1) == 0);
  CHECK(binomial(-2, 1) == 0);
  CHECK(rat_pow(rat(2, 3), -2) == rat(9, 4));
  CHECK(rat_pow(Rat(5), 0) == 1);
  CHECK_THROWS(rat_pow(Rat(0), -1));
  CHECK(is_integer(Rat(4)));
  CHECK(!is_integer(rat(1, 2)));
}

namespace {

VarSetPtr plain3() {
  return make_vars({{"x", -1}, {"y", -1}, {"z", -1}});
}

Series random_series(VarSetPtr vs, int cutoff, std::mt19937& rng, bool integer_only = false) {
  Series s(vs, cutoff);
  std::uniform_int_distribution<int> nterms(1, 8), expo(0, 3), num(-9, 9), den(1, 5);
  for (int i = nterms(rng); i > 0; --i) {
    Mono m = mono_one(vs->n());
    for (int v = 0; v < vs->n(); ++v) m[v] = static_cast<char>(expo(rng));
    if (mono_deg(m) > cutoff) continue;
    Rat c = integer_only ? Rat(num(rng)) : rat(num(rng), den(rng));
    s.add_term(m, c);
  }
  return s;
}

}  // namespace

TEST_CASE("series ring axioms, randomized") {
  auto vs = plain3();
  std::mt19937 rng(20240517);
  for (int trial = 0; trial < 40; ++trial) {
    int cutoff = 4 + static_cast<int>(rng() % 5);  // 4..8
    Series a = random_series(vs, cutoff, rng);
    Series b = random_series(vs, cutoff, rng);
    Series c = random_series(vs, cutoff, rng);
    CHECK((a * b).t == (b * a).t);
    CHECK(((a * b) * c).t == (a * (b * c)).t);
    CHECK((a * (b + c)).t == (a * b + a * c).t);
    CHECK((a + b - b).t == a.t);
  }
}

TEST_CASE("series examples") {
  auto vs = make_vars({{"t", -1}});
  Series one = Series::constant(vs, 3, 1);
  Series t = Series::variable(vs, 3, 0);
  Series p = (one + t) * (one - t);
  CHECK(p.str() == "1 + -1*t^2");
  Series t2 = t * t;
  CHECK((t2 * t2).is_zero());
}

TEST_CASE("exp(t) exp(-t) = 1 against hand convolution") {
  auto vs = make_vars({{"t", -1}});
  const int cutoff = 6;
  Series ep(vs, cutoff), em(vs, cutoff);
  Rat f(1);
  for (int k = 0; k <= cutoff; ++k) {
    if (k > 0) f /= k;
    ep.add_term(mono_var(1, 0, k), f);
    em.add_term(mono_var(1, 0, k), (k % 2) ? -f : f);
  }
  Series prod = ep * em;
  CHECK(prod.str() == "1");

  Series t = Series::variable(vs, cutoff, 0);
  CHECK((exp_series(t) - ep).is_zero());
  CHECK((exp_series(-t) - em).is_zero());
}

TEST_CASE("exp is a homomorphism in two variables") {
  auto vs = make_vars({{"u", -1}, {"v", -1}});
  Series u = Series::variable(vs, 7, 0);
  Series v = Series::variable(vs, 7, 1);
  CHECK((exp_series(u + v) - exp_series(u) * exp_series(v)).is_zero());
}

TEST_CASE("log and exp are mutually inverse") {
  auto vs = plain3();
  Series u = Series::variable(vs, 6, 0) + Series::variable(vs, 6, 1) * rat(2, 3);
  Series w = u + Series::variable(vs, 6, 2) * Series::variable(vs, 6, 0);
  Series e = exp_series(w);
  CHECK(e.constant_term() == 1);
  Series back = log_unit(e);
  CHECK((back - w).is_zero());
  Series l = log1p_series(w);
  Series fwd = exp_series(l);
  Series one = Series::constant(vs, 6, 1);
  CHECK((fwd - one - w).is_zero());
}

TEST_CASE("inverse and division of unit series") {
  auto vs = plain3();
  std::mt19937 rng(7);
  Series s = random_series(vs, 6, rng);
  s.set_term(mono_one(3), rat(3, 2));  // force a unit
  Series inv = inverse_unit(s);
  Series one = Series::constant(vs, 6, 1);
  CHECK((s * inv - one).truncated(6).is_zero());
  Series a = random_series(vs, 6, rng);
  CHECK((divide_unit(a, s) * s - a).is_zero());
  Series nonunit = Series::variable(vs, 6, 0);
  CHECK_THROWS_AS(inverse_unit(nonunit), std::domain_error);
}

TEST_CASE("square roots with rational-square leads") {
  auto vs = make_vars({{"t", -1}});
  Series one = Series::constant(vs, 8, 1);
  Series t = Series::variable(vs, 8, 0);
  Series s = (one + t) * (one + t) * rat(9, 4);
  Series r = sqrt_unit(s);
  CHECK((r - (one + t) * rat(3, 2)).is_zero());
  CHECK((sqrt_unit(one + t) * sqrt_unit(one + t) - (one + t)).is_zero());
  CHECK_THROWS_AS(sqrt_unit(one * 2 + t), std::domain_error);
  CHECK_THROWS_AS(sqrt_unit(t), std::domain_error);
}

TEST_CASE("integer powers including negative exponents") {
  auto vs = make_vars({{"t", -1}});
  Series one = Series::constant(vs, 6, 1);
  Series t = Series::variable(vs, 6, 0);
  Series p = pow_int(one + t, 5);
  for (int k = 0; k <= 5; ++k) CHECK(p.coeff(mono_var(1, 0, k)) == binomial(5, k));
  Series q = pow_int(one + t, -2);
  for (int k = 0; k <= 6; ++k)
    CHECK(q.coeff(mono_var(1, 0, k)) == Rat(k + 1) * ((k % 2) ? -1 : 1));
}

TEST_CASE("integer inputs stay integer through products") {
  auto vs = plain3();
  std::mt19937 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    Series a = random_series(vs, 6, rng, true);
    Series b = random_series(vs, 6, rng, true);
    for (const auto& [m, c] : (a * b).t) CHECK(is_integer(c));
  }
}

TEST_CASE("marker chain rule") {
  // Q is the exponential marker of y: d/dy (Q^k m) = k Q^k m + Q^k dm/dy.
  auto vs = make_vars({{"x", -1}, {"y", -1}, {"Q", 1}});
  const int cutoff = 8;
  Series q = Series::variable(vs, cutoff, 2);
  Series y = Series::variable(vs, cutoff, 1);
  CHECK((q.derivative(1) - q).is_zero());
  CHECK(q.derivative(0).is_zero());

  Series f = q * q * y * y * y;  // Q^2 y^3
  Series expect = f * 2 + q * q * y * y * 3;
  CHECK((f.derivative(1) - expect).is_zero());
  CHECK_THROWS(q.derivative(2));

  std::mt19937 rng(4242);
  for (int trial = 0; trial < 20; ++trial) {
    Series a = random_series(vs, cutoff, rng);
    Series b = random_series(vs, cutoff, rng);
    // product rule and mixed-partial symmetry, within the certified window
    Series lhs = (a * b).derivative(1);
    Series rhs = a.derivative(1) * b + a * b.derivative(1);
    CHECK(same_through(lhs, rhs, std::min(lhs.certified, rhs.certified)));
    CHECK((a.derivative(0).derivative(1) - a.derivative(1).derivative(0)).is_zero());
  }
}

TEST_CASE("exponential monomials as Q-monomials") {
  auto vs = make_vars({{"x", -1}, {"Q1", 0}, {"Q2", 0}});
  Series m0 = series_compose_exp(vs, 8, {1, 2}, {0, 0});
  CHECK(m0.str() == "1");
  Series m1 = series_compose_exp(vs, 8, {1, 2}, {1, 0});
  CHECK(m1.str() == "1*Q1");
  Series m23 = series_compose_exp(vs, 8, {1, 2}, {2, 3});
  CHECK(m23.str() == "1*Q1^2*Q2^3");
  CHECK_THROWS(series_compose_exp(vs, 8, {1, 2}, {-1, 0}));
}

TEST_CASE("certified-order bookkeeping") {
  auto vs = make_vars({{"t", -1}});
  Series one = Series::constant(vs, 6, 1);
  Series t = Series::variable(vs, 6, 0);
  Series a = (one + t).with_certified(3);
  Series b = (t * t).with_certified(6);  // valuation 2
  CHECK((a * b).certified == 5);         // 3 + val(b)
  CHECK((b * b).certified == 6);         // capped by cutoff
  CHECK(a.derivative(0).certified == 2);
  CHECK((a + b).certified == 3);
  CHECK(a.truncated(2).certified == 2);
}

TEST_CASE("series composition") {
  auto src = make_vars({{"x", -1}, {"y", -1}});
  Series g = Series::variable(src, 6, 0) * Series::variable(src, 6, 0) +
             Series::variable(src, 6, 0) * Series::variable(src, 6, 1) * rat(1, 2);
  auto dst = make_vars({{"t", -1}, {"u", -1}});
  Series t = Series::variable(dst, 6, 0);
  Series u = Series::variable(dst, 6, 1);
  Series img_x = t + u * u;
  Series img_y = u;
  Series comp = compose(g, dst, 6, {img_x, img_y});
  Series direct = img_x * img_x + img_x * img_y * rat(1, 2);
  CHECK((comp - direct).is_zero());
}

TEST_CASE("exact linear solve with back-substitution check") {
  QMat a(2, 2);
  a.at(0, 0) = 1;
  a.at(0, 1) = 1;
  a.at(1, 0) = 1;
  a.at(1, 1) = 2;  // Vandermonde on nodes 1, 2
  auto x = solve_linear_exact(a, {Rat(0), Rat(1)});
  CHECK(x[0] == -1);
  CHECK(x[1] == 1);

  auto id = QMat::identity(2);
  auto y = solve_linear_exact(id, {Rat(1), Rat(2)});
  CHECK(y[0] == 1);
  CHECK(y[1] == 2);

  QMat sing(2, 2);
  sing.at(0, 0) = 1;
  sing.at(0, 1) = 2;
  sing.at(1, 0) = 2;
  sing.at(1, 1) = 4;
  CHECK_THROWS_AS(solve_linear_exact(sing, {Rat(1), Rat(1)}), RankDeficiency);
  try {
    solve_linear_exact(sing, {Rat(1), Rat(1)});
  } catch (const RankDeficiency& e) {
    CHECK(e.rank == 1);
  }
}

TEST_CASE("randomized linear solves round-trip") {
  std::mt19937 rng(31337);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 4);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    QMat a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a.at(i, j) = rat(num(rng), den(rng));
    std::vector<Rat> b(n);
    for (auto& v : b) v = rat(num(rng), den(rng));
    try {
      auto x = solve_linear_exact(a, b);  // internal A*x == b recheck
      auto inv = inverse_exact(a);
      CHECK(inv * a == QMat::identity(n));
    } catch (const RankDeficiency&) {
      CHECK(rank_exact(a) < n);
    }
  }
}

TEST_CASE("rectangular solver reports consistency and uniqueness") {
  QMat a(3, 2);
  a.at(0, 0) = 1;
  a.at(1, 1) = 1;
  a.at(2, 0) = 1;
  a.at(2, 1) = 1;
  auto r = solve_linear_system(a, {Rat(2), Rat(3), Rat(5)});
  CHECK(r.consistent);
  CHECK(r.unique);
  CHECK(r.x == std::vector<Rat>{Rat(2), Rat(3)});

  auto bad = solve_linear_system(a, {Rat(2), Rat(3), Rat(6)});
  CHECK(!bad.consistent);

  QMat wide(1, 3);
  wide.at(0, 0) = 1;
  wide.at(0, 2) = 1;
  auto free = solve_linear_system(wide, {Rat(7)});
  CHECK(free.consistent);
  CHECK(!free.unique);
  CHECK(free.x == std::vector<Rat>{Rat(7), Rat(0), Rat(0)});
}
