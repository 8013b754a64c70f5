#include "doctest.h"

#include "filtlab/iteration.hpp"

#include "test_helpers.hpp"

using namespace filtlab;
using testgen::next;

namespace {

Rat R(long n, long d = 1) { return Rat(n, d); }

Rat pow_rat(Rat base, std::size_t e) {
  Rat out(1);
  for (std::size_t i = 0; i < e; ++i) out *= base;
  return out;
}

// Independent recursion: transfer by brute-force vertex enumeration instead
// of the simplex. Only valid for depth-1 initial data and small state sets.
std::vector<Semimetric<Rat>> brute_force_iteration(const MarkovModel<Rat>& model,
                                                   const Semimetric<Rat>& d0, std::size_t N) {
  std::vector<Semimetric<Rat>> out;
  Semimetric<Rat> cur = d0;
  for (std::size_t n = 1; n <= N; ++n) {
    auto q = cotransitions(model, n);
    const std::size_t sc = q.rows.rows();
    Matrix<Rat> d(sc, sc, Rat(0));
    for (std::size_t a = 0; a < sc; ++a) {
      if (!q.supported[a]) continue;
      for (std::size_t b = a + 1; b < sc; ++b) {
        if (!q.supported[b]) continue;
        Rat v = brute_force_transport(q.rows.row(a), q.rows.row(b), cur);
        d(a, b) = v;
        d(b, a) = v;
      }
    }
    cur = Semimetric<Rat>::trusted(std::move(d));
    out.push_back(cur);
  }
  return out;
}

}  // namespace

TEST_CASE("transfer: bernoulli gives the zero semimetric") {
  auto m = bernoulli_model<Rat>(R(3, 4));
  auto d1 = transfer_semimetric(Semimetric<Rat>::discrete(2), cotransitions(m, 1));
  CHECK(d1(0, 1) == R(0));
}

TEST_CASE("transfer: symmetric model contracts by |p-q|") {
  auto m = symmetric_model<Rat>(R(3, 4));
  auto q = cotransitions(m, 1);
  auto d1 = transfer_semimetric(Semimetric<Rat>::discrete(2), q);
  CHECK(d1(0, 1) == R(1, 2));
  // ground distance c scales the transferred distance
  Matrix<Rat> g(2, 2, R(0));
  g(0, 1) = g(1, 0) = R(3, 7);
  auto dc = transfer_semimetric(Semimetric<Rat>::trusted(g), q);
  CHECK(dc(0, 1) == R(1, 2) * R(3, 7));
}

TEST_CASE("iterate kantorovich: bernoulli collapses for any initial cylinder") {
  auto m = bernoulli_model<Rat>(R(3, 4), 16);

  std::vector<InitialMetricSpec<Rat>> inits;
  inits.push_back(InitialMetricSpec<Rat>::discrete());
  inits.push_back(InitialMetricSpec<Rat>::weighted_cylinder({R(1), R(1, 2)}));
  inits.push_back(InitialMetricSpec<Rat>::weighted_cylinder({R(2), R(0), R(1, 3)}));
  {
    FunctionSpec<Rat> f;
    f.depth = 3;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) f.table[{a, b, c}] = R(4 * a + 2 * b + c, 3);
    inits.push_back(InitialMetricSpec<Rat>::from_function(f));
  }

  for (const auto& init : inits) {
    auto rep = iterate(m, init, 10, IterationSemantics::Kantorovich);
    CHECK(rep.first_level == init.depth());
    for (const auto& lvl : rep.levels) {
      CHECK(lvl.functional == R(0));
      CHECK(lvl.max_distance == R(0));
    }
  }
}

TEST_CASE("iterate kantorovich: symmetric model closed form |p-q|^n") {
  auto m = symmetric_model<Rat>(R(3, 4), 40);
  auto rep = iterate(m, InitialMetricSpec<Rat>::discrete(), 32, IterationSemantics::Kantorovich);
  REQUIRE(rep.first_level == 1);
  for (const auto& lvl : rep.levels) {
    Rat expect = pow_rat(R(1, 2), lvl.n);
    CHECK(lvl.d(0, 1) == expect);
    CHECK(lvl.functional == expect / R(2));
  }
}

TEST_CASE("iterate tv_refresh: symmetric model constant |p-q|") {
  auto m = symmetric_model<Rat>(R(3, 4), 40);
  auto rep = iterate(m, InitialMetricSpec<Rat>::discrete(), 32, IterationSemantics::TvRefresh);
  for (const auto& lvl : rep.levels) {
    CHECK(lvl.d(0, 1) == R(1, 2));
    CHECK(lvl.functional == R(1, 4));
  }
}

TEST_CASE("brute-force recursive coupling oracle confirms the iteration (n <= 3)") {
  std::uint64_t s = 123;
  for (int rep_i = 0; rep_i < 12; ++rep_i) {
    auto m = testgen::random_model<Rat>(s, 3, 4);
    auto rep = iterate(m, InitialMetricSpec<Rat>::discrete(), 3, IterationSemantics::Kantorovich);
    auto oracle = brute_force_iteration(m, Semimetric<Rat>::discrete(m.state_count(0)), 3);
    for (std::size_t n = 1; n <= 3; ++n) {
      const auto& got = rep.at(n).d;
      const auto& want = oracle[n - 1];
      REQUIRE(got.size() == want.size());
      for (std::size_t a = 0; a < got.size(); ++a)
        for (std::size_t b = 0; b < got.size(); ++b) CHECK(got(a, b) == want(a, b));
    }
  }
  // and the symmetric model against the closed form
  auto m = symmetric_model<Rat>(R(3, 4), 8);
  auto oracle = brute_force_iteration(m, Semimetric<Rat>::discrete(2), 3);
  for (std::size_t n = 1; n <= 3; ++n) CHECK(oracle[n - 1](0, 1) == pow_rat(R(1, 2), n));
}

TEST_CASE("scaling equivariance: c * init gives c * d_n exactly") {
  std::uint64_t s = 321;
  for (int rep_i = 0; rep_i < 8; ++rep_i) {
    auto m = testgen::random_model<Rat>(s, 4, 3);
    Rat c = testgen::rat_pos(s);
    auto base = InitialMetricSpec<Rat>::weighted_cylinder({testgen::rat_pos(s), testgen::rat_pos(s)});
    auto scaled = base.scaled(c);
    auto r1 = iterate(m, base, 4, IterationSemantics::Kantorovich);
    auto r2 = iterate(m, scaled, 4, IterationSemantics::Kantorovich);
    for (std::size_t i = 0; i < r1.levels.size(); ++i) {
      CHECK(r2.levels[i].functional == c * r1.levels[i].functional);
      for (std::size_t a = 0; a < r1.levels[i].d.size(); ++a)
        for (std::size_t b = 0; b < r1.levels[i].d.size(); ++b)
          CHECK(r2.levels[i].d(a, b) == c * r1.levels[i].d(a, b));
    }
  }
}

TEST_CASE("initial-metric robustness: w' <= k*w implies I_n(w') <= k*I_n(w)") {
  std::uint64_t s = 999;
  for (int rep_i = 0; rep_i < 10; ++rep_i) {
    auto m = testgen::random_model<Rat>(s, 4, 3);
    Rat k = testgen::rat_pos(s);
    std::vector<Rat> w = {testgen::rat_pos(s), testgen::rat_pos(s)};
    std::vector<Rat> wp = {w[0] * k * testgen::rat01(s), w[1] * k * testgen::rat01(s)};
    auto rep_w = iterate(m, InitialMetricSpec<Rat>::weighted_cylinder(w), 4,
                         IterationSemantics::Kantorovich);
    auto rep_wp = iterate(m, InitialMetricSpec<Rat>::weighted_cylinder(wp), 4,
                          IterationSemantics::Kantorovich);
    for (std::size_t i = 0; i < rep_w.levels.size(); ++i)
      CHECK(rep_wp.levels[i].functional <= k * rep_w.levels[i].functional);
  }
}

TEST_CASE("I_n is nonincreasing for depth-1 initial data") {
  std::uint64_t s = 456;
  for (int rep_i = 0; rep_i < 12; ++rep_i) {
    auto m = testgen::random_model<Rat>(s, 5, 4);
    auto rep = iterate(m, InitialMetricSpec<Rat>::discrete(), 5, IterationSemantics::Kantorovich);
    for (std::size_t i = 0; i + 1 < rep.levels.size(); ++i)
      CHECK(rep.levels[i + 1].functional <= rep.levels[i].functional);
  }
}

TEST_CASE("decide_standardness verdicts") {
  auto bern = iterate(bernoulli_model<Rat>(R(3, 4), 16), InitialMetricSpec<Rat>::discrete(), 10,
                      IterationSemantics::Kantorovich);
  auto d1 = decide_standardness(bern, R(1, 1000000), 2);
  CHECK(d1.verdict == StandardnessVerdict::StandardEvidence);

  auto sym_tv = iterate(symmetric_model<Rat>(R(3, 4), 16), InitialMetricSpec<Rat>::discrete(), 10,
                        IterationSemantics::TvRefresh);
  auto d2 = decide_standardness(sym_tv, R(1, 1000000), 5);
  CHECK(d2.verdict == StandardnessVerdict::NonstandardEvidence);

  CHECK_THROWS_AS(decide_standardness(bern, R(1, 100), 0), Error);
  CHECK_THROWS_AS(decide_standardness(bern, R(1, 100), 99), Error);
}

TEST_CASE("concentration check") {
  auto bern = bernoulli_model<Rat>(R(3, 4), 16);
  auto rb = iterate(bern, InitialMetricSpec<Rat>::discrete(), 6, IterationSemantics::Kantorovich);
  auto c1 = concentration_check(bern, rb, 3, R(1, 10));
  CHECK(c1.ball_mass == R(1));
  CHECK(c1.concentrated);

  auto sym = symmetric_model<Rat>(R(3, 4), 16);
  auto rk = iterate(sym, InitialMetricSpec<Rat>::discrete(), 6, IterationSemantics::Kantorovich);
  // eps > |p-q|^n: both states inside the ball
  auto c2 = concentration_check(sym, rk, 6, R(1, 10));
  CHECK(c2.ball_mass == R(1));
  CHECK(c2.concentrated);

  auto rt = iterate(sym, InitialMetricSpec<Rat>::discrete(), 6, IterationSemantics::TvRefresh);
  // eps < |p-q|: only the center remains, mass 1/2, check fails
  auto c3 = concentration_check(sym, rt, 6, R(1, 10));
  CHECK(c3.ball_mass == R(1, 2));
  CHECK_FALSE(c3.concentrated);

  CHECK_THROWS_AS(concentration_check(sym, rt, 12, R(1, 10)), Error);
}

TEST_CASE("iterate input validation") {
  auto m = bernoulli_model<Rat>(R(1, 2), 8);
  CHECK_THROWS_AS(iterate(m, InitialMetricSpec<Rat>::discrete(), 99, IterationSemantics::Kantorovich),
                  Error);
  auto deep = InitialMetricSpec<Rat>::weighted_cylinder({R(1), R(1), R(1), R(1)});
  CHECK_THROWS_AS(iterate(m, deep, 2, IterationSemantics::Kantorovich), Error);
}

TEST_CASE("transfer results evaluate identically under threads") {
  std::uint64_t s = 77;
  auto model = testgen::random_model<Rat>(s, 4, 4);
  auto r1 = iterate(model, InitialMetricSpec<Rat>::discrete(), 4,
                    IterationSemantics::Kantorovich, 1);
  auto r4 = iterate(model, InitialMetricSpec<Rat>::discrete(), 4,
                    IterationSemantics::Kantorovich, 4);
  for (std::size_t i = 0; i < r1.levels.size(); ++i) {
    CHECK(r1.levels[i].functional == r4.levels[i].functional);
    for (std::size_t a = 0; a < r1.levels[i].d.size(); ++a)
      for (std::size_t b = 0; b < r1.levels[i].d.size(); ++b)
        CHECK(r1.levels[i].d(a, b) == r4.levels[i].d(a, b));
  }
}
