#include "doctest.h"
#include "nangle/mapsystem.hpp"
#include "nangle/sequence.hpp"

using namespace nangle;

namespace {
const Fp F5 = make_field(5);
}

TEST_CASE("map system solves a one-unknown factorization") {
  Rng rng(0x4441);
  GradedObject x = random_object(rng, 3, -1, 1);
  GradedObject y = random_object(rng, 3, -1, 1);
  GradedMap u_true = random_map(F5, x, y, rng);
  GradedMap r = random_map(F5, x, x, rng);
  GradedMap l = random_map(F5, y, y, rng);
  GradedMap rhs = compose(l, compose(u_true, r));

  MapSystem sys(F5);
  int u = sys.add_unknown(x, y);
  sys.require({{u, l, r, 0}}, rhs);
  auto sol = sys.solve();
  REQUIRE(sol.has_value());
  CHECK(compose(l, compose(sol->particular[0], r)) == rhs);
  for (auto& dir : sol->kernel) CHECK(compose(l, compose(dir[0], r)).is_zero());
}

TEST_CASE("map system reports inconsistency") {
  GradedObject x = GradedObject::generator(0, 1);
  MapSystem sys(F5);
  int u = sys.add_unknown(x, x);
  GradedMap zero = GradedMap::zero(F5, x, x);
  GradedMap id = GradedMap::identity(F5, x);
  // 0 ∘ U ∘ 0 = id has no solution.
  sys.require({{u, zero, zero, 0}}, id);
  CHECK_FALSE(sys.solve().has_value());
}

TEST_CASE("map system handles shifted unknowns") {
  // Solve Σ(U) ∘ r = rhs for U.
  Rng rng(0x4442);
  GradedObject x = random_object(rng, 2, -1, 1);
  GradedObject y = random_object(rng, 2, -1, 1);
  GradedMap u_true = random_map(F5, x, y, rng);
  GradedObject sx = shift_object(x, 1), sy = shift_object(y, 1);
  GradedMap r = random_map(F5, sx, sx, rng);
  GradedMap rhs = compose(shift_map(u_true, 1), r);

  MapSystem sys(F5);
  int u = sys.add_unknown(x, y);
  sys.require({{u, GradedMap::identity(F5, sy), r, 1}}, rhs);
  auto sol = sys.solve();
  REQUIRE(sol.has_value());
  CHECK(compose(shift_map(sol->particular[0], 1), r) == rhs);
}

TEST_CASE("two coupled unknowns") {
  // U2 ∘ f = g ∘ U1 with f, g fixed; the pair (id-ish, id-ish) is recovered
  // as one of the solutions and all returned solutions satisfy the square.
  Rng rng(0x4443);
  GradedObject x = random_object(rng, 2, -1, 1);
  GradedMap f = random_map(F5, x, x, rng);
  GradedMap g = random_map(F5, x, x, rng);
  MapSystem sys(F5);
  int u1 = sys.add_unknown(x, x);
  int u2 = sys.add_unknown(x, x);
  GradedMap id = GradedMap::identity(F5, x);
  sys.require({{u2, id, f, 0}, {u1, negated(g), id, 0}}, GradedMap::zero(F5, x, x));
  auto sol = sys.solve();
  REQUIRE(sol.has_value());
  bool exhausted = false;
  std::size_t seen = 0;
  enumerate_solutions(*sol, 64,
                      [&](const std::vector<GradedMap>& cand) {
                        CHECK(compose(cand[1], f) == compose(g, cand[0]));
                        ++seen;
                        return false;
                      },
                      &exhausted);
  CHECK(seen > 0);
}

TEST_CASE("solution enumeration respects the budget") {
  GradedObject x = GradedObject::generator(0, 2);
  MapSystem sys(F5);
  int u = sys.add_unknown(x, x);
  (void)u;  // unconstrained: 16 free entries, 5^16 solutions
  auto sol = sys.solve();
  REQUIRE(sol.has_value());
  bool exhausted = true;
  std::size_t seen = 0;
  bool found = enumerate_solutions(*sol, 10,
                                   [&](const std::vector<GradedMap>&) {
                                     ++seen;
                                     return false;
                                   },
                                   &exhausted);
  CHECK_FALSE(found);
  CHECK_FALSE(exhausted);
  CHECK(seen == 10);

  // A fully pinned system has one candidate and exhausts immediately.
  MapSystem sys2(F5);
  int v = sys2.add_unknown(x, x);
  GradedMap id = GradedMap::identity(F5, x);
  sys2.require({{v, id, id, 0}}, id);
  auto sol2 = sys2.solve();
  REQUIRE(sol2.has_value());
  CHECK(sol2->dof() == 0);
  exhausted = false;
  found = enumerate_solutions(*sol2, 10,
                              [&](const std::vector<GradedMap>& cand) { return cand[0] == id; },
                              &exhausted);
  CHECK(found);
}
