#include "doctest.h"
#include "nangle/graded.hpp"

using namespace nangle;

namespace {
const Fp F5 = make_field(5);
}

TEST_CASE("graded objects canonicalize and sum") {
  GradedObject x(std::map<int, int>{{0, 2}, {3, 0}, {-1, 1}});
  CHECK(x.dim(3) == 0);
  CHECK(x.dims().size() == 2);
  CHECK(x.total_dim() == 3);
  CHECK_FALSE(x.is_zero());
  CHECK(GradedObject().is_zero());

  GradedObject y = GradedObject::generator(0, 1);
  GradedObject s = direct_sum(x, y);
  CHECK(s.dim(0) == 3);
  CHECK(s.dim(-1) == 1);
  CHECK(direct_sum(x, GradedObject()) == x);

  CHECK(hom_dim(x, y) == 2);
  CHECK(parity_part(s, 0).dim(0) == 3);
  CHECK(parity_part(s, 1).dim(-1) == 1);
}

TEST_CASE("shift moves degrees up and is strictly invertible") {
  GradedObject x = GradedObject::generator(0, 2);
  CHECK(shift_object(x, 1) == GradedObject::generator(1, 2));
  CHECK(shift_object(x, 0) == x);
  Rng rng(0x51f7);
  for (int t = 0; t < 20; ++t) {
    GradedObject a = random_object(rng, 3, -2, 2);
    int k = static_cast<int>(rng.range(-3, 3));
    CHECK(shift_object(shift_object(a, k), -k) == a);
  }
}

TEST_CASE("shift is functorial on maps: 100 seeded trials") {
  Rng rng(0x51f8);
  for (int t = 0; t < 100; ++t) {
    GradedObject x = random_object(rng, 3, -2, 2);
    GradedObject y = random_object(rng, 3, -2, 2);
    GradedObject z = random_object(rng, 3, -2, 2);
    GradedMap f = random_map(F5, x, y, rng);
    GradedMap g = random_map(F5, y, z, rng);
    int k = static_cast<int>(rng.range(-2, 2));
    CHECK(shift_map(compose(g, f), k) == compose(shift_map(g, k), shift_map(f, k)));
    CHECK(shift_map(shift_map(f, k), -k) == f);
  }
}

TEST_CASE("composition with identities and zero maps") {
  Rng rng(0x51f9);
  GradedObject x = random_object(rng, 3, -1, 1);
  GradedObject y = random_object(rng, 3, -1, 1);
  GradedMap f = random_map(F5, x, y, rng);
  CHECK(compose(GradedMap::identity(F5, y), f) == f);
  CHECK(compose(f, GradedMap::identity(F5, x)) == f);
  CHECK(compose(GradedMap::zero(F5, y, x), f).is_zero());
  CHECK(add(f, negated(f)).is_zero());
  CHECK(scaled(f, 1) == f);
}

TEST_CASE("maps through disjoint supports are zero") {
  GradedObject x = GradedObject::generator(0, 2);
  GradedObject y = GradedObject::generator(1, 3);
  GradedMap f(F5, x, y);
  CHECK(f.blocks().empty());
  CHECK(f.is_zero());
  GradedMap g = GradedMap::zero(F5, y, GradedObject::generator(0, 1));
  CHECK(compose(g, f).is_zero());
}

TEST_CASE("is_isomorphism and inverse") {
  GradedObject x = GradedObject::generator(0, 2);
  GradedMap f(F5, x, x);
  Matrix m(F5, 2, 2);
  m.set(0, 0, 1);
  m.set(0, 1, 1);
  m.set(1, 1, 1);
  f.set_block(0, m);
  // Inverse by hand: [[1,1],[0,1]]^-1 = [[1,-1],[0,1]].
  CHECK(is_isomorphism(f));
  auto inv = inverse(f);
  REQUIRE(inv.has_value());
  Matrix expect(F5, 2, 2);
  expect.set(0, 0, 1);
  expect.set(0, 1, 4);
  expect.set(1, 1, 1);
  CHECK(inv->block(0) == expect);
  CHECK(compose(*inv, f) == GradedMap::identity(F5, x));

  GradedMap z = GradedMap::zero(F5, x, x);
  CHECK_FALSE(is_isomorphism(z));
  CHECK_FALSE(is_isomorphism(GradedMap::zero(F5, x, GradedObject::generator(1, 2))));
  CHECK(is_isomorphism(GradedMap::zero(F5, GradedObject(), GradedObject())));
}

TEST_CASE("block maps, inclusions, projections") {
  Rng rng(0x51fa);
  GradedObject x = random_object(rng, 2, -1, 1);
  GradedObject y = random_object(rng, 2, -1, 1);
  std::vector<GradedObject> parts{x, y};
  GradedMap ix = inclusion(F5, parts, 0);
  GradedMap iy = inclusion(F5, parts, 1);
  GradedMap px = projection(F5, parts, 0);
  GradedMap py = projection(F5, parts, 1);
  CHECK(compose(px, ix) == GradedMap::identity(F5, x));
  CHECK(compose(py, iy) == GradedMap::identity(F5, y));
  CHECK(compose(px, iy).is_zero());
  GradedMap sum = add(compose(ix, px), compose(iy, py));
  CHECK(sum == GradedMap::identity(F5, direct_sum(x, y)));

  GradedMap f = random_map(F5, x, y, rng);
  GradedMap g = random_map(F5, y, y, rng);
  GradedMap bm = block_map(F5, {y}, {x, y}, {{&f, &g}});
  CHECK(compose(bm, ix) == f);
  CHECK(compose(bm, iy) == g);
  std::vector<GradedObject> tparts{y, y};
  GradedMap jf = compose(inclusion(F5, tparts, 0), f);
  GradedMap jg = compose(inclusion(F5, tparts, 1), g);
  CHECK(direct_sum_map(f, g) == add(compose(jf, px), compose(jg, py)));
}

TEST_CASE("random isomorphisms are isomorphisms") {
  Rng rng(0x51fb);
  for (std::uint32_t p : {2u, 5u}) {
    Fp f = make_field(p);
    for (int t = 0; t < 25; ++t) {
      GradedObject x = random_object(rng, 3, -2, 2);
      CHECK(is_isomorphism(random_iso(f, x, rng)));
    }
  }
}
