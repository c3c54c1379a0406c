#pragma once

#include <optional>
#include <vector>

#include "nangle/graded.hpp"

namespace nangle {

/// An n-Σ-sequence: objects A_1..A_n with maps α_i : A_i -> A_{i+1} and the
/// wrap map α_n : A_n -> Σ^shift A_1. shift is 1 for the plain graded model
/// and 2 for the cluster-tilting subcategory (Σ̂ = Σ²).
struct NSeq {
  int n = 3;
  int shift = 1;
  Fp fp;
  std::vector<GradedObject> objects;  // size n
  std::vector<GradedMap> maps;        // size n, maps[i] : objects[i] -> next

  bool operator==(const NSeq&) const = default;

  const GradedObject& obj(int i) const { return objects[static_cast<std::size_t>(i)]; }
  const GradedMap& map(int i) const { return maps[static_cast<std::size_t>(i)]; }
  /// Target of maps[i]: objects[i+1], or Σ^shift objects[0] at the wrap.
  GradedObject map_target(int i) const;
};

/// Validates shapes and throws ShapeError on any mismatch.
NSeq make_nseq(int n, int shift, Fp fp, std::vector<GradedObject> objects,
               std::vector<GradedMap> maps);

struct SeqMorphism {
  NSeq source;
  NSeq target;
  std::vector<GradedMap> components;  // size n, components[i] : source obj i -> target obj i

  bool operator==(const SeqMorphism&) const = default;
};

SeqMorphism make_morphism(NSeq source, NSeq target, std::vector<GradedMap> components);

/// All squares commute, the last one against Σ^shift of the first component.
bool is_morphism(const SeqMorphism& m);

/// Index (0-based) of the first violated square, or -1 when none.
int first_violated_square(const SeqMorphism& m);

NSeq rotate_left(const NSeq& s);
NSeq rotate_right(const NSeq& s);
NSeq rotate_left(const NSeq& s, int times);

/// A -> A -> 0 -> ... -> 0 -> Σ^shift A, rotated j times to the left
/// (0 <= j < n); rotation signs included.
NSeq trivial_seq(const GradedObject& a, int j, int n, Fp fp, int shift = 1);

NSeq direct_sum_seq(const NSeq& s, const NSeq& t);

/// Sequence with every object replaced along the given isomorphisms
/// (maps conjugated accordingly). isos[i] : s.obj(i) -> new object.
NSeq conjugate(const NSeq& s, const std::vector<GradedMap>& isos);

/// Degreewise exactness of the Σ-periodic unrolled complex: at every
/// position the incoming rank plus the outgoing rank matches the dimension,
/// and consecutive maps compose to zero (wrap included).
bool is_exact(const NSeq& s);

/// Position (0-based) where exactness first fails, or -1 when exact.
int first_inexact_position(const NSeq& s);

/// Some pair of cyclically consecutive components (counting Σφ_1 after φ_n)
/// consists of isomorphisms. Requires is_morphism.
bool is_weak_iso(const SeqMorphism& m);

/// The 2x2-block cone sequence of a morphism: object i is
/// source_{i+1} ⊕ target_i and the maps are [[-α, 0], [φ, β]].
NSeq mapping_cone(const SeqMorphism& m);

struct TrivialPiece {
  GradedObject base;
  int j = 0;  // rotation index of the trivial piece
  bool operator==(const TrivialPiece&) const = default;
};

struct Decomposition {
  std::vector<TrivialPiece> pieces;
  /// Isomorphism of sequences from ⊕ trivial_seq(piece) onto the input.
  SeqMorphism witness;
};

/// Splits an exact sequence into rotated trivial pieces, constructively:
/// splittings are chosen from row-reduction pivots, the candidate witness is
/// then verified by direct multiplication. Returns nullopt when the input is
/// not exact — this is the route independent of is_exact.
std::optional<Decomposition> try_decompose(const NSeq& s);

/// Throwing wrapper around try_decompose for callers holding exact input.
Decomposition decompose_exact(const NSeq& s);

/// Rebuilds the direct sum of the pieces (the witness source).
NSeq pieces_to_seq(const std::vector<TrivialPiece>& pieces, int n, Fp fp, int shift = 1);

struct RandomExact {
  NSeq seq;
  std::vector<TrivialPiece> pieces;
  std::vector<GradedMap> conj;  // per-position isomorphisms applied to the sum
};

struct GenParams {
  int n = 3;
  int shift = 1;
  int max_dim = 3;
  int deg_lo = -2;
  int deg_hi = 2;
  int pieces = -1;  // -1: draw 1..3 from the rng
};

/// Random direct sum of rotated trivial sequences, conjugated objectwise by
/// random isomorphisms. Exact by construction.
RandomExact random_exact_gen(Fp fp, const GenParams& params, Rng& rng);
NSeq random_exact(Fp fp, const GenParams& params, Rng& rng);

/// An exact sequence whose first map is exactly alpha, built from trivial
/// pieces carrying a complement of ker(alpha), ker(alpha) at the wrap
/// position, and coker(alpha) entering at position 2.
NSeq complete_first_morphism(const GradedMap& alpha, int n, int shift = 1);

/// Uniformly random morphism s -> t (a random point of the solution space of
/// the commutation constraints; always contains zero).
SeqMorphism random_morphism(const NSeq& s, const NSeq& t, Rng& rng);

/// Isomorphism test for *exact* sequences via the rank profile: two exact
/// sequences are isomorphic iff all object dimensions and all degreewise map
/// ranks agree.
bool isomorphic_exact(const NSeq& s, const NSeq& t);

}  // namespace nangle
