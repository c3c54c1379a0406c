#pragma once

#include "nangle/engine.hpp"

namespace nangle {

/// Triangle in the ambient graded category (shift 1): X1 -> X2 -> X3 -> ΣX1.
struct Triangle {
  GradedObject x1, x2, x3;
  GradedMap f, g, h;

  bool operator==(const Triangle&) const = default;
};

Triangle make_triangle(GradedObject x1, GradedObject x2, GradedObject x3, GradedMap f,
                       GradedMap g, GradedMap h);
NSeq to_nseq(const Triangle& t);
Triangle triangle_from_nseq(const NSeq& s);
bool is_triangle(const Triangle& t);

/// Constructive cone: Z = coker(f) ⊕ Σ ker(f) with the projection and the
/// shifted inclusion, giving a triangle with first map f. Splittings come
/// from row-reduction bases, so the construction is deterministic.
Triangle cone_T(const GradedMap& f);

struct OctahedronT {
  Triangle on_f, on_g, on_composite;
  GradedMap a;          // cone(f)  -> cone(gf)
  GradedMap b;          // cone(gf) -> cone(g)
  Triangle connecting;  // cone(f) -> cone(gf) -> cone(g) -> Σ cone(f)
};

/// Connecting maps for a composable pair presented by three chosen cone
/// triangles. Driven by the n = 3 octahedron of the engine; all classical
/// commutations and the connecting triangle are verified.
OctahedronT octahedron_connect(const Triangle& on_f, const Triangle& on_g,
                               const Triangle& on_composite, const EngineOptions& opts = {});

OctahedronT octahedron_T(const GradedMap& f, const GradedMap& g, const EngineOptions& opts = {});

/// Completed 3x3 grid: given the middle row and middle column of the diagram
/// (sharing their middle object), produces the new corner object with the
/// completed row and column through it.
struct GridData {
  GradedObject core;  // the new object
  Triangle row3;      // P -> Q' -> core -> ΣP
  Triangle col3;      // M -> R  -> core -> ΣM
  GradedMap mid;      // Q' -> core
  GradedMap w3;       // R -> core
  GradedMap w4;       // core -> ΣP
  GradedMap w5;       // core -> ΣM
};

GridData three_by_three(const Triangle& row2, const Triangle& col2,
                        const EngineOptions& opts = {});

/// Membership in the cluster-tilting subcategory: support in even degrees.
bool in_C(const GradedObject& x);

/// A 4-angle of the even subcategory (Σ̂ = Σ²) together with the pair of
/// triangles it was spliced from: Δ2 = (A1, A2, X) and Δ1 = (X, A3, A4).
struct Splice4 {
  NSeq angle;      // shift-2 sequence on (A1, A2, A3, A4)
  GradedObject x;  // middle object shared by the two triangles
  GradedMap f;     // A2 -> X
  GradedMap g;     // X -> A3
  GradedMap d1;    // A4 -> ΣX
  GradedMap d2;    // X -> ΣA1

  Triangle delta1() const;
  Triangle delta2() const;

  bool operator==(const Splice4&) const = default;
};

/// Validates shapes, triangle exactness, endpoint membership in C, the
/// composite identities α2 = g∘f and α4 = Σd2 ∘ d1, and exactness of the
/// resulting 4-Σ̂-sequence.
Splice4 splice_4angle(const Triangle& d1, const Triangle& d2);

/// Splice completion of a map between objects of C: Δ2 = cone_T(alpha), then
/// a second triangle chosen so its cone lands back in C.
Splice4 splice_from_map(const GradedMap& alpha, Rng& rng, int max_dim = 3, int deg_lo = -2,
                        int deg_hi = 2);

GradedObject random_even_object(Rng& rng, int max_dim, int deg_lo, int deg_hi);

struct SpliceTriple {
  Splice4 a, b, c;
  GradedMap phi2;
};

/// Three compatible splices a, b, c with shared head, a commuting input
/// square, and c running from A2 through B2 on phi2.
SpliceTriple random_splice_triple(Fp fp, const GenParams& params, Rng& rng);

/// The six-step octahedron verification for spliced 4-angles. Executes each
/// step of the construction literally, checking every displayed identity
/// exactly, and returns the completion maps, connecting maps and the
/// produced 4-angle.
OctaData n4star_steps(const Splice4& a, const Splice4& b, const Splice4& c,
                      const GradedMap& phi2, const EngineOptions& opts = {});

// Exchange-format serialization (implemented with the io module).
std::string to_text(const Splice4& sp);
Splice4 parse_splice4(const std::string& text);

}  // namespace nangle
