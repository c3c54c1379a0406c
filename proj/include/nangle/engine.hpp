#pragma once

#include "nangle/sequence.hpp"

namespace nangle {

/// A diagram completion or verification failed. Carries the step name, the
/// index of the first violated equation or position, and the offending
/// diagram serialized in the exchange format.
struct CompletionError : std::runtime_error {
  CompletionError(std::string step_, int index_, std::string witness_)
      : std::runtime_error("completion failure at step '" + step_ + "' (index " +
                           std::to_string(index_) + ")"),
        step(std::move(step_)),
        index(index_),
        witness(std::move(witness_)) {}

  std::string step;
  int index;
  std::string witness;
};

/// The solution-space search exceeded its candidate budget; distinct from a
/// verified "no witness exists".
struct BudgetError : std::runtime_error {
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

struct EngineOptions {
  /// Candidate bound for fallback searches through completion solution
  /// spaces. The canonical zero-free-variable completion is always tried
  /// first and suffices in the semisimple model.
  std::size_t search_budget = 4096;
};

/// Completes a commuting first square between exact sequences to a full
/// morphism: the remaining components are solved jointly, free variables
/// pinned to zero.
SeqMorphism complete_to_morphism(const NSeq& s, const NSeq& t, const GradedMap& phi1,
                                 const GradedMap& phi2);

struct ConeCompletion {
  SeqMorphism morphism;
  NSeq cone;
};

/// Completion whose mapping cone is verified exact. Falls back to a budgeted
/// search of the completion space should the canonical one fail (it cannot in
/// the semisimple model; the path exists for probing other models).
ConeCompletion cone_completion(const NSeq& s, const NSeq& t, const GradedMap& phi1,
                               const GradedMap& phi2, const EngineOptions& opts = {});

/// The reduced cone of a morphism whose first component is the identity:
/// A_2 -> A_3 ⊕ B_2 -> ... -> B_n -> Σ A_2, verified exact.
NSeq reduced_cone(const SeqMorphism& m);

struct OctaData {
  std::vector<GradedMap> phis;  // φ_3 .. φ_n
  std::vector<GradedMap> psis;  // ψ_1 .. ψ_{2n-5}
  NSeq gamma;                   // the produced n-angle
  SeqMorphism morphism;         // (1, φ_2, ..., φ_n) between the first two rows
};

/// Higher octahedron: given n-angles A., B. sharing their first object, and
/// an n-angle C. on φ_2, produces the completion morphisms, the connecting
/// maps ψ, and the new n-angle Γ, verifying both output properties
/// (exactness of Γ and γ_n ∘ ψ_{2n-5} = Σα_1 ∘ β_n) exactly.
OctaData higher_octahedron(const NSeq& a_seq, const NSeq& b_seq, const NSeq& c_seq,
                           const GradedMap& phi2, const EngineOptions& opts = {});

/// Derives a mapping-cone completion from the octahedron alone: builds the
/// three auxiliary sequences, runs higher_octahedron on them, reads the
/// completion off the connecting data (checking each forced block), and
/// returns the morphism together with its exact cone.
ConeCompletion n4_from_n4star(const NSeq& s, const NSeq& t, const GradedMap& phi1,
                              const GradedMap& phi2, const EngineOptions& opts = {});

/// n = 3 octahedron with the two classical extras verified: the square
/// ψ_1 ∘ β_2 = γ_2 commutes and γ_3 ∘ ψ_1 = Σα_1 ∘ β_3.
OctaData tr4_octahedron(const NSeq& a_tri, const NSeq& b_tri, const NSeq& c_tri,
                        const GradedMap& phi2, const EngineOptions& opts = {});

/// A commuting ladder of two (n-1)-chains; the candidate completion glues it
/// into an n-object sequence ending in an unknown map ∂ : B_{n-1} -> Σ^k A_1.
struct Ladder {
  int n = 3;      // length of the produced sequence
  int shift = 1;  // wrap shift power
  Fp fp;
  std::vector<GradedObject> a_objs, b_objs;  // n-1 objects each
  std::vector<GradedMap> a_maps, b_maps;     // n-2 maps each
  std::vector<GradedMap> verticals;          // n-1 maps, a_objs[i] -> b_objs[i]
};

Ladder make_ladder(int n, int shift, Fp fp, std::vector<GradedObject> a_objs,
                   std::vector<GradedMap> a_maps, std::vector<GradedObject> b_objs,
                   std::vector<GradedMap> b_maps, std::vector<GradedMap> verticals);

/// The glued sequence for a given connecting map.
NSeq ladder_candidate(const Ladder& lad, const GradedMap& partial);

struct HomotopyCartesianWitness {
  GradedMap partial;
  NSeq angle;
};

/// Searches for ∂ making the glued sequence exact: the canonical solution of
/// the two composite constraints first, then the rest of the constraint
/// space up to opts.search_budget (BudgetError if exceeded). nullopt means
/// the space was exhausted without a witness.
std::optional<HomotopyCartesianWitness> homotopy_cartesian(const Ladder& lad,
                                                           const EngineOptions& opts = {});

}  // namespace nangle
