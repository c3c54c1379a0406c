#pragma once

#include <functional>
#include <vector>

#include "nangle/graded.hpp"

namespace nangle {

/// Joint linear system whose unknowns are graded maps. Constraints have the
/// shape  Σ_k  L_k ∘ Σ^{t_k}(U_{i_k}) ∘ R_k  =  rhs  with known L, R; all
/// block entries of all unknowns are flattened into one vector over F_p and
/// solved by row reduction. The canonical solution zeroes free variables,
/// which keeps every diagram completion deterministic.
class MapSystem {
 public:
  explicit MapSystem(Fp fp) : fp_(fp) {}

  int add_unknown(const GradedObject& src, const GradedObject& tgt);

  struct Term {
    int unknown;
    GradedMap left;
    GradedMap right;
    int ushift = 0;  // the unknown enters as Σ^{ushift}(U)
  };

  void require(const std::vector<Term>& terms, const GradedMap& rhs);

  struct Solution {
    Fp fp;
    std::vector<GradedMap> particular;
    /// Basis of the homogeneous solution space, one map tuple per direction.
    std::vector<std::vector<GradedMap>> kernel;

    std::size_t dof() const { return kernel.size(); }
    /// particular + Σ coeffs[i] · kernel[i]
    std::vector<GradedMap> materialize(const std::vector<std::uint32_t>& coeffs) const;
  };

  /// nullopt when the constraints are inconsistent.
  std::optional<Solution> solve() const;

  std::size_t num_variables() const { return var_count_; }

 private:
  struct Unknown {
    GradedObject src, tgt;
    // (degree, rows, cols, flat offset) per stored block
    struct BlockInfo {
      int degree;
      std::size_t rows, cols, offset;
    };
    std::vector<BlockInfo> blocks;
  };

  std::vector<GradedMap> vector_to_maps(const Matrix& column) const;
  long var_index(int unknown, int degree, std::size_t r, std::size_t c) const;

  Fp fp_;
  std::vector<Unknown> unknowns_;
  std::size_t var_count_ = 0;
  std::vector<std::vector<std::uint32_t>> rows_;
  std::vector<std::uint32_t> rhs_;
};

/// Visits candidate solutions (particular + kernel combinations) in a fixed
/// order: the canonical one first, then coefficient tuples in lexicographic
/// order. Stops early when visit returns true (found) or after budget
/// candidates (returns false without exhausting the space iff the space is
/// larger than the budget; *exhausted reports which).
bool enumerate_solutions(const MapSystem::Solution& sol, std::size_t budget,
                         const std::function<bool(const std::vector<GradedMap>&)>& visit,
                         bool* exhausted);

}  // namespace nangle
