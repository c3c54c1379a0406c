#pragma once

#include <map>
#include <vector>

#include "nangle/fp.hpp"
#include "nangle/rng.hpp"

namespace nangle {

/// Finitely supported integer-graded dimension vector. Degrees with
/// dimension zero are dropped, so equal objects compare equal structurally.
class GradedObject {
 public:
  GradedObject() = default;
  explicit GradedObject(std::map<int, int> dims);

  static GradedObject generator(int degree, int dim = 1);

  int dim(int degree) const;
  int total_dim() const;
  bool is_zero() const { return dims_.empty(); }
  const std::map<int, int>& dims() const { return dims_; }

  bool operator==(const GradedObject&) const = default;

 private:
  std::map<int, int> dims_;
};

GradedObject shift_object(const GradedObject& x, int k);
GradedObject direct_sum(const GradedObject& x, const GradedObject& y);
/// Sub-object spanned by the degrees of the given parity (0 = even).
GradedObject parity_part(const GradedObject& x, int parity);
/// dim Hom(x, y) — graded maps are degreewise, so this is a dot product.
long hom_dim(const GradedObject& x, const GradedObject& y);

/// Degree-preserving linear map between graded objects. Blocks are stored
/// exactly for the degrees in supp(source) ∩ supp(target); everything else
/// is implicitly zero. The block at degree d has shape
/// target.dim(d) x source.dim(d) and acts on column coordinates.
class GradedMap {
 public:
  GradedMap() = default;
  GradedMap(Fp fp, GradedObject src, GradedObject tgt);

  static GradedMap identity(Fp fp, const GradedObject& x);
  static GradedMap zero(Fp fp, const GradedObject& src, const GradedObject& tgt) {
    return GradedMap(fp, src, tgt);
  }

  const Fp& field() const { return fp_; }
  const GradedObject& src() const { return src_; }
  const GradedObject& tgt() const { return tgt_; }

  bool has_block(int d) const { return blocks_.count(d) != 0; }
  /// Block at degree d, materialized as a zero matrix of the right shape
  /// when outside the stored support.
  Matrix block(int d) const;
  void set_block(int d, Matrix m);
  const std::map<int, Matrix>& blocks() const { return blocks_; }

  bool is_zero() const;
  bool operator==(const GradedMap&) const = default;

 private:
  Fp fp_;
  GradedObject src_, tgt_;
  std::map<int, Matrix> blocks_;
};

GradedMap compose(const GradedMap& g, const GradedMap& f);
GradedMap add(const GradedMap& f, const GradedMap& g);
GradedMap negated(const GradedMap& f);
GradedMap scaled(const GradedMap& f, std::uint32_t c);
GradedMap shift_map(const GradedMap& f, int k);
GradedMap direct_sum_map(const GradedMap& f, const GradedMap& g);

/// Block map between direct sums: grid[i][j] maps srcs[j] -> tgts[i];
/// nullptr entries are zero blocks.
GradedMap block_map(Fp fp, const std::vector<GradedObject>& tgts,
                    const std::vector<GradedObject>& srcs,
                    const std::vector<std::vector<const GradedMap*>>& grid);

/// Canonical inclusion of parts[k] into the direct sum of parts.
GradedMap inclusion(Fp fp, const std::vector<GradedObject>& parts, std::size_t k);
/// Canonical projection from the direct sum of parts onto parts[k].
GradedMap projection(Fp fp, const std::vector<GradedObject>& parts, std::size_t k);

bool is_isomorphism(const GradedMap& f);
std::optional<GradedMap> inverse(const GradedMap& f);

GradedMap random_map(Fp fp, const GradedObject& src, const GradedObject& tgt, Rng& rng);
/// Random automorphism of x (degreewise invertible).
GradedMap random_iso(Fp fp, const GradedObject& x, Rng& rng);
GradedObject random_object(Rng& rng, int max_dim, int deg_lo, int deg_hi);

}  // namespace nangle
