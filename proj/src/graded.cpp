#include "nangle/graded.hpp"

#include <algorithm>

namespace nangle {

GradedObject::GradedObject(std::map<int, int> dims) {
  for (auto& [d, n] : dims) {
    if (n < 0) throw ShapeError("negative dimension in graded object");
    if (n > 0) dims_[d] = n;
  }
}

GradedObject GradedObject::generator(int degree, int dim) {
  return GradedObject(std::map<int, int>{{degree, dim}});
}

int GradedObject::dim(int degree) const {
  auto it = dims_.find(degree);
  return it == dims_.end() ? 0 : it->second;
}

int GradedObject::total_dim() const {
  int t = 0;
  for (auto& [d, n] : dims_) t += n;
  return t;
}

GradedObject shift_object(const GradedObject& x, int k) {
  std::map<int, int> out;
  for (auto& [d, n] : x.dims()) out[d + k] = n;
  return GradedObject(out);
}

GradedObject direct_sum(const GradedObject& x, const GradedObject& y) {
  std::map<int, int> out = x.dims();
  for (auto& [d, n] : y.dims()) out[d] += n;
  return GradedObject(out);
}

GradedObject parity_part(const GradedObject& x, int parity) {
  std::map<int, int> out;
  for (auto& [d, n] : x.dims())
    if (((d % 2) + 2) % 2 == parity) out[d] = n;
  return GradedObject(out);
}

long hom_dim(const GradedObject& x, const GradedObject& y) {
  long t = 0;
  for (auto& [d, n] : x.dims()) t += static_cast<long>(n) * y.dim(d);
  return t;
}

GradedMap::GradedMap(Fp fp, GradedObject src, GradedObject tgt)
    : fp_(fp), src_(std::move(src)), tgt_(std::move(tgt)) {
  for (auto& [d, n] : src_.dims()) {
    int m = tgt_.dim(d);
    if (m > 0) blocks_.emplace(d, Matrix(fp_, static_cast<std::size_t>(m), static_cast<std::size_t>(n)));
  }
}

GradedMap GradedMap::identity(Fp fp, const GradedObject& x) {
  GradedMap f(fp, x, x);
  for (auto& [d, n] : x.dims()) f.blocks_[d] = Matrix::identity(fp, static_cast<std::size_t>(n));
  return f;
}

Matrix GradedMap::block(int d) const {
  auto it = blocks_.find(d);
  if (it != blocks_.end()) return it->second;
  return Matrix(fp_, static_cast<std::size_t>(tgt_.dim(d)), static_cast<std::size_t>(src_.dim(d)));
}

void GradedMap::set_block(int d, Matrix m) {
  auto it = blocks_.find(d);
  if (it == blocks_.end()) throw ShapeError("set_block: degree outside support intersection");
  if (it->second.rows() != m.rows() || it->second.cols() != m.cols())
    throw ShapeError("set_block: block shape mismatch");
  it->second = std::move(m);
}

bool GradedMap::is_zero() const {
  for (auto& [d, m] : blocks_)
    if (!m.is_zero()) return false;
  return true;
}

GradedMap compose(const GradedMap& g, const GradedMap& f) {
  if (!(f.tgt() == g.src())) throw ShapeError("compose: inner objects differ");
  // Missing factor blocks act as zero matrices of the right shape.
  GradedMap out(f.field(), f.src(), g.tgt());
  for (auto& [d, blk] : out.blocks()) {
    (void)blk;
    out.set_block(d, g.block(d) * f.block(d));
  }
  return out;
}

GradedMap add(const GradedMap& f, const GradedMap& g) {
  if (!(f.src() == g.src()) || !(f.tgt() == g.tgt())) throw ShapeError("add: shape mismatch");
  GradedMap out(f.field(), f.src(), f.tgt());
  for (auto& [d, blk] : out.blocks()) {
    (void)blk;
    out.set_block(d, f.block(d) + g.block(d));
  }
  return out;
}

GradedMap negated(const GradedMap& f) { return scaled(f, f.field().neg(1)); }

GradedMap scaled(const GradedMap& f, std::uint32_t c) {
  GradedMap out = f;
  for (auto& [d, m] : f.blocks()) out.set_block(d, m.scaled(c));
  return out;
}

GradedMap shift_map(const GradedMap& f, int k) {
  GradedMap out(f.field(), shift_object(f.src(), k), shift_object(f.tgt(), k));
  for (auto& [d, m] : f.blocks()) out.set_block(d + k, m);
  return out;
}

GradedMap direct_sum_map(const GradedMap& f, const GradedMap& g) {
  return block_map(f.field(), {f.tgt(), g.tgt()}, {f.src(), g.src()}, {{&f, nullptr}, {nullptr, &g}});
}

GradedMap block_map(Fp fp, const std::vector<GradedObject>& tgts,
                    const std::vector<GradedObject>& srcs,
                    const std::vector<std::vector<const GradedMap*>>& grid) {
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = 0; j < grid[i].size(); ++j) {
      const GradedMap* m = grid[i][j];
      if (!m) continue;
      if (!(m->src() == srcs[j]) || !(m->tgt() == tgts[i]))
        throw ShapeError("block_map: block endpoints disagree with the partition");
    }
  GradedObject src, tgt;
  for (auto& s : srcs) src = direct_sum(src, s);
  for (auto& t : tgts) tgt = direct_sum(tgt, t);
  GradedMap out(fp, src, tgt);
  for (auto& [d, blk] : out.blocks()) {
    std::vector<std::size_t> row_dims, col_dims;
    row_dims.reserve(tgts.size());
    col_dims.reserve(srcs.size());
    for (auto& t : tgts) row_dims.push_back(static_cast<std::size_t>(t.dim(d)));
    for (auto& s : srcs) col_dims.push_back(static_cast<std::size_t>(s.dim(d)));
    std::vector<std::vector<Matrix>> cells(tgts.size(), std::vector<Matrix>());
    std::vector<std::vector<const Matrix*>> ptrs(tgts.size(),
                                                 std::vector<const Matrix*>(srcs.size(), nullptr));
    for (std::size_t i = 0; i < tgts.size(); ++i) {
      cells[i].resize(srcs.size());
      for (std::size_t j = 0; j < srcs.size(); ++j) {
        const GradedMap* m = (i < grid.size() && j < grid[i].size()) ? grid[i][j] : nullptr;
        if (m) {
          cells[i][j] = m->block(d);
          ptrs[i][j] = &cells[i][j];
        }
      }
    }
    (void)blk;
    out.set_block(d, block_matrix(fp, row_dims, col_dims, ptrs));
  }
  return out;
}

GradedMap inclusion(Fp fp, const std::vector<GradedObject>& parts, std::size_t k) {
  GradedObject whole;
  for (auto& p : parts) whole = direct_sum(whole, p);
  GradedMap id = GradedMap::identity(fp, parts[k]);
  std::vector<std::vector<const GradedMap*>> grid(parts.size(), std::vector<const GradedMap*>{nullptr});
  grid[k][0] = &id;
  return block_map(fp, parts, {parts[k]}, grid);
}

GradedMap projection(Fp fp, const std::vector<GradedObject>& parts, std::size_t k) {
  GradedMap id = GradedMap::identity(fp, parts[k]);
  std::vector<std::vector<const GradedMap*>> grid(1, std::vector<const GradedMap*>(parts.size(), nullptr));
  grid[0][k] = &id;
  return block_map(fp, {parts[k]}, parts, grid);
}

bool is_isomorphism(const GradedMap& f) {
  if (!(f.src().dims() == f.tgt().dims())) return false;
  for (auto& [d, m] : f.blocks())
    if (!m.is_invertible()) return false;
  return true;
}

std::optional<GradedMap> inverse(const GradedMap& f) {
  if (!is_isomorphism(f)) return std::nullopt;
  GradedMap out(f.field(), f.tgt(), f.src());
  for (auto& [d, m] : f.blocks()) out.set_block(d, *m.inverse());
  return out;
}

GradedMap random_map(Fp fp, const GradedObject& src, const GradedObject& tgt, Rng& rng) {
  GradedMap out(fp, src, tgt);
  for (auto& [d, blk] : out.blocks()) {
    Matrix m = blk;
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c)
        m.set(r, c, static_cast<std::uint32_t>(rng.below(fp.p)));
    out.set_block(d, m);
  }
  return out;
}

GradedMap random_iso(Fp fp, const GradedObject& x, Rng& rng) {
  GradedMap out(fp, x, x);
  for (auto& [d, blk] : out.blocks()) {
    Matrix m = blk;
    do {
      for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
          m.set(r, c, static_cast<std::uint32_t>(rng.below(fp.p)));
    } while (!m.is_invertible());
    out.set_block(d, m);
  }
  return out;
}

GradedObject random_object(Rng& rng, int max_dim, int deg_lo, int deg_hi) {
  std::map<int, int> dims;
  for (int d = deg_lo; d <= deg_hi; ++d) {
    // Sparse by default: half the degrees stay empty.
    if (rng.below(2) == 0) continue;
    dims[d] = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_dim) + 1));
  }
  return GradedObject(dims);
}

}  // namespace nangle
