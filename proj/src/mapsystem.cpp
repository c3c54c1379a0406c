#include "nangle/mapsystem.hpp"

#include <functional>

namespace nangle {

int MapSystem::add_unknown(const GradedObject& src, const GradedObject& tgt) {
  Unknown u;
  u.src = src;
  u.tgt = tgt;
  for (auto& [d, n] : src.dims()) {
    int m = tgt.dim(d);
    if (m <= 0) continue;
    Unknown::BlockInfo bi;
    bi.degree = d;
    bi.rows = static_cast<std::size_t>(m);
    bi.cols = static_cast<std::size_t>(n);
    bi.offset = var_count_;
    var_count_ += bi.rows * bi.cols;
    u.blocks.push_back(bi);
  }
  unknowns_.push_back(std::move(u));
  return static_cast<int>(unknowns_.size()) - 1;
}

long MapSystem::var_index(int unknown, int degree, std::size_t r, std::size_t c) const {
  const Unknown& u = unknowns_[static_cast<std::size_t>(unknown)];
  for (auto& bi : u.blocks)
    if (bi.degree == degree)
      return static_cast<long>(bi.offset + r * bi.cols + c);
  return -1;  // degree outside the unknown's support: the entry is fixed zero
}

void MapSystem::require(const std::vector<Term>& terms, const GradedMap& rhs) {
  for (auto& t : terms) {
    const Unknown& u = unknowns_[static_cast<std::size_t>(t.unknown)];
    if (!(t.right.tgt() == shift_object(u.src, t.ushift)) ||
        !(t.left.src() == shift_object(u.tgt, t.ushift)))
      throw ShapeError("MapSystem::require: term does not fit the unknown");
    if (!(t.right.src() == rhs.src()) || !(t.left.tgt() == rhs.tgt()))
      throw ShapeError("MapSystem::require: term endpoints disagree with rhs");
  }
  for (auto& [d, rblk] : rhs.blocks()) {
    std::size_t nr = rblk.rows(), nc = rblk.cols();
    for (std::size_t r = 0; r < nr; ++r)
      for (std::size_t c = 0; c < nc; ++c) {
        std::vector<std::uint32_t> row(var_count_, 0);
        for (auto& t : terms) {
          Matrix lb = t.left.block(d);
          Matrix rb = t.right.block(d);
          const Unknown& u = unknowns_[static_cast<std::size_t>(t.unknown)];
          int ud = d - t.ushift;
          // entry (r,c) of L * U * R = Σ_{a,b} L[r,a] U[a,b] R[b,c]
          std::size_t arows = static_cast<std::size_t>(u.tgt.dim(ud));
          std::size_t bcols = static_cast<std::size_t>(u.src.dim(ud));
          if (arows == 0 || bcols == 0) continue;
          for (std::size_t a = 0; a < arows; ++a) {
            std::uint32_t lv = lb.at(r, a);
            if (lv == 0) continue;
            for (std::size_t b = 0; b < bcols; ++b) {
              std::uint32_t rv = rb.at(b, c);
              if (rv == 0) continue;
              long vi = var_index(t.unknown, ud, a, b);
              if (vi < 0) continue;
              row[static_cast<std::size_t>(vi)] =
                  fp_.add(row[static_cast<std::size_t>(vi)], fp_.mul(lv, rv));
            }
          }
        }
        rows_.push_back(std::move(row));
        rhs_.push_back(rblk.at(r, c));
      }
  }
}

std::vector<GradedMap> MapSystem::vector_to_maps(const Matrix& column) const {
  std::vector<GradedMap> out;
  out.reserve(unknowns_.size());
  for (auto& u : unknowns_) {
    GradedMap m(fp_, u.src, u.tgt);
    for (auto& bi : u.blocks) {
      Matrix blk(fp_, bi.rows, bi.cols);
      for (std::size_t r = 0; r < bi.rows; ++r)
        for (std::size_t c = 0; c < bi.cols; ++c)
          blk.set(r, c, column.at(bi.offset + r * bi.cols + c, 0));
      m.set_block(bi.degree, blk);
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::optional<MapSystem::Solution> MapSystem::solve() const {
  Matrix a(fp_, rows_.size(), var_count_);
  Matrix b(fp_, rows_.size(), 1);
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    for (std::size_t c = 0; c < var_count_; ++c) a.set(r, c, rows_[r][c]);
    b.set(r, 0, rhs_[r]);
  }
  auto x = a.solve(b);
  if (!x) return std::nullopt;
  Solution sol;
  sol.fp = fp_;
  sol.particular = vector_to_maps(*x);
  Matrix ker = a.kernel_basis();
  for (std::size_t j = 0; j < ker.cols(); ++j) {
    Matrix col(fp_, var_count_, 1);
    for (std::size_t r = 0; r < var_count_; ++r) col.set(r, 0, ker.at(r, j));
    sol.kernel.push_back(vector_to_maps(col));
  }
  return sol;
}

std::vector<GradedMap> MapSystem::Solution::materialize(
    const std::vector<std::uint32_t>& coeffs) const {
  std::vector<GradedMap> out = particular;
  for (std::size_t k = 0; k < kernel.size(); ++k) {
    std::uint32_t c = k < coeffs.size() ? coeffs[k] % fp.p : 0;
    if (c == 0) continue;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = add(out[i], scaled(kernel[k][i], c));
  }
  return out;
}

bool enumerate_solutions(const MapSystem::Solution& sol, std::size_t budget,
                         const std::function<bool(const std::vector<GradedMap>&)>& visit,
                         bool* exhausted) {
  std::size_t dof = sol.dof();
  std::uint32_t p = sol.fp.p;
  std::vector<std::uint32_t> coeffs(dof, 0);
  std::size_t visited = 0;
  bool done_all = true;
  while (true) {
    if (visited >= budget) {
      done_all = false;
      break;
    }
    ++visited;
    if (visit(sol.materialize(coeffs))) {
      if (exhausted) *exhausted = true;
      return true;
    }
    // next tuple, lexicographic with least-significant first
    std::size_t k = 0;
    while (k < dof && ++coeffs[k] == p) coeffs[k++] = 0;
    if (k == dof) break;
  }
  if (exhausted) *exhausted = done_all;
  return false;
}

}  // namespace nangle
