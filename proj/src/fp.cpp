#include "nangle/fp.hpp"

namespace nangle {

std::uint32_t Fp::pow(std::uint32_t a, std::uint64_t e) const {
  std::uint32_t r = 1 % p;
  std::uint32_t base = a % p;
  while (e) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

std::uint32_t Fp::inv(std::uint32_t a) const {
  if (a % p == 0) throw std::domain_error("Fp::inv of zero");
  return pow(a, p - 2);
}

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Fp make_field(std::uint32_t p) {
  if (!is_prime(p)) throw std::domain_error("modulus " + std::to_string(p) + " is not prime");
  return Fp{p};
}

Matrix Matrix::identity(Fp fp, std::size_t n) {
  Matrix m(fp, n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

bool Matrix::is_zero() const {
  for (auto v : e_)
    if (v != 0) return false;
  return true;
}

bool Matrix::is_identity() const {
  if (rows_ != cols_) return false;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (at(r, c) != (r == c ? 1u : 0u)) return false;
  return true;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  if (cols_ != rhs.rows_)
    throw ShapeError("matrix product shape mismatch: " + std::to_string(rows_) + "x" +
                     std::to_string(cols_) + " * " + std::to_string(rhs.rows_) + "x" +
                     std::to_string(rhs.cols_));
  Matrix out(fp_, rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      std::uint32_t a = at(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) {
        std::uint32_t v = fp_.add(out.at(i, j), fp_.mul(a, rhs.at(k, j)));
        out.e_[i * out.cols_ + j] = v;
      }
    }
  return out;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw ShapeError("matrix sum shape mismatch");
  Matrix out = *this;
  for (std::size_t i = 0; i < e_.size(); ++i) out.e_[i] = fp_.add(e_[i], rhs.e_[i]);
  return out;
}

Matrix Matrix::operator-(const Matrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw ShapeError("matrix difference shape mismatch");
  Matrix out = *this;
  for (std::size_t i = 0; i < e_.size(); ++i) out.e_[i] = fp_.sub(e_[i], rhs.e_[i]);
  return out;
}

Matrix Matrix::negated() const {
  Matrix out = *this;
  for (auto& v : out.e_) v = fp_.neg(v);
  return out;
}

Matrix Matrix::scaled(std::uint32_t c) const {
  Matrix out = *this;
  for (auto& v : out.e_) v = fp_.mul(v, c);
  return out;
}

Matrix Matrix::transposed() const {
  Matrix out(fp_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out.set(c, r, at(r, c));
  return out;
}

Matrix Matrix::hstack(const Matrix& rhs) const {
  if (rows_ != rhs.rows_) throw ShapeError("hstack row mismatch");
  Matrix out(fp_, rows_, cols_ + rhs.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out.set(r, c, at(r, c));
    for (std::size_t c = 0; c < rhs.cols_; ++c) out.set(r, cols_ + c, rhs.at(r, c));
  }
  return out;
}

Matrix Matrix::vstack(const Matrix& rhs) const {
  if (cols_ != rhs.cols_) throw ShapeError("vstack column mismatch");
  Matrix out(fp_, rows_ + rhs.rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out.set(r, c, at(r, c));
  for (std::size_t r = 0; r < rhs.rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out.set(rows_ + r, c, rhs.at(r, c));
  return out;
}

std::pair<Matrix, std::vector<std::size_t>> Matrix::rref() const {
  Matrix m = *this;
  std::vector<std::size_t> pivots;
  std::size_t lead = 0;
  for (std::size_t col = 0; col < cols_ && lead < rows_; ++col) {
    std::size_t sel = lead;
    while (sel < rows_ && m.at(sel, col) == 0) ++sel;
    if (sel == rows_) continue;
    if (sel != lead)
      for (std::size_t c = 0; c < cols_; ++c) {
        std::uint32_t t = m.at(lead, c);
        m.set(lead, c, m.at(sel, c));
        m.set(sel, c, t);
      }
    std::uint32_t piv_inv = fp_.inv(m.at(lead, col));
    for (std::size_t c = 0; c < cols_; ++c) m.set(lead, c, fp_.mul(m.at(lead, c), piv_inv));
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == lead) continue;
      std::uint32_t f = m.at(r, col);
      if (f == 0) continue;
      for (std::size_t c = 0; c < cols_; ++c)
        m.set(r, c, fp_.sub(m.at(r, c), fp_.mul(f, m.at(lead, c))));
    }
    pivots.push_back(col);
    ++lead;
  }
  return {m, pivots};
}

std::size_t Matrix::rank() const { return rref().second.size(); }

std::optional<Matrix> Matrix::solve(const Matrix& b) const {
  if (rows_ != b.rows_) throw ShapeError("solve: row count mismatch");
  auto [r, pivots] = hstack(b).rref();
  for (auto p : pivots)
    if (p >= cols_) return std::nullopt;
  Matrix x(fp_, cols_, b.cols_);
  for (std::size_t k = 0; k < pivots.size(); ++k)
    for (std::size_t c = 0; c < b.cols_; ++c) x.set(pivots[k], c, r.at(k, cols_ + c));
  return x;
}

Matrix Matrix::kernel_basis() const {
  auto [r, pivots] = rref();
  std::vector<std::size_t> free_cols;
  {
    std::size_t pi = 0;
    for (std::size_t c = 0; c < cols_; ++c) {
      if (pi < pivots.size() && pivots[pi] == c)
        ++pi;
      else
        free_cols.push_back(c);
    }
  }
  Matrix k(fp_, cols_, free_cols.size());
  for (std::size_t j = 0; j < free_cols.size(); ++j) {
    std::size_t f = free_cols[j];
    k.set(f, j, 1);
    for (std::size_t i = 0; i < pivots.size(); ++i) k.set(pivots[i], j, fp_.neg(r.at(i, f)));
  }
  return k;
}

Matrix Matrix::image_basis() const {
  auto pivots = rref().second;
  Matrix im(fp_, rows_, pivots.size());
  for (std::size_t j = 0; j < pivots.size(); ++j)
    for (std::size_t r = 0; r < rows_; ++r) im.set(r, j, at(r, pivots[j]));
  return im;
}

Matrix Matrix::left_nullspace() const { return transposed().kernel_basis().transposed(); }

bool Matrix::is_invertible() const { return rows_ == cols_ && rank() == rows_; }

std::optional<Matrix> Matrix::inverse() const {
  if (rows_ != cols_) return std::nullopt;
  auto x = solve(identity(fp_, rows_));
  if (!x) return std::nullopt;
  if (!((*x) * (*this)).is_identity()) return std::nullopt;
  return x;
}

Matrix extend_to_basis(const Matrix& b) {
  Fp fp = b.field();
  auto pivots = b.hstack(Matrix::identity(fp, b.rows())).rref().second;
  std::vector<std::size_t> chosen;
  for (auto p : pivots)
    if (p >= b.cols()) chosen.push_back(p - b.cols());
  Matrix c(fp, b.rows(), chosen.size());
  for (std::size_t j = 0; j < chosen.size(); ++j) c.set(chosen[j], j, 1);
  return c;
}

Matrix block_matrix(Fp fp, const std::vector<std::size_t>& row_dims,
                    const std::vector<std::size_t>& col_dims,
                    const std::vector<std::vector<const Matrix*>>& grid) {
  std::size_t total_r = 0, total_c = 0;
  for (auto r : row_dims) total_r += r;
  for (auto c : col_dims) total_c += c;
  Matrix out(fp, total_r, total_c);
  std::size_t roff = 0;
  for (std::size_t i = 0; i < row_dims.size(); ++i) {
    std::size_t coff = 0;
    for (std::size_t j = 0; j < col_dims.size(); ++j) {
      const Matrix* blk = (i < grid.size() && j < grid[i].size()) ? grid[i][j] : nullptr;
      if (blk) {
        if (blk->rows() != row_dims[i] || blk->cols() != col_dims[j])
          throw ShapeError("block_matrix: block shape mismatch");
        for (std::size_t r = 0; r < blk->rows(); ++r)
          for (std::size_t c = 0; c < blk->cols(); ++c) out.set(roff + r, coff + c, blk->at(r, c));
      }
      coff += col_dims[j];
    }
    roff += row_dims[i];
  }
  return out;
}

}  // namespace nangle
