#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nangle {

struct ShapeError : std::runtime_error {
  explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

/// Arithmetic context for the prime field F_p. All values are kept reduced
/// to [0, p). The modulus is small (tests use 2, 5 and 7), so inverses are
/// computed by exponentiation.
struct Fp {
  std::uint32_t p = 5;

  std::uint32_t reduce(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p);
    return static_cast<std::uint32_t>(r < 0 ? r + static_cast<std::int64_t>(p) : r);
  }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t s = a + b;
    return s >= p ? s - p : s;
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const {
    return a >= b ? a - b : a + p - b;
  }
  std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : p - a; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) % p);
  }
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;
  std::uint32_t inv(std::uint32_t a) const;

  /// (-1)^e as a field element.
  std::uint32_t sign(int e) const { return (e % 2 == 0) ? 1u : neg(1u); }

  bool operator==(const Fp&) const = default;
};

bool is_prime(std::uint32_t n);

/// Makes an Fp context, rejecting non-prime moduli.
Fp make_field(std::uint32_t p);

/// Dense row-major matrix over F_p. Zero-by-k and k-by-zero shapes are
/// valid; they represent maps in and out of the zero space and show up
/// constantly once sequences contain zero objects.
class Matrix {
 public:
  Matrix() = default;
  Matrix(Fp fp, std::size_t rows, std::size_t cols)
      : fp_(fp), rows_(rows), cols_(cols), e_(rows * cols, 0) {}

  static Matrix identity(Fp fp, std::size_t n);
  static Matrix zero(Fp fp, std::size_t rows, std::size_t cols) { return Matrix(fp, rows, cols); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Fp& field() const { return fp_; }

  std::uint32_t at(std::size_t r, std::size_t c) const { return e_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, std::uint32_t v) { e_[r * cols_ + c] = fp_.reduce(v); }

  bool operator==(const Matrix& o) const {
    return fp_ == o.fp_ && rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
  }

  bool is_zero() const;
  bool is_identity() const;

  Matrix operator*(const Matrix& rhs) const;
  Matrix operator+(const Matrix& rhs) const;
  Matrix operator-(const Matrix& rhs) const;
  Matrix negated() const;
  Matrix scaled(std::uint32_t c) const;
  Matrix transposed() const;

  /// Horizontal concatenation [this | rhs]; row counts must agree.
  Matrix hstack(const Matrix& rhs) const;
  /// Vertical concatenation [this; rhs]; column counts must agree.
  Matrix vstack(const Matrix& rhs) const;

  /// Reduced row-echelon form together with the pivot column indices.
  std::pair<Matrix, std::vector<std::size_t>> rref() const;
  std::size_t rank() const;

  /// Canonical solution x of this*x = b (free variables set to zero after
  /// row reduction), or nullopt when the system is inconsistent.
  std::optional<Matrix> solve(const Matrix& b) const;

  /// Columns form the canonical basis of the null space. Shape: cols x nullity.
  Matrix kernel_basis() const;
  /// The pivot columns of the original matrix. Shape: rows x rank.
  Matrix image_basis() const;
  /// Full-rank L with L*this = 0; rows span the left null space.
  Matrix left_nullspace() const;

  bool is_invertible() const;
  std::optional<Matrix> inverse() const;

 private:
  Fp fp_;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::uint32_t> e_;
};

/// Canonical standard-basis columns extending colspace(b) to the full space.
/// Shape: b.rows() x (b.rows() - rank(b)).
Matrix extend_to_basis(const Matrix& b);

/// Assembles a block matrix. grid[i][j] sits at block row i, block column j;
/// row_dims/col_dims fix the partition (so zero blocks can be omitted by
/// passing nullptr).
Matrix block_matrix(Fp fp, const std::vector<std::size_t>& row_dims,
                    const std::vector<std::size_t>& col_dims,
                    const std::vector<std::vector<const Matrix*>>& grid);

}  // namespace nangle
