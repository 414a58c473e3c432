#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ferrand/groebner.hpp"

namespace ferrand {

using Vec = std::vector<MPoly>;

/// Matrix of polynomials stored by columns; `columns[j][i]` is entry (i, j).
struct Matrix {
  Context ctx;
  std::size_t rows = 0;
  std::vector<Vec> columns;

  Matrix() = default;
  Matrix(Context c, std::size_t r) : ctx(std::move(c)), rows(r) {}
  Matrix(Context c, std::size_t r, std::size_t cols);

  static Matrix identity(const Context& ctx, std::size_t n);
  std::size_t cols() const { return columns.size(); }
  const MPoly& at(std::size_t i, std::size_t j) const { return columns[j][i]; }
  MPoly& at(std::size_t i, std::size_t j) { return columns[j][i]; }
  void add_column(Vec v);
  std::string to_string() const;
};

Vec zero_vec(const Context& ctx, std::size_t n);
Vec unit_vec(const Context& ctx, std::size_t n, std::size_t i);
bool is_zero(const Vec& v);
Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(const MPoly& c, const Vec& v);
Vec operator*(const Matrix& m, const Vec& v);
Matrix operator*(const Matrix& a, const Matrix& b);
/// Columns of a followed by columns of b.
Matrix hconcat(const Matrix& a, const Matrix& b);
/// Block diagonal sum.
Matrix direct_sum(const Matrix& a, const Matrix& b);
/// Entrywise substitution of ring variables.
Matrix substitute(const Matrix& m, const std::vector<MPoly>& images, const Context& target);

/// Groebner basis of the submodule of R^rows generated by the columns of a
/// matrix, where R = k[x]/J. With `track` set, the basis also records how each
/// element is built from the generators, which enables lifting and syzygies.
class ModuleBasis {
 public:
  ModuleBasis(const Matrix& gens, const IdealHandle& ring, bool track, const Limits& limits = {});

  std::size_t rank() const { return rows_; }
  /// Normal form of u modulo the submodule plus J*R^rows.
  Vec reduce(const Vec& u) const;
  bool contains(const Vec& u) const { return is_zero(reduce(u)); }
  /// Coefficients c with sum_j c_j * gens_j = u in R^rows, when u lies in the submodule.
  std::optional<Vec> lift(const Vec& u) const;
  /// Generators of the relations among the columns, reduced modulo J.
  Matrix syzygies() const;

 private:
  MPoly embed(const Vec& u) const;
  Vec extract(const MPoly& p, std::size_t offset, std::size_t count) const;

  Context base_;
  Context ext_;
  std::size_t rows_ = 0;
  std::size_t ngens_ = 0;
  bool track_ = false;
  IdealHandle ring_;
  GroebnerPtr gb_;
};

/// Columns generating all relations among the columns of m over k[x]/J.
Matrix syzygy_matrix(const Matrix& m, const IdealHandle& ring, const Limits& limits = {});
Matrix syzygy_matrix(const Matrix& m, const Limits& limits = {});

}  // namespace ferrand
