#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace traitpref {

// ============================================================================
// Error hierarchy. The CLI maps each category onto a process exit code.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Shapes of two operands do not agree.
class DimensionError : public Error
{
public:
  using Error::Error;
};

/// A value violates a documented precondition (negative weight, k out of
/// range, too few samples, ...).
class InvalidArgument : public Error
{
public:
  using Error::Error;
};

/// No assignment satisfies the allocation constraints.
class InfeasibleError : public Error
{
public:
  using Error::Error;
};

/// Input file is missing, unreadable or malformed.
class DatasetError : public Error
{
public:
  using Error::Error;
};

// ============================================================================
/// Dense row-major matrix. Small by construction (tasks, species and traits
/// are at most a few dozen), so a flat std::vector is all we need.
template <typename T>
class Matrix
{
public:
  using value_type = T;

  Matrix() = default;

  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
    : rows_{rows}, cols_{cols}, data_(rows * cols, fill)
  {}

  Matrix(std::initializer_list<std::initializer_list<T>> init)
  {
    rows_ = init.size();
    cols_ = rows_ == 0 ? 0 : init.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : init)
    {
      if (row.size() != cols_)
        throw DimensionError("ragged matrix initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix from_rows(const std::vector<std::vector<T>>& rows)
  {
    Matrix out;
    out.rows_ = rows.size();
    out.cols_ = rows.empty() ? 0 : rows.front().size();
    out.data_.reserve(out.rows_ * out.cols_);
    for (const auto& row : rows)
    {
      if (row.size() != out.cols_)
        throw DimensionError("ragged matrix rows");
      out.data_.insert(out.data_.end(), row.begin(), row.end());
    }
    return out;
  }

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
  [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

  [[nodiscard]] T& operator()(std::size_t r, std::size_t c) noexcept
  {
    return data_[r * cols_ + c];
  }

  [[nodiscard]] const T& operator()(std::size_t r, std::size_t c) const noexcept
  {
    return data_[r * cols_ + c];
  }

  [[nodiscard]] std::span<T> row(std::size_t r) noexcept
  {
    return {data_.data() + r * cols_, cols_};
  }

  [[nodiscard]] std::span<const T> row(std::size_t r) const noexcept
  {
    return {data_.data() + r * cols_, cols_};
  }

  [[nodiscard]] std::span<const T> data() const noexcept { return data_; }
  [[nodiscard]] std::span<T> data() noexcept { return data_; }

  [[nodiscard]] std::string shape() const
  {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// Copy of `m` restricted to the listed columns, in the listed order.
template <typename T>
[[nodiscard]] Matrix<T> select_columns(
    const Matrix<T>& m, std::span<const std::size_t> columns)
{
  Matrix<T> out(m.rows(), columns.size());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t j = 0; j < columns.size(); ++j)
    {
      if (columns[j] >= m.cols())
        throw DimensionError("column index out of range");
      out(r, j) = m(r, columns[j]);
    }
  return out;
}

} // namespace traitpref
