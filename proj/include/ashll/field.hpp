#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace ashll {

/// Cell-centered array over an ni x nj grid with one ghost layer on every side.
/// Valid indices are i in [-1, ni], j in [-1, nj]; storage is j-major.
template <class T>
class CellField {
 public:
  CellField() = default;
  CellField(int ni, int nj, const T& init = T{})
      : ni_(ni), nj_(nj), data_(static_cast<std::size_t>(ni + 2) * (nj + 2), init) {}

  int ni() const noexcept { return ni_; }
  int nj() const noexcept { return nj_; }

  T& operator()(int i, int j) noexcept { return data_[offset(i, j)]; }
  const T& operator()(int i, int j) const noexcept { return data_[offset(i, j)]; }

  bool operator==(const CellField&) const = default;

 private:
  std::size_t offset(int i, int j) const noexcept {
    assert(i >= -1 && i <= ni_ && j >= -1 && j <= nj_);
    return static_cast<std::size_t>(j + 1) * (ni_ + 2) + static_cast<std::size_t>(i + 1);
  }

  int ni_ = 0;
  int nj_ = 0;
  std::vector<T> data_;
};

}  // namespace ashll
