#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace stlflow {

// Dense row-major matrix of doubles. Small utility type shared by the
// trajectory, planner and nn code; not a linear algebra library.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> v;

  Mat() = default;
  Mat(int r, int c, double fill = 0.0)
      : rows(r), cols(c), v(static_cast<size_t>(r) * static_cast<size_t>(c), fill) {}

  double &operator()(int r, int c) {
    assert(r >= 0 && r < rows && c >= 0 && c < cols);
    return v[static_cast<size_t>(r) * cols + c];
  }
  double operator()(int r, int c) const {
    assert(r >= 0 && r < rows && c >= 0 && c < cols);
    return v[static_cast<size_t>(r) * cols + c];
  }

  double *row(int r) { return v.data() + static_cast<size_t>(r) * cols; }
  const double *row(int r) const { return v.data() + static_cast<size_t>(r) * cols; }

  bool same_shape(const Mat &o) const { return rows == o.rows && cols == o.cols; }

  bool operator==(const Mat &o) const {
    return rows == o.rows && cols == o.cols && v == o.v;
  }
};

}  // namespace stlflow
