#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "orthocycle/errors.hpp"
#include "orthocycle/skew.hpp"

namespace orthocycle {

// Row-stochastic transfer matrix of the torus skew product on an nx-by-ny
// grid, CSR layout. Row index = source cell (ix * ny + iy).
struct UlamMatrix {
  int nx = 0, ny = 0;
  std::vector<std::size_t> row_ptr;
  std::vector<int> col;
  std::vector<double> val;

  int size() const { return nx * ny; }

  double row_sum(int r) const {
    double s = 0.0;
    for (std::size_t k = row_ptr[static_cast<std::size_t>(r)];
         k < row_ptr[static_cast<std::size_t>(r) + 1]; ++k)
      s += val[k];
    return s;
  }

  double entry(int r, int c) const {
    for (std::size_t k = row_ptr[static_cast<std::size_t>(r)];
         k < row_ptr[static_cast<std::size_t>(r) + 1]; ++k)
      if (col[k] == c) return val[k];
    return 0.0;
  }

  double trace() const {
    double t = 0.0;
    for (int r = 0; r < size(); ++r) t += entry(r, r);
    return t;
  }
};

// Each cell is sampled on an m-by-m stratified sub-grid (samples_per_cell
// must be a perfect square) at offsets (p + 1/2)/m, so rows sum to exactly 1
// up to the division at the end.
inline UlamMatrix ulam_discretize(const SkewSystem<RotationBase>& sys, int nx,
                                  int ny, int samples_per_cell = 64) {
  if (nx < 1 || ny < 1) throw UsageError("ulam grid needs nx, ny >= 1");
  const int m = static_cast<int>(std::lround(std::sqrt(double(samples_per_cell))));
  if (m < 1 || m * m != samples_per_cell)
    throw UsageError("samples_per_cell must be a perfect square");

  UlamMatrix M;
  M.nx = nx;
  M.ny = ny;
  const int n = nx * ny;
  M.row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
  const double w = 1.0 / samples_per_cell;

  std::vector<double> dense(static_cast<std::size_t>(n), 0.0);
  std::vector<int> touched;
  touched.reserve(static_cast<std::size_t>(samples_per_cell));

  for (int ix = 0; ix < nx; ++ix) {
    for (int iy = 0; iy < ny; ++iy) {
      touched.clear();
      for (int p = 0; p < m; ++p) {
        for (int q = 0; q < m; ++q) {
          const double x = (ix + (p + 0.5) / m) / nx;
          const double y = (iy + (q + 0.5) / m) / ny;
          auto [x1, y1] = sys.step_S(x, y);
          int dx = static_cast<int>(std::floor(x1 * nx));
          int dy = static_cast<int>(std::floor(y1 * ny));
          dx = std::clamp(dx, 0, nx - 1);
          dy = std::clamp(dy, 0, ny - 1);
          const int d = dx * ny + dy;
          if (dense[static_cast<std::size_t>(d)] == 0.0) touched.push_back(d);
          dense[static_cast<std::size_t>(d)] += w;
        }
      }
      std::sort(touched.begin(), touched.end());
      for (int d : touched) {
        M.col.push_back(d);
        M.val.push_back(dense[static_cast<std::size_t>(d)]);
        dense[static_cast<std::size_t>(d)] = 0.0;
      }
      M.row_ptr[static_cast<std::size_t>(ix * ny + iy) + 1] = M.col.size();
    }
  }
  return M;
}

struct UlamInvariantResult {
  std::vector<int> support;  // cells where the positive part exceeds tol
  std::vector<double> vec;   // the candidate fixed vector (positive part)
  double residual = 0.0;     // ||M vec - vec||_inf
  int closed_classes = 0;
  bool degenerate = false;   // transfer matrix is (numerically) the identity
};

namespace detail {

// Iterative Tarjan on the positive-entry digraph; returns component id per
// node, components numbered in reverse topological order.
inline int tarjan_scc(const UlamMatrix& M, std::vector<int>& comp) {
  const int n = M.size();
  comp.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> index(static_cast<std::size_t>(n), -1);
  std::vector<int> low(static_cast<std::size_t>(n), 0);
  std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
  std::vector<int> stack;
  struct Frame {
    int v;
    std::size_t edge;
  };
  std::vector<Frame> call;
  int next_index = 0, ncomp = 0;

  for (int root = 0; root < n; ++root) {
    if (index[static_cast<std::size_t>(root)] != -1) continue;
    call.push_back({root, M.row_ptr[static_cast<std::size_t>(root)]});
    index[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] =
        next_index++;
    stack.push_back(root);
    on_stack[static_cast<std::size_t>(root)] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      const std::size_t row_end = M.row_ptr[static_cast<std::size_t>(f.v) + 1];
      bool descended = false;
      while (f.edge < row_end) {
        const std::size_t k = f.edge++;
        if (M.val[k] <= 0.0) continue;
        const int w = M.col[k];
        if (index[static_cast<std::size_t>(w)] == -1) {
          index[static_cast<std::size_t>(w)] =
              low[static_cast<std::size_t>(w)] = next_index++;
          stack.push_back(w);
          on_stack[static_cast<std::size_t>(w)] = 1;
          call.push_back({w, M.row_ptr[static_cast<std::size_t>(w)]});
          descended = true;
          break;
        }
        if (on_stack[static_cast<std::size_t>(w)])
          low[static_cast<std::size_t>(f.v)] =
              std::min(low[static_cast<std::size_t>(f.v)],
                       index[static_cast<std::size_t>(w)]);
      }
      if (descended) continue;
      const int v = f.v;
      call.pop_back();
      if (!call.empty())
        low[static_cast<std::size_t>(call.back().v)] =
            std::min(low[static_cast<std::size_t>(call.back().v)],
                     low[static_cast<std::size_t>(v)]);
      if (low[static_cast<std::size_t>(v)] == index[static_cast<std::size_t>(v)]) {
        while (true) {
          const int w = stack.back();
          stack.pop_back();
          on_stack[static_cast<std::size_t>(w)] = 0;
          comp[static_cast<std::size_t>(w)] = ncomp;
          if (w == v) break;
        }
        ++ncomp;
      }
    }
  }
  return ncomp;
}

}  // namespace detail

// Detects a nontrivial invariant set of the discretised dynamics. Closed
// communicating classes carry the fixed vectors of a row-stochastic matrix;
// we average a hemisphere probe over each closed class, centre the result,
// and keep the positive part. An ergodic-looking chain gives one closed
// class, hence a constant vector and empty support.
inline UlamInvariantResult invariant_vector_support(const UlamMatrix& M,
                                                    double tol = 1e-9) {
  const int n = M.size();
  UlamInvariantResult out;
  out.degenerate = M.trace() >= n - 1e-9;

  std::vector<int> comp;
  const int ncomp = detail::tarjan_scc(M, comp);

  std::vector<char> closed(static_cast<std::size_t>(ncomp), 1);
  for (int r = 0; r < n; ++r)
    for (std::size_t k = M.row_ptr[static_cast<std::size_t>(r)];
         k < M.row_ptr[static_cast<std::size_t>(r) + 1]; ++k)
      if (M.val[k] > 0.0 &&
          comp[static_cast<std::size_t>(M.col[k])] != comp[static_cast<std::size_t>(r)])
        closed[static_cast<std::size_t>(comp[static_cast<std::size_t>(r)])] = 0;

  std::vector<double> class_sum(static_cast<std::size_t>(ncomp), 0.0);
  std::vector<int> class_count(static_cast<std::size_t>(ncomp), 0);
  for (int c = 0; c < n; ++c) {
    const int iy = c % M.ny;
    const double probe = (iy < M.ny / 2) ? 0.5 : -0.5;
    class_sum[static_cast<std::size_t>(comp[static_cast<std::size_t>(c)])] += probe;
    class_count[static_cast<std::size_t>(comp[static_cast<std::size_t>(c)])] += 1;
  }
  for (int k = 0; k < ncomp; ++k)
    if (closed[static_cast<std::size_t>(k)]) ++out.closed_classes;

  std::vector<double> f(static_cast<std::size_t>(n), 0.0);
  double mean = 0.0;
  for (int c = 0; c < n; ++c) {
    const int k = comp[static_cast<std::size_t>(c)];
    if (closed[static_cast<std::size_t>(k)])
      f[static_cast<std::size_t>(c)] =
          class_sum[static_cast<std::size_t>(k)] / class_count[static_cast<std::size_t>(k)];
    mean += f[static_cast<std::size_t>(c)];
  }
  mean /= n;

  out.vec.assign(static_cast<std::size_t>(n), 0.0);
  for (int c = 0; c < n; ++c) {
    const double v = f[static_cast<std::size_t>(c)] - mean;
    if (v > tol) {
      out.vec[static_cast<std::size_t>(c)] = v;
      out.support.push_back(c);
    }
  }

  for (int r = 0; r < n; ++r) {
    double mv = 0.0;
    for (std::size_t k = M.row_ptr[static_cast<std::size_t>(r)];
         k < M.row_ptr[static_cast<std::size_t>(r) + 1]; ++k)
      mv += M.val[k] * out.vec[static_cast<std::size_t>(M.col[k])];
    out.residual =
        std::max(out.residual, std::abs(mv - out.vec[static_cast<std::size_t>(r)]));
  }
  return out;
}

// If the support is a full product T x (rows), return the sorted fibre rows;
// otherwise nullopt.
inline std::optional<std::vector<int>> support_rows(
    const UlamInvariantResult& res, int nx, int ny) {
  std::vector<char> in(static_cast<std::size_t>(nx * ny), 0);
  for (int c : res.support) in[static_cast<std::size_t>(c)] = 1;
  std::vector<int> rows;
  for (int iy = 0; iy < ny; ++iy)
    if (in[static_cast<std::size_t>(iy)]) rows.push_back(iy);  // column ix = 0
  for (int ix = 0; ix < nx; ++ix)
    for (int iy = 0; iy < ny; ++iy) {
      const bool want =
          std::binary_search(rows.begin(), rows.end(), iy);
      if (static_cast<bool>(in[static_cast<std::size_t>(ix * ny + iy)]) != want)
        return std::nullopt;
    }
  return rows;
}

}  // namespace orthocycle
