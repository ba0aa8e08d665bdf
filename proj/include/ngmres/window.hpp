#ifndef NGMRES_WINDOW_HPP
#define NGMRES_WINDOW_HPP

#include <deque>
#include <vector>

#include "ngmres/linalg.hpp"
#include "ngmres/trace.hpp"

namespace ngmres
{

/// Sliding history r_k, r_{k-1}, ..., r_{k-m_k} (and the matching iterates)
/// plus the cached head product M r_k. Advancing inserts a new head column,
/// evicts the oldest column once past capacity, and swaps the rank-one term,
/// so W_k = D_k - (M r_k) 1^T is never stored.
class WindowState
{
public:
  explicit WindowState(WindowSize capacity) : capacity_(capacity) {}

  void advance(Vector r, Vector x, Vector mr);

  WindowSize capacity() const { return capacity_; }
  // Number of stored (residual, iterate) pairs, m_k + 1.
  Index stored() const { return static_cast<Index>(residuals_.size()); }
  Index depth() const { return stored() - 1; }
  bool empty() const { return residuals_.empty(); }

  // r_{k-i} and x_{k-i}, i = 0 being the head.
  const Vector &residual(Index i) const { return residuals_.at(static_cast<std::size_t>(i)); }
  const Vector &iterate(Index i) const { return iterates_.at(static_cast<std::size_t>(i)); }
  const Vector &head_mr() const { return mr_; }

  // W_k = [r_k - M r_k, r_{k-1} - M r_k, ..., r_{k-m_k} - M r_k].
  DenseMatrix assemble() const;

private:
  WindowSize capacity_;
  std::deque<Vector> residuals_;
  std::deque<Vector> iterates_;
  Vector mr_;
};

WindowState window_advance(WindowState w, Vector r_new, Vector x_new, Vector mr_new);

// W built from scratch out of residuals ordered newest first.
DenseMatrix assemble_window_direct(const std::vector<Vector> &residuals_newest_first,
                                   const Vector &mr);

}  // namespace ngmres

#endif  // NGMRES_WINDOW_HPP
