#include "ngmres/window.hpp"

namespace ngmres
{

void WindowState::advance(Vector r, Vector x, Vector mr)
{
  if (!residuals_.empty() &&
      (r.size() != residuals_.front().size() || x.size() != iterates_.front().size()))
  {
    throw DimensionError("WindowState::advance: vector length changed");
  }
  if (r.size() != x.size() || r.size() != mr.size())
  {
    throw DimensionError("WindowState::advance: residual, iterate and M r lengths differ");
  }
  residuals_.push_front(std::move(r));
  iterates_.push_front(std::move(x));
  mr_ = std::move(mr);
  if (!capacity_.is_full())
  {
    const auto limit = static_cast<std::size_t>(capacity_.value() + 1);
    while (residuals_.size() > limit)
    {
      residuals_.pop_back();
      iterates_.pop_back();
    }
  }
}

DenseMatrix WindowState::assemble() const
{
  const Index n = mr_.size();
  DenseMatrix w(n, stored());
  for (Index i = 0; i < stored(); ++i)
  {
    w.col(i) = residual(i) - mr_;
  }
  return w;
}

WindowState window_advance(WindowState w, Vector r_new, Vector x_new, Vector mr_new)
{
  w.advance(std::move(r_new), std::move(x_new), std::move(mr_new));
  return w;
}

DenseMatrix assemble_window_direct(const std::vector<Vector> &residuals_newest_first,
                                   const Vector &mr)
{
  DenseMatrix w(mr.size(), static_cast<Index>(residuals_newest_first.size()));
  for (std::size_t i = 0; i < residuals_newest_first.size(); ++i)
  {
    w.col(static_cast<Index>(i)) = residuals_newest_first[i] - mr;
  }
  return w;
}

}  // namespace ngmres
