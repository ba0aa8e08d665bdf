#include "ngmres/random.hpp"

#include <cmath>
#include <numbers>

namespace ngmres
{

double Random::uniform01()
{
  // Top 53 bits scaled into [0, 1).
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Random::normal()
{
  if (has_spare_)
  {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform01();
  while (u1 <= 0.0)
  {
    u1 = uniform01();
  }
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Vector Random::uniform_vector(Index n, double lo, double hi)
{
  Vector v(n);
  for (Index i = 0; i < n; ++i)
  {
    v(i) = uniform(lo, hi);
  }
  return v;
}

DenseMatrix Random::normal_matrix(Index rows, Index cols)
{
  DenseMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
  {
    for (Index j = 0; j < cols; ++j)
    {
      m(i, j) = normal();
    }
  }
  return m;
}

}  // namespace ngmres
