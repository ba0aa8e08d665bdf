#ifndef NGMRES_RANDOM_HPP
#define NGMRES_RANDOM_HPP

#include <cstdint>
#include <random>

#include "ngmres/linalg.hpp"

namespace ngmres
{

// Seeded generator whose output does not depend on the standard library's
// distribution implementations, so recorded seeds reproduce across platforms.
class Random
{
public:
  explicit Random(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1).
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  double normal();

  Vector uniform_vector(Index n, double lo, double hi);
  DenseMatrix normal_matrix(Index rows, Index cols);

private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ngmres

#endif  // NGMRES_RANDOM_HPP
