#include "ngmres/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace ngmres
{

bool all_finite(const Vector &v) { return v.allFinite(); }

bool all_finite(const DenseMatrix &m) { return m.allFinite(); }

bool all_finite(const SparseMatrix &m)
{
  const double *values = m.valuePtr();
  return std::all_of(values, values + m.nonZeros(), [](double v) { return std::isfinite(v); });
}

void validate(const SparseMatrix &m)
{
  if (!m.isCompressed())
  {
    throw std::invalid_argument("sparse matrix is not in compressed row form");
  }
  const int *offsets = m.outerIndexPtr();
  const int *cols = m.innerIndexPtr();
  for (Index row = 0; row < m.rows(); ++row)
  {
    if (offsets[row + 1] < offsets[row])
    {
      throw std::invalid_argument("row offsets decrease at row " + std::to_string(row));
    }
    for (int k = offsets[row]; k < offsets[row + 1]; ++k)
    {
      if (cols[k] < 0 || cols[k] >= m.cols())
      {
        throw DimensionError("column index out of range in row " + std::to_string(row));
      }
      if (k > offsets[row] && cols[k] <= cols[k - 1])
      {
        throw std::invalid_argument("column indices not strictly increasing in row " +
                                    std::to_string(row));
      }
    }
  }
  if (!all_finite(m))
  {
    throw NonFiniteError("sparse matrix holds non-finite values");
  }
}

Vector matvec(const DenseMatrix &a, const Vector &x)
{
  if (a.cols() != x.size())
  {
    throw DimensionError("matvec: matrix has " + std::to_string(a.cols()) +
                         " columns, vector has length " + std::to_string(x.size()));
  }
  return a * x;
}

Vector matvec(const SparseMatrix &a, const Vector &x)
{
  if (a.cols() != x.size())
  {
    throw DimensionError("matvec: matrix has " + std::to_string(a.cols()) +
                         " columns, vector has length " + std::to_string(x.size()));
  }
  Vector y(a.rows());
  y.noalias() = a * x;
  return y;
}

DenseMatrix to_dense(const SparseMatrix &a) { return DenseMatrix(a); }

SparseMatrix to_sparse(const DenseMatrix &a, double drop_tol)
{
  SparseMatrix s = a.sparseView(1.0, drop_tol);
  s.makeCompressed();
  return s;
}

double relative_asymmetry(const DenseMatrix &a)
{
  if (a.rows() != a.cols())
  {
    throw DimensionError("relative_asymmetry: matrix is not square");
  }
  const double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0)
  {
    return 0.0;
  }
  return (a - a.transpose()).cwiseAbs().maxCoeff() / scale;
}

namespace
{

LeastSquaresSolution lstsq_orthogonal(const DenseMatrix &w, const Vector &f, double rank_tol)
{
  const Index p = w.cols();
  const Index t = std::min(w.rows(), p);

  Eigen::HouseholderQR<DenseMatrix> qr(w);
  Vector g = f;
  g.applyOnTheLeft(qr.householderQ().adjoint());

  DenseMatrix r = qr.matrixQR().topRows(t);
  for (Index j = 0; j < p; ++j)
  {
    for (Index i = j + 1; i < t; ++i)
    {
      r(i, j) = 0.0;
    }
  }

  // Singular values of R are those of W.
  Eigen::JacobiSVD<DenseMatrix> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector &sv = svd.singularValues();

  LeastSquaresSolution out;
  out.coefficients = Vector::Zero(p);
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  if (smax > 0.0)
  {
    const double threshold = rank_tol * smax;
    Index rank = 0;
    while (rank < sv.size() && sv(rank) > threshold)
    {
      ++rank;
    }
    if (rank == p)
    {
      // Full column rank: back substitution keeps the column-wise accuracy of
      // Householder QR when columns differ widely in scale.
      out.coefficients = r.topRows(p).triangularView<Eigen::Upper>().solve(g.head(p));
    }
    else
    {
      const Vector projected = svd.matrixU().leftCols(rank).transpose() * g.head(t);
      out.coefficients =
          svd.matrixV().leftCols(rank) * projected.cwiseQuotient(sv.head(rank));
    }
    out.numerical_rank = rank;
  }
  out.min_norm_applied = out.numerical_rank < p;
  return out;
}

LeastSquaresSolution lstsq_normal(const DenseMatrix &w, const Vector &f, double rank_tol)
{
  const Index p = w.cols();
  const DenseMatrix c = w.transpose() * w;
  const Vector rhs = w.transpose() * f;

  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(c);
  const Vector &lambda = eig.eigenvalues();  // ascending
  const double lmax = lambda(p - 1);

  LeastSquaresSolution out;
  out.coefficients = Vector::Zero(p);
  if (lmax > 0.0)
  {
    // Eigenvalues of W^T W carry absolute error ~ eps * lmax, so the cutoff
    // cannot go below that regardless of rank_tol.
    const double rel = std::max(rank_tol * rank_tol,
                                static_cast<double>(p) * std::numeric_limits<double>::epsilon());
    const double threshold = rel * lmax;
    Index rank = 0;
    Vector projected = eig.eigenvectors().transpose() * rhs;
    for (Index i = 0; i < p; ++i)
    {
      if (lambda(i) > threshold)
      {
        projected(i) /= lambda(i);
        ++rank;
      }
      else
      {
        projected(i) = 0.0;
      }
    }
    out.coefficients = eig.eigenvectors() * projected;
    out.numerical_rank = rank;
  }
  out.min_norm_applied = out.numerical_rank < p;
  return out;
}

}  // namespace

LeastSquaresSolution min_norm_lstsq(const DenseMatrix &w, const Vector &f, double rank_tol,
                                    LstsqMethod method)
{
  if (w.rows() < 1 || w.cols() < 1)
  {
    throw DimensionError("min_norm_lstsq: W must have at least one row and one column");
  }
  if (f.size() != w.rows())
  {
    throw DimensionError("min_norm_lstsq: right-hand side length " + std::to_string(f.size()) +
                         " does not match W rows " + std::to_string(w.rows()));
  }
  if (!(rank_tol > 0.0))
  {
    throw std::invalid_argument("min_norm_lstsq: rank_tol must be positive");
  }
  if (!w.allFinite() || !f.allFinite())
  {
    throw NonFiniteError("min_norm_lstsq: non-finite input");
  }

  LeastSquaresSolution out = method == LstsqMethod::orthogonal ? lstsq_orthogonal(w, f, rank_tol)
                                                               : lstsq_normal(w, f, rank_tol);
  out.residual_norm = (f - w * out.coefficients).norm();
  return out;
}

EigenExtremes sym_eig_extremes(const DenseMatrix &s, double symmetry_tol)
{
  if (s.rows() != s.cols() || s.rows() == 0)
  {
    throw DimensionError("sym_eig_extremes: matrix must be square and non-empty");
  }
  if (!s.allFinite())
  {
    throw NonFiniteError("sym_eig_extremes: non-finite input");
  }
  if (relative_asymmetry(s) > symmetry_tol)
  {
    throw std::invalid_argument("sym_eig_extremes: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(s, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success)
  {
    throw std::runtime_error("sym_eig_extremes: eigensolver did not converge");
  }
  const Vector &lambda = eig.eigenvalues();
  return {lambda(0), lambda(lambda.size() - 1)};
}

double spectral_norm(const DenseMatrix &a)
{
  if (a.size() == 0)
  {
    return 0.0;
  }
  Eigen::BDCSVD<DenseMatrix> svd(a);
  return svd.singularValues()(0);
}

double spectral_radius(const DenseMatrix &a)
{
  if (a.rows() != a.cols())
  {
    throw DimensionError("spectral_radius: matrix is not square");
  }
  if (a.size() == 0)
  {
    return 0.0;
  }
  Eigen::EigenSolver<DenseMatrix> eig(a, false);
  if (eig.info() != Eigen::Success)
  {
    throw std::runtime_error("spectral_radius: eigensolver did not converge");
  }
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace ngmres
