#ifndef NGMRES_MATRIX_MARKET_HPP
#define NGMRES_MATRIX_MARKET_HPP

#include <filesystem>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "ngmres/linalg.hpp"

namespace ngmres
{

// Malformed Matrix Market input. line() is 1-based.
class ParseError : public std::runtime_error
{
public:
  ParseError(std::size_t line, const std::string &message);
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

// Valid Matrix Market input using a field or storage scheme this reader does
// not handle (complex, pattern, hermitian).
class UnsupportedFormat : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Reads real or integer coordinate/array files; symmetric and
/// skew-symmetric storage is expanded to the full matrix.
SparseMatrix read_matrix_market(std::istream &in);
SparseMatrix read_matrix_market(const std::filesystem::path &path);

// Coordinate, real, general, 17 significant digits.
void write_matrix_market(std::ostream &out, const SparseMatrix &a);
void write_matrix_market(const std::filesystem::path &path, const SparseMatrix &a);

// Array, real, general (a single column).
void write_matrix_market(std::ostream &out, const Vector &v);
void write_matrix_market(const std::filesystem::path &path, const Vector &v);

}  // namespace ngmres

#endif  // NGMRES_MATRIX_MARKET_HPP
