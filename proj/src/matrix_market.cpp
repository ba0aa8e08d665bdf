#include "ngmres/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "ngmres/io.hpp"

namespace ngmres
{

ParseError::ParseError(std::size_t line, const std::string &message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line)
{
}

namespace
{

enum class Layout
{
  coordinate,
  array
};

enum class Storage
{
  general,
  symmetric,
  skew_symmetric
};

std::string lowercase(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool blank(const std::string &line)
{
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

class LineReader
{
public:
  explicit LineReader(std::istream &in) : in_(in) {}

  // Next line that is neither a comment nor blank.
  bool next_data(std::string &line)
  {
    while (std::getline(in_, line))
    {
      ++number_;
      if (!line.empty() && line.back() == '\r')
      {
        line.pop_back();
      }
      if (line.empty() || line[0] == '%' || blank(line))
      {
        continue;
      }
      return true;
    }
    return false;
  }

  bool next_raw(std::string &line)
  {
    if (!std::getline(in_, line))
    {
      return false;
    }
    ++number_;
    if (!line.empty() && line.back() == '\r')
    {
      line.pop_back();
    }
    return true;
  }

  std::size_t number() const { return number_; }

private:
  std::istream &in_;
  std::size_t number_ = 0;
};

double parse_value(std::istringstream &fields, std::size_t line)
{
  std::string token;
  if (!(fields >> token))
  {
    throw ParseError(line, "missing value");
  }
  try
  {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size())
    {
      throw ParseError(line, "malformed number '" + token + "'");
    }
    return v;
  }
  catch (const std::logic_error &)
  {
    throw ParseError(line, "malformed number '" + token + "'");
  }
}

long long parse_index(std::istringstream &fields, std::size_t line, const char *what)
{
  long long v = 0;
  if (!(fields >> v))
  {
    throw ParseError(line, std::string("missing or malformed ") + what);
  }
  return v;
}

void expect_end(std::istringstream &fields, std::size_t line)
{
  std::string rest;
  if (fields >> rest)
  {
    throw ParseError(line, "unexpected trailing token '" + rest + "'");
  }
}

}  // namespace

SparseMatrix read_matrix_market(std::istream &in)
{
  LineReader reader(in);
  std::string line;
  if (!reader.next_raw(line))
  {
    throw ParseError(1, "empty input");
  }

  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket")
  {
    throw ParseError(1, "missing %%MatrixMarket banner");
  }
  object = lowercase(object);
  format = lowercase(format);
  field = lowercase(field);
  symmetry = lowercase(symmetry);
  if (object != "matrix")
  {
    throw UnsupportedFormat("unsupported object '" + object + "'");
  }

  Layout layout;
  if (format == "coordinate")
  {
    layout = Layout::coordinate;
  }
  else if (format == "array")
  {
    layout = Layout::array;
  }
  else
  {
    throw ParseError(1, "unknown format '" + format + "'");
  }

  if (field == "complex" || field == "pattern")
  {
    throw UnsupportedFormat("unsupported field type '" + field + "'");
  }
  if (field != "real" && field != "integer" && field != "double")
  {
    throw ParseError(1, "unknown field type '" + field + "'");
  }

  Storage storage;
  if (symmetry == "general")
  {
    storage = Storage::general;
  }
  else if (symmetry == "symmetric")
  {
    storage = Storage::symmetric;
  }
  else if (symmetry == "skew-symmetric")
  {
    storage = Storage::skew_symmetric;
  }
  else if (symmetry == "hermitian")
  {
    throw UnsupportedFormat("unsupported symmetry 'hermitian'");
  }
  else
  {
    throw ParseError(1, "unknown symmetry '" + symmetry + "'");
  }

  if (!reader.next_data(line))
  {
    throw ParseError(reader.number() + 1, "missing size line");
  }
  const std::size_t size_line = reader.number();
  std::istringstream size_fields(line);
  const long long rows = parse_index(size_fields, size_line, "row count");
  const long long cols = parse_index(size_fields, size_line, "column count");
  long long declared = 0;
  if (layout == Layout::coordinate)
  {
    declared = parse_index(size_fields, size_line, "entry count");
  }
  expect_end(size_fields, size_line);
  if (rows < 0 || cols < 0 || declared < 0)
  {
    throw ParseError(size_line, "negative size");
  }
  if (storage != Storage::general && rows != cols)
  {
    throw ParseError(size_line, "symmetric storage requires a square matrix");
  }

  std::vector<Eigen::Triplet<double, int>> entries;
  auto add = [&](long long i, long long j, double v, std::size_t at) {
    if (!std::isfinite(v))
    {
      throw ParseError(at, "non-finite value");
    }
    entries.emplace_back(static_cast<int>(i), static_cast<int>(j), v);
    if (i != j)
    {
      if (storage == Storage::symmetric)
      {
        entries.emplace_back(static_cast<int>(j), static_cast<int>(i), v);
      }
      else if (storage == Storage::skew_symmetric)
      {
        entries.emplace_back(static_cast<int>(j), static_cast<int>(i), -v);
      }
    }
    else if (storage == Storage::skew_symmetric && v != 0.0)
    {
      throw ParseError(at, "skew-symmetric storage with a nonzero diagonal entry");
    }
  };

  if (layout == Layout::coordinate)
  {
    entries.reserve(static_cast<std::size_t>(storage == Storage::general ? declared : 2 * declared));
    for (long long e = 0; e < declared; ++e)
    {
      if (!reader.next_data(line))
      {
        throw ParseError(reader.number() + 1, "unexpected end of file: expected " +
                                                  std::to_string(declared) + " entries, found " +
                                                  std::to_string(e));
      }
      const std::size_t at = reader.number();
      std::istringstream fields(line);
      const long long i = parse_index(fields, at, "row index");
      const long long j = parse_index(fields, at, "column index");
      const double v = parse_value(fields, at);
      expect_end(fields, at);
      if (i < 1 || i > rows || j < 1 || j > cols)
      {
        throw ParseError(at, "index out of range");
      }
      if (storage != Storage::general && j > i)
      {
        throw ParseError(at, "entry above the diagonal in symmetric storage");
      }
      add(i - 1, j - 1, v, at);
    }
  }
  else
  {
    // Column-major; symmetric variants store the lower triangle only
    // (skew-symmetric without the diagonal).
    for (long long j = 0; j < cols; ++j)
    {
      long long first = 0;
      if (storage == Storage::symmetric)
      {
        first = j;
      }
      else if (storage == Storage::skew_symmetric)
      {
        first = j + 1;
      }
      for (long long i = first; i < rows; ++i)
      {
        if (!reader.next_data(line))
        {
          throw ParseError(reader.number() + 1, "unexpected end of file in array data");
        }
        const std::size_t at = reader.number();
        std::istringstream fields(line);
        const double v = parse_value(fields, at);
        expect_end(fields, at);
        if (v != 0.0)
        {
          add(i, j, v, at);
        }
      }
    }
  }

  if (reader.next_data(line))
  {
    throw ParseError(reader.number(), "more entries than declared");
  }

  SparseMatrix a(rows, cols);
  a.setFromTriplets(entries.begin(), entries.end());
  a.makeCompressed();
  return a;
}

SparseMatrix read_matrix_market(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw std::runtime_error("cannot open '" + path.string() + "'");
  }
  return read_matrix_market(in);
}

void write_matrix_market(std::ostream &out, const SparseMatrix &a)
{
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nonZeros() << '\n';
  for (Index row = 0; row < a.outerSize(); ++row)
  {
    for (SparseMatrix::InnerIterator it(a, row); it; ++it)
    {
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << format_double(it.value()) << '\n';
    }
  }
}

void write_matrix_market(const std::filesystem::path &path, const SparseMatrix &a)
{
  write_atomically(path, [&](std::ostream &out) { write_matrix_market(out, a); });
}

void write_matrix_market(std::ostream &out, const Vector &v)
{
  out << "%%MatrixMarket matrix array real general\n";
  out << v.size() << " 1\n";
  for (Index i = 0; i < v.size(); ++i)
  {
    out << format_double(v(i)) << '\n';
  }
}

void write_matrix_market(const std::filesystem::path &path, const Vector &v)
{
  write_atomically(path, [&](std::ostream &out) { write_matrix_market(out, v); });
}

}  // namespace ngmres
