#include "ngmres/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace ngmres
{

void write_atomically(const std::filesystem::path &path,
                      const std::function<void(std::ostream &)> &writer)
{
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
    {
      throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    }
    writer(out);
    out.flush();
    if (!out)
    {
      throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
  {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot move '" + tmp.string() + "' to '" + path.string() +
                             "': " + ec.message());
  }
}

std::string format_double(double value)
{
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

}  // namespace ngmres
