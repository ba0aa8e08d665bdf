#ifndef NGMRES_IO_HPP
#define NGMRES_IO_HPP

#include <filesystem>
#include <functional>
#include <ostream>
#include <string>

namespace ngmres
{

// Writes through a sibling temporary file and renames it into place.
void write_atomically(const std::filesystem::path &path,
                      const std::function<void(std::ostream &)> &writer);

// Shortest-safe round-trip formatting (17 significant digits).
std::string format_double(double value);

}  // namespace ngmres

#endif  // NGMRES_IO_HPP
