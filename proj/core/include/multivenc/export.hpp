// CSV writers for the lattice geometry, consumed by external plotting
// tools. A manifest (free-form key=value lines) is echoed as '#' comments
// ahead of the header row.

#ifndef MULTIVENC_EXPORT_HPP
#define MULTIVENC_EXPORT_HPP

#include <string>
#include <vector>

#include "multivenc/lattice.hpp"

namespace mvenc {

void write_lattice_points_csv(const std::string& path, const LatticePoints& points,
                              const std::vector<std::string>& manifest = {});

void write_parallelepiped_csv(const std::string& path, const Parallelepiped& omega,
                              const std::vector<std::string>& manifest = {});

void write_basis_csv(const std::string& path, const AmbiguityLattice& lat,
                     const std::vector<std::string>& manifest = {});

// "%.12g" formatting used by every report writer.
std::string format_number(double v);

} // namespace mvenc

#endif
