#include "multivenc/export.hpp"

#include <cstdio>
#include <fstream>

namespace mvenc {

namespace {

void open_with_manifest(std::ofstream& out, const std::string& path,
                        const std::vector<std::string>& manifest) {
    out.open(path);
    if (!out) throw Error("cannot write '" + path + "'");
    for (const auto& line : manifest) out << "# " << line << "\n";
}

} // namespace

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_lattice_points_csv(const std::string& path, const LatticePoints& points,
                              const std::vector<std::string>& manifest) {
    std::ofstream out;
    open_with_manifest(out, path, manifest);
    out << "x,y,z\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Eigen::Vector3d p = points.point(i);
        out << format_number(p(0)) << ',' << format_number(p(1)) << ','
            << format_number(p(2)) << '\n';
    }
}

void write_parallelepiped_csv(const std::string& path, const Parallelepiped& omega,
                              const std::vector<std::string>& manifest) {
    std::ofstream out;
    open_with_manifest(out, path, manifest);
    out << "x,y,z\n";
    for (const Eigen::Vector3d& v : omega.vertices()) {
        out << format_number(v(0)) << ',' << format_number(v(1)) << ','
            << format_number(v(2)) << '\n';
    }
}

void write_basis_csv(const std::string& path, const AmbiguityLattice& lat,
                     const std::vector<std::string>& manifest) {
    std::ofstream out;
    open_with_manifest(out, path, manifest);
    out << "vector,x,y,z\n";
    const Eigen::Matrix3d b = lat.basis();
    for (int c = 0; c < 3; ++c) {
        out << "v" << (c + 1) << ',' << format_number(b(0, c)) << ','
            << format_number(b(1, c)) << ',' << format_number(b(2, c)) << '\n';
    }
}

} // namespace mvenc
