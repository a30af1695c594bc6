#include "multivenc/lattice.hpp"

#include <algorithm>
#include <cmath>

#include "multivenc/rng.hpp"

namespace mvenc {

namespace {

bool lex_less(const Rat3& a, const Rat3& b) {
    for (int i = 0; i < 3; ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
}

bool is_origin(const Rat3& p) {
    return p[0].is_zero() && p[1].is_zero() && p[2].is_zero();
}

// First 3 rows of R with exact rank 3, greedily.
std::array<int, 3> pick_independent_rows(const RationalMatrix& r) {
    std::array<int, 3> rows{-1, -1, -1};
    int found = 0;
    for (int i = 0; i < r.rows() && found < 3; ++i) {
        rows[found] = i;
        RationalMatrix probe(found + 1, 3);
        for (int k = 0; k <= found; ++k)
            for (int c = 0; c < 3; ++c) probe.at(k, c) = r.at(rows[k], c);
        if (probe.rank() == found + 1) ++found;
    }
    if (found < 3) throw RankError("direction invisible to acquisition");
    return rows;
}

Rat3 row_of(const RationalMatrix& m, int r) {
    return Rat3{m.at(r, 0), m.at(r, 1), m.at(r, 2)};
}

double spectral_condition(const Eigen::Matrix3d& v) {
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(v);
    const auto& s = svd.singularValues();
    return s(0) / s(2);
}

} // namespace

SearchBox compute_search_box(const DifferenceSystem& d) {
    SearchBox box;
    box.scale_v = d.velocity_scale();
    // 2*pi (/) A_col = scale_v * (1 (/) R_col); the scale factors out of the lcm.
    for (int c = 0; c < 3; ++c) {
        box.half_extents_w[c] = generalized_lcm(modified_divide(Rational(1), d.rational.col(c)));
    }
    return box;
}

LatticePoints enumerate_lattice_points(const DifferenceSystem& d, const SearchBox& box) {
    const RationalMatrix& r = d.rational;
    const std::array<int, 3> sel = pick_independent_rows(r);
    const Rat3 s0 = row_of(r, sel[0]);
    const Rat3 s1 = row_of(r, sel[1]);
    const Rat3 s2 = row_of(r, sel[2]);
    // Columns of the selected 3x3 block.
    const Rat3 c0{s0[0], s1[0], s2[0]};
    const Rat3 c1{s0[1], s1[1], s2[1]};
    const Rat3 c2{s0[2], s1[2], s2[2]};

    const Rat3& e = box.half_extents_w;
    const std::array<Rat3, 3> srows{s0, s1, s2};
    std::array<std::int64_t, 3> kmax{};
    for (int i = 0; i < 3; ++i) {
        Rational reach;
        for (int j = 0; j < 3; ++j) reach += srows[i][j].abs() * e[j];
        kmax[i] = reach.floor();
    }

    std::vector<int> rest;
    for (int i = 0; i < r.rows(); ++i) {
        if (i != sel[0] && i != sel[1] && i != sel[2]) rest.push_back(i);
    }

    LatticePoints out;
    out.scale_v = box.scale_v;
    for (std::int64_t k0 = -kmax[0]; k0 <= kmax[0]; ++k0) {
        for (std::int64_t k1 = -kmax[1]; k1 <= kmax[1]; ++k1) {
            for (std::int64_t k2 = -kmax[2]; k2 <= kmax[2]; ++k2) {
                const Rat3 rhs{Rational(k0), Rational(k1), Rational(k2)};
                const Rat3 w = solve3(c0, c1, c2, rhs);
                bool inside = true;
                for (int j = 0; j < 3 && inside; ++j) {
                    inside = w[j].abs() <= e[j];
                }
                if (!inside) continue;
                bool congruent = true;
                for (int rowi : rest) {
                    Rational dot;
                    for (int j = 0; j < 3; ++j) dot += r.at(rowi, j) * w[j];
                    if (!dot.is_integer()) {
                        congruent = false;
                        break;
                    }
                }
                if (congruent) out.points_w.push_back(w);
            }
        }
    }
    std::sort(out.points_w.begin(), out.points_w.end(), lex_less);
    return out;
}

std::array<Eigen::Vector3d, 8> Parallelepiped::vertices() const {
    std::array<Eigen::Vector3d, 8> v;
    for (int mask = 0; mask < 8; ++mask) {
        Eigen::Vector3d p = origin;
        for (int i = 0; i < 3; ++i) {
            if (mask & (1 << i)) p += edges.col(i);
        }
        v[mask] = p;
    }
    return v;
}

bool Parallelepiped::contains(const Eigen::Vector3d& v, double tol) const {
    const Eigen::Vector3d alpha = edges.partialPivLu().solve(v - origin);
    for (int i = 0; i < 3; ++i) {
        if (alpha(i) < -tol || alpha(i) > 1.0 + tol) return false;
    }
    return true;
}

Eigen::Matrix3d AmbiguityLattice::basis() const {
    Eigen::Matrix3d v;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) v(r, c) = scale_v * basis_w.at(r, c).to_double();
    return v;
}

double AmbiguityLattice::volume() const {
    return det_w.to_double() * scale_v * scale_v * scale_v;
}

Rat3 AmbiguityLattice::basis_column_w(int c) const {
    return Rat3{basis_w.at(0, c), basis_w.at(1, c), basis_w.at(2, c)};
}

Parallelepiped AmbiguityLattice::fundamental() const {
    Parallelepiped p;
    p.origin = Eigen::Vector3d::Zero();
    p.edges = basis();
    return p;
}

Parallelepiped AmbiguityLattice::centered() const {
    Parallelepiped p = fundamental();
    p.origin = -0.5 * (p.edges.col(0) + p.edges.col(1) + p.edges.col(2));
    return p;
}

Eigen::Vector3d AmbiguityLattice::reduce(const Eigen::Vector3d& v) const {
    const Eigen::Matrix3d b = basis();
    Eigen::Vector3d alpha = b.partialPivLu().solve(v);
    for (int i = 0; i < 3; ++i) alpha(i) = std::floor(alpha(i));
    return v - b * alpha;
}

Rat3 AmbiguityLattice::reduce_exact(const Rat3& w) const {
    const Rat3 alpha =
        solve3(basis_column_w(0), basis_column_w(1), basis_column_w(2), w);
    Rat3 out = w;
    for (int c = 0; c < 3; ++c) {
        const Rational f(alpha[c].floor());
        for (int r = 0; r < 3; ++r) out[r] -= f * basis_w.at(r, c);
    }
    return out;
}

AmbiguityLattice extract_basis(const LatticePoints& points) {
    std::vector<Rat3> pts;
    for (const Rat3& p : points.points_w) {
        if (!is_origin(p)) pts.push_back(p);
    }
    const std::size_t n = pts.size();
    if (n < 3) throw RankError("not enough lattice points to form a basis");

    bool have = false;
    Rational best_det;
    double best_kappa = 0.0;
    std::array<std::size_t, 3> best{};

    auto flat_less = [&](const std::array<std::size_t, 3>& a,
                         const std::array<std::size_t, 3>& b) {
        for (int col = 0; col < 3; ++col) {
            if (lex_less(pts[a[col]], pts[b[col]])) return true;
            if (lex_less(pts[b[col]], pts[a[col]])) return false;
        }
        return false;
    };

    for (std::size_t i = 0; i + 2 < n; ++i) {
        for (std::size_t j = i + 1; j + 1 < n; ++j) {
            for (std::size_t k = j + 1; k < n; ++k) {
                const Rational det = det3(pts[i], pts[j], pts[k]).abs();
                if (det.is_zero()) continue;
                if (have && best_det < det) continue;
                Eigen::Matrix3d m;
                for (int r = 0; r < 3; ++r) {
                    m(r, 0) = pts[i][r].to_double();
                    m(r, 1) = pts[j][r].to_double();
                    m(r, 2) = pts[k][r].to_double();
                }
                const double kappa = spectral_condition(m);
                const std::array<std::size_t, 3> cand{i, j, k};
                if (!have || det < best_det) {
                    have = true;
                    best_det = det;
                    best_kappa = kappa;
                    best = cand;
                } else { // equal determinant
                    if (kappa < best_kappa * (1.0 - 1e-12)) {
                        best_kappa = kappa;
                        best = cand;
                    } else if (kappa <= best_kappa * (1.0 + 1e-12) && flat_less(cand, best)) {
                        best_kappa = std::min(best_kappa, kappa);
                        best = cand;
                    }
                }
            }
        }
    }
    if (!have) throw RankError("lattice points are rank-deficient");

    AmbiguityLattice lat;
    lat.scale_v = points.scale_v;
    lat.det_w = best_det;
    lat.basis_w = RationalMatrix(3, 3);
    for (int c = 0; c < 3; ++c) {
        // Canonical orientation: first nonzero component positive.  Keeps the
        // choice deterministic and puts axis-aligned cells on the nonnegative
        // side.
        Rat3 col = pts[best[c]];
        for (int r = 0; r < 3; ++r) {
            if (col[r].is_zero()) continue;
            if (col[r] < Rational(0)) {
                for (int s = 0; s < 3; ++s) col[s] = -col[s];
            }
            break;
        }
        for (int r = 0; r < 3; ++r) lat.basis_w.at(r, c) = col[r];
    }
    lat.condition_number = best_kappa;

    // The minimal triple must generate every enumerated point.
    for (const Rat3& p : points.points_w) {
        const Rat3 coeff =
            solve3(lat.basis_column_w(0), lat.basis_column_w(1), lat.basis_column_w(2), p);
        for (int c = 0; c < 3; ++c) {
            if (!coeff[c].is_integer()) {
                throw Error("minimal-volume triple does not generate the lattice");
            }
        }
    }
    return lat;
}

AmbiguityLattice ambiguity_lattice(const DifferenceSystem& d) {
    return extract_basis(enumerate_lattice_points(d, compute_search_box(d)));
}

VolumeEstimate slab_region_volume(const Preprocessor& p, const DifferenceSystem& d,
                                  std::uint64_t samples, std::uint64_t seed) {
    const RationalMatrix normals = p.P * d.rational; // D x 3
    if (normals.rank() < 3) throw RankError("slab normals rank < 3: unbounded region");
    const int nrows = normals.rows();

    // In normalized units the region is |N w|_inf <= 1/2; bound it by the
    // parallelepiped of three independent rows.
    const std::array<int, 3> sel = pick_independent_rows(normals);
    const Rat3 c0{normals.at(sel[0], 0), normals.at(sel[1], 0), normals.at(sel[2], 0)};
    const Rat3 c1{normals.at(sel[0], 1), normals.at(sel[1], 1), normals.at(sel[2], 1)};
    const Rat3 c2{normals.at(sel[0], 2), normals.at(sel[1], 2), normals.at(sel[2], 2)};
    Rat3 bbox{};
    const Rational half(1, 2);
    for (int mask = 0; mask < 8; ++mask) {
        const Rat3 rhs{(mask & 1) ? half : -half, (mask & 2) ? half : -half,
                       (mask & 4) ? half : -half};
        const Rat3 vert = solve3(c0, c1, c2, rhs);
        for (int i = 0; i < 3; ++i) {
            if (bbox[i] < vert[i].abs()) bbox[i] = vert[i].abs();
        }
    }

    Eigen::MatrixXd nd(nrows, 3);
    for (int r = 0; r < nrows; ++r)
        for (int c = 0; c < 3; ++c) nd(r, c) = normals.at(r, c).to_double();
    const Eigen::Vector3d b(bbox[0].to_double(), bbox[1].to_double(), bbox[2].to_double());

    rng::Stream stream = rng::derive(seed, 0x51ab);
    std::uint64_t hits = 0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        Eigen::Vector3d w;
        for (int i = 0; i < 3; ++i) w(i) = stream.next_uniform(-b(i), b(i));
        bool inside = true;
        for (int r = 0; r < nrows && inside; ++r) {
            inside = std::abs(nd.row(r).dot(w)) <= 0.5;
        }
        if (inside) ++hits;
    }

    const double scale = d.velocity_scale();
    const double box_vol = 8.0 * b(0) * b(1) * b(2) * scale * scale * scale;
    const double phat = static_cast<double>(hits) / static_cast<double>(samples);
    VolumeEstimate est;
    est.value = box_vol * phat;
    est.std_error = box_vol * std::sqrt(phat * (1.0 - phat) / static_cast<double>(samples));
    est.samples = samples;
    return est;
}

} // namespace mvenc
