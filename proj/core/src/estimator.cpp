#include "multivenc/estimator.hpp"

#include <cmath>
#include <set>

namespace mvenc {

namespace {

Eigen::MatrixXd pseudo_inverse_sym(const Eigen::MatrixXd& m, int* rank_out) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    const Eigen::VectorXd& vals = eig.eigenvalues();
    const double lmax = vals.cwiseAbs().maxCoeff();
    const double thresh = 1e-10 * lmax;
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m.rows(), m.cols());
    int rank = 0;
    for (int i = 0; i < vals.size(); ++i) {
        if (vals(i) > thresh) {
            out += (1.0 / vals(i)) * eig.eigenvectors().col(i) *
                   eig.eigenvectors().col(i).transpose();
            ++rank;
        }
    }
    if (rank_out) *rank_out = rank;
    return out;
}

Eigen::Matrix3d information_matrix(const DifferenceSystem& d, const NoiseModel& nm) {
    const Eigen::MatrixXd a = d.matrix();
    if (nm.sigma.rows() != a.rows()) {
        throw DimensionError("noise model size does not match the system");
    }
    return a.transpose() * nm.pseudo_inverse * a;
}

} // namespace

double wrap_phase(double x) {
    double w = std::remainder(x, 2.0 * M_PI); // [-pi, pi]
    if (w <= -M_PI) w = M_PI;
    return w;
}

PhaseDifferences phase_differences(const Measurements& y) {
    if (y.empty() || y[0].empty()) throw DimensionError("no measurements");
    const int coils = static_cast<int>(y.size());
    const int L = static_cast<int>(y[0].size());
    for (const auto& chan : y) {
        if (static_cast<int>(chan.size()) != L) {
            throw DimensionError("coil channels have unequal point counts");
        }
    }

    PhaseDifferences out;
    out.pairs = pair_order(L);
    out.values.resize(static_cast<int>(out.pairs.size()));
    for (std::size_t n = 0; n < out.pairs.size(); ++n) {
        const int i = out.pairs[n].first - 1;
        const int j = out.pairs[n].second - 1;
        std::complex<double> sum = 0.0;
        for (int c = 0; c < coils; ++c) sum += y[c][i] * std::conj(y[c][j]);
        if (sum == std::complex<double>(0.0, 0.0)) {
            throw Error("indeterminate phase: zero conjugate product");
        }
        double phi = std::arg(sum);
        if (phi <= -M_PI) phi = M_PI;
        out.values(static_cast<int>(n)) = phi;
    }
    return out;
}

NoiseModel NoiseModel::identity(int n) {
    NoiseModel nm;
    nm.sigma = Eigen::MatrixXd::Identity(n, n);
    nm.pseudo_inverse = nm.sigma;
    nm.rank = n;
    return nm;
}

NoiseModel NoiseModel::from_sigma(const Eigen::MatrixXd& sigma) {
    NoiseModel nm;
    nm.sigma = sigma;
    nm.pseudo_inverse = pseudo_inverse_sym(sigma, &nm.rank);
    return nm;
}

NoiseModel noise_covariance(const EncodingScheme& s, int coils) {
    s.validate();
    if (coils < 1) throw Error("coils must be >= 1");
    const RationalMatrix b = pair_incidence(s.L);
    Eigen::MatrixXd bd(b.rows(), b.cols());
    for (int r = 0; r < b.rows(); ++r)
        for (int c = 0; c < b.cols(); ++c) bd(r, c) = b.at(r, c).to_double();
    Eigen::VectorXd zeta(s.L);
    for (int l = 0; l < s.L; ++l) {
        zeta(l) = s.noise_std * s.noise_std /
                  (2.0 * s.magnitudes[l] * s.magnitudes[l] * static_cast<double>(coils));
    }
    return NoiseModel::from_sigma(bd * zeta.asDiagonal() * bd.transpose());
}

WeightedSolution weighted_solve(const DifferenceSystem& d, const Eigen::VectorXd& phi,
                                const Eigen::VectorXi& k, const NoiseModel& nm) {
    const Eigen::MatrixXd a = d.matrix();
    if (phi.size() != a.rows() || k.size() != a.rows()) {
        throw DimensionError("phase/wrap vector size does not match the system");
    }
    const Eigen::Matrix3d info = information_matrix(d, nm);
    Eigen::FullPivLU<Eigen::Matrix3d> lu(info);
    if (!lu.isInvertible()) throw RankError("weighted normal matrix is singular");
    const Eigen::VectorXd rhs = phi + 2.0 * M_PI * k.cast<double>();
    WeightedSolution sol;
    sol.v = lu.solve(a.transpose() * nm.pseudo_inverse * rhs);
    const Eigen::VectorXd res = rhs - a * sol.v;
    sol.cost = res.dot(nm.pseudo_inverse * res);
    return sol;
}

VelocityEstimate wrap_search(const DifferenceSystem& d, const PhaseDifferences& phi,
                             const NoiseModel& nm, const Parallelepiped& region) {
    const Eigen::MatrixXd a = d.matrix();
    const int n = static_cast<int>(a.rows());
    if (phi.values.size() != n) throw DimensionError("phase vector size mismatch");

    const Eigen::Matrix3d info = information_matrix(d, nm);
    Eigen::FullPivLU<Eigen::Matrix3d> lu(info);
    if (!lu.isInvertible()) throw RankError("weighted normal matrix is singular");
    const Eigen::Matrix<double, 3, Eigen::Dynamic> gain =
        lu.inverse() * a.transpose() * nm.pseudo_inverse;

    // Grid spacing that cannot skip a wrap branch inside the region.
    double max_row = 0.0;
    for (int r = 0; r < n; ++r) max_row = std::max(max_row, a.row(r).norm());
    const double delta = M_PI / (std::sqrt(3.0) * max_row);

    std::array<int, 3> steps{};
    for (int i = 0; i < 3; ++i) {
        steps[i] = std::max(1, static_cast<int>(std::ceil(region.edges.col(i).norm() / delta)));
    }

    std::set<std::vector<int>> candidates;
    for (int i0 = 0; i0 <= steps[0]; ++i0) {
        for (int i1 = 0; i1 <= steps[1]; ++i1) {
            for (int i2 = 0; i2 <= steps[2]; ++i2) {
                const Eigen::Vector3d u = region.origin +
                                          region.edges.col(0) * (double(i0) / steps[0]) +
                                          region.edges.col(1) * (double(i1) / steps[1]) +
                                          region.edges.col(2) * (double(i2) / steps[2]);
                const Eigen::VectorXd t = (a * u - phi.values) / (2.0 * M_PI);
                std::vector<int> k(n);
                for (int r = 0; r < n; ++r) k[r] = static_cast<int>(std::lround(t(r)));
                candidates.insert(std::move(k));
            }
        }
    }

    // When the covariance is rank deficient its pseudo-inverse cannot see the
    // component of the unwrapped phase orthogonal to range(sigma).  That
    // component carries no noise, so for a viable branch it must vanish; a
    // branch with a nonzero orthogonal part is off by a non-integer multiple
    // of the system and gets rejected outright.
    const bool rank_deficient = nm.rank < n;
    auto range_defect = [&](const Eigen::VectorXd& rhs) {
        if (!rank_deficient) return 0.0;
        const Eigen::VectorXd orth = rhs - nm.sigma * (nm.pseudo_inverse * rhs);
        return orth.cwiseAbs().maxCoeff();
    };
    const double defect_tol = 1e-6;

    bool have = false;
    VelocityEstimate best;
    auto consider = [&](const std::vector<int>& kv, bool use_constraint, bool filter_region) {
        Eigen::VectorXi k(n);
        for (int r = 0; r < n; ++r) k(r) = kv[r];
        const Eigen::VectorXd rhs = phi.values + 2.0 * M_PI * k.cast<double>();
        if (use_constraint && range_defect(rhs) > defect_tol) return;
        const Eigen::Vector3d v = gain * rhs;
        if (filter_region && !region.contains(v)) return;
        const Eigen::VectorXd res = rhs - a * v;
        const double cost = res.dot(nm.pseudo_inverse * res);
        const double tol = 1e-9 * (1.0 + std::min(cost, have ? best.cost : cost));
        if (!have || cost < best.cost - tol) {
            have = true;
            best.v_hat = v;
            best.k_hat = k;
            best.cost = cost;
            return;
        }
        if (cost <= best.cost + tol) {
            const double dn = v.norm() - best.v_hat.norm();
            const double ntol = 1e-9 * (1.0 + best.v_hat.norm());
            bool take = dn < -ntol;
            if (!take && std::abs(dn) <= ntol) {
                for (int i = 0; i < 3; ++i) {
                    if (std::abs(v(i) - best.v_hat(i)) <= ntol) continue;
                    take = v(i) < best.v_hat(i);
                    break;
                }
            }
            if (take) {
                best.v_hat = v;
                best.k_hat = k;
                best.cost = std::min(best.cost, cost);
            }
        }
    };

    for (const auto& kv : candidates) consider(kv, true, true);
    if (!have) {
        // Every consistent candidate mapped outside the region; drop the
        // region filter first, then the consistency constraint, so the
        // search stays total even on degenerate input.
        for (const auto& kv : candidates) consider(kv, true, false);
    }
    if (!have) {
        for (const auto& kv : candidates) consider(kv, false, true);
    }
    if (!have) {
        for (const auto& kv : candidates) consider(kv, false, false);
    }
    best.covariance = lu.inverse();
    return best;
}

double noise_sensitivity(const DifferenceSystem& d, const NoiseModel& nm) {
    const Eigen::Matrix3d info = information_matrix(d, nm);
    const double det = info.determinant();
    if (!(det > 0.0)) throw RankError("information matrix is singular");
    return 1.0 / det;
}

double preprocessed_sensitivity(const Preprocessor& p, const DifferenceSystem& d,
                                const NoiseModel& nm) {
    if (p.P.cols() != d.size()) throw DimensionError("preprocessor shape mismatch");
    const RationalMatrix pa = p.P * d.rational;
    if (pa.rank() < 3) throw RankError("pre-processed system has rank < 3");

    Eigen::MatrixXd pd(p.P.rows(), p.P.cols());
    for (int r = 0; r < pd.rows(); ++r)
        for (int c = 0; c < pd.cols(); ++c) pd(r, c) = p.P.at(r, c).to_double();

    const Eigen::MatrixXd a = d.matrix();
    const Eigen::MatrixXd psp = pd * nm.sigma * pd.transpose();
    const Eigen::MatrixXd psp_pinv = pseudo_inverse_sym(psp, nullptr);
    const Eigen::MatrixXd pa_d = pd * a;
    const Eigen::Matrix3d info = pa_d.transpose() * psp_pinv * pa_d;
    const double det = info.determinant();
    if (!(det > 0.0)) throw RankError("pre-processed information matrix is singular");
    return 1.0 / det;
}

} // namespace mvenc
