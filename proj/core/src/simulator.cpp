#include "multivenc/simulator.hpp"

#include <cmath>

#include "multivenc/lattice.hpp"
#include "multivenc/rng.hpp"

namespace mvenc {

void TrialConfig::validate() const {
    scheme.validate();
    if (trials < 1) throw Error("trials must be >= 1");
    if (coils < 1) throw Error("coils must be >= 1");
}

Measurements generate_measurements(const TrialConfig& cfg, std::uint64_t trial_index) {
    cfg.validate();
    const EncodingScheme& s = cfg.scheme;
    Measurements y(static_cast<std::size_t>(cfg.coils));
    for (int c = 0; c < cfg.coils; ++c) {
        y[c].resize(static_cast<std::size_t>(s.L));
        for (int l = 0; l < s.L; ++l) {
            double mv = 0.0;
            for (int k = 0; k < 3; ++k) {
                mv += s.moments.at(l, k).to_double() * cfg.true_velocity(k);
            }
            const double phase = cfg.background_phase + s.gamma_m * mv;
            std::complex<double> val = s.magnitudes[l] * std::polar(1.0, phase);
            if (s.noise_std > 0.0) {
                rng::Stream stream = rng::derive(cfg.seed, trial_index,
                                                 static_cast<std::uint64_t>(c),
                                                 static_cast<std::uint64_t>(l));
                const auto [g1, g2] = stream.next_gaussian_pair();
                val += s.noise_std * M_SQRT1_2 * std::complex<double>(g1, g2);
            }
            y[c][l] = val;
        }
    }
    return y;
}

Eigen::VectorXi true_wrap_integers(const DifferenceSystem& d, const Eigen::Vector3d& v) {
    const Eigen::VectorXd av = d.matrix() * v;
    Eigen::VectorXi k(av.size());
    for (int i = 0; i < av.size(); ++i) {
        k(i) = static_cast<int>(std::lround((av(i) - wrap_phase(av(i))) / (2.0 * M_PI)));
    }
    return k;
}

TrialReport run_campaign(const TrialConfig& cfg) {
    cfg.validate();
    const DifferenceSystem d = build_difference_system(cfg.scheme);
    const AmbiguityLattice lat = ambiguity_lattice(d);
    const Parallelepiped region = lat.centered();

    // The weighting only depends on the shape of Sigma, so a noiseless run
    // still gets a usable weight matrix.
    EncodingScheme weight_scheme = cfg.scheme;
    if (weight_scheme.noise_std == 0.0) weight_scheme.noise_std = 1.0;
    const NoiseModel nm = noise_covariance(weight_scheme, cfg.coils);

    const Eigen::VectorXi k_true = true_wrap_integers(d, cfg.true_velocity);

    TrialReport report;
    report.trials = cfg.trials;
    if (cfg.scheme.noise_std > 0.0) {
        const NoiseModel true_nm = noise_covariance(cfg.scheme, cfg.coils);
        const Eigen::MatrixXd a = d.matrix();
        report.predicted_covariance =
            (a.transpose() * true_nm.pseudo_inverse * a).inverse();
    }

    std::vector<Eigen::Vector3d> kept;
    kept.reserve(static_cast<std::size_t>(cfg.trials));
    for (int t = 0; t < cfg.trials; ++t) {
        const Measurements y = generate_measurements(cfg, static_cast<std::uint64_t>(t));
        const PhaseDifferences phi = phase_differences(y);
        const VelocityEstimate est = wrap_search(d, phi, nm, region);
        if ((est.k_hat - k_true).cwiseAbs().maxCoeff() != 0) {
            ++report.wrap_errors;
        } else {
            kept.push_back(est.v_hat);
        }
    }
    report.wrap_error_rate =
        static_cast<double>(report.wrap_errors) / static_cast<double>(cfg.trials);

    if (!kept.empty()) {
        Eigen::Vector3d mean = Eigen::Vector3d::Zero();
        for (const auto& v : kept) mean += v;
        mean /= static_cast<double>(kept.size());
        report.bias = mean - cfg.true_velocity;
        if (kept.size() > 1) {
            Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
            for (const auto& v : kept) {
                const Eigen::Vector3d c = v - mean;
                cov += c * c.transpose();
            }
            report.empirical_covariance = cov / static_cast<double>(kept.size() - 1);
        }
    }
    return report;
}

} // namespace mvenc
