#include "hhg/photostat.hpp"

#include <cmath>

namespace hhg::photostat {

SqueezerSpectrum SqueezerSpectrum::from_weights(Eigen::VectorXd lambda) {
    if (lambda.size() == 0) throw EmptySpectrum("spectrum has no modes");
    if ((lambda.array() < 0).any()) throw EmptySpectrum("mode weights must be non-negative");
    const double n2 = lambda.squaredNorm();
    if (!(n2 > 0.0)) throw EmptySpectrum("at least one mode weight must be positive");
    lambda /= std::sqrt(n2);
    return SqueezerSpectrum(std::move(lambda));
}

SqueezerSpectrum SqueezerSpectrum::from_squared_weights(const Eigen::VectorXd& lambda_sq) {
    if ((lambda_sq.array() < 0).any()) throw EmptySpectrum("squared weights must be non-negative");
    return from_weights(lambda_sq.cwiseSqrt());
}

SqueezerSpectrum SqueezerSpectrum::uniform(int modes) {
    if (modes < 1) throw EmptySpectrum("mode count must be >= 1");
    return from_weights(Eigen::VectorXd::Ones(modes));
}

double g2_multimode_twin_beam(const SqueezerSpectrum& spec, double gain) {
    if (gain < 0) throw ZeroGain("gain must be positive");
    if (gain == 0.0) throw ZeroGain("g2 is indeterminate at zero gain; use g2_low_gain for the limit");
    double s2 = 0.0, s4 = 0.0;
    for (double lk : spec.weights()) {
        const double sh2 = std::pow(std::sinh(lk * gain), 2);
        s2 += sh2;
        s4 += sh2 * sh2;
    }
    return 1.0 + s4 / (s2 * s2);
}

double schmidt_number(const SqueezerSpectrum& spec) {
    const double s4 = spec.weights().array().pow(4).sum();
    return 1.0 / s4;
}

double g2_low_gain(double schmidt_k) {
    if (!(schmidt_k >= 1.0)) throw InvalidK("Schmidt number must be >= 1");
    return 1.0 + 1.0 / schmidt_k;
}

double canonical_g2(CanonicalKind kind, double nbar) {
    switch (kind) {
        case CanonicalKind::coherent:
            return 1.0;
        case CanonicalKind::thermal:
            return 2.0;
        case CanonicalKind::tmsv_auto:
            return 2.0;
        case CanonicalKind::smsv:
            if (nbar <= 0) throw ZeroIntensity("smsv g2 requires nbar > 0");
            return 3.0 + 1.0 / nbar;
        case CanonicalKind::tmsv_cross:
            if (nbar <= 0) throw ZeroIntensity("tmsv cross g2 requires nbar > 0");
            return 2.0 + 1.0 / nbar;
    }
    throw InvalidState("unreachable canonical kind");
}

}  // namespace hhg::photostat
