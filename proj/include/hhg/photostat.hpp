#pragma once

#include <Eigen/Dense>

#include "hhg/errors.hpp"

// Closed-form photon-statistics models: canonical g2 values, the broadband
// multimode twin-beam detection formula, and the Schmidt-number low-gain
// relation.

namespace hhg::photostat {

// Squeezer mode distribution seen by a broadband detector. Weights follow the
// convention sum(lambda_k^2) = 1; the Schmidt number is then 1 / sum(lambda_k^4).
class SqueezerSpectrum {
  public:
    // Builds from mode weights lambda_k (any positive scale; rescaled so that
    // sum of squares is 1). Throws EmptySpectrum when no weight is positive.
    static SqueezerSpectrum from_weights(Eigen::VectorXd lambda);

    // Convenience: builds from squared weights lambda_k^2.
    static SqueezerSpectrum from_squared_weights(const Eigen::VectorXd& lambda_sq);

    // Uniform spectrum over k modes: lambda_k^2 = 1/k.
    static SqueezerSpectrum uniform(int modes);

    const Eigen::VectorXd& weights() const { return lambda_; }
    int modes() const { return static_cast<int>(lambda_.size()); }

  private:
    explicit SqueezerSpectrum(Eigen::VectorXd lambda) : lambda_(std::move(lambda)) {}
    Eigen::VectorXd lambda_;
};

// Time-integrated g2 of a multimode twin beam at optical gain b:
//   g2 = 1 + sum_k sinh^4(lambda_k b) / [sum_k sinh^2(lambda_k b)]^2.
// Value lies in (1, 2]; exactly 2 iff a single mode carries all weight.
// Throws ZeroGain at b = 0 (the expression is 0/0 there; callers must take
// the low-gain limit explicitly via g2_low_gain).
double g2_multimode_twin_beam(const SqueezerSpectrum& spec, double gain);

// Effective mode count K = 1 / sum_k lambda_k^4; K >= 1, equal to 1 iff a
// single mode.
double schmidt_number(const SqueezerSpectrum& spec);

// Low-gain limit g2 = 1 + 1/K. Throws InvalidK for K < 1.
double g2_low_gain(double schmidt_k);

enum class CanonicalKind { coherent, thermal, smsv, tmsv_cross, tmsv_auto };

// Zero-delay g2 of the canonical single- and two-mode families:
//   coherent -> 1, thermal -> 2, smsv -> 3 + 1/nbar,
//   tmsv cross-correlation -> 2 + 1/nbar, tmsv marginal -> 2.
double canonical_g2(CanonicalKind kind, double nbar = 0.0);

}  // namespace hhg::photostat
