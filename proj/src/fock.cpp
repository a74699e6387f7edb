#include "hhg/fock.hpp"

#include <cmath>

namespace hhg::fock {

namespace {

Eigen::VectorXd marginal(const AmplitudeGrid& grid, Mode mode) {
    Eigen::MatrixXd p = grid.cwiseAbs2();
    if (mode == Mode::h3) return p.rowwise().sum();
    return p.colwise().sum().transpose();
}

double top_two_mass(const AmplitudeGrid& grid, Mode mode) {
    Eigen::VectorXd p = marginal(grid, mode);
    const auto n = p.size();
    if (n == 1) return p(0);
    return p(n - 1) + p(n - 2);
}

}  // namespace

TwoModeState::TwoModeState(int cutoff3, int cutoff5) {
    if (cutoff3 < 0 || cutoff5 < 0) throw InvalidState("cutoffs must be non-negative");
    grid_ = AmplitudeGrid::Zero(cutoff3 + 1, cutoff5 + 1);
    grid_(0, 0) = 1.0;
}

TwoModeState TwoModeState::from_amplitudes(AmplitudeGrid grid) {
    const double n = grid.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw InvalidState("cannot normalize a zero or non-finite vector");
    grid /= n;
    return TwoModeState(std::move(grid));
}

bool TwoModeState::is_normalized(double tol) const {
    return std::abs(grid_.squaredNorm() - 1.0) <= tol;
}

double TwoModeState::tail_mass() const {
    return std::max(top_two_mass(grid_, Mode::h3), top_two_mass(grid_, Mode::h5));
}

void TwoModeState::require_normalized(double tol) const {
    if (!is_normalized(tol)) throw InvalidState("state norm deviates from 1 beyond tolerance");
}

TwoModeState vacuum(int cutoff3, int cutoff5) { return TwoModeState(cutoff3, cutoff5); }

TwoModeState two_mode_squeezed_vacuum(double r, int cutoff3, int cutoff5, double tail_tol) {
    if (r < 0) throw InvalidState("squeezing parameter must be non-negative");
    const int nmax = std::min(cutoff3, cutoff5);
    const double t = std::tanh(r);
    if (std::pow(t, 2.0 * nmax) >= tail_tol) throw TruncationOverflow("two_mode_squeezed_vacuum: tanh(r)^(2*cutoff) exceeds tail tolerance");
    AmplitudeGrid grid = AmplitudeGrid::Zero(cutoff3 + 1, cutoff5 + 1);
    double c = 1.0 / std::cosh(r);
    for (int n = 0; n <= nmax; ++n) {
        grid(n, n) = c;
        c *= t;
    }
    return TwoModeState::from_amplitudes(std::move(grid));
}

TwoModeState single_mode_squeezed_vacuum(double r, Mode mode, int cutoff3, int cutoff5, double tail_tol) {
    if (r < 0) throw InvalidState("squeezing parameter must be non-negative");
    const int cutoff = (mode == Mode::h3) ? cutoff3 : cutoff5;
    const double t = std::tanh(r);
    // c_{n+2} = -tanh(r) sqrt((n+1)/(n+2)) c_n, even levels only.
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(cutoff + 1);
    amps(0) = 1.0 / std::sqrt(std::cosh(r));
    for (int n = 0; n + 2 <= cutoff; n += 2)
        amps(n + 2) = -t * std::sqrt((n + 1.0) / (n + 2.0)) * amps(n);

    double tail = std::norm(amps(cutoff));
    if (cutoff >= 1) tail += std::norm(amps(cutoff - 1));
    if (tail >= tail_tol) throw TruncationOverflow("single_mode_squeezed_vacuum: tail mass exceeds tolerance");

    AmplitudeGrid grid = AmplitudeGrid::Zero(cutoff3 + 1, cutoff5 + 1);
    if (mode == Mode::h3)
        grid.col(0) = amps;
    else
        grid.row(0) = amps.transpose();
    return TwoModeState::from_amplitudes(std::move(grid));
}

TwoModeState coherent_state(Amplitude alpha, Mode mode, int cutoff3, int cutoff5, double tail_tol) {
    const int cutoff = (mode == Mode::h3) ? cutoff3 : cutoff5;
    Eigen::VectorXcd amps(cutoff + 1);
    amps(0) = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n <= cutoff; ++n) amps(n) = amps(n - 1) * alpha / std::sqrt(double(n));

    double tail = std::norm(amps(cutoff));
    if (cutoff >= 1) tail += std::norm(amps(cutoff - 1));
    if (tail >= tail_tol) throw TruncationOverflow("coherent_state: tail mass exceeds tolerance");

    AmplitudeGrid grid = AmplitudeGrid::Zero(cutoff3 + 1, cutoff5 + 1);
    if (mode == Mode::h3)
        grid.col(0) = amps;
    else
        grid.row(0) = amps.transpose();
    return TwoModeState::from_amplitudes(std::move(grid));
}

AmplitudeGrid apply_ladder(const AmplitudeGrid& grid, Mode mode, Ladder kind, double tail_tol) {
    const auto rows = grid.rows();
    const auto cols = grid.cols();
    const auto levels = (mode == Mode::h3) ? rows : cols;
    AmplitudeGrid out = AmplitudeGrid::Zero(rows, cols);

    Eigen::ArrayXd sq(levels);
    for (Eigen::Index n = 0; n < levels; ++n) sq(n) = std::sqrt(double(n));

    if (kind == Ladder::create) {
        // a+|n> = sqrt(n+1)|n+1>: occupation of the top level would leave the grid.
        double overflow = (mode == Mode::h3) ? grid.row(rows - 1).squaredNorm() : grid.col(cols - 1).squaredNorm();
        if (overflow >= tail_tol)
            throw TruncationOverflow("apply_ladder(create): top Fock level carries non-negligible amplitude");
        if (mode == Mode::h3)
            out.bottomRows(rows - 1) = grid.topRows(rows - 1).array().colwise() * sq.tail(rows - 1);
        else
            out.rightCols(cols - 1) = grid.leftCols(cols - 1).array().rowwise() * sq.tail(cols - 1).transpose();
    } else {
        // a|n> = sqrt(n)|n-1>.
        if (mode == Mode::h3)
            out.topRows(rows - 1) = grid.bottomRows(rows - 1).array().colwise() * sq.tail(rows - 1);
        else
            out.leftCols(cols - 1) = grid.rightCols(cols - 1).array().rowwise() * sq.tail(cols - 1).transpose();
    }
    return out;
}

AmplitudeGrid apply_ladder(const TwoModeState& state, Mode mode, Ladder kind, double tail_tol) {
    state.require_normalized();
    return apply_ladder(state.grid(), mode, kind, tail_tol);
}

double mean_photon(const TwoModeState& state, Mode mode) {
    state.require_normalized();
    const Eigen::VectorXd p = marginal(state.grid(), mode);
    double m = 0.0;
    for (Eigen::Index n = 1; n < p.size(); ++n) m += double(n) * p(n);
    return m;
}

double g2_single(const TwoModeState& state, Mode mode) {
    state.require_normalized();
    const Eigen::VectorXd p = marginal(state.grid(), mode);
    double mean = 0.0, pairs = 0.0;
    for (Eigen::Index n = 1; n < p.size(); ++n) {
        mean += double(n) * p(n);
        pairs += double(n) * double(n - 1) * p(n);
    }
    if (mean <= 0.0) throw ZeroIntensity("g2_single undefined for vacuum");
    return pairs / (mean * mean);
}

double g2_cross(const TwoModeState& state) {
    state.require_normalized();
    const Eigen::MatrixXd p = state.grid().cwiseAbs2();
    double m3 = 0.0, m5 = 0.0, joint = 0.0;
    for (Eigen::Index n3 = 0; n3 < p.rows(); ++n3) {
        for (Eigen::Index n5 = 0; n5 < p.cols(); ++n5) {
            const double w = p(n3, n5);
            m3 += double(n3) * w;
            m5 += double(n5) * w;
            joint += double(n3) * double(n5) * w;
        }
    }
    if (m3 <= 0.0 || m5 <= 0.0) throw ZeroIntensity("g2_cross undefined when either mode is vacuum");
    return joint / (m3 * m5);
}

Eigen::VectorXd photon_number_distribution(const TwoModeState& state, Mode mode) {
    state.require_normalized();
    return marginal(state.grid(), mode);
}

}  // namespace hhg::fock
