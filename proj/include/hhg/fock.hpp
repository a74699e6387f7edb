#pragma once

#include <Eigen/Dense>
#include <complex>

#include "hhg/errors.hpp"

// Exact linear algebra on a truncated two-mode bosonic Fock space.
//
// Amplitudes live on a dense (cutoff3+1) x (cutoff5+1) grid; entry (n3, n5)
// is the coefficient of the number state |n3, n5>. Column-major storage, so
// the flattened basis index is n3 + n5 * (cutoff3 + 1).
//
// All values are immutable after construction and all operations are pure
// functions; sharing across threads is safe.

namespace hhg::fock {

enum class Mode { h3, h5 };
enum class Ladder { annihilate, create };

using Amplitude = std::complex<double>;
using AmplitudeGrid = Eigen::MatrixXcd;

// Tail mass above which constructors and create-operations refuse to proceed.
inline constexpr double default_tail_tolerance = 1e-10;

// Norm deviation tolerated when an operation requires a normalized state.
// Unitary propagation guarantees 1e-8; constructors deliver ~1e-15.
inline constexpr double norm_tolerance = 1e-6;

class TwoModeState {
  public:
    // Vacuum |0,0> at the given cutoffs.
    TwoModeState(int cutoff3, int cutoff5);

    // Adopts the grid and rescales it to unit norm. Throws InvalidState on a
    // zero vector.
    static TwoModeState from_amplitudes(AmplitudeGrid grid);

    int cutoff3() const { return static_cast<int>(grid_.rows()) - 1; }
    int cutoff5() const { return static_cast<int>(grid_.cols()) - 1; }
    int dim() const { return static_cast<int>(grid_.size()); }

    const AmplitudeGrid& grid() const { return grid_; }
    Amplitude amplitude(int n3, int n5) const { return grid_(n3, n5); }

    double norm() const { return grid_.norm(); }
    bool is_normalized(double tol = norm_tolerance) const;

    // Probability held by the top two Fock levels of either mode (max over
    // the two marginals). The truncation-error proxy used throughout.
    double tail_mass() const;

    // Throws InvalidState unless the norm is 1 within tol.
    void require_normalized(double tol = norm_tolerance) const;

  private:
    explicit TwoModeState(AmplitudeGrid grid) : grid_(std::move(grid)) {}
    AmplitudeGrid grid_;
};

// --- canonical reference states --------------------------------------------

TwoModeState vacuum(int cutoff3, int cutoff5);

// Pair-correlated state with amplitudes tanh(r)^n / cosh(r) on |n,n>.
// Requires tanh(r)^(2*min_cutoff) < tail_tol.
TwoModeState two_mode_squeezed_vacuum(double r, int cutoff3, int cutoff5,
                                      double tail_tol = default_tail_tolerance);

// Squeezed vacuum in one mode (even Fock levels only), vacuum in the other.
TwoModeState single_mode_squeezed_vacuum(double r, Mode mode, int cutoff3, int cutoff5,
                                         double tail_tol = default_tail_tolerance);

// Coherent state |alpha> in one mode, vacuum in the other.
TwoModeState coherent_state(Amplitude alpha, Mode mode, int cutoff3, int cutoff5,
                            double tail_tol = default_tail_tolerance);

// --- ladder operators -------------------------------------------------------

// Image of the state under a resp. a-dagger on the chosen mode. The result is
// an operator image, not a state: it is deliberately not renormalized.
AmplitudeGrid apply_ladder(const TwoModeState& state, Mode mode, Ladder kind,
                           double tail_tol = default_tail_tolerance);

// Same action on a raw amplitude grid, for chaining operator products.
AmplitudeGrid apply_ladder(const AmplitudeGrid& grid, Mode mode, Ladder kind,
                           double tail_tol = default_tail_tolerance);

// --- photon statistics ------------------------------------------------------

// <n> of the chosen mode. Requires a normalized state.
double mean_photon(const TwoModeState& state, Mode mode);

// Single-mode normalized second-order correlation <a+a+aa> / <a+a>^2.
// Throws ZeroIntensity on vacuum input.
double g2_single(const TwoModeState& state, Mode mode);

// Cross correlation <n3 n5> / (<n3><n5>) of the two modes.
double g2_cross(const TwoModeState& state);

// Marginal photon-number distribution of one mode; sums to 1 within 1e-10.
Eigen::VectorXd photon_number_distribution(const TwoModeState& state, Mode mode);

}  // namespace hhg::fock
