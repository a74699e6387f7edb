#include "hhg/hamiltonian.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

#include "hhg/constants.hpp"

namespace hhg {

namespace {

constexpr double sqrt3_over_6 = 0.28867513459481287;  // sqrt(3)/6
constexpr std::complex<double> imag_unit{0.0, 1.0};

std::string error_name(const Error& e) {
    const std::string what = e.what();
    const auto pos = what.find(':');
    return pos == std::string::npos ? what : what.substr(0, pos);
}

}  // namespace

HamiltonianParams HamiltonianParams::from_volume(double n_e, double e_g_ev, double k_c,
                                                 double omega_l, double volume) {
    if (k_c <= 0 || omega_l <= 0 || volume <= 0)
        throw NonPositiveInput("k_c, omega_l and volume must be positive");
    HamiltonianParams p;
    p.n_e = n_e;
    p.e_g_ev = e_g_ev;
    p.k_c = k_c;
    p.omega3 = 3.0 * omega_l;
    p.omega5 = 5.0 * omega_l;
    const double pi = constants::pi;
    p.c3 = pi / k_c * std::sqrt(pi / (p.omega3 * volume));
    p.c5 = pi / k_c * std::sqrt(pi / (p.omega5 * volume));
    return p;
}

void HamiltonianParams::validate() const {
    if (omega3 <= 0 || omega5 <= 0) throw NonPositiveInput("harmonic frequencies must be positive");
    if (c3 <= 0 || c5 <= 0) throw NonPositiveInput("couplings must be positive");
    if (std::abs(omega5 / omega3 - 5.0 / 3.0) > 1e-12)
        throw InvalidState("omega5/omega3 must equal 5/3");
    if (std::abs(c3 / c5 - std::sqrt(omega5 / omega3)) > 1e-9)
        throw InvalidState("couplings must satisfy c3/c5 = sqrt(omega5/omega3)");
}

double PulseSpec::atilde(double t_fs) const {
    const double dt = t_fs - center_fs;
    double env = 0.0;
    if (envelope == PulseEnvelope::gaussian) {
        env = std::exp(-4.0 * std::log(2.0) * dt * dt / (duration_fwhm_fs * duration_fwhm_fs));
    } else {
        env = (std::abs(dt) <= 0.5 * duration_fwhm_fs) ? 1.0 : 0.0;
    }
    return peak_atilde * env * std::cos(omega_carrier * dt + phase);
}

void PulseSpec::validate() const {
    if (duration_fwhm_fs <= 0) throw NonPositiveInput("pulse duration must be positive");
    if (omega_carrier <= 0) throw NonPositiveInput("carrier frequency must be positive");
}

// --- InteractionGenerator ----------------------------------------------------

InteractionGenerator::InteractionGenerator(HamiltonianParams params, PulseSpec pulse, int cutoff3,
                                           int cutoff5, GeneratorTerms terms)
    : params_(std::move(params)), pulse_(std::move(pulse)), terms_(terms),
      rows_(cutoff3 + 1), cols_(cutoff5 + 1) {
    if (cutoff3 < 0 || cutoff5 < 0) throw InvalidState("cutoffs must be non-negative");
    pulse_.validate();
    if (params_.n_e != 0.0) params_.validate();
}

void InteractionGenerator::apply(double t, const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
    using C = std::complex<double>;
    const auto& p = params_;
    const double pref = p.n_e * p.e_g_ev;
    y.setZero(x.size());
    if (pref == 0.0) return;

    const double theta = constants::pi * pulse_.atilde(t) / p.k_c;
    const double ct = std::cos(theta), st = std::sin(theta);

    Eigen::Map<const Eigen::MatrixXcd> in(x.data(), rows_, cols_);
    Eigen::Map<Eigen::MatrixXcd> out(y.data(), rows_, cols_);

    const int nmax = std::max(rows_, cols_) + 1;
    Eigen::ArrayXd sq(nmax + 1);
    for (int n = 0; n <= nmax; ++n) sq(n) = std::sqrt(double(n));

    // diagonal: scalar shift plus the 2 n_j terms from the squared quadratures
    double s0 = 0.0;
    if (terms_.scalar_shift) {
        s0 = 1.0 - ct;
        if (terms_.quad_single) s0 += 0.5 * ct * (p.c3 * p.c3 + p.c5 * p.c5);
    }
    const double cn3 = terms_.quad_single ? ct * p.c3 * p.c3 : 0.0;
    const double cn5 = terms_.quad_single ? ct * p.c5 * p.c5 : 0.0;
    if (s0 != 0.0 || cn3 != 0.0 || cn5 != 0.0) {
        for (int n5 = 0; n5 < cols_; ++n5)
            for (int n3 = 0; n3 < rows_; ++n3)
                out(n3, n5) += pref * (s0 + cn3 * n3 + cn5 * n5) * in(n3, n5);
    }

    // linear displacement couplings: sin(th) c_j (a_j e^{-i w_j t} + h.c.)
    if (terms_.linear && st != 0.0) {
        const C ca3 = pref * st * p.c3 * std::exp(-imag_unit * p.omega3 * t);
        const C ca5 = pref * st * p.c5 * std::exp(-imag_unit * p.omega5 * t);
        for (int n5 = 0; n5 < cols_; ++n5) {
            for (int n3 = 0; n3 + 1 < rows_; ++n3) out(n3, n5) += ca3 * sq(n3 + 1) * in(n3 + 1, n5);
            for (int n3 = 1; n3 < rows_; ++n3) out(n3, n5) += std::conj(ca3) * sq(n3) * in(n3 - 1, n5);
        }
        for (int n5 = 0; n5 + 1 < cols_; ++n5)
            for (int n3 = 0; n3 < rows_; ++n3) out(n3, n5) += ca5 * sq(n5 + 1) * in(n3, n5 + 1);
        for (int n5 = 1; n5 < cols_; ++n5)
            for (int n3 = 0; n3 < rows_; ++n3) out(n3, n5) += std::conj(ca5) * sq(n5) * in(n3, n5 - 1);
    }

    // single-mode squeezing blocks: (1/2) cos(th) c_j^2 (a_j^2 e^{-2i w_j t} + h.c.)
    if (terms_.quad_single && ct != 0.0) {
        const C caa3 = 0.5 * pref * ct * p.c3 * p.c3 * std::exp(-2.0 * imag_unit * p.omega3 * t);
        const C caa5 = 0.5 * pref * ct * p.c5 * p.c5 * std::exp(-2.0 * imag_unit * p.omega5 * t);
        for (int n5 = 0; n5 < cols_; ++n5) {
            for (int n3 = 0; n3 + 2 < rows_; ++n3)
                out(n3, n5) += caa3 * sq(n3 + 1) * sq(n3 + 2) * in(n3 + 2, n5);
            for (int n3 = 2; n3 < rows_; ++n3)
                out(n3, n5) += std::conj(caa3) * sq(n3) * sq(n3 - 1) * in(n3 - 2, n5);
        }
        for (int n5 = 0; n5 + 2 < cols_; ++n5)
            for (int n3 = 0; n3 < rows_; ++n3)
                out(n3, n5) += caa5 * sq(n5 + 1) * sq(n5 + 2) * in(n3, n5 + 2);
        for (int n5 = 2; n5 < cols_; ++n5)
            for (int n3 = 0; n3 < rows_; ++n3)
                out(n3, n5) += std::conj(caa5) * sq(n5) * sq(n5 - 1) * in(n3, n5 - 2);
    }

    // cross block: cos(th) c3 c5 [a3 a5 e^{-i(w3+w5)t} + a3 a5+ e^{-i(w3-w5)t} + h.c.]
    if (terms_.quad_cross && ct != 0.0) {
        const double base = pref * ct * p.c3 * p.c5;
        const C cpair = base * std::exp(-imag_unit * (p.omega3 + p.omega5) * t);
        for (int n5 = 0; n5 + 1 < cols_; ++n5)
            for (int n3 = 0; n3 + 1 < rows_; ++n3)
                out(n3, n5) += cpair * sq(n3 + 1) * sq(n5 + 1) * in(n3 + 1, n5 + 1);
        for (int n5 = 1; n5 < cols_; ++n5)
            for (int n3 = 1; n3 < rows_; ++n3)
                out(n3, n5) += std::conj(cpair) * sq(n3) * sq(n5) * in(n3 - 1, n5 - 1);

        if (!terms_.cross_pair_only) {
            const C cmix = base * std::exp(-imag_unit * (p.omega3 - p.omega5) * t);
            for (int n5 = 1; n5 < cols_; ++n5)
                for (int n3 = 0; n3 + 1 < rows_; ++n3)
                    out(n3, n5) += cmix * sq(n3 + 1) * sq(n5) * in(n3 + 1, n5 - 1);
            for (int n5 = 0; n5 + 1 < cols_; ++n5)
                for (int n3 = 1; n3 < rows_; ++n3)
                    out(n3, n5) += std::conj(cmix) * sq(n3) * sq(n5 + 1) * in(n3 - 1, n5 + 1);
        }
    }
}

double InteractionGenerator::norm_bound(double t) const {
    const auto& p = params_;
    const double pref = std::abs(p.n_e * p.e_g_ev);
    if (pref == 0.0) return 0.0;
    const double theta = constants::pi * pulse_.atilde(t) / p.k_c;
    const double act = std::abs(std::cos(theta)), ast = std::abs(std::sin(theta));
    const double w3 = std::sqrt(double(rows_));  // max ladder weight, mode 3
    const double w5 = std::sqrt(double(cols_));

    double b = 0.0;
    if (terms_.scalar_shift) b += 2.0 + 0.5 * (p.c3 * p.c3 + p.c5 * p.c5);
    if (terms_.linear) b += 2.0 * ast * (p.c3 * w3 + p.c5 * w5);
    if (terms_.quad_single)
        b += act * (p.c3 * p.c3 * (w3 * w3 + rows_ - 1) + p.c5 * p.c5 * (w5 * w5 + cols_ - 1));
    if (terms_.quad_cross) {
        double cross = 2.0 * act * p.c3 * p.c5 * w3 * w5;
        if (!terms_.cross_pair_only) cross *= 2.0;
        b += cross;
    }
    return pref * b;
}

// --- MatrixGenerator ---------------------------------------------------------

MatrixGenerator::MatrixGenerator(std::function<Eigen::MatrixXcd(double)> fn, int rows3, int cols5)
    : fn_(std::move(fn)), rows_(rows3), cols_(cols5) {}

void MatrixGenerator::apply(double t, const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
    y.noalias() = fn_(t) * x;
}

double MatrixGenerator::norm_bound(double t) const {
    return fn_(t).cwiseAbs().rowwise().sum().maxCoeff();
}

Eigen::MatrixXcd MatrixGenerator::matrix(double t) const { return fn_(t); }

Eigen::MatrixXcd Generator::matrix(double t) const {
    const int n = dim();
    Eigen::MatrixXcd m(n, n);
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n), col(n);
    for (int j = 0; j < n; ++j) {
        e(j) = 1.0;
        apply(t, e, col);
        m.col(j) = col;
        e(j) = 0.0;
    }
    return m;
}

Eigen::MatrixXcd build_generator(const HamiltonianParams& params, const PulseSpec& pulse, double t,
                                 int cutoff3, int cutoff5, const GeneratorTerms& terms) {
    InteractionGenerator gen(params, pulse, cutoff3, cutoff5, terms);
    Eigen::MatrixXcd h = gen.matrix(t);
    const double scale = std::max(1.0, h.norm());
    if ((h - h.adjoint()).norm() > 1e-12 * scale)
        throw NonHermitian("assembled generator deviates from Hermiticity");
    return h;
}

// --- propagation -------------------------------------------------------------

namespace {

// y = exp(M) v by plain Taylor summation; intended for ||M|| well below 1.
template <class ApplyM>
void expmv_inplace(ApplyM&& apply_m, Eigen::VectorXcd& v, Eigen::VectorXcd& term,
                   Eigen::VectorXcd& tmp, double tol, int max_terms = 64) {
    term = v;
    for (int kk = 1; kk <= max_terms; ++kk) {
        apply_m(term, tmp);
        term.swap(tmp);
        term /= double(kk);
        v += term;
        if (term.norm() <= tol * v.norm()) return;
    }
    throw StepTooLarge("expmv series did not converge; reduce dt_max");
}

struct Workspace {
    Eigen::VectorXcd h1x, h2x, term, tmp;
    void resize(Eigen::Index n) {
        h1x.resize(n);
        h2x.resize(n);
        term.resize(n);
        tmp.resize(n);
    }
};

// One CF4 step: two exponentials of Gauss-node combinations of H.
void step_magnus_cf4(const Generator& gen, Eigen::VectorXcd& psi, double t, double h,
                     const StepControl& ctrl, Workspace& ws) {
    const double t1 = t + (0.5 - sqrt3_over_6) * h;
    const double t2 = t + (0.5 + sqrt3_over_6) * h;
    const double a1 = 0.25 + sqrt3_over_6;
    const double a2 = 0.25 - sqrt3_over_6;
    const std::complex<double> factor = -imag_unit * h / constants::hbar_ev_fs;

    auto combo = [&](double w1, double w2) {
        return [&, w1, w2](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
            gen.apply(t1, x, ws.h1x);
            gen.apply(t2, x, ws.h2x);
            y = factor * (w1 * ws.h1x + w2 * ws.h2x);
        };
    };
    expmv_inplace(combo(a1, a2), psi, ws.term, ws.tmp, ctrl.expmv_tol);
    expmv_inplace(combo(a2, a1), psi, ws.term, ws.tmp, ctrl.expmv_tol);
}

void step_expm_direct(const Generator& gen, Eigen::VectorXcd& psi, double t, double h,
                      const StepControl&) {
    const Eigen::MatrixXcd m =
        (-imag_unit * h / constants::hbar_ev_fs) * gen.matrix(t + 0.5 * h);
    psi = m.exp() * psi;
}

void do_step(const Generator& gen, Eigen::VectorXcd& psi, double t, double h,
             const StepControl& ctrl, Workspace& ws) {
    if (ctrl.method == Integrator::magnus_cf4)
        step_magnus_cf4(gen, psi, t, h, ctrl, ws);
    else
        step_expm_direct(gen, psi, t, h, ctrl);
}

double tail_mass_of(const Eigen::VectorXcd& psi, int rows, int cols) {
    Eigen::Map<const Eigen::MatrixXcd> g(psi.data(), rows, cols);
    double t3 = g.row(rows - 1).squaredNorm();
    if (rows > 1) t3 += g.row(rows - 2).squaredNorm();
    double t5 = g.col(cols - 1).squaredNorm();
    if (cols > 1) t5 += g.col(cols - 2).squaredNorm();
    return std::max(t3, t5);
}

}  // namespace

std::vector<double> uniform_grid(double t0, double t1, int n_nodes) {
    if (n_nodes < 2 || !(t1 > t0)) throw ConfigError("grid needs t1 > t0 and at least 2 nodes");
    std::vector<double> g(n_nodes);
    for (int i = 0; i < n_nodes; ++i) g[i] = t0 + (t1 - t0) * double(i) / double(n_nodes - 1);
    return g;
}

EvolutionResult evolve(const fock::TwoModeState& initial, const Generator& gen,
                       const std::vector<double>& t_grid, const StepControl& ctrl) {
    initial.require_normalized();
    const int rows = initial.cutoff3() + 1, cols = initial.cutoff5() + 1;
    if (gen.rows3() != rows || gen.cols5() != cols)
        throw InvalidState("generator cutoffs do not match the initial state");
    if (t_grid.size() < 2) throw ConfigError("t_grid needs at least two nodes");
    for (size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1])) throw ConfigError("t_grid must be strictly increasing");

    Eigen::VectorXcd psi =
        Eigen::Map<const Eigen::VectorXcd>(initial.grid().data(), initial.dim());
    Workspace ws;
    ws.resize(psi.size());

    EvolutionResult res{fock::TwoModeState(initial.cutoff3(), initial.cutoff5()), {}, 0, 0.0, 0.0};
    if (ctrl.record_trajectory) res.trajectory.emplace_back(t_grid.front(), initial);

    Eigen::VectorXcd saved, half;
    for (size_t node = 0; node + 1 < t_grid.size(); ++node) {
        const double ta = t_grid[node], tb = t_grid[node + 1];
        const double span = tb - ta;
        const int nsub = (ctrl.dt_max_fs > 0.0)
                             ? std::max(1, int(std::ceil(span / ctrl.dt_max_fs)))
                             : 1;
        const double h = span / nsub;
        for (int s = 0; s < nsub; ++s) {
            const double t = ta + s * h;
            const double bound = std::max(gen.norm_bound(t), gen.norm_bound(t + h));
            if (bound * h / constants::hbar_ev_fs >= ctrl.stability_limit)
                throw StepTooLarge("||H|| dt/hbar exceeds the stability limit; reduce dt_max");

            const bool estimate =
                ctrl.error_stride > 0 && (res.steps % ctrl.error_stride == 0);
            if (estimate) saved = psi;

            do_step(gen, psi, t, h, ctrl, ws);
            ++res.steps;

            if (estimate) {
                half = saved;
                do_step(gen, half, t, 0.5 * h, ctrl, ws);
                do_step(gen, half, t + 0.5 * h, 0.5 * h, ctrl, ws);
                res.max_local_error = std::max(res.max_local_error, (psi - half).norm());
            }

            const double tail = tail_mass_of(psi, rows, cols);
            if (tail > ctrl.truncation_tol)
                throw TruncationOverflow("evolved population reached the cutoff boundary");
        }
        if (ctrl.record_trajectory) {
            Eigen::MatrixXcd g = Eigen::Map<const Eigen::MatrixXcd>(psi.data(), rows, cols);
            res.trajectory.emplace_back(tb, fock::TwoModeState::from_amplitudes(std::move(g)));
        }
    }

    res.norm_drift = std::abs(psi.norm() - 1.0);
    Eigen::MatrixXcd g = Eigen::Map<const Eigen::MatrixXcd>(psi.data(), rows, cols);
    res.final_state = fock::TwoModeState::from_amplitudes(std::move(g));
    return res;
}

EvolutionResult evolve(const fock::TwoModeState& initial, const HamiltonianParams& params,
                       const PulseSpec& pulse, const std::vector<double>& t_grid,
                       const StepControl& ctrl, const GeneratorTerms& terms) {
    InteractionGenerator gen(params, pulse, initial.cutoff3(), initial.cutoff5(), terms);
    return evolve(initial, gen, t_grid, ctrl);
}

double r_parameter(double g2_33, double g2_55, double g2_35) {
    if (g2_33 <= 0 || g2_55 <= 0 || g2_35 <= 0)
        throw NonPositiveInput("r_parameter requires positive g2 values");
    return g2_35 * g2_35 / (g2_33 * g2_55);
}

std::vector<ScanPoint> scan_intensity(const ScanConfig& config,
                                      const std::vector<double>& intensities,
                                      const fock::TwoModeState* initial) {
    for (size_t i = 1; i < intensities.size(); ++i)
        if (!(intensities[i] > intensities[i - 1]))
            throw ConfigError("intensity grid must be strictly increasing");

    const fock::TwoModeState init =
        initial ? *initial : fock::vacuum(config.cutoff3, config.cutoff5);

    std::vector<ScanPoint> out;
    out.reserve(intensities.size());
    for (double intensity : intensities) {
        ScanPoint pt;
        pt.intensity = intensity;
        if (intensity <= 0.0) {
            pt.status = "ZeroIntensity";  // no drive, no interaction window
            out.push_back(pt);
            continue;
        }
        try {
            HamiltonianParams p = config.params;
            p.n_e *= std::pow(intensity / config.intensity_ref, config.n_e_exponent);
            PulseSpec pulse = config.pulse;
            pulse.peak_atilde *= std::sqrt(intensity / config.intensity_ref);

            InteractionGenerator gen(p, pulse, config.cutoff3, config.cutoff5, config.terms);
            const EvolutionResult res = evolve(init, gen, config.t_grid, config.step);

            const double m3 = fock::mean_photon(res.final_state, fock::Mode::h3);
            const double m5 = fock::mean_photon(res.final_state, fock::Mode::h5);
            if (m3 < config.vacuum_threshold || m5 < config.vacuum_threshold)
                throw ZeroIntensity("harmonic output is vacuum at this intensity");

            pt.g2_33 = fock::g2_single(res.final_state, fock::Mode::h3);
            pt.g2_55 = fock::g2_single(res.final_state, fock::Mode::h5);
            pt.g2_35 = fock::g2_cross(res.final_state);
            pt.r = r_parameter(pt.g2_33, pt.g2_55, pt.g2_35);
            pt.ok = true;
            pt.status = "ok";
        } catch (const Error& e) {
            pt.ok = false;
            pt.status = error_name(e);
        }
        out.push_back(pt);
    }
    return out;
}

}  // namespace hhg
