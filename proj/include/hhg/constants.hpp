#pragma once

// Physical constants (CODATA 2018). Internal convention: energies in eV,
// times in fs, lengths in nm where not stated otherwise; SI only at the
// strong-field boundary layer.

namespace hhg::constants {

inline constexpr double hbar_ev_fs = 0.6582119569;        // eV fs
inline constexpr double hbar_ev_s = 6.582119569e-16;      // eV s
inline constexpr double hbar_j_s = 1.054571817e-34;       // J s
inline constexpr double c_m_per_s = 2.99792458e8;         // m/s
inline constexpr double c_nm_per_fs = 299.792458;         // nm/fs
inline constexpr double eps0_f_per_m = 8.8541878128e-12;  // F/m
inline constexpr double e_coulomb = 1.602176634e-19;      // C
inline constexpr double m_e_kg = 9.1093837015e-31;        // kg
inline constexpr double m_e_c2_ev = 510998.95;            // eV
inline constexpr double c_atomic_units = 137.035999084;   // speed of light, a.u.
inline constexpr double hc_ev_nm = 1239.8419843320026;    // photon energy(eV) * wavelength(nm)
inline constexpr double pi = 3.14159265358979323846;

}  // namespace hhg::constants
