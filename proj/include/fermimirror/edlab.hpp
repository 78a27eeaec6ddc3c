#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <vector>

namespace fermimirror::ed {

/// Truncated momentum-grid description of the kicked Fermi sea coupled to a
/// single cavity mode. Momenta live on k_j = (2 pi / L) q_j where the q_j are
/// integers for odd fermion numbers and half-integers for even ones, so the
/// sea of the n_fermions smallest |k| always fills symmetrically. The kick
/// 2K = kick * (2 pi / L) stays on the grid by construction.
struct EDConfig {
  int modes = 0;        // total momentum modes in the window
  int n_fermions = 0;
  int photon_cutoff = 0;  // Fock states 0..photon_cutoff
  int kick = 1;           // m, with 2K = m * 2 pi / L
  double u0 = 0.0;        // [rad/s]
  double delta = 0.0;     // [rad/s]
  double eta = 0.0;       // [rad/s]; nonzero breaks photon-number blocks
  double mass = 0.0;      // [kg]
  double length = 0.0;    // [m]
  long long dim_cap = 100000;
  bool require_headroom = true;  // >= kick empty modes beyond each sea edge
};

struct EDSystem {
  EDConfig cfg;
  std::vector<std::uint32_t> fermion_states;  // bitmasks, ascending
  std::vector<double> mode_momentum;          // k of each bit position [rad/m]
  std::vector<double> mode_energy;            // eps(k)/hbar [rad/s]
  int sea_lo = 0, sea_hi = 0;  // sea occupies bit positions [sea_lo, sea_hi)
  std::uint32_t fermi_sea = 0;
  long long sea_rank = 0;
  Eigen::SparseMatrix<double> hamiltonian;  // photon-major blocks, rad/s units
  // Derived parameters of the truncated system.
  double wavenumber = 0.0;      // K [rad/m]
  double fermi_momentum = 0.0;  // k_F = largest occupied |k|
  double fermi_velocity = 0.0;
  double beta = 0.0;            // sqrt(2 pi / (2K L)) = 1/sqrt(kick)
  double omega_m = 0.0;         // 2 K v_F
  double coupling_g = 0.0;      // u0 / (4 beta)
};

/// Enumerates the occupation basis, assembles the sparse Hamiltonian
/// (kinetic diagonal, photon diagonal, photon-number-conditioned kick term
/// with fermionic sign bookkeeping, optional drive in the rotated photon
/// gauge where i eta (c+ - c) becomes the real -eta (c+ + c)). Dimensions
/// above cfg.dim_cap are rejected with the computed size.
EDSystem build_system(const EDConfig& cfg);

long long basis_dimension(const EDConfig& cfg);

/// <FS| [b_p, b_p+] |FS> via literal sparse application of the
/// right-moving density-fluctuation operators; exactly 1 with headroom.
double commutator_check(const EDSystem& sys);

/// <FS| [b_p, b_{-p}+] |FS>; exactly 0 (independent movers).
double cross_commutator_check(const EDSystem& sys);

/// <FS| [b_p, b_p] |FS>; exactly 0.
double self_commutator_check(const EDSystem& sys);

struct CouplingCheck {
  double norm = 0.0;      // || (U0/4) sum_k (f+_{k+2K} f_k + h.c.) |FS> ||
  double expected = 0.0;  // sqrt(2) g
};

CouplingCheck coupling_element_check(const EDSystem& sys);

struct SpreadReport {
  std::vector<double> deviations;  // E/omega_M - 1 per active channel
  double mean_dev = 0.0, min_dev = 0.0, max_dev = 0.0;
  double bound = 0.0;  // K / k_F
};

/// Exact particle-hole energies of the active kick channels, relative to the
/// linearized value omega_M. |E/omega_M - 1| <= K/k_F with equality at the
/// sea edge.
SpreadReport ph_energy_spread(const EDSystem& sys);

/// E(k) = 2 hbar K (k + K) / M in rad/s, the exact excitation energy for a
/// +2K kick annihilating momentum k.
double ph_energy(const EDSystem& sys, double k);

/// Lowest eigenvalues of one photon-number sector (requires eta = 0).
/// Dense diagonalization below `dense_limit`, Lanczos with full
/// reorthogonalization above; non-convergence raises NumericError with the
/// residual.
std::vector<double> lowest_excitations(const EDSystem& sys, int photon_sector,
                                       int count, int dense_limit = 2000);

/// Apply sum_{k in branch} f+_k f_{k+p} (p in grid units, signed) to a
/// fermion-space vector. branch: +1 sums creation momenta k > 0, -1 sums
/// k < 0, 0 sums all k.
Eigen::VectorXd apply_density_op(const EDSystem& sys, int branch, int p_units,
                                 const Eigen::VectorXd& v);

}  // namespace fermimirror::ed
