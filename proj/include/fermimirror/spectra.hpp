#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "fermimirror/model.hpp"
#include "fermimirror/steady.hpp"

namespace fermimirror {

/// Frequency-space correlation matrix of the optical input quadratures
/// (dX_in, dP_in): <xi_i[w] xi_j[w']> = nmat_ij delta(w + w'). The Langevin
/// noise rows carry sqrt(2 kappa), so the spectral input matrix is
/// 2 kappa * nmat embedded in the optical block.
///
/// Presets:
///   printed-vacuum      [[1, i], [-i, 1]]   (<c_in c_in+> = 4 kappa delta;
///                       the unique zero-mean Gaussian convention matching
///                       the closed-form mirror spectrum exactly)
///   paper-stated        [[1/2, -i/2], [i/2, 1/2]]  (<c_in+ c_in> = 2 kappa
///                       delta taken literally)
///   symmetric-classical [[1, 0], [0, 1]]
struct NoiseConvention {
  std::string name;
  Eigen::Matrix2cd nmat;
};

NoiseConvention printed_vacuum_convention();
NoiseConvention paper_stated_convention();
NoiseConvention symmetric_classical_convention();
NoiseConvention noise_convention_by_name(const std::string& name);

struct SpectrumPoint {
  double omega = 0.0;  // rad/s, two-sided
  double s_xm = 0.0;   // mirror position quadrature density [1/(rad/s)]
  double s_xc = 0.0;   // optical X quadrature
  double s_pc = 0.0;   // optical P quadrature
  std::complex<double> denom;  // d[w] of the response denominator
};

/// Response denominator
/// d[w] = (w^2 - wM^2)[(kappa - i w)^2 + dtilde^2] + 2 wM dtilde (2 g c_s)^2.
std::complex<double> response_denominator(const EffectiveModel& m,
                                          const SteadyStateBranch& s,
                                          double omega);

/// Authoritative spectra from the transfer matrix G(w) = (-i w I - J)^{-1}:
/// S(w) = G(w) Xi G(w)^H with Xi the 2 kappa nmat optical embedding.
/// Rejects branches that do not classify stable; raises NumericError with
/// the offending omega if (-i w I - J) is singular (marginal points).
std::vector<SpectrumPoint> transfer_spectrum(const EffectiveModel& m,
                                             const SteadyStateBranch& s,
                                             std::span<const double> omegas,
                                             const NoiseConvention& conv);

/// The closed-form spectra evaluated verbatim as published:
///   S_XM = 2 kappa (4 g c_s wM)^2 [kappa^2 + (dtilde + w)^2] / |d|^2
///   S_Xc = [(2 g c_s)^2 dtilde^2 S_XM + 2 kappa (kappa^2 + (w + dtilde)^2)] / |d|^2
///   S_Pc = [(2 g c_s)^2 (kappa^2 + w^2) S_XM + 2 kappa (kappa^2 + (w + dtilde)^2)] / |d|^2
/// S_XM agrees with the transfer matrix under the printed-vacuum convention.
/// The optical formulas keep their |d|^2 denominators as published even
/// though that form fails the g -> 0 empty-cavity limit; the transfer-matrix
/// result is the authoritative one.
std::vector<SpectrumPoint> printed_spectrum(const EffectiveModel& m,
                                            const SteadyStateBranch& s,
                                            std::span<const double> omegas);

}  // namespace fermimirror
