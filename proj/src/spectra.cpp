#include "fermimirror/spectra.hpp"

#include <cmath>

#include "fermimirror/errors.hpp"
#include "fermimirror/stability.hpp"

namespace fermimirror {

using cplx = std::complex<double>;

NoiseConvention printed_vacuum_convention() {
  NoiseConvention c;
  c.name = "printed-vacuum";
  c.nmat << cplx(1.0, 0.0), cplx(0.0, 1.0), cplx(0.0, -1.0), cplx(1.0, 0.0);
  return c;
}

NoiseConvention paper_stated_convention() {
  NoiseConvention c;
  c.name = "paper-stated";
  c.nmat << cplx(0.5, 0.0), cplx(0.0, -0.5), cplx(0.0, 0.5), cplx(0.5, 0.0);
  return c;
}

NoiseConvention symmetric_classical_convention() {
  NoiseConvention c;
  c.name = "symmetric-classical";
  c.nmat = Eigen::Matrix2cd::Identity();
  return c;
}

NoiseConvention noise_convention_by_name(const std::string& name) {
  if (name == "printed-vacuum") return printed_vacuum_convention();
  if (name == "paper-stated") return paper_stated_convention();
  if (name == "symmetric-classical") return symmetric_classical_convention();
  if (name == "none") {  // noiseless; deterministic linear dynamics
    NoiseConvention c;
    c.name = "none";
    c.nmat = Eigen::Matrix2cd::Zero();
    return c;
  }
  throw ConfigError("unknown noise convention: " + name);
}

std::complex<double> response_denominator(const EffectiveModel& m,
                                          const SteadyStateBranch& s,
                                          double omega) {
  const double wm = m.omega_m;
  const double dt = s.delta_tilde;
  const double kap = m.kappa;
  const double two_gc = 2.0 * m.coupling_g * s.field_amplitude;
  const cplx opt = (kap - cplx(0.0, 1.0) * omega) *
                       (kap - cplx(0.0, 1.0) * omega) +
                   dt * dt;
  return (omega * omega - wm * wm) * opt + 2.0 * wm * dt * two_gc * two_gc;
}

namespace {

void require_not_unstable(const EffectiveModel& m, const SteadyStateBranch& s) {
  if (classify(m, s).cls == StabilityClass::unstable)
    throw NumericError("spectrum undefined for unstable state");
}

}  // namespace

std::vector<SpectrumPoint> transfer_spectrum(const EffectiveModel& m,
                                             const SteadyStateBranch& s,
                                             std::span<const double> omegas,
                                             const NoiseConvention& conv) {
  require_not_unstable(m, s);

  const Eigen::Matrix4cd j =
      drift_matrix(m, s).j.cast<cplx>();
  Eigen::Matrix4cd xi = Eigen::Matrix4cd::Zero();
  xi.block<2, 2>(2, 2) = 2.0 * m.kappa * conv.nmat;

  const double scale = std::max({m.omega_m, m.kappa, std::abs(s.delta_tilde)});

  std::vector<SpectrumPoint> out;
  out.reserve(omegas.size());
  for (double w : omegas) {
    Eigen::Matrix4cd a =
        -cplx(0.0, 1.0) * w * Eigen::Matrix4cd::Identity() - j;
    Eigen::PartialPivLU<Eigen::Matrix4cd> lu(a);
    const double absdet = std::abs(lu.determinant());
    if (!(absdet > 1e-60 * scale * scale * scale * scale))
      throw NumericError("transfer_spectrum: singular response at omega = " +
                         std::to_string(w));
    const Eigen::Matrix4cd g = lu.inverse();
    const Eigen::Matrix4cd spec = g * xi * g.adjoint();

    SpectrumPoint p;
    p.omega = w;
    p.s_xm = spec(0, 0).real();
    p.s_xc = spec(2, 2).real();
    p.s_pc = spec(3, 3).real();
    p.denom = response_denominator(m, s, w);
    out.push_back(p);
  }
  return out;
}

std::vector<SpectrumPoint> printed_spectrum(const EffectiveModel& m,
                                            const SteadyStateBranch& s,
                                            std::span<const double> omegas) {
  require_not_unstable(m, s);

  const double kap = m.kappa;
  const double wm = m.omega_m;
  const double dt = s.delta_tilde;
  const double gc = m.coupling_g * s.field_amplitude;

  std::vector<SpectrumPoint> out;
  out.reserve(omegas.size());
  for (double w : omegas) {
    if (!std::isfinite(w))
      throw std::invalid_argument("printed_spectrum: non-finite omega");
    const cplx d = response_denominator(m, s, w);
    const double d2 = std::norm(d);
    const double num_xm = 2.0 * kap * (4.0 * gc * wm) * (4.0 * gc * wm) *
                          (kap * kap + (dt + w) * (dt + w));
    const double s_xm = num_xm / d2;
    const double shot = 2.0 * kap * (kap * kap + (w + dt) * (w + dt));
    const double four_g2c2 = (2.0 * gc) * (2.0 * gc);

    SpectrumPoint p;
    p.omega = w;
    p.s_xm = s_xm;
    p.s_xc = (four_g2c2 * dt * dt * s_xm + shot) / d2;
    p.s_pc = (four_g2c2 * (kap * kap + w * w) * s_xm + shot) / d2;
    p.denom = d;
    out.push_back(p);
  }
  return out;
}

}  // namespace fermimirror
