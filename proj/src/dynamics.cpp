#include "fermimirror/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <condition_variable>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "fermimirror/constants.hpp"
#include "fermimirror/errors.hpp"
#include "fermimirror/rng.hpp"
#include "fermimirror/stability.hpp"

namespace fermimirror {

namespace {

constexpr double kDivergenceLimit = 1e12;
constexpr double kStepBound = 0.1;

using State = std::array<double, 4>;

void check_sim_config(const SimConfig& cfg, double rate_scale) {
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (cfg.dt * rate_scale > kStepBound)
    throw std::invalid_argument(
        "dt too large: dt * max(omega_M, kappa, |detuning|) must be <= 0.1");
  if (cfg.steps <= 0) throw std::invalid_argument("steps must be positive");
  if (cfg.ensemble < 1) throw std::invalid_argument("ensemble must be >= 1");
  if (!(cfg.burn_in >= 0.0 && cfg.burn_in < 1.0))
    throw std::invalid_argument("burn_in must be in [0, 1)");
}

long long burned_steps(const SimConfig& cfg) {
  return static_cast<long long>(cfg.burn_in * static_cast<double>(cfg.steps));
}

}  // namespace

std::array<double, 4> meanfield_rhs(const EffectiveModel& m, double eta,
                                    double delta, const State& f) {
  const double xm = f[0], pm = f[1], cr = f[2], ci = f[3];
  const double phase = delta + std::sqrt(2.0) * m.coupling_g * xm;
  return {m.omega_m * pm,
          -m.omega_m * xm - 2.0 * std::sqrt(2.0) * m.coupling_g *
              (cr * cr + ci * ci),
          phase * ci - m.kappa * cr + eta,
          -phase * cr - m.kappa * ci};
}

Trajectory simulate_meanfield(const EffectiveModel& m, double eta,
                              double delta, const State& init,
                              const SimConfig& cfg) {
  check_sim_config(cfg, std::max({m.omega_m, m.kappa, std::abs(delta)}));

  const double dt = cfg.dt;
  const long long burn = burned_steps(cfg);

  Trajectory tr;
  tr.dt = dt;
  tr.t0 = static_cast<double>(burn + 1) * dt;  // states[i] is after step burn+i+1
  tr.seed = cfg.seed;
  tr.states.reserve(static_cast<std::size_t>(cfg.steps - burn));

  State f = init;
  auto rhs = [&](const State& y) { return meanfield_rhs(m, eta, delta, y); };
  auto axpy = [](const State& y, double a, const State& k) {
    return State{y[0] + a * k[0], y[1] + a * k[1], y[2] + a * k[2],
                 y[3] + a * k[3]};
  };

  for (long long step = 0; step < cfg.steps; ++step) {
    const State k1 = rhs(f);
    const State k2 = rhs(axpy(f, 0.5 * dt, k1));
    const State k3 = rhs(axpy(f, 0.5 * dt, k2));
    const State k4 = rhs(axpy(f, dt, k3));
    for (int i = 0; i < 4; ++i)
      f[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

    for (double v : f) {
      if (!std::isfinite(v) || std::abs(v) > kDivergenceLimit)
        throw NumericError("simulate_meanfield: divergence at step " +
                           std::to_string(step));
    }
    if (step >= burn) tr.states.push_back(f);
  }
  return tr;
}

Trajectory simulate_linear(const EffectiveModel& m, const SteadyStateBranch& s,
                           const SimConfig& cfg) {
  check_sim_config(cfg,
                   std::max({m.omega_m, m.kappa, std::abs(s.delta_tilde)}));
  if (classify(m, s).cls == StabilityClass::unstable)
    throw NumericError("simulate_linear: branch is unstable");

  const NoiseConvention conv = noise_convention_by_name(cfg.noise_convention);
  const Eigen::Matrix2d nre = conv.nmat.real();

  // Cholesky of 2 kappa Re(nmat); rank-deficient conventions degrade cleanly.
  const double d11 = 2.0 * m.kappa * nre(0, 0);
  const double d21 = 2.0 * m.kappa * nre(1, 0);
  const double d22 = 2.0 * m.kappa * nre(1, 1);
  double l11 = 0.0, l21 = 0.0, l22 = 0.0;
  if (d11 > 0.0) {
    l11 = std::sqrt(d11);
    l21 = d21 / l11;
    const double rem = d22 - l21 * l21;
    l22 = rem > 0.0 ? std::sqrt(rem) : 0.0;
  } else {
    l22 = d22 > 0.0 ? std::sqrt(d22) : 0.0;
  }

  const Eigen::Matrix4d j = drift_matrix(m, s).j;
  const double dt = cfg.dt;
  const double sq_dt = std::sqrt(dt);
  const long long burn = burned_steps(cfg);

  Trajectory tr;
  tr.dt = dt;
  tr.t0 = static_cast<double>(burn + 1) * dt;
  tr.seed = cfg.seed;
  tr.states.reserve(static_cast<std::size_t>(cfg.steps - burn));

  GaussianRng rng(cfg.seed);
  Eigen::Vector4d f(cfg.initial[0], cfg.initial[1], cfg.initial[2],
                    cfg.initial[3]);

  for (long long step = 0; step < cfg.steps; ++step) {
    const Eigen::Vector4d drift = j * f;
    const double g1 = rng.normal();
    const double g2 = rng.normal();
    f[0] += dt * drift[0];
    f[1] += dt * drift[1];
    f[2] += dt * drift[2] + sq_dt * l11 * g1;
    f[3] += dt * drift[3] + sq_dt * (l21 * g1 + l22 * g2);

    if (!f.allFinite())
      throw NumericError("simulate_linear: non-finite state at step " +
                         std::to_string(step));
    if (step >= burn)
      tr.states.push_back({f[0], f[1], f[2], f[3]});
  }
  return tr;
}

namespace {

// Iterative radix-2 FFT, decimation in time. Length must be a power of two.
void fft_pow2(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -kTwoPi / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

std::size_t pow2_floor(std::size_t n) {
  std::size_t p = 1;
  while (p * 2 <= n) p *= 2;
  return p;
}

}  // namespace

Psd periodogram(std::span<const double> samples, double dt, int segments) {
  if (segments < 1) throw std::invalid_argument("segments must be >= 1");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const std::size_t n = samples.size();
  const std::size_t seg_len =
      n >= static_cast<std::size_t>(segments) && n > 0
          ? pow2_floor(n / static_cast<std::size_t>(segments))
          : 0;
  if (seg_len < 8) throw std::invalid_argument("periodogram: trajectory too short");

  const std::size_t hop = seg_len / 2;  // 50% overlap
  const std::size_t count = (n - seg_len) / hop + 1;
  if (count < 4 && !(segments == 1 && count >= 1))
    throw std::invalid_argument(
        "periodogram: fewer than 4 segments after burn-in");

  std::vector<double> window(seg_len);
  double wsq = 0.0;
  for (std::size_t k = 0; k < seg_len; ++k) {
    window[k] =
        0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(k) /
                              static_cast<double>(seg_len)));
    wsq += window[k] * window[k];
  }

  std::vector<double> acc(seg_len, 0.0);
  std::vector<std::complex<double>> buf(seg_len);
  for (std::size_t s = 0; s < count; ++s) {
    const double* x = samples.data() + s * hop;
    for (std::size_t k = 0; k < seg_len; ++k)
      buf[k] = std::complex<double>(window[k] * x[k], 0.0);
    fft_pow2(buf);
    for (std::size_t k = 0; k < seg_len; ++k) acc[k] += std::norm(buf[k]);
  }

  // Normalization: flat level sigma^2 for per-sample variance sigma^2/dt.
  const double norm = dt / (wsq * static_cast<double>(count));

  Psd p;
  p.segments_averaged = static_cast<int>(count);
  p.bin_width = kTwoPi / (static_cast<double>(seg_len) * dt);
  p.omega.resize(seg_len);
  p.density.resize(seg_len);
  // Reorder to ascending omega in (-pi/dt, pi/dt].
  const std::size_t half = seg_len / 2;
  for (std::size_t k = 0; k < seg_len; ++k) {
    const std::size_t src = (k + half) % seg_len;
    const double freq_index =
        static_cast<double>(k) - static_cast<double>(half);
    p.omega[k] = freq_index * p.bin_width;
    p.density[k] = acc[src] * norm;
  }
  return p;
}

Psd periodogram(const Trajectory& t, int channel, int segments) {
  if (channel < 0 || channel > 3)
    throw std::invalid_argument("periodogram: channel must be 0..3");
  std::vector<double> x(t.states.size());
  for (std::size_t i = 0; i < t.states.size(); ++i)
    x[i] = t.states[i][static_cast<std::size_t>(channel)];
  return periodogram(x, t.dt, segments);
}

Psd ensemble_linear_psd(const EffectiveModel& m, const SteadyStateBranch& s,
                        const SimConfig& cfg, int channel, int segments) {
  const int members = cfg.ensemble;
  if (members < 1) throw std::invalid_argument("ensemble must be >= 1");

  std::vector<double> sum;
  Psd proto;
  std::mutex mtx;
  std::condition_variable cv;
  int next_to_add = 0;

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned nthreads =
      std::min<unsigned>(hw, static_cast<unsigned>(members));

  std::exception_ptr failure;
  auto worker = [&](unsigned tid) {
    try {
      for (int i = static_cast<int>(tid); i < members;
           i += static_cast<int>(nthreads)) {
        SimConfig mc = cfg;
        mc.ensemble = 1;
        mc.seed = substream_seed(cfg.seed, static_cast<std::uint64_t>(i));
        const Trajectory tr = simulate_linear(m, s, mc);
        Psd p = periodogram(tr, channel, segments);

        // Accumulate in fixed member order so the reduction is exact and
        // independent of scheduling.
        std::unique_lock<std::mutex> lk(mtx);
        cv.wait(lk, [&] { return next_to_add == i || failure; });
        if (failure) return;
        if (sum.empty()) {
          sum.assign(p.density.size(), 0.0);
          proto = p;
        }
        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += p.density[k];
        ++next_to_add;
        cv.notify_all();
      }
    } catch (...) {
      std::lock_guard<std::mutex> lk(mtx);
      if (!failure) failure = std::current_exception();
      cv.notify_all();
    }
  };

  std::vector<std::thread> pool;
  for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  Psd out = proto;
  for (std::size_t k = 0; k < sum.size(); ++k)
    out.density[k] = sum[k] / static_cast<double>(members);
  return out;
}

}  // namespace fermimirror
