#include "fermimirror/edlab.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "fermimirror/constants.hpp"
#include "fermimirror/errors.hpp"

namespace fermimirror::ed {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Sign of f+_a f_b |mask> with b occupied, a empty. The basis state is the
// ordered product f+_{i1} f+_{i2} ... |0> with i1 < i2 < ...
int hop_sign(std::uint32_t mask, int a, int b) {
  const std::uint32_t below_b = mask & ((1u << b) - 1u);
  int parity = std::popcount(below_b);
  const std::uint32_t removed = mask ^ (1u << b);
  const std::uint32_t below_a = removed & ((1u << a) - 1u);
  parity += std::popcount(below_a);
  return (parity & 1) ? -1 : 1;
}

struct RankMap {
  std::unordered_map<std::uint32_t, long long> idx;
  long long rank(std::uint32_t mask) const {
    auto it = idx.find(mask);
    return it == idx.end() ? -1 : it->second;
  }
};

RankMap make_rank_map(const std::vector<std::uint32_t>& states) {
  RankMap m;
  m.idx.reserve(states.size() * 2);
  for (std::size_t i = 0; i < states.size(); ++i)
    m.idx.emplace(states[i], static_cast<long long>(i));
  return m;
}

}  // namespace

long long basis_dimension(const EDConfig& cfg) {
  return binom(cfg.modes, cfg.n_fermions) *
         static_cast<long long>(cfg.photon_cutoff + 1);
}

EDSystem build_system(const EDConfig& cfg) {
  require(cfg.modes >= 1 && cfg.modes <= 30, "modes must be in [1, 30]");
  require(cfg.n_fermions >= 1 && cfg.n_fermions <= cfg.modes,
          "n_fermions must be in [1, modes]");
  require(cfg.photon_cutoff >= 0, "photon_cutoff must be >= 0");
  require(cfg.kick >= 1, "kick must be >= 1");
  require(cfg.mass > 0.0, "mass must be positive");
  require(cfg.length > 0.0, "length must be positive");

  const long long dim = basis_dimension(cfg);
  if (dim > cfg.dim_cap)
    throw std::invalid_argument("basis dimension " + std::to_string(dim) +
                                " exceeds cap " + std::to_string(cfg.dim_cap));

  const int w = cfg.modes;
  const int nf = cfg.n_fermions;
  const int empties = w - nf;
  const int lo_empties = empties / 2;
  const int hi_empties = empties - lo_empties;
  if (cfg.require_headroom)
    require(lo_empties >= cfg.kick && hi_empties >= cfg.kick,
            "insufficient headroom: need >= kick empty modes on each side of "
            "the Fermi sea");

  EDSystem sys;
  sys.cfg = cfg;

  // Momentum of bit i in units of 2 pi / L, stored doubled so it stays
  // integral: sea slot t has q = -(nf-1)/2 + t, integers for odd nf and
  // half-integers for even nf (antiperiodic grid), so the sea always fills
  // symmetrically.
  const double k_unit = kTwoPi / cfg.length;
  const int two_q_lo = -(nf - 1) - 2 * lo_empties;
  sys.mode_momentum.resize(w);
  sys.mode_energy.resize(w);
  for (int i = 0; i < w; ++i) {
    const double q = 0.5 * (two_q_lo + 2 * i);
    const double k = k_unit * q;
    sys.mode_momentum[i] = k;
    sys.mode_energy[i] = kHbar * k * k / (2.0 * cfg.mass);  // eps/hbar
  }
  sys.sea_lo = lo_empties;
  sys.sea_hi = lo_empties + nf;
  sys.fermi_sea = ((1u << nf) - 1u) << lo_empties;

  // Fermion basis: all nf-subsets in ascending bitmask order (Gosper).
  const long long fdim = binom(w, nf);
  sys.fermion_states.reserve(static_cast<std::size_t>(fdim));
  std::uint32_t v = (1u << nf) - 1u;
  const std::uint32_t limit = 1u << w;
  while (v < limit) {
    sys.fermion_states.push_back(v);
    const std::uint32_t t = v | (v - 1u);
    if (t == 0xFFFFFFFFu) break;
    v = (t + 1u) |
        (((~t & (t + 1u)) - 1u) >> (std::countr_zero(v) + 1));
  }
  const RankMap ranks = make_rank_map(sys.fermion_states);
  sys.sea_rank = ranks.rank(sys.fermi_sea);

  sys.wavenumber = kPi * cfg.kick / cfg.length;  // 2K = kick * 2pi/L
  sys.fermi_momentum = k_unit * 0.5 * (nf - 1);
  sys.fermi_velocity = kHbar * sys.fermi_momentum / cfg.mass;
  sys.beta = std::sqrt(1.0 / static_cast<double>(cfg.kick));
  sys.omega_m = 2.0 * sys.wavenumber * sys.fermi_velocity;
  sys.coupling_g = cfg.u0 / (4.0 * sys.beta);

  // H = sum eps(k) n_k + Delta n_c + (U0/4) n_c V - eta (c+ + c), with
  // V = sum_k (f+_{k+2K} f_k + h.c.); the drive is written in the rotated
  // photon gauge where it becomes real symmetric.
  const int nph = cfg.photon_cutoff;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(dim) * (w + 2));

  auto index = [fdim](int nc, long long frank) {
    return nc * fdim + frank;
  };

  for (long long r = 0; r < fdim; ++r) {
    const std::uint32_t mask = sys.fermion_states[static_cast<std::size_t>(r)];
    double kin = 0.0;
    for (int i = 0; i < w; ++i)
      if (mask & (1u << i)) kin += sys.mode_energy[i];

    // Kick pairs: b -> a = b + kick (store the up-hop; add both symmetric
    // entries so Hermiticity holds exactly at build time).
    std::vector<std::pair<long long, double>> kicks;
    for (int b = 0; b + cfg.kick < w; ++b) {
      const int a = b + cfg.kick;
      if ((mask & (1u << b)) && !(mask & (1u << a))) {
        const std::uint32_t to = mask ^ (1u << b) ^ (1u << a);
        const long long tr = ranks.rank(to);
        kicks.emplace_back(tr, static_cast<double>(hop_sign(mask, a, b)));
      }
    }

    for (int nc = 0; nc <= nph; ++nc) {
      const long long row = index(nc, r);
      trip.emplace_back(row, row, kin + cfg.delta * nc);
      const double amp = cfg.u0 / 4.0 * static_cast<double>(nc);
      if (amp != 0.0) {
        for (const auto& [tr, sgn] : kicks) {
          trip.emplace_back(index(nc, tr), row, amp * sgn);
          trip.emplace_back(row, index(nc, tr), amp * sgn);
        }
      }
      if (cfg.eta != 0.0 && nc < nph) {
        const double el = -cfg.eta * std::sqrt(static_cast<double>(nc + 1));
        trip.emplace_back(index(nc + 1, r), row, el);
        trip.emplace_back(row, index(nc + 1, r), el);
      }
    }
  }

  sys.hamiltonian.resize(dim, dim);
  sys.hamiltonian.setFromTriplets(trip.begin(), trip.end());
  return sys;
}

Eigen::VectorXd apply_density_op(const EDSystem& sys, int branch, int p_units,
                                 const Eigen::VectorXd& v) {
  const int w = sys.cfg.modes;
  const RankMap ranks = make_rank_map(sys.fermion_states);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size());

  for (long long r = 0; r < v.size(); ++r) {
    const double amp = v[r];
    if (amp == 0.0) continue;
    const std::uint32_t mask = sys.fermion_states[static_cast<std::size_t>(r)];
    for (int a = 0; a < w; ++a) {
      if (branch > 0 && !(sys.mode_momentum[a] > 0.0)) continue;
      if (branch < 0 && !(sys.mode_momentum[a] < 0.0)) continue;
      const int b = a + p_units;  // f+_a f_b with k_b = k_a + p
      if (b < 0 || b >= w || a == b) continue;
      if (!(mask & (1u << b)) || (mask & (1u << a))) continue;
      const std::uint32_t to = mask ^ (1u << b) ^ (1u << a);
      const long long tr = ranks.rank(to);
      out[tr] += amp * hop_sign(mask, a, b);
    }
  }
  return out;
}

namespace {

Eigen::VectorXd sea_vector(const EDSystem& sys) {
  Eigen::VectorXd v =
      Eigen::VectorXd::Zero(static_cast<long long>(sys.fermion_states.size()));
  v[sys.sea_rank] = 1.0;
  return v;
}

void require_headroom(const EDSystem& sys) {
  const int w = sys.cfg.modes;
  const int lo = sys.sea_lo;
  const int hi = w - (sys.sea_lo + sys.cfg.n_fermions);
  if (lo < sys.cfg.kick || hi < sys.cfg.kick)
    throw std::invalid_argument(
        "insufficient headroom: truncation would corrupt the bosonization "
        "identity");
}

}  // namespace

double commutator_check(const EDSystem& sys) {
  require_headroom(sys);
  const int m = sys.cfg.kick;
  const Eigen::VectorXd fs = sea_vector(sys);
  // b_p ~ rho^+_p (down-shift by p on the right branch), b_p+ ~ rho^+_{-p}.
  const Eigen::VectorXd bp_dag_fs = apply_density_op(sys, +1, -m, fs);
  const Eigen::VectorXd bp_fs = apply_density_op(sys, +1, +m, fs);
  const double term1 = fs.dot(apply_density_op(sys, +1, +m, bp_dag_fs));
  const double term2 = fs.dot(apply_density_op(sys, +1, -m, bp_fs));
  const double beta2 = sys.beta * sys.beta;
  return beta2 * (term1 - term2);
}

double cross_commutator_check(const EDSystem& sys) {
  require_headroom(sys);
  const int m = sys.cfg.kick;
  const Eigen::VectorXd fs = sea_vector(sys);
  // [b_p, b_{-p}+] with b_{-p}+ ~ rho^-_p (down-shift by p on the left).
  const Eigen::VectorXd bmp_dag_fs = apply_density_op(sys, -1, +m, fs);
  const Eigen::VectorXd bp_fs = apply_density_op(sys, +1, +m, fs);
  const double term1 = fs.dot(apply_density_op(sys, +1, +m, bmp_dag_fs));
  const double term2 = fs.dot(apply_density_op(sys, -1, +m, bp_fs));
  const double beta2 = sys.beta * sys.beta;
  return beta2 * (term1 - term2);
}

double self_commutator_check(const EDSystem& sys) {
  require_headroom(sys);
  const int m = sys.cfg.kick;
  const Eigen::VectorXd fs = sea_vector(sys);
  const Eigen::VectorXd bp_fs = apply_density_op(sys, +1, +m, fs);
  const double term = fs.dot(apply_density_op(sys, +1, +m, bp_fs));
  return sys.beta * sys.beta * (term - term);
}

CouplingCheck coupling_element_check(const EDSystem& sys) {
  require_headroom(sys);
  const int m = sys.cfg.kick;
  const Eigen::VectorXd fs = sea_vector(sys);
  const Eigen::VectorXd up = apply_density_op(sys, 0, -m, fs);
  const Eigen::VectorXd down = apply_density_op(sys, 0, +m, fs);
  CouplingCheck c;
  c.norm = sys.cfg.u0 / 4.0 * (up + down).norm();
  c.expected = std::sqrt(2.0) * sys.coupling_g;
  return c;
}

double ph_energy(const EDSystem& sys, double k) {
  const double bk = sys.wavenumber;
  return 2.0 * kHbar * bk * (k + bk) / sys.cfg.mass;
}

SpreadReport ph_energy_spread(const EDSystem& sys) {
  require_headroom(sys);
  SpreadReport rep;
  rep.bound = sys.wavenumber / sys.fermi_momentum;

  // Active channels: the `kick` topmost occupied modes on each edge; a +2K
  // kick annihilates momentum k on the right, the mirror process acts on -k.
  for (int t = 0; t < sys.cfg.kick; ++t) {
    const int src = sys.sea_hi - 1 - t;  // right-edge source bit
    const double k = sys.mode_momentum[src];
    const double e_right = ph_energy(sys, k);
    const double e_left = e_right;  // mirror channel, same |k|
    rep.deviations.push_back(e_right / sys.omega_m - 1.0);
    rep.deviations.push_back(e_left / sys.omega_m - 1.0);
  }
  rep.min_dev = *std::min_element(rep.deviations.begin(), rep.deviations.end());
  rep.max_dev = *std::max_element(rep.deviations.begin(), rep.deviations.end());
  rep.mean_dev =
      std::accumulate(rep.deviations.begin(), rep.deviations.end(), 0.0) /
      static_cast<double>(rep.deviations.size());
  return rep;
}

namespace {

// Lanczos with full reorthogonalization for the lowest eigenvalues of a
// symmetric sparse block.
std::vector<double> lanczos_lowest(const Eigen::SparseMatrix<double>& h,
                                   int count, double scale) {
  const long long n = h.rows();
  const int maxit = static_cast<int>(
      std::min<long long>(n, std::max(2 * count + 30, 60)));

  std::vector<Eigen::VectorXd> basis;
  std::vector<double> alpha, beta;

  Eigen::VectorXd q = Eigen::VectorXd::Zero(n);
  // Deterministic pseudo-random start.
  for (long long i = 0; i < n; ++i)
    q[i] = std::sin(0.7548776662 * static_cast<double>(i + 1)) + 0.1;
  q.normalize();

  for (int it = 0; it < maxit; ++it) {
    basis.push_back(q);
    Eigen::VectorXd r = h * q;
    const double a = q.dot(r);
    alpha.push_back(a);
    r -= a * q;
    if (!beta.empty()) r -= beta.back() * basis[basis.size() - 2];
    for (const auto& b : basis) r -= b.dot(r) * b;  // full reorthogonalization
    const double bnorm = r.norm();
    if (bnorm < 1e-13 * std::max(1.0, scale)) break;
    beta.push_back(bnorm);
    q = r / bnorm;
  }

  const int k = static_cast<int>(alpha.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    t(i, i) = alpha[static_cast<std::size_t>(i)];
    if (i + 1 < k) {
      t(i, i + 1) = beta[static_cast<std::size_t>(i)];
      t(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  if (es.info() != Eigen::Success)
    throw NumericError("lowest_excitations: tridiagonal solve failed");

  // Residual gate on the Ritz pairs we return.
  std::vector<double> out;
  for (int i = 0; i < count && i < k; ++i) {
    const double theta = es.eigenvalues()(i);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < k; ++j) y += es.eigenvectors()(j, i) * basis[j];
    const double resid = (h * y - theta * y).norm();
    if (!(resid <= 1e-7 * std::max(1.0, scale)))
      throw NumericError("lowest_excitations: Lanczos residual " +
                         std::to_string(resid) + " did not converge");
    out.push_back(theta);
  }
  return out;
}

}  // namespace

std::vector<double> lowest_excitations(const EDSystem& sys, int photon_sector,
                                       int count, int dense_limit) {
  if (sys.cfg.eta != 0.0)
    throw std::invalid_argument(
        "lowest_excitations: photon sectors require eta = 0");
  if (photon_sector < 0 || photon_sector > sys.cfg.photon_cutoff)
    throw std::invalid_argument("lowest_excitations: bad photon sector");

  const long long fdim =
      static_cast<long long>(sys.fermion_states.size());
  const long long off = photon_sector * fdim;
  const Eigen::SparseMatrix<double> block =
      sys.hamiltonian.block(off, off, fdim, fdim);

  double scale = 0.0;
  for (int i = 0; i < sys.cfg.modes; ++i)
    scale += std::abs(sys.mode_energy[i]);
  scale += std::abs(sys.cfg.delta) * (photon_sector + 1) +
           std::abs(sys.cfg.u0);

  if (fdim <= dense_limit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        Eigen::MatrixXd(block));
    if (es.info() != Eigen::Success)
      throw NumericError("lowest_excitations: dense solve failed");
    std::vector<double> out;
    for (int i = 0; i < count && i < fdim; ++i)
      out.push_back(es.eigenvalues()(i));
    return out;
  }
  return lanczos_lowest(block, count, scale);
}

}  // namespace fermimirror::ed
