#include "cvmem/oracle.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "cvmem/special.hpp"

namespace cvmem {

// Second-moment propagator
// ------------------------
// Linear quadrature dynamics of the intracavity field (a), the optical
// dipole of the ensemble (p), and the collective ground-state spin (j),
// each entering as an (x, y) pair normalized to unit vacuum variance:
//
//   x_a' = -kappa  x_a - G1 y_p                     (+ input noise)
//   y_a' = -kappa  y_a + G1 x_p                     (+ input noise)
//   x_p' = -gamma  x_p - G1 y_a - Omega y_j         (+ dipole noise)
//   y_p' = -gamma  y_p + G1 x_a + Omega x_j         (+ dipole noise)
//   x_j' = -gamma0 x_j - Omega y_p                  (+ spin noise)
//   y_j' = -gamma0 y_j + Omega x_p                  (+ spin noise)
//
// G1 = g sqrt(N / tau) is the collectively enhanced coupling and
// Omega(t) = rabi_peak * sqrt(xi(t)) the classical drive amplitude. In this
// normalization the cooperativity is C = G1^2 / (2 kappa gamma) and, once
// field and dipole follow the drive adiabatically, the effective swap rate
// is gammat(t) = Omega(t)^2 / (gamma (1 + 2C)).
//
// The baths are white: the cavity input carries variance e^{-2r} on x and
// e^{+2r} on y, dipole and spin baths are vacuum, giving the diagonal
// diffusion D = diag(2 kappa e^{-2r}, 2 kappa e^{2r}, 2 gamma, 2 gamma,
// 2 gamma0, 2 gamma0). All coupling terms above are antisymmetric between
// partners, so M + M^T = -diag(2 kappa, 2 kappa, 2 gamma, 2 gamma,
// 2 gamma0, 2 gamma0) and an undriven vacuum (or stationary squeezed) state
// is preserved exactly — the consistency check behind the r = 0 tests.
//
// The covariance then obeys dS/dt = M S + S M^T + D.

namespace {

struct FullModel {
  double kappa, gamma, gamma0, g1, rabi_peak;
  const PulseShape* shape;
  double dxx, dyy;  // field diffusion entries

  void drift(double t, double m[6][6]) const {
    const double omega = rabi_peak * std::sqrt(shape->value(t));
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) m[i][j] = 0.0;
    m[kFieldX][kFieldX] = -kappa;
    m[kFieldX][kDipoleY] = -g1;
    m[kFieldY][kFieldY] = -kappa;
    m[kFieldY][kDipoleX] = g1;
    m[kDipoleX][kDipoleX] = -gamma;
    m[kDipoleX][kFieldY] = -g1;
    m[kDipoleX][kSpinY] = -omega;
    m[kDipoleY][kDipoleY] = -gamma;
    m[kDipoleY][kFieldX] = g1;
    m[kDipoleY][kSpinX] = omega;
    m[kSpinX][kSpinX] = -gamma0;
    m[kSpinX][kDipoleY] = -omega;
    m[kSpinY][kSpinY] = -gamma0;
    m[kSpinY][kDipoleX] = omega;
  }

  void rhs(double t, const std::vector<double>& s,
           std::vector<double>& ds) const {
    double m[6][6];
    drift(t, m);
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) {
        double acc = 0.0;
        for (int k = 0; k < 6; ++k) {
          acc += m[i][k] * s[static_cast<std::size_t>(6 * k + j)] +
                 s[static_cast<std::size_t>(6 * i + k)] * m[j][k];
        }
        ds[static_cast<std::size_t>(6 * i + j)] = acc;
      }
    }
    ds[6 * kFieldX + kFieldX] += dxx;
    ds[6 * kFieldY + kFieldY] += dyy;
    ds[6 * kDipoleX + kDipoleX] += 2.0 * gamma;
    ds[6 * kDipoleY + kDipoleY] += 2.0 * gamma;
    ds[6 * kSpinX + kSpinX] += 2.0 * gamma0;
    ds[6 * kSpinY + kSpinY] += 2.0 * gamma0;
  }
};

FullModel build_full_model(const MemoryParams& p, const PulseShape& shape) {
  p.validate();
  FullModel fm;
  fm.kappa = p.kappa;
  fm.gamma = p.gamma;
  fm.gamma0 = p.gamma0;
  fm.g1 = p.coupling * std::sqrt(p.atoms / p.tau);
  fm.rabi_peak = p.rabi_peak;
  fm.shape = &shape;
  fm.dxx = 2.0 * p.kappa * std::exp(-2.0 * p.squeezing);
  fm.dyy = 2.0 * p.kappa * std::exp(2.0 * p.squeezing);
  return fm;
}

// Solves the dense linear system K x = b in place (partial pivoting).
void solve_linear(std::vector<double>& K, std::vector<double>& b,
                  std::size_t n) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t row = col + 1; row < n; ++row) {
      if (std::abs(K[row * n + col]) > std::abs(K[piv * n + col])) piv = row;
    }
    if (std::abs(K[piv * n + col]) < 1e-300) {
      throw std::runtime_error("solve_linear: singular system");
    }
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(K[piv * n + j], K[col * n + j]);
      std::swap(b[piv], b[col]);
    }
    const double d = K[col * n + col];
    for (std::size_t row = col + 1; row < n; ++row) {
      const double f = K[row * n + col] / d;
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) K[row * n + j] -= f * K[col * n + j];
      b[row] -= f * b[col];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= K[i * n + j] * b[j];
    b[i] = acc / K[i * n + i];
  }
}

}  // namespace

double CovarianceState::symmetry_defect() const {
  double worst = 0.0;
  for (int i = 0; i < 6; ++i) {
    for (int j = i + 1; j < 6; ++j) {
      worst = std::max(worst, std::abs(at(i, j) - at(j, i)));
    }
  }
  return worst;
}

double CovarianceState::min_eigenvalue() const {
  // Cyclic Jacobi rotations on the symmetrized matrix.
  double a[6][6];
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) a[i][j] = 0.5 * (at(i, j) + at(j, i));
  }
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < 6; ++i)
      for (int j = i + 1; j < 6; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-28) break;
    for (int p = 0; p < 6; ++p) {
      for (int q = p + 1; q < 6; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = 0.5 * (a[q][q] - a[p][p]) / a[p][q];
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < 6; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < 6; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  double lo = a[0][0];
  for (int i = 1; i < 6; ++i) lo = std::min(lo, a[i][i]);
  return lo;
}

std::array<double, 36> stationary_covariance(const MemoryParams& p) {
  const PulseShape off = PulseShape::sampled({-1.0, 1.0}, {0.0, 0.0});
  const FullModel fm = build_full_model(p, off);
  double m[6][6];
  fm.drift(0.0, m);

  // Drive off: the field-dipole block decouples from the spin. Solve the
  // 4x4 stationary moment equation M S + S M^T = -D by vectorizing to a
  // 16x16 linear system; the spin block is vacuum.
  std::vector<double> K(256, 0.0);
  std::vector<double> b(16, 0.0);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const std::size_t row = static_cast<std::size_t>(4 * i + j);
      for (int k = 0; k < 4; ++k) {
        K[row * 16 + static_cast<std::size_t>(4 * k + j)] += m[i][k];
        K[row * 16 + static_cast<std::size_t>(4 * i + k)] += m[j][k];
      }
    }
  }
  b[0] = -fm.dxx;
  b[5] = -fm.dyy;
  b[10] = -2.0 * fm.gamma;
  b[15] = -2.0 * fm.gamma;
  solve_linear(K, b, 16);

  std::array<double, 36> sigma{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      sigma[static_cast<std::size_t>(6 * i + j)] =
          b[static_cast<std::size_t>(4 * i + j)];
    }
  }
  sigma[6 * kSpinX + kSpinX] = 1.0;
  sigma[6 * kSpinY + kSpinY] = 1.0;
  return sigma;
}

std::vector<CovarianceState> propagate_full(const MemoryParams& p,
                                            const PulseShape& shape,
                                            const std::vector<double>& grid,
                                            const OdeOptions& opts) {
  const FullModel fm = build_full_model(p, shape);
  const std::array<double, 36> init = stationary_covariance(p);

  std::vector<CovarianceState> traj;
  traj.reserve(grid.size());
  auto observer = [&traj](double t, const std::vector<double>& y) {
    CovarianceState st;
    st.time = t;
    std::copy(y.begin(), y.end(), st.sigma.begin());
    traj.push_back(st);
  };
  auto rhs = [&fm](double t, const std::vector<double>& y,
                   std::vector<double>& dy) { fm.rhs(t, y, dy); };
  try {
    integrate_ode(rhs, std::vector<double>(init.begin(), init.end()), grid,
                  observer, opts);
  } catch (const tolerance_error& e) {
    const DerivedParams d = derive(p);
    throw tolerance_error(
        std::string(e.what()) + " — rate separation kappa/gt0 = " +
            std::to_string(p.kappa / d.gt0) + ", gamma/gt0 = " +
            std::to_string(p.gamma / d.gt0) + " may exceed the step budget",
        e.achieved());
  }
  return traj;
}

std::vector<double> propagate_reduced(const DerivedParams& d,
                                      const PulseShape& shape, double r,
                                      const std::vector<double>& grid,
                                      double initial_variance,
                                      const OdeOptions& opts) {
  const double floor = d.eta * std::exp(-2.0 * r) + 1.0 - d.eta;
  const double gt0 = d.gt0;
  auto rhs = [&shape, gt0, floor](double t, const std::vector<double>& y,
                                  std::vector<double>& dy) {
    const double rate = gt0 * shape.value(t);
    dy[0] = -2.0 * rate * (y[0] - floor);
  };
  std::vector<double> out;
  out.reserve(grid.size());
  auto observer = [&out](double, const std::vector<double>& y) {
    out.push_back(y[0]);
  };
  integrate_ode(rhs, {initial_variance}, grid, observer, opts);
  return out;
}

double homodyne_variance_oracle(const DerivedParams& d, const PulseShape& shape,
                                const TemporalMode& lo, Phase phase, double r,
                                const OdeOptions& opts) {
  if (lo.grid.size() < 2) {
    throw std::invalid_argument("homodyne_variance_oracle: LO needs a grid");
  }
  const double eta = d.eta;
  const double gt0 = d.gt0;
  const double q = phase == Phase::write ? std::exp(-2.0 * r) : 1.0;
  const double vjj0 = phase == Phase::write ? 1.0 : std::exp(-2.0 * r);

  // Joint moments of the stored quadrature J and the accumulated current
  // S = int lo * x_out: y = (v_JJ, v_JS, v_SS, n) with n the LO power.
  auto rhs = [&](double t, const std::vector<double>& y,
                 std::vector<double>& dy) {
    const double rate = gt0 * shape.value(t);
    const double e = lo(t);
    const double b = std::sqrt(2.0 * rate * eta);
    dy[0] = -2.0 * rate * y[0] + 2.0 * rate * (eta * q + 1.0 - eta);
    dy[1] = -rate * y[1] - e * b * y[0] +
            e * b * (2.0 * (1.0 - eta) - (1.0 - 2.0 * eta) * q);
    dy[2] = -2.0 * e * b * y[1] +
            e * e * ((1.0 - 2.0 * eta) * (1.0 - 2.0 * eta) * q +
                     4.0 * eta * (1.0 - eta));
    dy[3] = e * e;
  };
  std::vector<double> last(4, 0.0);
  auto observer = [&last](double, const std::vector<double>& y) { last = y; };
  integrate_ode(rhs, {vjj0, 0.0, 0.0, 0.0},
                {lo.grid.front(), lo.grid.back()}, observer, opts);
  if (!(last[3] > 0.0)) {
    throw std::invalid_argument(
        "homodyne_variance_oracle: zero-norm local oscillator");
  }
  return last[2] / last[3];
}

void dump_trajectory(const std::vector<CovarianceState>& traj,
                     std::ostream& os) {
  os << "# covariance trajectory: time then upper-triangle entries\n";
  os << "time";
  for (int i = 0; i < 6; ++i) {
    for (int j = i; j < 6; ++j) os << ",cov_" << i << "_" << j;
  }
  os << "\n";
  char buf[32];
  for (const CovarianceState& st : traj) {
    std::snprintf(buf, sizeof(buf), "%.12g", st.time);
    os << buf;
    for (int i = 0; i < 6; ++i) {
      for (int j = i; j < 6; ++j) {
        std::snprintf(buf, sizeof(buf), "%.12g", st.at(i, j));
        os << ',' << buf;
      }
    }
    os << "\n";
  }
}

}  // namespace cvmem
