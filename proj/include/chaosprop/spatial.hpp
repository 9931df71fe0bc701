#pragma once

// One-dimensional spatial discretization on (0, L) with homogeneous
// Dirichlet boundary: centered second-order finite differences for the
// operators A and M_k, the sine noise basis, the discrete normal triple
// (V, H, V'), implicit time stepping for the semigroup, and power-iteration
// estimates of the operator-norm constants C_k.

#include <chaosprop/multiindex.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chaosprop {

using Coefficient = std::function<double(double)>;

struct Grid1D {
  double L = 1.0;
  int m = 3;  // interior nodes

  Grid1D() = default;
  Grid1D(double L_, int m_) : L(L_), m(m_) {
    if (!(L > 0.0)) throw std::invalid_argument("Grid1D: L must be > 0");
    if (m < 3) throw std::invalid_argument("Grid1D: need at least 3 interior nodes");
  }
  double h() const { return L / (m + 1); }
  double node(int i) const { return h() * (i + 1); }  // i = 0..m-1, strictly interior
};

struct DiscreteOperator {
  Eigen::MatrixXd mat;
  bool symmetric = false;
  int order = 0;  // differential order, metadata only

  int size() const { return static_cast<int>(mat.rows()); }
};

struct NoiseBasis {
  std::vector<Eigen::VectorXd> h;  // h[k-1] sampled on the grid
  std::vector<double> c;           // sup bounds c_k >= sup|h_k|
  int modes() const { return static_cast<int>(h.size()); }
};

// Discrete normal triple on interior nodes:
//   <u,v>_H = h u.v                         (L2)
//   ||v||_V^2 = v^T G v, G = h * (-L_h)      (H^1_0 seminorm, L_h the
//                                            Dirichlet Laplacian stencil)
//   ||w||_{V'}^2 = h^2 w^T G^{-1} w          (dual norm via the H pairing)
// The one-argument factory covers scalar/coupled systems where H = V = R^d
// with the Euclidean structure (1x1 closed-form examples).
class InnerProducts {
public:
  static InnerProducts euclidean(int dim) {
    InnerProducts ip;
    ip.hH_ = 1.0;
    ip.G_ = Eigen::MatrixXd::Identity(dim, dim);
    ip.init();
    return ip;
  }

  static InnerProducts dirichlet(const Grid1D& g) {
    InnerProducts ip;
    const double h = g.h();
    ip.hH_ = h;
    ip.G_ = Eigen::MatrixXd::Zero(g.m, g.m);
    for (int i = 0; i < g.m; ++i) {
      ip.G_(i, i) = 2.0 / h;
      if (i > 0) ip.G_(i, i - 1) = -1.0 / h;
      if (i + 1 < g.m) ip.G_(i, i + 1) = -1.0 / h;
    }
    ip.init();
    return ip;
  }

  double hH() const { return hH_; }
  const Eigen::MatrixXd& gramV() const { return G_; }

  double normH(const Eigen::VectorXd& v) const { return std::sqrt(hH_) * v.norm(); }
  double normV(const Eigen::VectorXd& v) const { return std::sqrt(v.dot(G_ * v)); }
  double normVdual(const Eigen::VectorXd& w) const {
    return hH_ * std::sqrt(w.dot(Gllt_.solve(w)));
  }
  Eigen::VectorXd solveG(const Eigen::VectorXd& w) const { return Gllt_.solve(w); }

private:
  void init() { Gllt_.compute(G_); }

  double hH_ = 1.0;
  Eigen::MatrixXd G_;
  Eigen::LLT<Eigen::MatrixXd> Gllt_;
};

enum class AForm { NonDivergence, Divergence };
enum class MForm { FirstOrder, Divergence, Multiplication };

// A = a(x) u'' + b(x) u' + c(x) u (nondivergence) or -(a(x) u')' + c(x) u
// (divergence, symmetric via flux differencing).  Dirichlet rows eliminated.
inline DiscreteOperator assemble_A(const Grid1D& g, const Coefficient& a, const Coefficient& b,
                                   const Coefficient& c, AForm form) {
  const double h = g.h();
  DiscreteOperator op;
  op.mat = Eigen::MatrixXd::Zero(g.m, g.m);
  op.order = 2;
  bool drift_free = true;
  for (int i = 0; i < g.m; ++i) {
    const double x = g.node(i);
    const double ai = a(x);
    if (!(ai > 0.0))
      throw std::domain_error("assemble_A: ellipticity violated, a(" + std::to_string(x) +
                              ") = " + std::to_string(ai));
    const double bi = b ? b(x) : 0.0;
    const double ci = c ? c(x) : 0.0;
    if (bi != 0.0) drift_free = false;
    if (form == AForm::NonDivergence) {
      op.mat(i, i) = -2.0 * ai / (h * h) + ci;
      if (i > 0) op.mat(i, i - 1) = ai / (h * h) - bi / (2.0 * h);
      if (i + 1 < g.m) op.mat(i, i + 1) = ai / (h * h) + bi / (2.0 * h);
    } else {
      if (bi != 0.0) throw std::invalid_argument("assemble_A: divergence form has no drift term");
      const double am = a(x - 0.5 * h);  // a at half nodes; a(0..L) assumed defined
      const double ap = a(x + 0.5 * h);
      if (!(am > 0.0 && ap > 0.0)) throw std::domain_error("assemble_A: ellipticity violated at a half node");
      op.mat(i, i) = (am + ap) / (h * h) + ci;
      if (i > 0) op.mat(i, i - 1) = -am / (h * h);
      if (i + 1 < g.m) op.mat(i, i + 1) = -ap / (h * h);
    }
  }
  op.symmetric = (form == AForm::Divergence) || drift_free;
  return op;
}

// M_k u = (sigma(x) u' + nu(x) u) h_k(x)      (first_order)
//       = h_k(x) (sigma(x) u')'               (divergence)
//       = nu(x) h_k(x) u                      (multiplication)
inline DiscreteOperator assemble_Mk(const Grid1D& g, const Coefficient& sigma, const Coefficient& nu,
                                    const Eigen::VectorXd& hk, MForm form) {
  if (hk.size() != g.m) throw std::invalid_argument("assemble_Mk: noise function size mismatch");
  const double h = g.h();
  DiscreteOperator op;
  op.mat = Eigen::MatrixXd::Zero(g.m, g.m);
  for (int i = 0; i < g.m; ++i) {
    const double x = g.node(i);
    const double hki = hk(i);
    switch (form) {
      case MForm::FirstOrder: {
        const double si = sigma ? sigma(x) : 0.0;
        const double ni = nu ? nu(x) : 0.0;
        op.mat(i, i) = ni * hki;
        if (i > 0) op.mat(i, i - 1) = -si * hki / (2.0 * h);
        if (i + 1 < g.m) op.mat(i, i + 1) = si * hki / (2.0 * h);
        op.order = 1;
        break;
      }
      case MForm::Divergence: {
        const double sm = sigma ? sigma(x - 0.5 * h) : 0.0;
        const double sp = sigma ? sigma(x + 0.5 * h) : 0.0;
        op.mat(i, i) = -(sm + sp) * hki / (h * h);
        if (i > 0) op.mat(i, i - 1) = sm * hki / (h * h);
        if (i + 1 < g.m) op.mat(i, i + 1) = sp * hki / (h * h);
        op.order = 2;
        break;
      }
      case MForm::Multiplication: {
        op.mat(i, i) = (nu ? nu(x) : 0.0) * hki;
        op.order = 0;
        break;
      }
    }
  }
  op.symmetric = (form == MForm::Multiplication);
  return op;
}

// h_k(x) = sqrt(2/L) sin(k pi x / L); exactly orthonormal in the discrete
// h-weighted inner product for k <= m, with c_k = sqrt(2/L).
inline NoiseBasis noise_basis_sine(const Grid1D& g, int K) {
  if (K < 1) throw std::invalid_argument("noise_basis_sine: K must be >= 1");
  if (K > g.m) throw std::invalid_argument("noise_basis_sine: need K <= m for discrete orthonormality");
  constexpr double pi = 3.14159265358979323846;
  NoiseBasis nb;
  const double amp = std::sqrt(2.0 / g.L);
  for (int k = 1; k <= K; ++k) {
    Eigen::VectorXd hk(g.m);
    for (int i = 0; i < g.m; ++i) hk(i) = amp * std::sin(k * pi * g.node(i) / g.L);
    nb.h.push_back(std::move(hk));
    nb.c.push_back(amp);
  }
  return nb;
}

struct StepperConfig {
  enum class Kind { ImplicitEuler, CrankNicolson };
  Kind kind = Kind::ImplicitEuler;
  int steps = 1000;    // steps over the full horizon
  int richardson = 1;  // extrapolation levels (1 = none), geometric step refinement
};

// One-step solve matrices for u' = A u + r(t):
//   implicit Euler:  (I - dt A) u+ = u + dt r(t+)
//   Crank-Nicolson:  (I - dt/2 A) u+ = (I + dt/2 A) u + dt/2 (r(t) + r(t+))
class Stepper {
public:
  Stepper(const DiscreteOperator& A, double dt, StepperConfig::Kind kind)
      : kind_(kind), dt_(dt), explicit_part_() {
    const int m = A.size();
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);
    if (kind == StepperConfig::Kind::ImplicitEuler) {
      lu_.compute(I - dt * A.mat);
    } else {
      lu_.compute(I - 0.5 * dt * A.mat);
      explicit_part_ = I + 0.5 * dt * A.mat;
    }
  }

  double dt() const { return dt_; }

  // advance with right-hand sides r(t_j) and r(t_{j+1})
  Eigen::VectorXd advance(const Eigen::VectorXd& u, const Eigen::VectorXd& r_old,
                          const Eigen::VectorXd& r_new) const {
    if (kind_ == StepperConfig::Kind::ImplicitEuler) return lu_.solve(u + dt_ * r_new);
    return lu_.solve(explicit_part_ * u + 0.5 * dt_ * (r_old + r_new));
  }

  Eigen::VectorXd advance_homogeneous(const Eigen::VectorXd& u) const {
    if (kind_ == StepperConfig::Kind::ImplicitEuler) return lu_.solve(u);
    return lu_.solve(explicit_part_ * u);
  }

  // adjoint of the homogeneous one-step map (used by norm estimates)
  Eigen::VectorXd advance_homogeneous_adjoint(const Eigen::VectorXd& u) const {
    if (kind_ == StepperConfig::Kind::ImplicitEuler) return lu_.transpose().solve(u);
    return explicit_part_.transpose() * lu_.transpose().solve(u);
  }

private:
  StepperConfig::Kind kind_;
  double dt_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  Eigen::MatrixXd explicit_part_;
};

// Approximates the semigroup action Phi_t v.
inline Eigen::VectorXd semigroup_apply(const DiscreteOperator& A, const Eigen::VectorXd& v, double t,
                                       const StepperConfig& cfg = {}) {
  if (t < 0.0) throw std::invalid_argument("semigroup_apply: t must be >= 0");
  if (t == 0.0) return v;
  const int steps = std::max(1, cfg.steps);
  Stepper st(A, t / steps, cfg.kind);
  Eigen::VectorXd u = v;
  for (int j = 0; j < steps; ++j) u = st.advance_homogeneous(u);
  return u;
}

struct PowerIterOpts {
  int max_iter = 5000;
  double tol = 1e-11;  // relative change of the singular-value estimate
};

// Operator-norm estimate by power iteration on L*L.  apply/apply_adjoint
// must already account for the input/output metrics; norm_in is the metric
// the iterate is normalized in, norm_out measures L x.
template <class Apply, class ApplyAdj, class NormIn, class NormOut>
double operator_norm_power_iteration(Eigen::VectorXd x, Apply&& apply, ApplyAdj&& apply_adjoint,
                                     NormIn&& norm_in, NormOut&& norm_out,
                                     const PowerIterOpts& opts = {}) {
  double nx = norm_in(x);
  if (nx == 0.0) throw std::invalid_argument("operator_norm_power_iteration: zero start vector");
  x /= nx;
  double sigma = 0.0;
  for (int it = 0; it < opts.max_iter; ++it) {
    Eigen::VectorXd y = apply(x);
    const double ny = norm_out(y);
    if (ny == 0.0) return 0.0;  // x in the kernel and L*L-invariant: norm 0 operator on this cycle
    const double sigma_new = ny;  // ||L x|| with ||x||_in = 1
    Eigen::VectorXd z = apply_adjoint(y);
    const double nz = norm_in(z);
    if (nz == 0.0) return sigma_new;
    x = z / nz;
    if (it > 0 && std::abs(sigma_new - sigma) <= opts.tol * std::max(sigma_new, 1e-300)) {
      return sigma_new;
    }
    sigma = sigma_new;
  }
  return sigma;
}

struct CkElliptic {};
struct CkParabolic {
  double T = 1.0;
  int steps = 400;
  StepperConfig::Kind stepper = StepperConfig::Kind::ImplicitEuler;
};

// Elliptic constant: smallest C_k with ||A^{-1} M_k v||_V <= C_k ||v||_V,
// i.e. the V-norm operator norm of B = A^{-1} M_k.
inline double estimate_Ck(const DiscreteOperator& A, const DiscreteOperator& Mk,
                          const InnerProducts& ip, CkElliptic, const PowerIterOpts& opts = {}) {
  Eigen::PartialPivLU<Eigen::MatrixXd> Alu(A.mat);
  if (!(Alu.determinant() != 0.0)) throw std::domain_error("estimate_Ck: singular A");
  const Eigen::MatrixXd& G = ip.gramV();
  auto apply = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return Alu.solve(Mk.mat * v); };
  auto apply_adj = [&](const Eigen::VectorXd& w) -> Eigen::VectorXd {
    // adjoint of B in the V-inner product: G^{-1} M^T A^{-T} G
    return ip.solveG(Mk.mat.transpose() * Alu.transpose().solve(G * w));
  };
  auto nV = [&](const Eigen::VectorXd& v) { return ip.normV(v); };
  Eigen::VectorXd x0 = Eigen::VectorXd::Ones(A.size());
  return operator_norm_power_iteration(std::move(x0), apply, apply_adj, nV, nV, opts);
}

// Parabolic constant: norm of v(.) -> int_0^t Phi_{t-s} M_k v(s) ds as an
// operator on the time-discretized V-norm (sum_j dt ||.||_V^2), using the
// same stepper family as the propagator.  Power iteration converges to the
// discrete norm from below; the weight margin theta absorbs the slack.
inline double estimate_Ck(const DiscreteOperator& A, const DiscreteOperator& Mk,
                          const InnerProducts& ip, const CkParabolic& mode,
                          const PowerIterOpts& opts = {}) {
  const int m = A.size(), S = mode.steps;
  const double dt = mode.T / S;
  Stepper st(A, dt, mode.stepper);
  const Eigen::MatrixXd& G = ip.gramV();

  auto apply = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    // w_j = step(w_{j-1}, dt M v_j), w_0 = 0; v stacked as S blocks of size m
    Eigen::VectorXd out(S * m);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd r_old = Eigen::VectorXd::Zero(m);
    for (int j = 0; j < S; ++j) {
      const Eigen::VectorXd r_new = Mk.mat * v.segment(j * m, m);
      w = st.advance(w, r_old, r_new);
      r_old = r_new;
      out.segment(j * m, m) = w;
    }
    return out;
  };
  auto apply_adj = [&](const Eigen::VectorXd& u) -> Eigen::VectorXd {
    // reverse sweep: z_j = step^T(G u_j + z_{j+1}); (L* u)_j = G^{-1} M^T z_j dt / dt
    // (the dt factors from the two time-summed inner products cancel)
    Eigen::VectorXd out(S * m);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(m);
    for (int j = S - 1; j >= 0; --j) {
      z = st.advance_homogeneous_adjoint(G * u.segment(j * m, m) + z);
      out.segment(j * m, m) = ip.solveG(Mk.mat.transpose() * z) * dt;
    }
    return out;
  };
  auto normVt = [&](const Eigen::VectorXd& v) {
    double s = 0.0;
    for (int j = 0; j < S; ++j) {
      const auto vj = v.segment(j * m, m);
      s += dt * vj.dot(G * vj);
    }
    return std::sqrt(s);
  };
  Eigen::VectorXd x0 = Eigen::VectorXd::Ones(S * m);
  return operator_norm_power_iteration(std::move(x0), apply, apply_adj, normVt, normVt, opts);
}

// H-operator norm ||M||_{H->H}; with <.,.>_H = h <.,.> this is the plain
// spectral norm, estimated by power iteration (exact for diagonal M).
inline double operator_norm_H(const DiscreteOperator& M, const PowerIterOpts& opts = {}) {
  auto apply = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return M.mat * v; };
  auto apply_adj = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return M.mat.transpose() * v; };
  auto n2 = [](const Eigen::VectorXd& v) { return v.norm(); };
  Eigen::VectorXd x0 = Eigen::VectorXd::Ones(M.size());
  // a slightly skewed start avoids starting orthogonal to the top mode
  for (int i = 0; i < M.size(); ++i) x0(i) += 0.5 * std::sin(1.0 + i);
  return operator_norm_power_iteration(std::move(x0), apply, apply_adj, n2, n2, opts);
}

// Largest c with v^T A_sym v + kappa ||v||_V^2 <= -c ||v||_H^2 for all v
// (generalized eigenproblem); c > 0 is the dissipativity constant used by
// the convergence study.
inline double measure_dissipativity(const DiscreteOperator& A, const InnerProducts& ip, double kappa) {
  const int m = A.size();
  Eigen::MatrixXd Q = 0.5 * ip.hH() * (A.mat + A.mat.transpose()) + kappa * ip.gramV();
  Eigen::MatrixXd H = ip.hH() * Eigen::MatrixXd::Identity(m, m);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Q, H);
  return -es.eigenvalues().maxCoeff();
}

}  // namespace chaosprop
