#pragma once

// Gauss rules from the Golub-Welsch eigenvalue problem and a small adaptive
// Gauss-Kronrod integrator. Everything is templated on the scalar so tests
// can build long-double reference rules.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fstirap {

template <typename Scalar>
struct QuadratureRule {
  std::vector<Scalar> nodes;
  std::vector<Scalar> weights;
};

namespace detail {

// Nodes are the eigenvalues of the symmetric Jacobi matrix, weights mu0 times
// the squared first eigenvector components.
template <typename Scalar>
QuadratureRule<Scalar> golub_welsch(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& diag,
                                    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& offdiag,
                                    Scalar mu0) {
  const Eigen::Index n = diag.size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> J =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    J(i, i) = diag(i);
    if (i + 1 < n) J(i, i + 1) = J(i + 1, i) = offdiag(i);
  }
  Eigen::SelfAdjointEigenSolver<decltype(J)> solver(J);
  if (solver.info() != Eigen::Success) throw std::runtime_error("golub_welsch: eigensolver failed");
  QuadratureRule<Scalar> rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    rule.nodes[i] = solver.eigenvalues()(i);
    const Scalar v = solver.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v * v;
  }
  return rule;
}

}  // namespace detail

/// n-point Gauss-Legendre rule on [-1, 1].
template <typename Scalar = double>
QuadratureRule<Scalar> gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> a = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> b(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) {
    const Scalar kk = Scalar(k);
    b(k - 1) = kk / std::sqrt(Scalar(4) * kk * kk - Scalar(1));
  }
  return detail::golub_welsch<Scalar>(a, b, Scalar(2));
}

/// n-point generalized Gauss-Laguerre rule for the weight x^alpha e^{-x} on
/// [0, inf). The weights sum to Gamma(alpha + 1).
template <typename Scalar = double>
QuadratureRule<Scalar> gauss_laguerre(int n, Scalar alpha) {
  if (n < 1) throw std::invalid_argument("gauss_laguerre: n must be positive");
  if (!(alpha > Scalar(-1))) throw std::invalid_argument("gauss_laguerre: alpha must exceed -1");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> a(n);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> b(std::max(n - 1, 0));
  for (int k = 0; k < n; ++k) a(k) = Scalar(2 * k + 1) + alpha;
  for (int k = 1; k < n; ++k) b(k - 1) = std::sqrt(Scalar(k) * (Scalar(k) + alpha));
  return detail::golub_welsch<Scalar>(a, b, std::tgamma(alpha + Scalar(1)));
}

template <typename Value>
struct IntegralResult {
  Value value{};
  double error = 0.0;
  bool converged = true;
  int evaluations = 0;
};

namespace detail {

inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename Value>
double magnitude(const Value& v) {
  using std::abs;
  return static_cast<double>(abs(v));
}

template <typename Value, typename F>
void gk15(F& f, double a, double b, Value& kronrod, double& err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  Value fc = f(c);
  Value gauss = fc * kGaussWeights[3];
  kronrod = fc * kKronrodWeights[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kKronrodNodes[j];
    const Value s = f(c - dx) + f(c + dx);
    kronrod += s * kKronrodWeights[j];
    if (j % 2 == 1) gauss += s * kGaussWeights[j / 2];
  }
  kronrod *= h;
  gauss *= h;
  err = magnitude(Value(kronrod - gauss));
}

}  // namespace detail

/// Adaptive 7/15-point Gauss-Kronrod integration of a real- or
/// complex-valued integrand over [a, b]. Subdivides the interval with the
/// largest error until the summed error is below max(abs_tol, rel_tol |I|)
/// or `max_intervals` is reached (then converged = false).
/// `breaks` is an increasing list of at least two points forming the initial
/// partition; discontinuities of the integrand belong there.
template <typename Value, typename F>
IntegralResult<Value> integrate_adaptive(F&& f, const std::vector<double>& breaks, double rel_tol,
                                         double abs_tol, int max_intervals = 2000) {
  struct Piece {
    double a, b;
    Value value;
    double error;
  };
  IntegralResult<Value> out;
  if (breaks.size() < 2) throw std::invalid_argument("integrate_adaptive: need two break points");
  std::vector<Piece> pieces;
  pieces.reserve(breaks.size() + 64);
  max_intervals += static_cast<int>(breaks.size());
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] >= breaks[i]))
      throw std::invalid_argument("integrate_adaptive: break points must increase");
    if (breaks[i + 1] == breaks[i]) continue;
    Piece p{breaks[i], breaks[i + 1], Value{}, 0.0};
    detail::gk15<Value>(f, p.a, p.b, p.value, p.error);
    pieces.push_back(p);
    out.evaluations += 15;
  }
  if (pieces.empty()) return out;
  for (;;) {
    Value total{};
    double err = 0.0;
    for (const auto& p : pieces) {
      total += p.value;
      err += p.error;
    }
    out.value = total;
    out.error = err;
    const double target = std::max(abs_tol, rel_tol * detail::magnitude(total));
    if (err <= target) break;
    if (static_cast<int>(pieces.size()) >= max_intervals) {
      out.converged = false;
      break;
    }
    auto worst = std::max_element(pieces.begin(), pieces.end(),
                                  [](const Piece& x, const Piece& y) { return x.error < y.error; });
    const double mid = 0.5 * (worst->a + worst->b);
    if (!(mid > worst->a && mid < worst->b)) {
      out.converged = false;
      break;
    }
    Piece left{worst->a, mid, Value{}, 0.0};
    Piece right{mid, worst->b, Value{}, 0.0};
    detail::gk15<Value>(f, left.a, left.b, left.value, left.error);
    detail::gk15<Value>(f, right.a, right.b, right.value, right.error);
    out.evaluations += 30;
    *worst = left;
    pieces.push_back(right);
  }
  return out;
}

template <typename Value, typename F>
IntegralResult<Value> integrate_adaptive(F&& f, double a, double b, double rel_tol, double abs_tol,
                                         int max_intervals = 2000) {
  return integrate_adaptive<Value>(std::forward<F>(f), std::vector<double>{a, b}, rel_tol, abs_tol,
                                   max_intervals);
}

}  // namespace fstirap
