#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "elliptope/row_chain.hpp"
#include "elliptope/special_functions.hpp"

namespace elliptope {

namespace detail {

template <typename F>
double adaptive_simpson_rec(F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, long long& budget) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double h = b - a;
  const double left = h / 12.0 * (fa + 4.0 * flm + fm);
  const double right = h / 12.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (--budget <= 0)
    throw std::runtime_error("adaptive_simpson: interval budget exhausted");
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, budget) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, budget);
}

}  // namespace detail

// Adaptive Simpson quadrature with absolute tolerance and an interval cap.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double abs_tol,
                        long long max_intervals = 1'000'000) {
  if (!(b > a)) return 0.0;
  const double fa = f(a);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  long long budget = max_intervals;
  return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, budget);
}

// Density of the large-variance limit of the projected Gaussian proposal:
// the inverse surface area of the unit sphere in R^d, Gamma(d/2) / (2 pi^{d/2}).
inline double limiting_uniform_density(int ambient_dim) {
  if (ambient_dim < 1) throw std::invalid_argument("limiting_uniform_density: d must be >= 1");
  const double d = ambient_dim;
  return std::exp(log_gamma(0.5 * d) - std::log(2.0) - 0.5 * d * std::log(M_PI));
}

// Projected-Gaussian proposal density q(v_tilde | v) on the sphere, as a
// function of a = v . v_tilde:
//   q = (2 pi)^{-m/2} exp((a^2-1)/(2 sigma^2)) * I,
//   I = integral_0^inf s^{m-1} exp(-(s - a/sigma)^2 / 2) ds.
// Analysis and test use only; the sampling path never evaluates it because
// the symmetric proposal cancels from the acceptance ratio.
inline double proposal_density(std::span<const double> v_tilde, std::span<const double> v,
                               double sigma_eps) {
  if (v_tilde.size() != v.size() || v.size() < 2)
    throw std::invalid_argument("proposal_density: vectors must match with dimension >= 2");
  if (!(sigma_eps > 0.0)) throw std::invalid_argument("proposal_density: sigma_eps must be > 0");
  const int m = static_cast<int>(v.size());
  double a = 0.0, nv = 0.0, nt = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    a += v[j] * v_tilde[j];
    nv += v[j] * v[j];
    nt += v_tilde[j] * v_tilde[j];
  }
  if (std::fabs(nv - 1.0) > 1e-8 || std::fabs(nt - 1.0) > 1e-8)
    throw std::invalid_argument("proposal_density: arguments must be unit vectors");

  const double b = a / sigma_eps;
  const double power = m - 1;
  auto integrand = [&](double s) {
    const double d = s - b;
    return std::pow(s, power) * std::exp(-0.5 * d * d);
  };
  // integrand peaks at the positive root of s^2 - b s - (m-1) = 0
  const double mode = 0.5 * (b + std::sqrt(b * b + 4.0 * power));
  const double hi = std::fmax(mode, std::fmax(b, 1.0)) + 12.0;
  const double tol = 1e-10 * std::fmax(1.0, integrand(mode));
  const double integral = adaptive_simpson(integrand, 0.0, hi, tol);

  const double log_q = (a * a - 1.0) / (2.0 * sigma_eps * sigma_eps) -
                       0.5 * m * std::log(2.0 * M_PI) + std::log(integral);
  return std::exp(log_q);
}

// P(v1_tilde <= 0) for a proposal from v: 1/2 minus the Gaussian mass of
// (0, v1) at deviation sigma_eps. Strictly positive, which gives aperiodicity.
inline double stay_probability_lower_term(double v1, double sigma_eps) {
  if (!(v1 > 0.0) || v1 > 1.0)
    throw std::invalid_argument("stay_probability_lower_term: v1 must be in (0,1]");
  if (!(sigma_eps > 0.0))
    throw std::invalid_argument("stay_probability_lower_term: sigma_eps must be > 0");
  return 0.5 * std::erfc(v1 / (sigma_eps * std::sqrt(2.0)));
}

// Uniform-ergodicity certificate for the large-variance regime, where the
// proposal tends to the uniform sphere density c_q. The normalized target
// peaks at c_f, so the dominance f <= M q holds with M = c_f / c_q, the
// total variation distance after n steps is bounded by 2 (1 - 1/M)^n, and
// 1/M bounds the expected acceptance probability from below. The bound
// already absorbs the half of the proposal mass that the positivity
// indicator rejects.
struct ErgodicBoundReport {
  double m_constant;  // M >= 1
  double c_f;         // normalizing constant of f(v) = c_f v_1^i
  double c_q;         // limiting proposal density value

  double tv_bound(long long n) const {
    return 2.0 * std::pow(1.0 - 1.0 / m_constant, double(n));
  }
};

inline ErgodicBoundReport ergodic_bound(const RowTarget& target) {
  if (target.row_index >= target.matrix_dim)
    throw std::invalid_argument("ergodic_bound: requires row_index < matrix_dim");
  const int m = target.ambient_dim();
  const double i = target.exponent;
  const double d = m - 1;  // p - i
  // integral of v_1^i over S_+^{p-i}:
  //   area(S^{d-1}) * 1/2 * B((i+1)/2, d/2)
  const double log_integral = std::log(2.0) + 0.5 * d * std::log(M_PI) -
                              log_gamma(0.5 * d) - std::log(2.0) +
                              log_beta(0.5 * (i + 1.0), 0.5 * d);
  ErgodicBoundReport report;
  report.c_f = std::exp(-log_integral);
  report.c_q = limiting_uniform_density(m);
  report.m_constant = report.c_f / report.c_q;
  return report;
}

}  // namespace elliptope
