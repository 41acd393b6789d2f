// Copyright 2026 The nucresp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "nucresp/circuits.hpp"
#include "nucresp/error.hpp"
#include "nucresp/linalg.hpp"
#include "nucresp/oracle.hpp"
#include "nucresp/parallel.hpp"

namespace nucresp {

/// Square grid tau_j = j delta, t_l = l delta with j, l in [-n_t, n_t].
struct GridSpec {
  double delta = 0.1;
  int n_t = 10;

  void validate() const {
    detail::require(delta > 0.0 && std::isfinite(delta), "GridSpec: delta must be positive");
    detail::require(n_t >= 0, "GridSpec: n_t must be non-negative");
  }
  int side() const { return 2 * n_t + 1; }
  /// Half-width of the time window, (2 n_t + 1) delta / 2.
  double half_window() const { return side() * delta / 2.0; }
  double time(int index) const { return (index - n_t) * delta; }
};

struct TwoTimeGrid {
  GridSpec spec;
  CMatrix values;  ///< values(j, l) = C(tau_j, t_l), indices shifted by n_t
  std::size_t evaluations = 0;

  double half_window() const { return spec.half_window(); }
};

struct SpectralGrid {
  std::vector<double> omegas;
  std::vector<cplx> s_values;
  double resolution = 0.0;  ///< pi / T
};

/// C(tau, t) = <psi| A(t + tau) A(t) |psi> with A(s) = e^{iHs} A e^{-iHs}.
using TwoTimeEvaluator = std::function<cplx(double tau, double t)>;

/// Fills the grid from any evaluator, in parallel over rows.
inline TwoTimeGrid two_time_correlator(const GridSpec& spec, const TwoTimeEvaluator& eval, unsigned workers = 1) {
  spec.validate();
  TwoTimeGrid g{spec, CMatrix(spec.side(), spec.side()), 0};
  std::atomic<std::size_t> count{0};
  parallel_for(
      static_cast<std::size_t>(spec.side()),
      [&](std::size_t j) {
        for (int l = 0; l < spec.side(); ++l) {
          g.values(static_cast<Eigen::Index>(j), l) = eval(spec.time(static_cast<int>(j)), spec.time(l));
          count.fetch_add(1, std::memory_order_relaxed);
        }
      },
      workers);
  g.evaluations = count.load();
  return g;
}

/// Exact backend: sum_{m,n,k} c_m^* c_k A_mn A_nk e^{i(E_m - E_n) tau} e^{i(E_m - E_k) t}.
inline TwoTimeEvaluator exact_two_time_evaluator(const EigenSystem& eig, const CMatrix& a, const CVector& psi) {
  const CVector c = eig.coefficients(psi);
  const CMatrix ae = eig.to_eigenbasis(a);
  const RVector e = eig.energies;
  return [c, ae, e](double tau, double t) {
    const CVector d_t = (e.cast<cplx>() * cplx(0.0, -t)).array().exp().matrix();
    const CVector d_tau = (e.cast<cplx>() * cplx(0.0, -tau)).array().exp().matrix();
    const CVector phi = d_t.asDiagonal() * c;  // e^{-iHt} psi
    const CVector right = d_tau.asDiagonal() * (ae * phi);
    const CVector left = d_tau.asDiagonal() * phi;
    return left.dot(ae * right);
  };
}

/// Trotter backend: the same product with every propagator replaced by the
/// ordering's dense step unitary, `steps_per_unit` steps per unit time (at least one).
inline TwoTimeEvaluator trotter_two_time_evaluator(TrotterOrdering ordering, const ModelParams& p, const CMatrix& a,
                                                   const CVector& psi, double steps_per_unit = 10.0) {
  return [=](double tau, double t) {
    auto steps = [&](double d) { return std::max(1, static_cast<int>(std::ceil(std::abs(d) * steps_per_unit))); };
    const CVector phi = trotter_unitary(ordering, t, p, steps(t)) * psi;
    const CMatrix v = trotter_unitary(ordering, tau, p, steps(tau));
    return (v * phi).dot(a * (v * (a * phi)));
  };
}

/// Finite-window midpoint transform (delta^2 / 4T^2) sum_jl e^{i tau_j w} C(tau_j, t_l).
inline SpectralGrid riemann_spectrum(const TwoTimeGrid& g, const std::vector<double>& omegas) {
  const double t_half = g.half_window();
  const double norm = g.spec.delta * g.spec.delta / (4.0 * t_half * t_half);
  const CVector row_sums = g.values.rowwise().sum();  // sum over t_l
  SpectralGrid out;
  out.omegas = omegas;
  out.resolution = M_PI / t_half;
  out.s_values.reserve(omegas.size());
  for (double w : omegas) {
    cplx acc = 0.0;
    for (int j = 0; j < g.spec.side(); ++j) acc += std::polar(1.0, g.spec.time(j) * w) * row_sums(j);
    out.s_values.push_back(norm * acc);
  }
  return out;
}

/// Uniform grid over [-pi/delta, pi/delta] with spacing delta_omega / 2.
inline std::vector<double> default_omegas(double delta, double delta_omega) {
  detail::require(delta > 0.0 && delta_omega > 0.0, "default_omegas: spacings must be positive");
  const double lim = M_PI / delta, step = delta_omega / 2.0;
  const auto n = static_cast<long>(std::floor(lim / step + 1e-9));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(2 * n + 1));
  for (long k = -n; k <= n; ++k) out.push_back(static_cast<double>(k) * step);
  return out;
}

struct ResolutionCost {
  int n_t = 0;
  std::uint64_t evaluations = 0;
};

/// N_t = ceil(1 / (delta * delta_omega)) and (2 N_t + 1)^2 correlator evaluations.
inline ResolutionCost resolution_cost(double delta, double delta_omega) {
  detail::require(delta_omega > 0.0, "resolution_cost: resolution must be positive");
  detail::require(delta > 0.0, "resolution_cost: time step must be positive");
  const int n = static_cast<int>(std::ceil(1.0 / (delta * delta_omega) - 1e-9));
  const auto side = static_cast<std::uint64_t>(2 * n + 1);
  return {n, side * side};
}

/// (M2 / 24) T^3 tau~^3 / (N_T^2 N_tau^2).
inline double midpoint_error_bound(double m2, double t_window, double tau_window, int n_t, int n_tau) {
  detail::require(n_t > 0 && n_tau > 0, "midpoint_error_bound: subdivisions must be positive");
  detail::require(m2 >= 0.0, "midpoint_error_bound: M2 must be non-negative");
  const double nt = n_t, ntau = n_tau;
  return m2 / 24.0 * std::pow(t_window, 3) * std::pow(tau_window, 3) / (nt * nt * ntau * ntau);
}

/// Largest |S| on the grid, returned as (omega, index).
inline std::pair<double, std::size_t> spectral_peak(const SpectralGrid& s) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.s_values.size(); ++i)
    if (std::abs(s.s_values[i]) > std::abs(s.s_values[best])) best = i;
  return {s.omegas.at(best), best};
}

}  // namespace nucresp
