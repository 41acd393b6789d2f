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


#include <gtest/gtest.h>

#include "nucresp/spectral.hpp"
#include "test_util.hpp"

namespace nucresp {
namespace {

using testing::taylor_expm;

struct Problem {
  ModelParams p;
  EigenSystem eig;
  CMatrix a;
  CVector psi;

  explicit Problem(ModelParams params, const QubitOperator& op)
      : p(params), eig(diagonalize(build_qubit_hamiltonian(params))), a(to_matrix(op)), psi(eig.ground_state()) {}
};

Problem free_setup() {
  ModelParams p;
  p.U = 0.0;
  return Problem(p, QubitOperator(kModelQubits).add(model::z({0}), 1.0));
}

TEST(Grid, Geometry) {
  GridSpec g{0.1, 10};
  EXPECT_EQ(g.side(), 21);
  EXPECT_NEAR(g.half_window(), 1.05, 1e-15);
  EXPECT_NEAR(g.time(0), -1.0, 1e-15);
  EXPECT_EQ(g.time(10), 0.0);
  EXPECT_THROW((GridSpec{0.0, 3}.validate()), std::invalid_argument);
  EXPECT_THROW((GridSpec{0.1, -1}.validate()), std::invalid_argument);
}

TEST(ResolutionCost, Formula) {
  const auto c = resolution_cost(0.1, 1.0);
  EXPECT_EQ(c.n_t, 10);
  EXPECT_EQ(c.evaluations, 441u);
  for (double dw : {0.5, 0.25, 0.125}) {
    const auto a = resolution_cost(0.1, dw), b = resolution_cost(0.1, dw / 2);
    const double ratio = static_cast<double>(b.evaluations) / static_cast<double>(a.evaluations);
    EXPECT_LE(ratio, 4.0);
    EXPECT_GE(ratio, 4.0 * (1.0 - 2.0 / (2.0 * a.n_t + 1.0)));
  }
  EXPECT_THROW(resolution_cost(0.1, 0.0), std::invalid_argument);
  EXPECT_THROW(resolution_cost(0.0, 0.5), std::invalid_argument);
}

TEST(TwoTime, EvaluationCountMatchesCost) {
  const Problem s = free_setup();
  const auto cost = resolution_cost(0.2, 0.8);
  const auto g = two_time_correlator({0.2, cost.n_t}, exact_two_time_evaluator(s.eig, s.a, s.psi), 3);
  EXPECT_EQ(g.evaluations, cost.evaluations);
  EXPECT_EQ(g.values.rows(), 2 * cost.n_t + 1);
}

TEST(TwoTime, EigenstateHasNoTDependence) {
  const Problem s(ModelParams{}, build_excitation({0, 1}, ModelParams{}));
  const auto g = two_time_correlator({0.15, 6}, exact_two_time_evaluator(s.eig, s.a, s.psi));
  for (Eigen::Index j = 0; j < g.values.rows(); ++j)
    for (Eigen::Index l = 1; l < g.values.cols(); ++l) EXPECT_LT(std::abs(g.values(j, l) - g.values(j, 0)), 1e-10);
}

TEST(TwoTime, ZeroSeparationIsRealAndPositive) {
  Problem s(ModelParams{}, build_excitation({1, 1}, ModelParams{}));
  s.psi = make_contaminated_state(s.eig, 0.9, 4).state(s.eig);
  const auto g = two_time_correlator({0.2, 5}, exact_two_time_evaluator(s.eig, s.a, s.psi));
  const Eigen::Index zero = 5;
  for (Eigen::Index l = 0; l < g.values.cols(); ++l) {
    EXPECT_LT(std::abs(g.values(zero, l).imag()), 1e-12);
    EXPECT_GE(g.values(zero, l).real(), 0.0);
  }
}

TEST(TwoTime, AgreesWithDenseEvolutionAndSingleTimeCorrelator) {
  Problem s(ModelParams{}, build_excitation({0, 1}, ModelParams{}));
  s.psi = make_contaminated_state(s.eig, 0.962, 8).state(s.eig);
  const CMatrix h = to_matrix(build_qubit_hamiltonian(s.p));
  const auto eval = exact_two_time_evaluator(s.eig, s.a, s.psi);
  for (double tau : {-0.7, 0.0, 0.4, 1.3})
    for (double t : {-1.1, 0.0, 0.6}) {
      // <psi| A(t + tau) A(t) |psi> with A(s) = U(s)^dag A U(s).
      const CMatrix u_tt = taylor_expm(h, t + tau), u_t = taylor_expm(h, t);
      const cplx dense = s.psi.dot(u_tt.adjoint() * s.a * u_tt * u_t.adjoint() * s.a * u_t * s.psi);
      EXPECT_LT(std::abs(eval(tau, t) - dense), 1e-10);
    }
  for (double tau : {0.0, 0.3, 2.0}) EXPECT_LT(std::abs(eval(tau, 0.0) - exact_correlator(s.eig, s.a, s.psi, tau)), 1e-10);
}

TEST(TwoTime, TrotterBackendConverges) {
  Problem s(ModelParams{}, build_excitation({1, 1}, ModelParams{}));
  const auto exact = exact_two_time_evaluator(s.eig, s.a, s.psi);
  for (TrotterOrdering o : {TrotterOrdering::A2, TrotterOrdering::B2}) {
    const auto coarse = trotter_two_time_evaluator(o, s.p, s.a, s.psi, 100.0);
    const auto fine = trotter_two_time_evaluator(o, s.p, s.a, s.psi, 200.0);
    for (double tau : {0.5, -1.0})
      for (double t : {0.3, 1.2}) {
        // Both propagators take a whole number of steps here, so the error halves.
        const double err_fine = std::abs(fine(tau, t) - exact(tau, t));
        EXPECT_LT(err_fine, 0.05);
        const double ratio = std::abs(coarse(tau, t) - exact(tau, t)) / err_fine;
        EXPECT_GT(ratio, 1.6);
        EXPECT_LT(ratio, 2.4);
      }
  }
}

TEST(Riemann, ConstantSignal) {
  TwoTimeGrid g;
  g.spec = {0.1, 12};
  g.values = CMatrix::Ones(25, 25);
  const auto s = riemann_spectrum(g, {0.0, 1.0, -1.0});
  EXPECT_NEAR(std::abs(s.s_values[0] - cplx(1.0, 0.0)), 0.0, 1e-12);
  EXPECT_LT(std::abs(s.s_values[1]), 1.0);
  EXPECT_NEAR(std::abs(s.s_values[1] - s.s_values[2]), 0.0, 1e-12);
  EXPECT_NEAR(s.resolution, M_PI / 1.25, 1e-12);
}

TEST(Riemann, Linearity) {
  TwoTimeGrid a, b, sum;
  a.spec = b.spec = sum.spec = {0.2, 4};
  a.values = testing::random_unitary(9, 3);
  b.values = testing::random_unitary(9, 4);
  sum.values = a.values + 2.0 * b.values;
  const auto w = default_omegas(0.2, 1.0);
  const auto sa = riemann_spectrum(a, w), sb = riemann_spectrum(b, w), ss = riemann_spectrum(sum, w);
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_LT(std::abs(ss.s_values[i] - sa.s_values[i] - 2.0 * sb.s_values[i]), 1e-12);
}

TEST(Riemann, DefaultOmegas) {
  const auto w = default_omegas(0.1, 0.5);
  EXPECT_NEAR(w.front(), -w.back(), 1e-12);
  EXPECT_LE(w.back(), M_PI / 0.1);
  EXPECT_NEAR(w[1] - w[0], 0.25, 1e-12);
  EXPECT_EQ(std::count(w.begin(), w.end(), 0.0), 1);
}

TEST(Riemann, FreePeakAtFour) {
  const Problem s = free_setup();
  const double delta = 0.1;
  std::vector<double> errors;
  for (double dw : {0.5, 0.25, 0.125}) {
    const auto cost = resolution_cost(delta, dw);
    const auto g = two_time_correlator({delta, cost.n_t}, exact_two_time_evaluator(s.eig, s.a, s.psi), 4);
    const auto spec = riemann_spectrum(g, default_omegas(delta, dw));
    const double err = std::abs(spectral_peak(spec).first - 4.0);
    EXPECT_LE(err, dw);
    EXPECT_LE(err, spec.resolution);
    errors.push_back(err);
  }
  EXPECT_LE(errors.back(), errors.front());
}

TEST(Riemann, PeaksSitOnResponseLines) {
  const ModelParams p;
  const Problem s(p, build_excitation({0, 1}, p));
  const auto lines = spectral_response(s.eig, s.a, s.psi);
  double total = 0.0;
  for (const auto& l : lines) total += l.weight;
  const double delta = 0.1, dw = 0.25;
  const auto cost = resolution_cost(delta, dw);
  const auto g = two_time_correlator({delta, cost.n_t}, exact_two_time_evaluator(s.eig, s.a, s.psi), 4);
  const auto spec = riemann_spectrum(g, default_omegas(delta, dw));
  // Local maxima of |S| above 0.3 of the global peak; sinc sidelobes stay below 0.22.
  const double top = std::abs(spec.s_values[spectral_peak(spec).second]);
  int peaks = 0;
  for (std::size_t i = 1; i + 1 < spec.s_values.size(); ++i) {
    const double v = std::abs(spec.s_values[i]);
    if (v < 0.3 * top || v < std::abs(spec.s_values[i - 1]) || v < std::abs(spec.s_values[i + 1])) continue;
    ++peaks;
    double nearest = INFINITY;
    for (const auto& l : lines)
      if (l.weight >= 0.05 * total) nearest = std::min(nearest, std::abs(l.omega - spec.omegas[i]));
    EXPECT_LE(nearest, spec.resolution) << "peak at " << spec.omegas[i];
  }
  EXPECT_GE(peaks, 1);
}

TEST(Riemann, ContaminationAddsCrossLines) {
  Problem s = free_setup();
  const CVector pure = s.psi;
  s.psi = make_contaminated_state(s.eig, 0.962, 21).state(s.eig);
  const auto lines = spectral_response(s.eig, s.a, s.psi);
  const auto pure_lines = spectral_response(s.eig, s.a, pure);
  EXPECT_GT(lines.size(), pure_lines.size());
  const double delta = 0.1, dw = 0.125;
  const auto cost = resolution_cost(delta, dw);
  const auto omegas = default_omegas(delta, dw);
  const auto g = two_time_correlator({delta, cost.n_t}, exact_two_time_evaluator(s.eig, s.a, s.psi), 4);
  const auto g0 = two_time_correlator({delta, cost.n_t}, exact_two_time_evaluator(s.eig, s.a, pure), 4);
  const auto spec = riemann_spectrum(g, omegas), spec0 = riemann_spectrum(g0, omegas);
  // The difference is largest near a line the pure state does not have.
  std::size_t best = 0;
  for (std::size_t i = 1; i < omegas.size(); ++i)
    if (std::abs(spec.s_values[i] - spec0.s_values[i]) > std::abs(spec.s_values[best] - spec0.s_values[best])) best = i;
  double nearest = INFINITY;
  for (const auto& l : lines) nearest = std::min(nearest, std::abs(l.omega - omegas[best]));
  EXPECT_LE(nearest, spec.resolution);
}

TEST(MidpointBound, Formula) {
  EXPECT_EQ(midpoint_error_bound(0.0, 2.0, 3.0, 4, 4), 0.0);
  const double b = midpoint_error_bound(1.5, 2.0, 3.0, 4, 5);
  EXPECT_NEAR(midpoint_error_bound(1.5, 2.0, 3.0, 8, 10), b / 16.0, 1e-15);
  EXPECT_NEAR(b, 1.5 / 24.0 * 8.0 * 27.0 / (16.0 * 25.0), 1e-15);
  EXPECT_THROW(midpoint_error_bound(1.0, 1.0, 1.0, 0, 3), std::invalid_argument);
  EXPECT_THROW(midpoint_error_bound(-1.0, 1.0, 1.0, 2, 3), std::invalid_argument);
}

TEST(MidpointBound, HoldsForSmoothIntegrand) {
  // int_0^T int_0^tau~ e^{i w tau} cos(t) dtau dt by the two-dimensional midpoint rule.
  const double w = 2.0, win = 4.0;
  const cplx exact = (std::exp(cplx(0.0, w * win)) - 1.0) / cplx(0.0, w) * std::sin(win);
  const double m2 = std::max(w * w, 1.0);
  for (int n : {4, 8, 16}) {
    const double h = win / n;
    cplx sum = 0.0;
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) sum += std::polar(1.0, w * (j + 0.5) * h) * std::cos((l + 0.5) * h);
    sum *= h * h;
    EXPECT_LE(std::abs(sum - exact), midpoint_error_bound(m2, win, win, n, n)) << "N=" << n;
  }
}

}  // namespace
}  // namespace nucresp
