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

#include <random>

#include "nucresp/estimation.hpp"
#include "test_util.hpp"

namespace nucresp {
namespace {

constexpr TrotterOrdering kAll[] = {TrotterOrdering::A1, TrotterOrdering::A2, TrotterOrdering::B1, TrotterOrdering::B2};

struct Fixture {
  ModelParams p;
  EigenSystem eig = diagonalize(build_qubit_hamiltonian(p));
  StateVector ground = StateVector(eig.ground_state());
};

std::vector<double> grid(double stop, int n) {
  std::vector<double> t;
  for (int i = 0; i < n; ++i) t.push_back(stop * i / (n - 1));
  return t;
}

TEST(EstimateCorrelator, NoiselessExactModeMatchesDenseTrotter) {
  Fixture f;
  EstimationOptions opt;
  opt.noise = NoiseModel::ideal();
  const auto taus = grid(0.6, 5);
  for (MomentumVector q : {MomentumVector{0, 1}, MomentumVector{1, 1}})
    for (TrotterOrdering o : kAll) {
      const auto est = estimate_correlator(q, o, taus, f.p, f.ground, opt, 1);
      const auto ref = exact_trotter_series(q, o, taus, f.p, f.ground);
      for (std::size_t i = 0; i < taus.size(); ++i) {
        EXPECT_LT(std::abs(est.bare.values[i] - ref.values[i]), 1e-10) << to_string(o) << " q" << q.tag();
        EXPECT_LT(std::abs(est.mitigated.values[i] - ref.values[i]), 1e-10);
        EXPECT_EQ(est.bare.sigma_re[i], 0.0);
      }
    }
}

TEST(EstimateCorrelator, TwoTrotterStepsInExactMode) {
  Fixture f;
  EstimationOptions opt;
  opt.noise = NoiseModel::ideal();
  opt.trotter_steps = 2;
  const auto taus = grid(0.8, 3);
  const auto est = estimate_correlator({0, 1}, TrotterOrdering::B2, taus, f.p, f.ground, opt, 1);
  const auto ref = exact_trotter_series({0, 1}, TrotterOrdering::B2, taus, f.p, f.ground, 2);
  for (std::size_t i = 0; i < taus.size(); ++i) EXPECT_LT(std::abs(est.bare.values[i] - ref.values[i]), 1e-10);
}

TEST(EstimateCorrelator, ZeroMomentumIsConstant) {
  Fixture f;
  f.p.e_A = 1.5;
  f.p.e_B = -0.25;
  EstimationOptions opt;
  opt.shots = 100;
  const auto est = estimate_correlator({0, 0}, TrotterOrdering::A1, grid(1.0, 4), f.p, f.ground, opt, 5);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(est.bare.values[i].real(), 1.5625, 1e-14);
    EXPECT_EQ(est.bare.values[i].imag(), 0.0);
    EXPECT_EQ(est.bare.sigma_re[i], 0.0);
    EXPECT_EQ(est.mitigated.sigma_im[i], 0.0);
  }
  EXPECT_TRUE(est.records.empty());
}

TEST(EstimateCorrelator, SumRuleAtZeroForBType) {
  Fixture f;
  EstimationOptions opt;
  opt.noise = NoiseModel::ideal();
  for (MomentumVector q : {MomentumVector{0, 1}, MomentumVector{1, 0}, MomentumVector{1, 1}}) {
    const CMatrix a = to_matrix(build_excitation(q, f.p));
    const cplx expected = f.ground.amplitudes().dot(a * a * f.ground.amplitudes());
    for (TrotterOrdering o : {TrotterOrdering::B1, TrotterOrdering::B2}) {
      const auto est = estimate_correlator(q, o, {0.0}, f.p, f.ground, opt, 1);
      EXPECT_LT(std::abs(est.bare.values[0] - expected), 1e-12);
    }
  }
}

TEST(EstimateCorrelator, ShotNoiseWithinFourSigma) {
  Fixture f;
  EstimationOptions opt;
  opt.noise = NoiseModel::ideal();
  opt.shots = 100000;
  opt.mitigation.scales = {1};
  const auto taus = grid(1.0, 6);
  const auto est = estimate_correlator({0, 1}, TrotterOrdering::A2, taus, f.p, f.ground, opt, 77);
  const auto ref = exact_trotter_series({0, 1}, TrotterOrdering::A2, taus, f.p, f.ground);
  for (std::size_t i = 0; i < taus.size(); ++i) {
    EXPECT_LT(std::abs(est.bare.values[i].real() - ref.values[i].real()), 4 * est.bare.sigma_re[i] + 1e-12);
    EXPECT_LT(std::abs(est.bare.values[i].imag() - ref.values[i].imag()), 4 * est.bare.sigma_im[i] + 1e-12);
  }
}

TEST(EstimateCorrelator, DeterministicAcrossWorkerCounts) {
  Fixture f;
  EstimationOptions opt;
  opt.shots = 2000;
  const auto taus = grid(0.4, 3);
  opt.workers = 1;
  const auto a = estimate_correlator({1, 1}, TrotterOrdering::B2, taus, f.p, f.ground, opt, 42);
  opt.workers = 4;
  const auto b = estimate_correlator({1, 1}, TrotterOrdering::B2, taus, f.p, f.ground, opt, 42);
  const auto c = estimate_correlator({1, 1}, TrotterOrdering::B2, taus, f.p, f.ground, opt, 43);
  for (std::size_t i = 0; i < taus.size(); ++i) {
    EXPECT_EQ(a.bare.values[i], b.bare.values[i]);
    EXPECT_EQ(a.mitigated.values[i], b.mitigated.values[i]);
    EXPECT_EQ(a.mitigated.sigma_re[i], b.mitigated.sigma_re[i]);
  }
  bool differs = false;
  for (std::size_t i = 1; i < taus.size(); ++i) differs |= a.bare.values[i] != c.bare.values[i];
  EXPECT_TRUE(differs);
}

TEST(EstimateCorrelator, BareEstimatesAreBounded) {
  Fixture f;
  EstimationOptions opt;
  opt.shots = 50;
  const auto taus = grid(2.0, 9);
  for (TrotterOrdering o : kAll) {
    const auto est = estimate_correlator({0, 1}, o, taus, f.p, f.ground, opt, 3);
    for (const auto& v : est.bare.values) EXPECT_LE(std::abs(v), 4.0 * std::sqrt(2.0) + 1e-12);
    for (const auto& r : est.records) EXPECT_LE(std::abs(r.raw.value), 1.0);
  }
}

TEST(EstimateCorrelator, ZneReducesGateNoiseBias) {
  Fixture f;
  EstimationOptions opt;
  opt.noise = NoiseModel::defaults();
  opt.noise.readout = {};
  opt.mitigation.scales = {1, 3, 5};
  opt.mitigation.extrapolant = Extrapolant::Richardson2;
  const auto taus = grid(0.5, 11);
  const auto est = estimate_correlator({0, 1}, TrotterOrdering::B2, taus, f.p, f.ground, opt, 1);
  const auto ref = exact_trotter_series({0, 1}, TrotterOrdering::B2, taus, f.p, f.ground);
  int closer = 0;
  for (std::size_t i = 0; i < taus.size(); ++i)
    closer += std::abs(est.mitigated.values[i] - ref.values[i]) <= std::abs(est.bare.values[i] - ref.values[i]);
  EXPECT_GE(closer, 9);
}

TEST(EstimateCorrelator, Rejections) {
  Fixture f;
  EstimationOptions opt;
  opt.shots = 0;
  EXPECT_THROW(estimate_correlator({0, 1}, TrotterOrdering::A1, {0.1}, f.p, f.ground, opt, 1), std::invalid_argument);
  opt.shots = 10;
  EXPECT_THROW(estimate_correlator({0, 1}, TrotterOrdering::A1, {0.1}, f.p, StateVector(3), opt, 1),
               std::invalid_argument);
  opt.mitigation.scales = {2};
  EXPECT_THROW(estimate_correlator({0, 1}, TrotterOrdering::A1, {0.1}, f.p, f.ground, opt, 1), std::invalid_argument);
}

TEST(MeasurementBudget, Examples) {
  const auto b = measurement_budget(0.01, {{1.0, 1.0}});
  EXPECT_EQ(b.total, 160000u);
  EXPECT_EQ(b.per_term, 40000u);
  EXPECT_EQ(b.n_terms, 2u);
  EXPECT_DOUBLE_EQ(b.loose, 160000.0);
  for (double eps : {0.1, 0.02, 0.005}) EXPECT_EQ(measurement_budget(eps, {{1.0}}).total, std::llround(1.0 / (eps * eps)));
  // The tighter form never exceeds the loose one.
  const auto c = measurement_budget(0.05, {{0.3, -1.2, 0.7}, {2.0, 0.1}});
  EXPECT_LE(static_cast<double>(c.total), c.loose + 1.0);
  EXPECT_EQ(c.n_terms, 3u);
  EXPECT_THROW(measurement_budget(0.0, {{1.0}}), std::invalid_argument);
  EXPECT_THROW(measurement_budget(-1.0, {{1.0}}), std::invalid_argument);
}

TEST(MeasurementBudget, UniformAllocationMeetsPrecision) {
  Fixture f;
  const double eps = 0.02;
  const auto b = measurement_budget(eps, {excitation_coefficients(build_excitation({0, 1}, f.p))});
  EstimationOptions opt;
  opt.noise = NoiseModel::ideal();
  opt.shots = b.per_term;
  opt.mitigation.scales = {1};
  const double tau = 0.4;
  const int trials = 200;
  std::vector<cplx> values;
  for (int k = 0; k < trials; ++k) {
    const auto est = estimate_correlator({0, 1}, TrotterOrdering::A2, {tau}, f.p, f.ground, opt, 1000 + k);
    EXPECT_LE(est.bare.sigma_re[0], eps);
    EXPECT_LE(est.bare.sigma_im[0], eps);
    values.push_back(est.bare.values[0]);
  }
  cplx mean = 0.0;
  for (auto v : values) mean += v;
  mean /= trials;
  double var_re = 0.0, var_im = 0.0;
  for (auto v : values) {
    var_re += std::pow(v.real() - mean.real(), 2);
    var_im += std::pow(v.imag() - mean.imag(), 2);
  }
  // Sample std of 200 draws has relative spread ~5%.
  EXPECT_LE(std::sqrt(var_re / (trials - 1)), 1.15 * eps);
  EXPECT_LE(std::sqrt(var_im / (trials - 1)), 1.15 * eps);
}

TEST(DeviationBound, Examples) {
  ModelParams p;
  const auto rho = build_excitation({0, 1}, p);
  EXPECT_EQ(deviation_bound(0.0, 1.0, rho), 0.0);
  EXPECT_NEAR(deviation_bound(0.0, 0.962, rho), 0.7797, 1e-4);
  EXPECT_NEAR(deviation_bound(0.1, 1.0, rho), 0.4, 1e-12);
  EXPECT_THROW(deviation_bound(0.0, 1.1, rho), std::invalid_argument);
  EXPECT_THROW(deviation_bound(-0.1, 1.0, rho), std::invalid_argument);
  EXPECT_EQ(excitation_coefficients(rho), (std::vector<double>{1.0, 1.0}));
}

TEST(DeviationBound, NeverViolated) {
  Fixture f;
  const auto taus = grid(0.5, 11);
  const auto rho = build_excitation({0, 1}, f.p);
  const auto exact = exact_series({0, 1}, taus, f.p, f.ground);
  for (double fid : {1.0, 0.962, 0.9}) {
    const StateVector psi(make_contaminated_state(f.eig, fid, 11).state(f.eig));
    for (TrotterOrdering o : {TrotterOrdering::A2, TrotterOrdering::B2}) {
      const auto approx = exact_trotter_series({0, 1}, o, taus, f.p, psi);
      for (std::size_t i = 0; i < taus.size(); ++i) {
        const double bound = deviation_bound(trotter_epsilon(o, taus[i], f.p), fid, rho);
        EXPECT_LE(std::abs(exact.values[i] - approx.values[i]), bound + 1e-12)
            << to_string(o) << " F=" << fid << " tau=" << taus[i];
      }
    }
  }
}

TEST(DeviationBound, TrotterEpsilonScaling) {
  ModelParams p;
  EXPECT_LT(trotter_epsilon(TrotterOrdering::A1, 0.0, p), 1e-14);
  EXPECT_LT(trotter_epsilon(TrotterOrdering::A2, 0.1, p, 4), trotter_epsilon(TrotterOrdering::A2, 0.1, p, 1));
}

CorrelatorSeries series_of(std::vector<cplx> v, double sigma) {
  CorrelatorSeries s;
  s.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    s.taus[i] = 0.1 * i;
    s.values[i] = v[i];
    s.sigma_re[i] = s.sigma_im[i] = sigma;
  }
  return s;
}

TEST(QualityMetrics, Definitions) {
  const auto ref = series_of({{1.0, 0.5}, {0.8, -0.2}, {0.3, 0.1}}, 0.0);
  auto same = ref;
  same.sigma_re.assign(3, 0.1);
  same.sigma_im.assign(3, 0.1);
  const auto q = quality_metrics(same, ref);
  EXPECT_EQ(q.chi2_re + q.chi2_im + q.nssd_re + q.nssd_im, 0.0);
  EXPECT_EQ(q.n_points, 3u);

  for (double r : {0.1, 0.25}) {
    auto scaled = same;
    for (auto& v : scaled.values) v *= 1.0 + r;
    const auto s = quality_metrics(scaled, ref, r);
    EXPECT_NEAR(s.nssd_re, 1.0, 1e-12);
    EXPECT_NEAR(s.nssd_im, 1.0, 1e-12);
  }
  auto off = same;
  off.values[1] += cplx(0.2, -0.1);
  const auto o = quality_metrics(off, ref);
  EXPECT_NEAR(o.chi2_re, 4.0, 1e-12);
  EXPECT_NEAR(o.chi2_im, 1.0, 1e-12);

  // Measured-curve denominator.
  const auto [re, im] = nssd(off, ref, 0.1, false);
  EXPECT_NEAR(re, 0.2 / (0.1 * std::sqrt(1.0 + 1.0 + 0.09)), 1e-12);
  EXPECT_GT(im, 0.0);
}

TEST(QualityMetrics, Rejections) {
  const auto ref = series_of({1.0, 0.5}, 0.0);
  EXPECT_THROW(quality_metrics(ref, ref), std::invalid_argument);
  auto shorter = series_of({1.0}, 0.1);
  EXPECT_THROW(quality_metrics(shorter, ref), std::invalid_argument);
  auto shifted = series_of({1.0, 0.5}, 0.1);
  shifted.taus[1] = 0.2;
  EXPECT_THROW(quality_metrics(shifted, ref), std::invalid_argument);
  EXPECT_THROW(nssd(ref, ref, 0.0), std::invalid_argument);
}

TEST(QualityMetrics, ChiSquaredCoverage) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> gauss;
  std::vector<cplx> truth;
  for (int i = 0; i < 20; ++i) truth.emplace_back(std::cos(0.3 * i), std::sin(0.3 * i));
  const auto ref = series_of(truth, 0.0);
  const double sigma = 0.05;
  int inside = 0;
  const int trials = 1000;
  for (int k = 0; k < trials; ++k) {
    auto s = series_of(truth, sigma);
    for (auto& v : s.values) v += cplx(sigma * gauss(rng), sigma * gauss(rng));
    const auto q = quality_metrics(s, ref);
    inside += q.chi2_re >= 6.0 && q.chi2_re <= 40.0;
  }
  EXPECT_GE(inside, 0.95 * trials);
}

}  // namespace
}  // namespace nucresp
