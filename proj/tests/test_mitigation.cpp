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

#include "nucresp/counts.hpp"
#include "nucresp/mitigation.hpp"
#include "nucresp/oracle.hpp"
#include "test_util.hpp"

namespace nucresp {
namespace {

TEST(Calibration, PerfectReadoutIsIdentity) {
  const auto c = calibrate_readout(NoiseModel::ideal(), 1000, 1);
  EXPECT_EQ(c.matrix, Eigen::Matrix2d::Identity());
  EXPECT_EQ(c.sigma_a(), 0.0);
}

TEST(Calibration, SymmetricFlip) {
  NoiseModel n;
  n.readout = {NoiseModel::flip_confusion(0.02, 0.02)};
  const auto c = calibrate_readout(n, 100000, 3);
  const double sigma = std::sqrt(0.02 * 0.98 / 1e5);
  EXPECT_NEAR(c.a(), 0.02, 3 * sigma);
  EXPECT_NEAR(c.b(), 0.02, 3 * sigma);
  EXPECT_NEAR(c.sigma_a(), sigma, 0.1 * sigma);
  for (int r = 0; r < 2; ++r) EXPECT_NEAR(c.matrix.row(r).sum(), 1.0, 1e-15);
}

TEST(Calibration, AsymmetricFlips) {
  NoiseModel n;
  n.readout = {NoiseModel::flip_confusion(0.01, 0.03)};
  const auto c = calibrate_readout(n, 100000, 4);
  EXPECT_NEAR(c.matrix(0, 0), 0.99, 4 * c.sigma(0, 0));
  EXPECT_NEAR(c.matrix(0, 1), 0.01, 4 * c.sigma(0, 1));
  EXPECT_NEAR(c.matrix(1, 0), 0.03, 4 * c.sigma(1, 0));
  EXPECT_NEAR(c.matrix(1, 1), 0.97, 4 * c.sigma(1, 1));
}

TEST(Calibration, SingularEstimateRejected) {
  NoiseModel n;
  n.readout = {NoiseModel::flip_confusion(1.0, 0.0)};
  EXPECT_THROW(calibrate_readout(n, 10, 1), std::invalid_argument);
}

TEST(ReadoutMitigation, IdentityConfusionIsPassThrough) {
  const ShotRecord r{1000, {{"0", 700}, {"1", 300}}};
  const auto raw = raw_estimate(r);
  const auto m = mitigate_readout(r, ConfusionEstimate::exact(Eigen::Matrix2d::Identity()));
  EXPECT_DOUBLE_EQ(m.value, raw.value);
  EXPECT_DOUBLE_EQ(m.sigma, raw.sigma);
  EXPECT_DOUBLE_EQ(raw.value, 0.4);
  EXPECT_DOUBLE_EQ(raw.sigma, std::sqrt((1 - 0.16) / 1000));
}

TEST(ReadoutMitigation, UnanimousShotsKeepPositiveError) {
  const auto e = raw_estimate(ShotRecord{50, {{"0", 50}}});
  EXPECT_EQ(e.value, 1.0);
  EXPECT_GT(e.sigma, 0.0);
  EXPECT_LT(e.sigma, raw_estimate(ShotRecord{50, {{"0", 49}, {"1", 1}}}).sigma);
}

TEST(ReadoutMitigation, SymmetricInverse) {
  const double p = 0.02;
  const auto m = mitigate_readout(0.5, 0.01, ConfusionEstimate::exact(NoiseModel::flip_confusion(p, p)));
  EXPECT_NEAR(m.value, 0.5 / (1 - 2 * p), 1e-15);
  EXPECT_NEAR(m.sigma, 0.01 / (1 - 2 * p), 1e-15);
}

TEST(ReadoutMitigation, ExactInExpectation) {
  for (double e : {-0.9, -0.2, 0.0, 0.35, 1.0}) {
    const Eigen::Matrix2d c = NoiseModel::flip_confusion(0.013, 0.041);
    const double p1 = reported_one_probability(e, c);
    const auto m = mitigate_readout(1.0 - 2.0 * p1, 0.0, ConfusionEstimate::exact(c));
    EXPECT_NEAR(m.value, e, 1e-12);
  }
}

TEST(ReadoutMitigation, PropagationMatchesFiniteDifferences) {
  ConfusionEstimate c;
  c.matrix = NoiseModel::flip_confusion(0.03, 0.05);
  c.sigma << 0.002, 0.002, 0.004, 0.004;
  const double m_obs = 0.4, s_obs = 0.01, h = 1e-7;
  auto value = [&](double mo, double a, double b) {
    ConfusionEstimate k = c;
    k.matrix = NoiseModel::flip_confusion(a, b);
    return mitigate_readout(mo, 0.0, k).value;
  };
  const double d_obs = (value(m_obs + h, 0.03, 0.05) - value(m_obs - h, 0.03, 0.05)) / (2 * h);
  const double d_a = (value(m_obs, 0.03 + h, 0.05) - value(m_obs, 0.03 - h, 0.05)) / (2 * h);
  const double d_b = (value(m_obs, 0.03, 0.05 + h) - value(m_obs, 0.03, 0.05 - h)) / (2 * h);
  const double expected = std::sqrt(std::pow(d_obs * s_obs, 2) + std::pow(d_a * 0.002, 2) + std::pow(d_b * 0.004, 2));
  EXPECT_NEAR(mitigate_readout(m_obs, s_obs, c).sigma, expected, 1e-7);
}

TEST(ReadoutMitigation, SigmaGrowsAndValuesAreNotClipped) {
  const auto c = ConfusionEstimate::exact(NoiseModel::flip_confusion(0.05, 0.05));
  const auto m = mitigate_readout(0.95, 0.01, c);
  EXPECT_GT(m.value, 1.0);
  EXPECT_GE(m.sigma, 0.01);
  EXPECT_THROW(mitigate_readout(0.1, 0.01, ConfusionEstimate::exact(NoiseModel::flip_confusion(0.5, 0.5))),
               std::invalid_argument);
}

TEST(ReadoutMitigation, FullPipelineOnKnownState) {
  Eigen::Matrix2cd rho;
  rho << 0.5, cplx(0.3, 0.1), cplx(0.3, -0.1), 0.5;
  NoiseModel noise;
  noise.readout = {NoiseModel::flip_confusion(0.02, 0.04)};
  const auto cal = calibrate_readout(noise, 200000, 9);
  const auto rec = sample_ancilla(rho, MeasureBasis::X, 200000, noise, 10, 0);
  const auto m = mitigate_readout(rec, cal);
  EXPECT_LT(std::abs(m.value - 0.6), 4 * m.sigma);
}

TEST(Folding, UnitaryAndCounts) {
  const ModelParams p;
  const Circuit c = correlator_circuit(TrotterOrdering::A2, 0.2, p, model::z({0}), model::z({0}), MeasureBasis::X);
  ASSERT_EQ(cnot_count(c), 6);
  EXPECT_EQ(fold_circuit(c, 1).gates().size(), c.gates().size());
  for (int s : {3, 5, 7}) {
    const Circuit f = fold_circuit(c, s);
    EXPECT_EQ(cnot_count(f), 6 * s);
    EXPECT_LT((circuit_unitary(f) - circuit_unitary(c)).norm(), 1e-12);
    EXPECT_EQ(f.layout(), c.layout());
  }
  EXPECT_THROW(fold_circuit(c, 2), std::invalid_argument);
  EXPECT_THROW(fold_circuit(c, 0), std::invalid_argument);
}

TEST(Folding, AttenuationCubesAtScaleThree) {
  const ModelParams p;
  const EigenSystem eig = diagonalize(build_qubit_hamiltonian(p));
  const StateVector start = StateVector(eig.ground_state()).tensor_above(StateVector(1));
  NoiseModel noise;
  noise.p2 = 0.01;
  const Circuit c = correlator_circuit(TrotterOrdering::B2, 0.05, p, model::z({0}), model::z({0}), MeasureBasis::X);
  const int wire = c.layout()[kAncilla];
  auto z = [&](const Circuit& k, bool noisy) {
    const auto r = noisy ? reduced_qubit(run_noisy(k, DensityMatrix(start), noise).matrix(), wire)
                         : reduced_qubit(run_ideal(k, start), wire);
    return pauli_expectation(r, MeasureBasis::Z);
  };
  const double ideal = z(c, false);
  const double f1 = z(c, true) / ideal, f3 = z(fold_circuit(c, 3), true) / ideal;
  EXPECT_NEAR(f3 / std::pow(f1, 3), 1.0, 0.05);
}

TEST(Zne, LinearDataRecoversIntercept) {
  std::vector<ScalePoint> pts;
  for (int s : {1, 3, 5}) pts.push_back({s, 0.8 - 0.07 * s, 0.01});
  const auto e = zne_extrapolate(pts, Extrapolant::Linear);
  EXPECT_NEAR(e.value, 0.8, 1e-12);
  // Covariance of the intercept for equal weights: sigma^2 sum x^2 / (n sum x^2 - (sum x)^2).
  EXPECT_NEAR(e.sigma, 0.01 * std::sqrt(35.0 / (3 * 35.0 - 81.0)), 1e-12);
}

TEST(Zne, TwoPointLinear) {
  const auto e = zne_extrapolate({{1, 0.7, 0.02}, {3, 0.5, 0.02}}, Extrapolant::Linear);
  EXPECT_NEAR(e.value, (3 * 0.7 - 0.5) / 2, 1e-12);
  EXPECT_NEAR(e.sigma, 0.02 * std::sqrt(9.0 + 1.0) / 2.0, 1e-12);
}

TEST(Zne, RichardsonIsExactForQuadratics) {
  std::vector<ScalePoint> pts;
  for (int s : {1, 3, 5}) pts.push_back({s, 0.9 - 0.05 * s + 0.004 * s * s, 0.0});
  EXPECT_NEAR(zne_extrapolate(pts, Extrapolant::Richardson2).value, 0.9, 1e-12);
  EXPECT_THROW(zne_extrapolate({pts[0], pts[1]}, Extrapolant::Richardson2), std::invalid_argument);
}

TEST(Zne, ExponentialDecay) {
  std::vector<ScalePoint> pts;
  for (int s : {1, 3, 5}) pts.push_back({s, -0.6 * std::exp(-0.1 * s), 0.0});
  EXPECT_NEAR(zne_extrapolate(pts, Extrapolant::Exponential).value, -0.6, 1e-12);
  EXPECT_THROW(zne_extrapolate({{1, 0.1, 0.0}, {3, -0.1, 0.0}}, Extrapolant::Exponential), std::invalid_argument);
}

TEST(Zne, ReducesBiasOnLinearSignals) {
  const double truth = 0.75;
  std::vector<ScalePoint> pts;
  for (int s : {1, 3}) pts.push_back({s, truth * (1.0 - 0.04 * s), 0.005});
  EXPECT_LT(std::abs(zne_extrapolate(pts, Extrapolant::Linear).value - truth), std::abs(pts[0].value - truth));
}

TEST(Zne, Errors) {
  EXPECT_THROW(zne_extrapolate({{1, 0.5, 0.1}}, Extrapolant::Linear), std::invalid_argument);
  EXPECT_THROW(zne_extrapolate({{1, 0.5, 0.0}, {3, 0.4, 0.0}, {5, 0.1, 0.0}}, Extrapolant::Linear), std::invalid_argument);
  EXPECT_THROW(zne_extrapolate({{1, 0.5, 0.1}, {3, 0.4, 0.0}}, Extrapolant::Linear), std::invalid_argument);
}

TEST(MitigationConfig, Validation) {
  MitigationConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.scales, (std::vector<int>{1, 3}));
  c.scales = {1, 2};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.scales = {3, 5};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.scales = {1, 3};
  c.extrapolant = Extrapolant::Richardson2;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.scales = {1, 3, 5};
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(parse_extrapolant("richardson2"), Extrapolant::Richardson2);
  EXPECT_THROW(parse_extrapolant("cubic"), std::invalid_argument);
}

}  // namespace
}  // namespace nucresp
