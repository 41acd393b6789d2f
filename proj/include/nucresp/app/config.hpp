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

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "nucresp/circuits.hpp"
#include "nucresp/error.hpp"
#include "nucresp/mitigation.hpp"
#include "nucresp/model.hpp"
#include "nucresp/noisy_sim.hpp"
#include "nucresp/parallel.hpp"

namespace nucresp::app {

enum class Mode { Correlator, Spectrum, Budget, Counts, Euclidean };

inline std::string to_string(Mode m) {
  switch (m) {
    case Mode::Correlator: return "correlator";
    case Mode::Spectrum: return "spectrum";
    case Mode::Budget: return "budget";
    case Mode::Counts: return "counts";
    default: return "euclidean";
  }
}

inline Mode parse_mode(const std::string& s) {
  if (s == "correlator") return Mode::Correlator;
  if (s == "spectrum") return Mode::Spectrum;
  if (s == "budget") return Mode::Budget;
  if (s == "counts") return Mode::Counts;
  if (s == "euclidean") return Mode::Euclidean;
  throw ConfigError("unknown mode: " + s);
}

struct TauGrid {
  double start = 0.0;
  double stop = 1.0;
  int points = 11;

  std::vector<double> values() const {
    std::vector<double> out(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
      out[static_cast<std::size_t>(i)] = points == 1 ? start : start + (stop - start) * i / (points - 1);
    return out;
  }
};

/// Everything a run needs. Built from an INI file; every field has a default except the seed.
struct ExperimentConfig {
  Mode mode = Mode::Correlator;
  std::optional<std::uint64_t> seed;
  std::string output_dir = "out";
  unsigned workers = 1;
  bool t_connectivity = true;  ///< route counts onto the T-shaped five-qubit layout

  ModelParams model;
  std::vector<MomentumVector> qs{{0, 1}};
  std::vector<TrotterOrdering> orderings{TrotterOrdering::A1, TrotterOrdering::A2, TrotterOrdering::B1,
                                         TrotterOrdering::B2};
  TauGrid taus;
  std::optional<std::uint64_t> shots = 100000;  ///< empty means exact expectations
  int trotter_steps = 1;
  double fidelity = 1.0;  ///< of the prepared state with the exact ground state

  NoiseModel noise = NoiseModel::defaults();
  MitigationConfig mitigation;
  double r = 0.1;
  bool nssd_on_reference = true;

  // spectrum
  std::string spectrum_operator;  ///< Pauli label; empty means the excitation of qs.front()
  std::string spectrum_source = "exact";
  double delta = 0.1;
  double delta_omega = 0.5;

  // budget
  double epsilon = 0.01;

  // euclidean
  TauGrid tau_e{0.0, 3.0, 31};
  std::vector<double> contamination{1e-3, 1e-2, 1e-1};

  void validate() const {
    auto need = [](bool ok, const std::string& msg) {
      if (!ok) throw ConfigError(msg);
    };
    need(seed.has_value(), "config: run.seed is required");
    need(!qs.empty(), "config: q list must not be empty");
    need(!orderings.empty(), "config: orderings must not be empty");
    need(taus.points >= 1 && tau_e.points >= 1, "config: grids need at least one point");
    need(!shots || *shots >= 1, "config: shots must be at least 1");
    need(trotter_steps >= 1, "config: trotter_steps must be at least 1");
    need(fidelity > 0.0 && fidelity <= 1.0, "config: fidelity must lie in (0, 1]");
    need(r > 0.0, "config: r must be positive");
    need(delta > 0.0 && delta_omega > 0.0, "config: spectral spacings must be positive");
    need(epsilon > 0.0, "config: epsilon must be positive");
    need(spectrum_source == "exact" || spectrum_source == "trotter", "config: spectrum.source must be exact or trotter");
    need(workers >= 1, "config: workers must be at least 1");
    try {
      model.validate();
      for (const auto& q : qs) q.validate();
      noise.validate();
      mitigation.validate();
      if (!spectrum_operator.empty()) {
        const auto p = PauliString::from_label(spectrum_operator);
        need(p.n_qubits() == kModelQubits, "config: spectrum.operator must have four characters");
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  }

  /// Canonical key=value dump; its hash identifies the run.
  std::string canonical() const {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "mode=" << to_string(mode) << "\nseed=" << seed.value_or(0) << "\nt_connectivity=" << t_connectivity
       << "\nt=" << model.t << "\nU=" << model.U << "\nV=" << model.V << "\ne_A=" << model.e_A << "\ne_B=" << model.e_B
       << "\nc3=" << model.c3() << "\nq=";
    for (const auto& q : qs) os << q.tag() << ',';
    os << "\norderings=";
    for (auto o : orderings) os << nucresp::to_string(o) << ',';
    os << "\ntau=" << taus.start << ',' << taus.stop << ',' << taus.points << "\nshots=" << (shots ? std::to_string(*shots) : "exact")
       << "\nsteps=" << trotter_steps << "\nfidelity=" << fidelity << "\np1=" << noise.p1 << "\np2=" << noise.p2
       << "\nreadout=" << noise.confusion(0)(0, 1) << ',' << noise.confusion(0)(1, 0) << "\nscales=";
    for (int s : mitigation.scales) os << s << ',';
    os << "\nextrapolant=" << nucresp::to_string(mitigation.extrapolant) << "\ncalibration_shots="
       << mitigation.readout_calibration_shots << "\nreadout_mitigation=" << mitigation.readout << "\nr=" << r
       << "\nnssd_on_reference=" << nssd_on_reference << "\nspectrum_operator=" << spectrum_operator
       << "\nspectrum_source=" << spectrum_source << "\ndelta=" << delta << "\ndelta_omega=" << delta_omega
       << "\nepsilon=" << epsilon << "\ntau_e=" << tau_e.start << ',' << tau_e.stop << ',' << tau_e.points
       << "\ncontamination=";
    for (double c : contamination) os << c << ',';
    os << '\n';
    return os.str();
  }

  std::string hash() const {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << fnv1a(canonical());
    return os.str();
  }
};

namespace detail {

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  boost::split(parts, s, boost::is_any_of(", "), boost::token_compress_on);
  std::erase_if(parts, [](const std::string& x) { return x.empty(); });
  return parts;
}

template <typename T>
T get(const boost::property_tree::ptree& pt, const std::string& key, T fallback) {
  const auto node = pt.get_child_optional(key);
  if (!node) return fallback;
  const auto v = node->get_value_optional<T>();
  if (!v) throw ConfigError("config: bad value for " + key + ": '" + node->data() + "'");
  return *v;
}

inline bool get_bool(const boost::property_tree::ptree& pt, const std::string& key, bool fallback) {
  auto v = pt.get_optional<std::string>(key);
  if (!v) return fallback;
  std::string s = boost::to_lower_copy(boost::trim_copy(*v));
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("config: bad boolean for " + key);
}

inline MomentumVector parse_q(const std::string& s) {
  if (s.size() != 2 || (s[0] != '0' && s[0] != '1') || (s[1] != '0' && s[1] != '1'))
    throw ConfigError("config: momentum must be written as two binary digits, got '" + s + "'");
  return {s[0] - '0', s[1] - '0'};
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size() || v < 0 || v != std::floor(v)) throw std::invalid_argument(s);
    return static_cast<std::uint64_t>(v);
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer for " + key + ": " + s);
  }
}

inline std::vector<double> parse_doubles(const std::string& key, const std::string& s) {
  std::vector<double> out;
  for (const auto& p : split_list(s)) {
    try {
      out.push_back(std::stod(p));
    } catch (const std::exception&) {
      throw ConfigError("config: bad number in " + key + ": " + p);
    }
  }
  return out;
}

}  // namespace detail

/// Reads an INI configuration. Unknown keys are rejected.
inline ExperimentConfig parse_config(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  static const std::map<std::string, std::vector<std::string>> kKnown{
      {"run", {"mode", "seed", "output", "workers", "t_connectivity"}},
      {"model", {"t", "U", "V", "e_A", "e_B", "three_body_coeff"}},
      {"correlator", {"q", "orderings", "tau_start", "tau_stop", "tau_points", "shots", "trotter_steps", "fidelity"}},
      {"noise", {"p1", "p2", "readout", "readout_0to1", "readout_1to0"}},
      {"mitigation", {"scales", "extrapolant", "calibration_shots", "readout"}},
      {"metrics", {"r", "nssd_denominator"}},
      {"spectrum", {"operator", "source", "delta", "delta_omega"}},
      {"budget", {"epsilon"}},
      {"euclidean", {"tau_start", "tau_stop", "tau_points", "contamination"}},
  };
  for (const auto& [section, body] : tree) {
    auto it = kKnown.find(section);
    if (it == kKnown.end()) throw ConfigError("config: unknown section [" + section + "]");
    for (const auto& [key, v] : body)
      if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
        throw ConfigError("config: unknown key " + section + "." + key);
  }

  ExperimentConfig c;
  using detail::get;
  c.mode = parse_mode(get<std::string>(tree, "run.mode", "correlator"));
  if (auto s = tree.get_optional<std::string>("run.seed")) c.seed = detail::parse_u64("run.seed", *s);
  c.output_dir = get<std::string>(tree, "run.output", c.output_dir);
  const int workers = get<int>(tree, "run.workers", 1);
  if (workers < 1) throw ConfigError("config: run.workers must be at least 1");
  c.workers = static_cast<unsigned>(workers);
  c.t_connectivity = detail::get_bool(tree, "run.t_connectivity", c.t_connectivity);

  c.model.t = get<double>(tree, "model.t", c.model.t);
  c.model.U = get<double>(tree, "model.U", c.model.U);
  c.model.V = get<double>(tree, "model.V", c.model.V);
  c.model.e_A = get<double>(tree, "model.e_A", c.model.e_A);
  c.model.e_B = get<double>(tree, "model.e_B", c.model.e_B);
  if (auto v = tree.get_optional<std::string>("model.three_body_coeff"))
    c.model.three_body_coeff = detail::parse_doubles("model.three_body_coeff", *v).at(0);

  if (auto v = tree.get_optional<std::string>("correlator.q")) {
    c.qs.clear();
    for (const auto& s : detail::split_list(*v)) c.qs.push_back(detail::parse_q(s));
  }
  if (auto v = tree.get_optional<std::string>("correlator.orderings")) {
    c.orderings.clear();
    try {
      for (const auto& s : detail::split_list(*v)) c.orderings.push_back(parse_ordering(s));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  }
  c.taus.start = get<double>(tree, "correlator.tau_start", c.taus.start);
  c.taus.stop = get<double>(tree, "correlator.tau_stop", c.taus.stop);
  c.taus.points = get<int>(tree, "correlator.tau_points", c.taus.points);
  if (auto v = tree.get_optional<std::string>("correlator.shots")) {
    const std::string s = boost::trim_copy(*v);
    if (s == "exact") c.shots.reset();
    else c.shots = detail::parse_u64("correlator.shots", s);
  }
  c.trotter_steps = get<int>(tree, "correlator.trotter_steps", c.trotter_steps);
  c.fidelity = get<double>(tree, "correlator.fidelity", c.fidelity);

  c.noise.p1 = get<double>(tree, "noise.p1", c.noise.p1);
  c.noise.p2 = get<double>(tree, "noise.p2", c.noise.p2);
  double f01 = c.noise.confusion(0)(0, 1), f10 = c.noise.confusion(0)(1, 0);
  if (auto v = tree.get_optional<double>("noise.readout")) f01 = f10 = *v;
  f01 = get<double>(tree, "noise.readout_0to1", f01);
  f10 = get<double>(tree, "noise.readout_1to0", f10);
  if (!(f01 >= 0.0 && f01 <= 1.0 && f10 >= 0.0 && f10 <= 1.0)) throw ConfigError("config: readout flips must lie in [0, 1]");
  c.noise.readout = {NoiseModel::flip_confusion(f01, f10)};

  if (auto v = tree.get_optional<std::string>("mitigation.scales")) {
    c.mitigation.scales.clear();
    for (double s : detail::parse_doubles("mitigation.scales", *v)) c.mitigation.scales.push_back(static_cast<int>(s));
  }
  if (auto v = tree.get_optional<std::string>("mitigation.extrapolant")) {
    try {
      c.mitigation.extrapolant = parse_extrapolant(boost::trim_copy(*v));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  }
  if (auto v = tree.get_optional<std::string>("mitigation.calibration_shots"))
    c.mitigation.readout_calibration_shots = detail::parse_u64("mitigation.calibration_shots", *v);
  c.mitigation.readout = detail::get_bool(tree, "mitigation.readout", c.mitigation.readout);

  c.r = get<double>(tree, "metrics.r", c.r);
  if (auto v = tree.get_optional<std::string>("metrics.nssd_denominator")) {
    if (*v == "reference") c.nssd_on_reference = true;
    else if (*v == "measured") c.nssd_on_reference = false;
    else throw ConfigError("config: metrics.nssd_denominator must be reference or measured");
  }

  c.spectrum_operator = get<std::string>(tree, "spectrum.operator", c.spectrum_operator);
  c.spectrum_source = get<std::string>(tree, "spectrum.source", c.spectrum_source);
  c.delta = get<double>(tree, "spectrum.delta", c.delta);
  c.delta_omega = get<double>(tree, "spectrum.delta_omega", c.delta_omega);

  c.epsilon = get<double>(tree, "budget.epsilon", c.epsilon);

  c.tau_e.start = get<double>(tree, "euclidean.tau_start", c.tau_e.start);
  c.tau_e.stop = get<double>(tree, "euclidean.tau_stop", c.tau_e.stop);
  c.tau_e.points = get<int>(tree, "euclidean.tau_points", c.tau_e.points);
  if (auto v = tree.get_optional<std::string>("euclidean.contamination"))
    c.contamination = detail::parse_doubles("euclidean.contamination", *v);
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  return parse_config(in);
}

}  // namespace nucresp::app
