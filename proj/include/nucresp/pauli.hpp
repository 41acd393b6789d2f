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
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nucresp/error.hpp"
#include "nucresp/linalg.hpp"
#include "nucresp/state.hpp"

namespace nucresp {

inline constexpr int kMaxPauliQubits = 64;
inline constexpr int kMaxDenseQubits = 12;
inline constexpr double kCoeffTolerance = 1e-14;

/// Tensor product of single-qubit Paulis times a phase i^k.
///
/// Qubit j carries X if bit j of x_mask is set, Z if bit j of z_mask is set
/// and Y if both are set. Label character j is qubit j.
class PauliString {
 public:
  PauliString() = default;

  explicit PauliString(int n_qubits, std::uint64_t x = 0, std::uint64_t z = 0, int phase = 0)
      : n_(n_qubits), x_(x), z_(z), phase_(((phase % 4) + 4) % 4) {
    detail::require(n_qubits >= 0 && n_qubits <= kMaxPauliQubits, "PauliString: bad qubit count");
    const std::uint64_t mask = n_qubits == 64 ? ~0ULL : ((1ULL << n_qubits) - 1);
    detail::require((x & ~mask) == 0 && (z & ~mask) == 0, "PauliString: mask exceeds qubit count");
  }

  /// Parses labels such as "ZIIZ", optionally prefixed by +, -, +i or -i.
  static PauliString from_label(std::string_view label) {
    int phase = 0;
    if (label.starts_with("+i") || label.starts_with("+j")) { phase = 1; label.remove_prefix(2); }
    else if (label.starts_with("-i") || label.starts_with("-j")) { phase = 3; label.remove_prefix(2); }
    else if (label.starts_with("i") || label.starts_with("j")) { phase = 1; label.remove_prefix(1); }
    else if (label.starts_with("+")) { label.remove_prefix(1); }
    else if (label.starts_with("-")) { phase = 2; label.remove_prefix(1); }
    const int n = static_cast<int>(label.size());
    detail::require(n <= kMaxPauliQubits, "PauliString: label too long");
    std::uint64_t x = 0, z = 0;
    for (int j = 0; j < n; ++j) {
      switch (label[j]) {
        case 'I': case '_': break;
        case 'X': x |= 1ULL << j; break;
        case 'Y': x |= 1ULL << j; z |= 1ULL << j; break;
        case 'Z': z |= 1ULL << j; break;
        default: throw std::invalid_argument("PauliString: bad label character");
      }
    }
    return PauliString(n, x, z, phase);
  }

  static PauliString single(int n_qubits, int qubit, char kind) {
    detail::require(qubit >= 0 && qubit < n_qubits, "PauliString: qubit out of range");
    const std::uint64_t b = 1ULL << qubit;
    switch (kind) {
      case 'I': return PauliString(n_qubits);
      case 'X': return PauliString(n_qubits, b, 0);
      case 'Y': return PauliString(n_qubits, b, b);
      case 'Z': return PauliString(n_qubits, 0, b);
      default: throw std::invalid_argument("PauliString: bad Pauli kind");
    }
  }

  /// Product of Z on the listed qubits.
  static PauliString z_string(int n_qubits, std::initializer_list<int> qubits) {
    std::uint64_t z = 0;
    for (int q : qubits) {
      detail::require(q >= 0 && q < n_qubits, "PauliString: qubit out of range");
      z |= 1ULL << q;
    }
    return PauliString(n_qubits, 0, z);
  }

  int n_qubits() const { return n_; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }
  /// Exponent k of the phase i^k.
  int phase() const { return phase_; }
  cplx phase_value() const { return ipow(phase_); }

  bool is_identity() const { return x_ == 0 && z_ == 0 && phase_ == 0; }
  bool is_diagonal() const { return x_ == 0; }
  int weight() const { return popcount(x_ | z_); }
  std::uint64_t support() const { return x_ | z_; }

  char pauli_at(int q) const {
    const bool x = (x_ >> q) & 1U, z = (z_ >> q) & 1U;
    return x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
  }

  /// Label without the phase prefix.
  std::string label() const {
    std::string s(static_cast<std::size_t>(n_), 'I');
    for (int j = 0; j < n_; ++j) s[static_cast<std::size_t>(j)] = pauli_at(j);
    return s;
  }

  /// Same string with phase +1.
  PauliString unsigned_part() const { return PauliString(n_, x_, z_, 0); }

  bool commutes_with(const PauliString& o) const {
    return ((popcount(x_ & o.z_) + popcount(z_ & o.x_)) & 1) == 0;
  }

  /// Places qubit j at position j + offset inside an n_total register.
  PauliString embedded(int n_total, int offset) const {
    detail::require(offset >= 0 && n_ + offset <= n_total, "PauliString: embedding out of range");
    return PauliString(n_total, x_ << offset, z_ << offset, phase_);
  }

  /// Qubit j moves to perm[j].
  PauliString permuted(const std::vector<int>& perm) const {
    detail::require(static_cast<int>(perm.size()) == n_, "PauliString: permutation size mismatch");
    std::uint64_t x = 0, z = 0;
    for (int j = 0; j < n_; ++j) {
      if ((x_ >> j) & 1U) x |= 1ULL << perm[static_cast<std::size_t>(j)];
      if ((z_ >> j) & 1U) z |= 1ULL << perm[static_cast<std::size_t>(j)];
    }
    return PauliString(n_, x, z, phase_);
  }

  friend bool operator==(const PauliString&, const PauliString&) = default;

  friend std::ostream& operator<<(std::ostream& os, const PauliString& p) {
    static constexpr const char* kPrefix[] = {"+", "+i", "-", "-i"};
    return os << kPrefix[p.phase_] << p.label();
  }

 private:
  int n_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
  int phase_ = 0;
};

/// Exact product a*b including the phase.
inline PauliString multiply(const PauliString& a, const PauliString& b) {
  detail::require(a.n_qubits() == b.n_qubits(), "multiply: qubit count mismatch");
  // Write each factor as i^(p + |x&z|) X^x Z^z and move Z^z1 past X^x2.
  const std::uint64_t x = a.x_mask() ^ b.x_mask();
  const std::uint64_t z = a.z_mask() ^ b.z_mask();
  const int k = a.phase() + b.phase() + popcount(a.x_mask() & a.z_mask()) +
                popcount(b.x_mask() & b.z_mask()) + 2 * popcount(a.z_mask() & b.x_mask()) -
                popcount(x & z);
  return PauliString(a.n_qubits(), x, z, k);
}

inline PauliString operator*(const PauliString& a, const PauliString& b) { return multiply(a, b); }

/// Weighted sum of Pauli strings with phases folded into the coefficients.
class QubitOperator {
 public:
  using Key = std::pair<std::uint64_t, std::uint64_t>;  // (x_mask, z_mask)

  QubitOperator() = default;
  explicit QubitOperator(int n_qubits) : n_(n_qubits) {
    detail::require(n_qubits >= 0 && n_qubits <= kMaxPauliQubits, "QubitOperator: bad qubit count");
  }
  QubitOperator(const PauliString& p, cplx coeff = 1.0) : n_(p.n_qubits()) { add(p, coeff); }

  static QubitOperator identity(int n_qubits, cplx coeff = 1.0) {
    return QubitOperator(PauliString(n_qubits), coeff);
  }

  int n_qubits() const { return n_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const std::map<Key, cplx>& terms() const { return terms_; }

  /// Terms as (unit-phase string, coefficient) pairs in canonical order.
  std::vector<std::pair<PauliString, cplx>> term_list() const {
    std::vector<std::pair<PauliString, cplx>> out;
    out.reserve(terms_.size());
    for (const auto& [k, c] : terms_) out.emplace_back(PauliString(n_, k.first, k.second), c);
    return out;
  }

  QubitOperator& add(const PauliString& p, cplx coeff) {
    detail::require(p.n_qubits() == n_, "QubitOperator: qubit count mismatch");
    const Key key{p.x_mask(), p.z_mask()};
    const cplx c = coeff * p.phase_value();
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      if (std::abs(c) >= kCoeffTolerance) terms_.emplace(key, c);
    } else {
      it->second += c;
      if (std::abs(it->second) < kCoeffTolerance) terms_.erase(it);
    }
    return *this;
  }

  cplx coefficient(const PauliString& p) const {
    auto it = terms_.find({p.x_mask(), p.z_mask()});
    return it == terms_.end() ? cplx(0.0) : it->second / p.phase_value();
  }

  bool is_hermitian(double tol = 1e-12) const {
    for (const auto& [k, c] : terms_)
      if (std::abs(c.imag()) > tol) return false;
    return true;
  }

  bool is_diagonal() const {
    for (const auto& [k, c] : terms_)
      if (k.first != 0) return false;
    return true;
  }

  /// Sum of |coefficients|.
  double one_norm() const {
    double s = 0.0;
    for (const auto& [k, c] : terms_) s += std::abs(c);
    return s;
  }

  QubitOperator embedded(int n_total, int offset) const {
    QubitOperator out(n_total);
    for (const auto& [p, c] : term_list()) out.add(p.embedded(n_total, offset), c);
    return out;
  }

  QubitOperator permuted(const std::vector<int>& perm) const {
    QubitOperator out(n_);
    for (const auto& [p, c] : term_list()) out.add(p.permuted(perm), c);
    return out;
  }

  QubitOperator& operator+=(const QubitOperator& o) {
    detail::require(o.n_ == n_, "QubitOperator: qubit count mismatch");
    for (const auto& [p, c] : o.term_list()) add(p, c);
    return *this;
  }
  QubitOperator& operator*=(cplx s) {
    QubitOperator out(n_);
    for (const auto& [p, c] : term_list()) out.add(p, c * s);
    return *this = std::move(out);
  }

  friend QubitOperator operator+(QubitOperator a, const QubitOperator& b) { return a += b; }
  friend QubitOperator operator-(QubitOperator a, const QubitOperator& b) {
    QubitOperator nb = b;
    nb *= -1.0;
    return a += nb;
  }
  friend QubitOperator operator*(QubitOperator a, cplx s) { return a *= s; }
  friend QubitOperator operator*(cplx s, QubitOperator a) { return a *= s; }

  friend QubitOperator operator*(const QubitOperator& a, const QubitOperator& b) {
    detail::require(a.n_ == b.n_, "QubitOperator: qubit count mismatch");
    QubitOperator out(a.n_);
    for (const auto& [pa, ca] : a.term_list())
      for (const auto& [pb, cb] : b.term_list()) out.add(multiply(pa, pb), ca * cb);
    return out;
  }

  /// Exact equality of the stored term maps within tol.
  bool approx_equal(const QubitOperator& o, double tol = 1e-12) const {
    if (n_ != o.n_) return false;
    QubitOperator d = *this - o;
    for (const auto& [k, c] : d.terms_)
      if (std::abs(c) > tol) return false;
    return true;
  }

  /// Text form: one `re im LABEL` line per term.
  std::string to_text() const {
    std::ostringstream os;
    os.precision(17);
    for (const auto& [p, c] : term_list()) os << c.real() << ' ' << c.imag() << ' ' << p.label() << '\n';
    return os.str();
  }

  static QubitOperator from_text(std::istream& in) {
    QubitOperator out;
    bool sized = false;
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      std::istringstream ls(line);
      double re = 0.0, im = 0.0;
      std::string label;
      if (!(ls >> re)) continue;
      if (!(ls >> im >> label)) throw std::invalid_argument("QubitOperator: malformed term line");
      PauliString p = PauliString::from_label(label);
      if (!sized) {
        out = QubitOperator(p.n_qubits());
        sized = true;
      }
      detail::require(p.n_qubits() == out.n_, "QubitOperator: inconsistent label lengths");
      out.add(p, cplx(re, im));
    }
    return out;
  }

  static QubitOperator from_text(const std::string& text) {
    std::istringstream in(text);
    return from_text(in);
  }

 private:
  int n_ = 0;
  std::map<Key, cplx> terms_;
};

inline QubitOperator operator*(const PauliString& p, cplx c) { return QubitOperator(p, c); }
inline QubitOperator operator*(cplx c, const PauliString& p) { return QubitOperator(p, c); }

namespace detail {

inline void check_dense_size(int n) {
  require(n <= kMaxDenseQubits, "dense lowering limited to 12 qubits");
}

/// Accumulates coeff * P |v> into out.
inline void apply_term(std::uint64_t x, std::uint64_t z, cplx coeff, const CVector& v, CVector& out) {
  const cplx c = coeff * ipow(popcount(x & z));
  const auto dim = static_cast<std::uint64_t>(v.size());
  for (std::uint64_t b = 0; b < dim; ++b) {
    const double sign = (popcount(z & b) & 1) ? -1.0 : 1.0;
    out(static_cast<Eigen::Index>(b ^ x)) += c * sign * v(static_cast<Eigen::Index>(b));
  }
}

}  // namespace detail

inline CMatrix to_matrix(const QubitOperator& op) {
  detail::check_dense_size(op.n_qubits());
  const auto dim = Eigen::Index{1} << op.n_qubits();
  CMatrix m = CMatrix::Zero(dim, dim);
  for (const auto& [k, coeff] : op.terms()) {
    const auto [x, z] = k;
    const cplx c = coeff * ipow(popcount(x & z));
    for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(dim); ++b) {
      const double sign = (popcount(z & b) & 1) ? -1.0 : 1.0;
      m(static_cast<Eigen::Index>(b ^ x), static_cast<Eigen::Index>(b)) += c * sign;
    }
  }
  return m;
}

inline CMatrix to_matrix(const PauliString& p) { return to_matrix(QubitOperator(p)); }

/// op |v> without forming the dense matrix.
inline CVector apply(const QubitOperator& op, const CVector& v) {
  detail::require(v.size() == (Eigen::Index{1} << op.n_qubits()), "apply: dimension mismatch");
  CVector out = CVector::Zero(v.size());
  for (const auto& [k, c] : op.terms()) detail::apply_term(k.first, k.second, c, v, out);
  return out;
}

inline cplx expectation(const StateVector& state, const QubitOperator& op) {
  detail::require(state.n_qubits() == op.n_qubits(), "expectation: dimension mismatch");
  detail::require(std::abs(state.norm() - 1.0) <= 1e-10, "expectation: state is not normalized");
  return state.amplitudes().dot(apply(op, state.amplitudes()));
}

}  // namespace nucresp

template <>
struct std::hash<nucresp::PauliString> {
  std::size_t operator()(const nucresp::PauliString& p) const noexcept {
    std::size_t h = std::hash<std::uint64_t>{}(p.x_mask());
    h ^= std::hash<std::uint64_t>{}(p.z_mask()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h ^ (static_cast<std::size_t>(p.phase()) << 1) ^ static_cast<std::size_t>(p.n_qubits());
  }
};
