#pragma once

#include "stacz/basis.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace stacz {

enum class GateKind : std::uint8_t { I, X, Y, X2, mX2, Y2, mY2, CZ };

/// One primitive: a single-qubit rotation on qubit 0 (Q_A) or 1 (Q_B), or CZ.
struct GateOp {
  GateKind kind = GateKind::I;
  int qubit = 0;  // ignored for CZ

  bool operator==(const GateOp&) const = default;
};

std::string gate_name(const GateOp& op);

/// Rotation exp(-i a P / 2) for the single-qubit kinds.
Mat2 single_qubit_gate(GateKind kind);
/// Gate on the two-qubit space, Q_A major.
Mat4 gate_unitary(const GateOp& op);
/// U_last ... U_first for a time-ordered sequence.
Mat4 sequence_unitary(const std::vector<GateOp>& seq);

/// Divides by the phase of the first entry with modulus > 1e-6 (row-major).
Mat4 canonicalize_phase(const Mat4& u);

using Fingerprint = std::array<std::int64_t, 32>;
/// Canonical entries rounded on a 1e-6 lattice (real and imaginary parts).
Fingerprint fingerprint(const Mat4& u);

struct FingerprintHash {
  std::size_t operator()(const Fingerprint& f) const noexcept;
};

struct CliffordElement {
  std::vector<GateOp> sequence;  // time order
  Mat4 unitary;                  // phase-canonical
  int cz_count = 0;
  int single_qubit_count = 0;
};

/// The 11520-element two-qubit Clifford group built from single-qubit
/// Clifford pairs times the identity, CNOT-like, iSWAP-like and SWAP-like
/// entangling classes. Element 0 is the identity with an empty sequence.
class CliffordGroup {
 public:
  static const CliffordGroup& instance();

  std::size_t size() const { return elements_.size(); }
  const CliffordElement& operator[](std::size_t i) const { return elements_[i]; }

  /// Index of the element equal to u up to global phase; -1 if absent.
  int find(const Mat4& u) const;
  /// Index of "first, then second".
  int compose(int first, int second) const;
  int inverse(int index) const;
  int identity() const { return 0; }

  double average_cz_count() const;
  double average_single_qubit_count() const;

 private:
  CliffordGroup();
  std::vector<CliffordElement> elements_;
  std::unordered_map<Fingerprint, int, FingerprintHash> lookup_;
};

/// The 24 single-qubit Cliffords as primitive sequences ({I} for identity).
const std::array<std::vector<GateKind>, 24>& single_qubit_cliffords();

}  // namespace stacz
