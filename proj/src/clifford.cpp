#include "stacz/clifford.hpp"

#include "stacz/errors.hpp"

#include <cmath>
#include <numbers>

namespace stacz {

namespace {

using enum GateKind;

Mat2 rotation(int axis, double angle) {
  Mat2 p;
  const cplx i(0.0, 1.0);
  if (axis == 1)
    p << 0, 1, 1, 0;
  else
    p << 0, -i, i, 0;
  return std::cos(angle / 2) * Mat2::Identity() - i * std::sin(angle / 2) * p;
}

void append(std::vector<GateOp>& seq, const std::vector<GateKind>& kinds, int qubit) {
  for (GateKind k : kinds) seq.push_back({k, qubit});
}

}  // namespace

std::string gate_name(const GateOp& op) {
  static const char* names[] = {"I", "X", "Y", "X/2", "-X/2", "Y/2", "-Y/2", "CZ"};
  std::string s = names[static_cast<int>(op.kind)];
  if (op.kind != CZ) s += op.qubit == 0 ? "_A" : "_B";
  return s;
}

Mat2 single_qubit_gate(GateKind kind) {
  constexpr double pi = std::numbers::pi;
  switch (kind) {
    case I: return Mat2::Identity();
    case X: return rotation(1, pi);
    case Y: return rotation(2, pi);
    case X2: return rotation(1, pi / 2);
    case mX2: return rotation(1, -pi / 2);
    case Y2: return rotation(2, pi / 2);
    case mY2: return rotation(2, -pi / 2);
    case CZ: break;
  }
  throw ConfigError("CZ is not a single-qubit gate");
}

Mat4 gate_unitary(const GateOp& op) {
  if (op.kind == CZ) return Eigen::Vector4cd(1, 1, 1, -1).asDiagonal();
  const Mat2 g = single_qubit_gate(op.kind);
  return op.qubit == 0 ? kron(g, Mat2::Identity()) : kron(Mat2::Identity(), g);
}

Mat4 sequence_unitary(const std::vector<GateOp>& seq) {
  Mat4 u = Mat4::Identity();
  for (const GateOp& op : seq) u = gate_unitary(op) * u;
  return u;
}

Mat4 canonicalize_phase(const Mat4& u) {
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      if (std::abs(u(r, c)) > 1e-6) return u * std::polar(1.0, -std::arg(u(r, c)));
  return u;
}

Fingerprint fingerprint(const Mat4& u) {
  const Mat4 c = canonicalize_phase(u);
  Fingerprint f{};
  for (int r = 0; r < 4; ++r)
    for (int k = 0; k < 4; ++k) {
      f[2 * (4 * r + k)] = std::llround(c(r, k).real() * 1e6);
      f[2 * (4 * r + k) + 1] = std::llround(c(r, k).imag() * 1e6);
    }
  return f;
}

std::size_t FingerprintHash::operator()(const Fingerprint& f) const noexcept {
  std::uint64_t h = 1469598103934665603ull;
  for (std::int64_t v : f) {
    h ^= static_cast<std::uint64_t>(v);
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

const std::array<std::vector<GateKind>, 24>& single_qubit_cliffords() {
  static const std::array<std::vector<GateKind>, 24> table = {{
      {I}, {X}, {Y}, {Y, X},
      {X2, Y2}, {X2, mY2}, {mX2, Y2}, {mX2, mY2},
      {Y2, X2}, {Y2, mX2}, {mY2, X2}, {mY2, mX2},
      {X2}, {mX2}, {Y2}, {mY2},
      {mX2, Y2, X2}, {mX2, mY2, X2},
      {X, Y2}, {X, mY2}, {Y, X2}, {Y, mX2},
      {X2, Y2, X2}, {mX2, Y2, mX2},
  }};
  return table;
}

const CliffordGroup& CliffordGroup::instance() {
  static const CliffordGroup group;
  return group;
}

CliffordGroup::CliffordGroup() {
  const auto& c1 = single_qubit_cliffords();
  // Single-qubit classes used after the entangling gates.
  const std::array<std::vector<GateKind>, 3> s1 = {{{I}, {Y2, X2}, {mX2, mY2}}};
  const GateOp cz{CZ, 0};

  auto add = [&](std::vector<GateOp> seq) {
    CliffordElement e;
    e.unitary = canonicalize_phase(sequence_unitary(seq));
    for (const GateOp& op : seq) (op.kind == CZ ? e.cz_count : e.single_qubit_count)++;
    e.sequence = std::move(seq);
    const auto [it, inserted] = lookup_.emplace(fingerprint(e.unitary), static_cast<int>(elements_.size()));
    if (inserted) elements_.push_back(std::move(e));
  };

  // Identity first, with an empty sequence.
  add({});

  for (const auto& a : c1)
    for (const auto& b : c1) {
      std::vector<GateOp> base;
      append(base, a, 0);
      append(base, b, 1);

      add(base);

      for (const auto& s : s1)
        for (const auto& t : s1) {
          std::vector<GateOp> cnot = base;
          cnot.push_back(cz);
          append(cnot, s, 0);
          append(cnot, t, 1);
          cnot.push_back({Y2, 1});
          add(std::move(cnot));

          std::vector<GateOp> iswap = base;
          iswap.push_back(cz);
          iswap.push_back({Y2, 0});
          iswap.push_back({mX2, 1});
          iswap.push_back(cz);
          append(iswap, s, 0);
          iswap.push_back({Y2, 0});
          append(iswap, t, 1);
          iswap.push_back({mX2, 1});
          add(std::move(iswap));
        }

      std::vector<GateOp> swap = base;
      swap.push_back(cz);
      swap.push_back({mY2, 0});
      swap.push_back({Y2, 1});
      swap.push_back(cz);
      swap.push_back({Y2, 0});
      swap.push_back({mY2, 1});
      swap.push_back(cz);
      swap.push_back({I, 0});
      swap.push_back({Y2, 1});
      add(std::move(swap));
    }

  if (elements_.size() != 11520)
    throw NumericalError("Clifford construction produced " + std::to_string(elements_.size()) +
                         " elements instead of 11520");
}

int CliffordGroup::find(const Mat4& u) const {
  const auto it = lookup_.find(fingerprint(u));
  return it == lookup_.end() ? -1 : it->second;
}

int CliffordGroup::compose(int first, int second) const {
  const int k = find(elements_.at(static_cast<std::size_t>(second)).unitary *
                     elements_.at(static_cast<std::size_t>(first)).unitary);
  if (k < 0) throw NumericalError("Clifford product not found in the group table");
  return k;
}

int CliffordGroup::inverse(int index) const {
  const int k = find(elements_.at(static_cast<std::size_t>(index)).unitary.adjoint());
  if (k < 0) throw NumericalError("Clifford inverse not found in the group table");
  return k;
}

double CliffordGroup::average_cz_count() const {
  double s = 0.0;
  for (const auto& e : elements_) s += e.cz_count;
  return s / static_cast<double>(elements_.size());
}

double CliffordGroup::average_single_qubit_count() const {
  double s = 0.0;
  for (const auto& e : elements_) s += e.single_qubit_count;
  return s / static_cast<double>(elements_.size());
}

}  // namespace stacz
