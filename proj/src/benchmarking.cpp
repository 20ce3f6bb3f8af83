#include "stacz/benchmarking.hpp"

#include "stacz/errors.hpp"
#include "stacz/least_squares.hpp"
#include "stacz/parallel.hpp"
#include "stacz/tomography.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <set>

namespace stacz {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

Mat4 two_qubit_depolarize(const Mat4& rho, double d) {
  if (d == 0.0) return rho;
  return (1.0 - d) * rho + (0.25 * d * rho.trace()) * Mat4::Identity();
}

RBRun run_rb(const CliffordGroup& group, const NoiseModel& noise, const Superop* interleave,
             const RBOptions& opt) {
  noise.validate();
  if (opt.lengths.empty()) throw ConfigError("rb.lengths must be non-empty");
  if (opt.k < 1) throw ConfigError("rb.k must be >= 1");
  if (opt.shots < 0) throw ConfigError("shots must be >= 0");
  for (int m : opt.lengths)
    if (m < 0) throw ConfigError("rb.lengths must be non-negative");

  const int cz_index = interleave ? group.find(Eigen::Vector4cd(1, 1, 1, -1).asDiagonal()) : -1;
  if (interleave && cz_index < 0) throw NumericalError("CZ is missing from the Clifford table");

  const std::size_t nl = opt.lengths.size();
  std::vector<double> samples(nl * static_cast<std::size_t>(opt.k));
  parallel_for(samples.size(), opt.threads, [&](std::size_t task) {
    const std::size_t li = task / static_cast<std::size_t>(opt.k);
    const int draw = static_cast<int>(task % static_cast<std::size_t>(opt.k));
    std::mt19937_64 rng(rb_stream_seed(opt.seed, li, draw, opt.k));
    std::uniform_int_distribution<int> pick(0, static_cast<int>(group.size()) - 1);

    Mat4 rho = Mat4::Zero();
    rho(0, 0) = 1.0;
    int net = group.identity();
    for (int i = 0; i < opt.lengths[li]; ++i) {
      const int c = pick(rng);
      rho = apply_clifford(group[static_cast<std::size_t>(c)], noise, rho);
      net = group.compose(net, c);
      if (interleave) {
        rho = stacz::apply(*interleave, rho);
        net = group.compose(net, cz_index);
      }
    }
    rho = apply_clifford(group[static_cast<std::size_t>(group.inverse(net))], noise, rho);
    double p = std::clamp(rho(0, 0).real(), 0.0, 1.0);
    if (opt.shots > 0) p = std::binomial_distribution<int>(opt.shots, p)(rng) / static_cast<double>(opt.shots);
    samples[task] = p;
  });

  RBRun run;
  run.lengths = opt.lengths;
  run.k = opt.k;
  run.seed = opt.seed;
  run.shots = opt.shots;
  run.interleaved = interleave != nullptr;
  for (std::size_t li = 0; li < nl; ++li) {
    const auto first = samples.begin() + static_cast<std::ptrdiff_t>(li * static_cast<std::size_t>(opt.k));
    const auto last = first + opt.k;
    const double mean = std::accumulate(first, last, 0.0) / opt.k;
    double var = 0.0;
    for (auto it = first; it != last; ++it) var += (*it - mean) * (*it - mean);
    run.survival.push_back(mean);
    run.stddev.push_back(opt.k > 1 ? std::sqrt(var / (opt.k - 1)) : 0.0);
  }
  return run;
}

}  // namespace

void NoiseModel::validate() const {
  auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!in_unit(single_qubit_depolarizing)) throw ConfigError("single-qubit depolarizing must lie in [0, 1]");
  if (!in_unit(clifford_depolarizing)) throw ConfigError("Clifford depolarizing must lie in [0, 1]");
}

Mat4 single_qubit_depolarize(const Mat4& rho, int qubit, double d) {
  if (d == 0.0) return rho;
  // (1 - d) rho + d Tr_q(rho) (x) I/2 = (1 - 3d/4) rho + (d/4) sum_P P rho P.
  Mat4 twirl = Mat4::Zero();
  for (int k = 1; k < 4; ++k) {
    const Mat4 p = qubit == 0 ? kron(pauli(k), Mat2::Identity()) : kron(Mat2::Identity(), pauli(k));
    twirl += p * rho * p;
  }
  return (1.0 - 0.75 * d) * rho + 0.25 * d * twirl;
}

Mat4 apply_clifford(const CliffordElement& c, const NoiseModel& noise, const Mat4& rho) {
  Mat4 out = rho;
  for (const GateOp& op : c.sequence) {
    if (op.kind == GateKind::CZ && noise.cz) {
      out = stacz::apply(*noise.cz, out);
      continue;
    }
    const Mat4 u = gate_unitary(op);
    out = u * out * u.adjoint();
    if (op.kind != GateKind::CZ) out = single_qubit_depolarize(out, op.qubit, noise.single_qubit_depolarizing);
  }
  return two_qubit_depolarize(out, noise.clifford_depolarizing);
}

std::uint64_t rb_stream_seed(std::uint64_t seed, std::size_t length_index, int draw, int k) {
  const std::uint64_t task = static_cast<std::uint64_t>(length_index) * static_cast<std::uint64_t>(k) +
                             static_cast<std::uint64_t>(draw) + 1;
  return splitmix64(seed + 0x9E3779B97F4A7C15ull * task);
}

RBRun rb_reference(const CliffordGroup& group, const NoiseModel& noise, const RBOptions& options) {
  return run_rb(group, noise, nullptr, options);
}

RBRun rb_interleaved(const CliffordGroup& group, const NoiseModel& noise, const Superop& cz_channel,
                     const RBOptions& options) {
  return run_rb(group, noise, &cz_channel, options);
}

double PowerLawFit::p_sigma() const { return std::sqrt(std::max(0.0, covariance(2, 2))); }

PowerLawFit fit_power_law(const std::vector<int>& lengths, const std::vector<double>& survival) {
  if (lengths.size() != survival.size()) throw FitError("lengths and survivals differ in size");
  if (std::set<int>(lengths.begin(), lengths.end()).size() < 4)
    throw FitError("power-law fit needs at least 4 distinct lengths");
  const std::size_t n = lengths.size();

  // Initial guess: A0 = P(m_min) - 1/4, B0 = 1/4, p from log-linear regression of P - 1/4.
  const std::size_t imin = static_cast<std::size_t>(std::min_element(lengths.begin(), lengths.end()) - lengths.begin());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int used = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = survival[i] - 0.25;
    if (y <= 1e-12) continue;
    sx += lengths[i];
    sy += std::log(y);
    sxx += double(lengths[i]) * lengths[i];
    sxy += lengths[i] * std::log(y);
    ++used;
  }
  double p0 = 0.99;
  if (used >= 2 && used * sxx - sx * sx > 0.0)
    p0 = std::exp((used * sxy - sx * sy) / (used * sxx - sx * sx));
  p0 = std::clamp(p0, 1e-6, 1.0);

  Eigen::VectorXd x0(3);
  x0 << survival[imin] - 0.25, 0.25, p0;
  auto residuals = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd r(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
      r(static_cast<Eigen::Index>(i)) = x(0) * std::pow(x(2), lengths[i]) + x(1) - survival[i];
    return r;
  };
  LeastSquaresOptions opts;
  const double inf = std::numeric_limits<double>::infinity();
  opts.lower = Eigen::Vector3d(-inf, 0.0, 1e-9);
  opts.upper = Eigen::Vector3d(inf, 1.0, 1.0);
  const LeastSquaresResult r = levenberg_marquardt(residuals, x0, opts);
  if (!r.converged || !r.params.allFinite()) throw FitError("power-law fit did not converge");
  PowerLawFit fit;
  fit.a0 = r.params(0);
  fit.b0 = r.params(1);
  fit.p = r.params(2);
  fit.covariance = r.covariance;
  return fit;
}

PowerLawFit fit_power_law(const RBRun& run) { return fit_power_law(run.lengths, run.survival); }

double reference_error(double p_ref) { return 0.75 * (1.0 - p_ref); }

ErrorDecomposition error_decomposition(double r_ref, double r_sq, double n_sq, double n_cz) {
  if (r_ref < 0.0 || r_ref > 1.0 || r_sq < 0.0 || r_sq > 1.0)
    throw ConfigError("error rates must lie in [0, 1]");
  if (!(n_cz > 0.0)) throw ConfigError("CZ count per Clifford must be positive");
  ErrorDecomposition d;
  d.r_cz = (r_ref - n_sq * r_sq) / n_cz;
  if (d.r_cz < 0.0) {
    d.consistent = false;
    std::cerr << "warning: negative CZ error " << d.r_cz << "; single-qubit errors exceed the reference error\n";
  }
  return d;
}

double interleaved_fidelity(double p_cz, double p_ref) {
  if (!(p_ref > 0.0) || p_ref > 1.0) throw ConfigError("p_ref must lie in (0, 1]");
  if (p_cz < 0.0 || p_cz > p_ref * (1.0 + 1e-9)) throw ConfigError("p_cz must lie in [0, p_ref]");
  return 1.0 - 0.75 * (1.0 - p_cz / p_ref);
}

void write_rb_json(std::ostream& os, const RBRun& run) {
  nlohmann::json j;
  j["lengths"] = run.lengths;
  j["survival"] = run.survival;
  j["stddev"] = run.stddev;
  j["k"] = run.k;
  j["seed"] = run.seed;
  j["shots"] = run.shots;
  j["interleaved"] = run.interleaved;
  if (run.fit) {
    j["fit"] = {{"A0", run.fit->a0}, {"B0", run.fit->b0}, {"p", run.fit->p}, {"p_sigma", run.fit->p_sigma()}};
    nlohmann::json cov = nlohmann::json::array();
    for (int r = 0; r < 3; ++r) cov.push_back({run.fit->covariance(r, 0), run.fit->covariance(r, 1), run.fit->covariance(r, 2)});
    j["fit"]["covariance"] = cov;
  } else {
    j["fit"] = nullptr;
  }
  os << j.dump(2) << '\n';
}

void write_rb_csv(std::ostream& os, const RBRun& run) {
  os << "m,mean,std\n" << std::setprecision(15);
  for (std::size_t i = 0; i < run.lengths.size(); ++i)
    os << run.lengths[i] << ',' << run.survival[i] << ',' << run.stddev[i] << '\n';
}

}  // namespace stacz
