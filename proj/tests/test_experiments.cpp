#include "fixtures.hpp"
#include "stacz/errors.hpp"
#include "stacz/experiments.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace stacz;
using stacz::test::kPi;

TEST_CASE("chevron probabilities") {
  const DeviceParams p = default_device();
  const double wres = resonance_frequency(p);
  const std::vector<double> times = default_chevron_times();
  CHECK(times.size() == 251);
  CHECK(times.back() == doctest::Approx(500.0));

  SUBCASE("resonant column follows cos^2(sqrt2 g t) in the two-level model") {
    const std::vector<double> w = {wres};
    const ChevronScan s = swap_spectroscopy(p, w, times, SwapModel::subspace);
    for (std::size_t c = 0; c < times.size(); ++c)
      CHECK(s.p11(0, static_cast<Eigen::Index>(c)) ==
            doctest::Approx(std::pow(std::cos(std::sqrt(2.0) * p.g * times[c]), 2)).epsilon(1e-10));
  }
  SUBCASE("far detuning suppresses the swap") {
    const std::vector<double> w = {wres + mhz_to_rad_per_ns(800.0)};
    const ChevronScan s = swap_spectroscopy(p, w, times);
    CHECK(s.p11.minCoeff() > 0.99);
  }
  SUBCASE("symmetry about resonance in the two-level model") {
    const std::vector<double> w = {wres - mhz_to_rad_per_ns(17.0), wres + mhz_to_rad_per_ns(17.0)};
    const ChevronScan sub = swap_spectroscopy(p, w, times, SwapModel::subspace);
    CHECK((sub.p11.row(0) - sub.p11.row(1)).cwiseAbs().maxCoeff() < 1e-6);
    const ChevronScan full = swap_spectroscopy(p, w, times, SwapModel::full);
    MESSAGE("nine-level asymmetry " << (full.p11.row(0) - full.p11.row(1)).cwiseAbs().maxCoeff());
  }
  SUBCASE("probabilities lie in [0, 1] and threads do not change results") {
    const auto w = default_chevron_frequencies(p);
    CHECK(w.size() == 41);
    const ChevronScan a = swap_spectroscopy(p, w, times, SwapModel::full, 1);
    const ChevronScan b = swap_spectroscopy(p, w, times, SwapModel::full, 3);
    CHECK(a.p11.minCoeff() >= 0.0);
    CHECK(a.p11.maxCoeff() <= 1.0);
    CHECK(a.p11 == b.p11);
  }
}

TEST_CASE("swap frequency extraction") {
  const double dt = 2.0;
  std::vector<double> trace(251);
  const double f = mhz_to_rad_per_ns(26.0);
  for (std::size_t k = 0; k < trace.size(); ++k) trace[k] = std::cos(f * dt * k);
  const double est = extract_swap_frequency(trace, dt);
  CHECK(std::abs(est - f) <= 0.5 * swap_frequency_bin_width(trace.size(), dt));

  const DeviceParams p = default_device();
  const std::vector<double> w = {resonance_frequency(p)};
  const ChevronScan s = swap_spectroscopy(p, w, default_chevron_times(), SwapModel::subspace);
  std::vector<double> row(s.p11.cols());
  for (Eigen::Index c = 0; c < s.p11.cols(); ++c) row[c] = s.p11(0, c);
  const double swap = extract_swap_frequency(row, 2.0);
  CHECK(std::abs(swap - 2 * std::sqrt(2.0) * p.g) <= swap_frequency_bin_width(row.size(), 2.0));
  CHECK(rad_per_ns_to_mhz(swap) == doctest::Approx(25.99).epsilon(0.01));

  std::vector<double> flat(100, 0.3);
  CHECK_THROWS_AS(extract_swap_frequency(flat, 1.0), FitError);
  std::vector<double> few(20, 0.0);
  CHECK_THROWS_AS(extract_swap_frequency(few, 1.0), FitError);
  std::vector<double> slow(100);
  for (std::size_t k = 0; k < slow.size(); ++k) slow[k] = std::cos(0.01 * k);
  CHECK_THROWS_AS(extract_swap_frequency(slow, 1.0), FitError);
}

TEST_CASE("coupling fit closes the loop") {
  const DeviceParams p = default_device();
  for (SwapModel m : {SwapModel::subspace, SwapModel::full}) {
    const ChevronScan s = swap_spectroscopy(p, default_chevron_frequencies(p), default_chevron_times(), m);
    const CouplingFit fit = fit_coupling(s);
    CHECK(std::abs(fit.g / p.g - 1.0) < 0.01);
    CHECK(std::abs(rad_per_ns_to_mhz(fit.omega_res - resonance_frequency(p))) < 0.5);
    MESSAGE("g/2pi = " << rad_per_ns_to_mhz(fit.g) << " MHz, w_res offset = "
                       << rad_per_ns_to_mhz(fit.omega_res - resonance_frequency(p)) << " MHz");
  }
  const std::vector<double> one = {resonance_frequency(p)};
  CHECK_THROWS_AS(fit_coupling(swap_spectroscopy(p, one, default_chevron_times())), FitError);
  const std::vector<double> one_side = {resonance_frequency(p) + 0.1, resonance_frequency(p) + 0.2,
                                        resonance_frequency(p) + 0.3};
  CHECK_THROWS_AS(fit_coupling(swap_spectroscopy(p, one_side, default_chevron_times())), FitError);
}

TEST_CASE("cosine phase fit") {
  const auto phases = default_ramsey_phases(41);
  auto make = [&](double amp, double phi0, double off, double noise) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n(0.0, noise);
    RamseyTrace t;
    t.phase = phases;
    for (double x : phases) t.p1.push_back(amp * std::cos(x - phi0) + off + (noise > 0 ? n(rng) : 0.0));
    return t;
  };
  CHECK(fit_cosine_phase(make(1.0, 0.0, 0.0, 0.0)).phase == doctest::Approx(0.0).scale(1.0));
  CHECK(fit_cosine_phase(make(1.0, 1.2, 0.0, 0.0)).phase == doctest::Approx(1.2));
  CHECK(fit_cosine_phase(make(0.4, 2.5, 0.5, 0.01)).phase == doctest::Approx(2.5).epsilon(0.05 / 2.5));
  CHECK(fit_cosine_phase(make(1.0, kPi, 0.0, 0.0)).phase == doctest::Approx(kPi));
  CHECK_THROWS_AS(fit_cosine_phase(make(0.01, 1.0, 0.5, 0.0)), FitError);
  RamseyTrace short_trace = make(1.0, 0.0, 0.0, 0.0);
  short_trace.phase.resize(5);
  short_trace.p1.resize(5);
  CHECK_THROWS_AS(fit_cosine_phase(short_trace), FitError);
  RamseyTrace half;
  for (int i = 0; i < 20; ++i) {
    half.phase.push_back(kPi * i / 20.0);
    half.p1.push_back(std::cos(half.phase.back()));
  }
  CHECK_THROWS_AS(fit_cosine_phase(half), FitError);
}

TEST_CASE("Ramsey fringes") {
  const auto phases = default_ramsey_phases(41);
  SUBCASE("bare Ramsey") {
    const RamseyTrace t = ramsey_phase_scan(Mat9::Identity(), ControlState::ground, phases);
    for (std::size_t i = 0; i < phases.size(); ++i)
      CHECK(t.p1[i] == doctest::Approx(0.5 * (1.0 + std::cos(phases[i]))).scale(1.0));
    CHECK(fit_cosine_phase(t).phase == doctest::Approx(0.0).scale(1.0));
  }

  const DeviceParams p = default_device();
  const CalibratedGate& g = test::calibrated_gate();

  SUBCASE("compensated CZ gives a pi phase difference") {
    const double a = fit_cosine_phase(ramsey_phase_scan(p, g.waveform, ControlState::ground, true, phases)).phase;
    const double b = fit_cosine_phase(ramsey_phase_scan(p, g.waveform, ControlState::excited, true, phases)).phase;
    const double diff = std::abs(std::remainder(b - a, 2 * kPi));
    CHECK(diff == doctest::Approx(kPi).epsilon(0.02 / kPi));
    // Links the fringe shift to the compensated <11|U'|11> phase.
    const double cp = conditional_phase_positive(virtual_z_compensate(propagate_unitary(g.waveform, p)).matrix);
    CHECK(std::abs(std::remainder(diff - cp, 2 * kPi)) < 0.02);
  }
  SUBCASE("uncompensated fringe measures the dynamic phase") {
    const PropagationResult r = propagate_unitary(g.waveform, p);
    const double phi0 = fit_cosine_phase(ramsey_phase_scan(p, g.waveform, ControlState::ground, false, phases)).phase;
    CHECK(std::abs(std::remainder(phi0 + r.phase_a, 2 * kPi)) < 0.02);
  }
}

TEST_CASE("CSV layouts") {
  const DeviceParams p = default_device();
  const std::vector<double> w = {resonance_frequency(p)}, t = {0.0, 1.0};
  std::ostringstream c, r;
  write_chevron_csv(c, swap_spectroscopy(p, w, t));
  CHECK(c.str().rfind("omega_qA_GHz,t_ns,P11\n", 0) == 0);
  write_ramsey_csv(r, ramsey_phase_scan(Mat9::Identity(), ControlState::ground, default_ramsey_phases(8)));
  CHECK(r.str().rfind("phase_rad,P1\n", 0) == 0);
}
