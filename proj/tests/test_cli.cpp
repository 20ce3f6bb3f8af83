#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(STACZ_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

nlohmann::json summary(const fs::path& dir) { return nlohmann::json::parse(slurp(dir / "summary.json")); }

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

const fs::path kRoot = fs::path("cli_out");

}  // namespace

TEST_CASE("print-default-config emits a loadable config") {
  fs::create_directories(kRoot);
  const std::string cmd = std::string(STACZ_CLI_PATH) + " --print-default-config > " + (kRoot / "default.cfg").string();
  REQUIRE(std::system(cmd.c_str()) == 0);
  CHECK(slurp(kRoot / "default.cfg").find("device.g_over_2pi_MHz = 9.19") != std::string::npos);
  CHECK(run("synthesize --config " + (kRoot / "default.cfg").string() + " --out " + (kRoot / "syn").string()) == 0);
  const auto s = summary(kRoot / "syn");
  CHECK(s["total_duration_ns"].get<double>() == doctest::Approx(52.0).epsilon(2.0 / 52.0));
  CHECK(fs::exists(kRoot / "syn" / "waveform.csv"));
  CHECK(fs::exists(kRoot / "syn" / "waveform.json"));
  CHECK(fs::exists(kRoot / "syn" / "run.log"));
}

TEST_CASE("flat trajectory config") {
  fs::create_directories(kRoot);
  write(kRoot / "flat.cfg", "trajectory.theta_f = 0.083653846\n");
  // theta_f a hair away from theta_i: the solve is skipped and the pulse is almost flat.
  CHECK(run("synthesize --config " + (kRoot / "flat.cfg").string() + " --out " + (kRoot / "flat").string()) == 0);
  CHECK(summary(kRoot / "flat")["total_duration_ns"].get<double>() == doctest::Approx(40.0).epsilon(1e-3));
}

TEST_CASE("exit codes") {
  fs::create_directories(kRoot);
  write(kRoot / "bad.cfg", "device.g_over_2pi_MHz = nine\n");
  CHECK(run("synthesize --config " + (kRoot / "bad.cfg").string() + " --out " + (kRoot / "bad").string()) == 2);
  CHECK(run("synthesize --config " + (kRoot / "missing.cfg").string()) == 2);
  CHECK(run("no-such-command") == 2);
  write(kRoot / "short.cfg", "trajectory.target_phase_rad = 0.05\n");
  CHECK(run("synthesize --config " + (kRoot / "short.cfg").string() + " --out " + (kRoot / "short").string()) == 3);
  write(kRoot / "fit.cfg", "chevron.span_MHz = 0.5\nchevron.detuning_points = 3\nchevron.t_max_ns = 20\nchevron.time_points = 40\n");
  CHECK(run("chevron --config " + (kRoot / "fit.cfg").string() + " --out " + (kRoot / "fit").string()) == 4);
}

TEST_CASE("experiments report headline numbers") {
  CHECK(run("chevron --out " + (kRoot / "chevron").string()) == 0);
  CHECK(std::abs(summary(kRoot / "chevron")["g_over_2pi_MHz"].get<double>() / 9.19 - 1.0) < 0.01);
  CHECK(run("qpt --out " + (kRoot / "qpt").string()) == 0);
  CHECK(summary(kRoot / "qpt")["process_fidelity"].get<double>() >= 0.999);
  CHECK(fs::exists(kRoot / "qpt" / "chi.json"));
  CHECK(fs::exists(kRoot / "qpt" / "chi_abs.csv"));
  CHECK(run("ramsey --out " + (kRoot / "ramsey").string()) == 0);
  CHECK(summary(kRoot / "ramsey")["phase_difference"].get<double>() == doctest::Approx(3.14159).epsilon(0.02 / 3.14));
  CHECK(run("rb --out " + (kRoot / "rb").string()) == 0);
  const auto rb = nlohmann::json::parse(slurp(kRoot / "rb" / "rb_reference.json"));
  for (const auto& s : rb["survival"]) CHECK(s.get<double>() == doctest::Approx(1.0));
}

TEST_CASE("same config and seed give byte-identical outputs") {
  write(kRoot / "rbi.cfg", "rb.cz_channel = depolarizing\nrb.cz_depolarizing = 0.03\nrb.single_qubit_error = 0.002\nrb.k = 10\n");
  const std::string base = "rb-interleaved --config " + (kRoot / "rbi.cfg").string() + " --seed 7 --shots 200 --out ";
  REQUIRE(run(base + (kRoot / "rbi1").string()) == 0);
  REQUIRE(run(base + (kRoot / "rbi2").string() + " --threads 2") == 0);
  for (const char* f : {"summary.json", "rb_reference.json", "rb_interleaved.json", "rb_interleaved.csv"})
    CHECK(slurp(kRoot / "rbi1" / f) == slurp(kRoot / "rbi2" / f));
  CHECK(summary(kRoot / "rbi1").contains("F_g"));
  CHECK(summary(kRoot / "rbi1").contains("r_cz"));
}
