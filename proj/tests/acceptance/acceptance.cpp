#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "jobs.hpp"

using grushin::cli::JobConfig;
using grushin::cli::JobResult;
using nlohmann::json;

namespace {

// Pinned tolerances.
constexpr double kOrthonormalTol = 1e-10;
constexpr double kAdditionTol = 1e-9;
constexpr double kKernelTol = 1e-8;
constexpr double kFischerTol = 1e-10;
constexpr double kEigenTol = 1e-8;
constexpr double kScalingTol = 1e-10;
constexpr double kSlopeLimit = 0.1;
constexpr double kBasisSeconds = 300;
constexpr double kGrowthSeconds = 1800;

struct Verdict {
  bool pass = false;
  std::string detail;
};

JobConfig verify(const std::string& command, bool all = true) {
  JobConfig jc;
  jc.mode = "verify";
  jc.command = command;
  jc.all = all;
  return jc;
}

Verdict from(const JobResult& r) { return {r.pass, r.summary}; }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Verdict seconds_bound(Verdict v, double seconds, double limit) {
  v.detail += " [" + fmt(seconds) + " s, target < " + fmt(limit) + " s]";
  v.pass = v.pass && seconds < limit;
  return v;
}

Verdict ac_basis(double& seconds) {
  auto t0 = std::chrono::steady_clock::now();
  JobConfig jc = verify("basis");
  jc.kmax = 12;
  JobResult r = run_job(jc);
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Verdict v = from(r);
  v.pass = v.pass && r.json["failures"] == 0;
  return seconds_bound(v, seconds, kBasisSeconds);
}

Verdict ac_dims() {
  JobConfig jc = verify("dims");
  jc.kmax = 12;
  JobResult r = run_job(jc);
  Verdict v = from(r);
  for (const auto& row : r.json["rows"]) v.pass = v.pass && row["pass"] == true;
  return v;
}

Verdict ac_norms() {
  JobConfig jc = verify("norms");
  jc.kmax = 10;
  jc.tol = kOrthonormalTol;
  JobResult r = run_job(jc);
  Verdict v = from(r);
  v.pass = v.pass && r.json["worst_deviation"].get<double>() <= kOrthonormalTol;
  return v;
}

Verdict ac_addition() {
  JobConfig jc = verify("addition", false);
  jc.kmax = 20;
  jc.tol = kAdditionTol;
  JobResult r = run_job(jc);
  Verdict v = from(r);
  v.pass = v.pass && r.json["pairs"].size() == 3 && r.json["worst_residual"].get<double>() < kAdditionTol;
  for (const auto& p : r.json["pairs"]) v.pass = v.pass && p["points"] == 100;
  return v;
}

Verdict ac_kernel() {
  JobConfig jc = verify("kernel", false);
  jc.kmax = 8;
  jc.tol = kKernelTol;
  JobResult r = run_job(jc);
  Verdict v = from(r);
  v.pass = v.pass && r.json["functions"] == 20 && r.json["worst_deviation"].get<double>() <= kKernelTol;
  return v;
}

Verdict ac_bounds(const std::vector<std::string>& names) {
  Verdict v{true, ""};
  for (const auto& name : names) {
    JobConfig jc = verify("bounds", false);
    jc.bound = name;
    JobResult r = run_job(jc);
    v.pass = v.pass && r.pass;
    v.detail += (v.detail.empty() ? "" : "; ") + name + " " + (r.pass ? "pass" : "FAIL");
  }
  return v;
}

Verdict ac_growth(double& seconds) {
  auto t0 = std::chrono::steady_clock::now();
  JobConfig jc = verify("projector");
  jc.kmin = 8;
  jc.kmax = 40;
  JobResult r = run_job(jc);
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return seconds_bound(from(r), seconds, kGrowthSeconds);
}

Verdict ac_spectral() {
  JobConfig jc = verify("sl2");
  jc.kmax = 12;
  return from(run_job(jc));
}

struct CarlemanVerdicts {
  Verdict eigen, ratio;
};

CarlemanVerdicts ac_carleman() {
  JobConfig jc = verify("carleman");
  jc.kmax = 8;
  jc.tol = kEigenTol;
  jc.epsilon = 0.1;
  JobResult r = run_job(jc);
  CarlemanVerdicts out;
  const json& eig = r.json["eigenrelation"];
  out.eigen.pass = eig["configs"].size() == 2;
  for (const auto& c : eig["configs"]) {
    out.eigen.pass = out.eigen.pass && c["pass"] == true && c["worst_residual"].get<double>() < kEigenTol &&
                     c["samples_per_index"] == 20;
    out.eigen.detail += (out.eigen.detail.empty() ? "worst " : ", ") + fmt(c["worst_residual"].get<double>());
  }
  const json& carl = r.json["carleman"];
  const double slope = carl["slope"].is_null() ? 1e300 : carl["slope"].get<double>();
  const double amp = carl["amplitude_deviation"].get<double>(), dil = carl["dilation_deviation"].get<double>();
  std::vector<double> s;
  for (const auto& row : carl["rows"]) s.push_back(row["s"].get<double>());
  bool grid = false;
  for (double a : {100.5, 150.5, 200.5}) {
    grid = false;
    for (double b : s) grid = grid || b == a;
    if (!grid) break;
  }
  out.ratio.pass = carl["pass"] == true && grid && slope <= kSlopeLimit && amp <= kScalingTol && dil <= kScalingTol;
  out.ratio.detail = "slope " + fmt(slope) + " over " + std::to_string(s.size()) + " s values, amplitude " +
                     fmt(amp) + ", dilation " + fmt(dil);
  return out;
}

Verdict ac_exponents() {
  JobResult r = run_job(verify("exponents"));
  Verdict v = from(r);
  v.pass = v.pass && r.json["identity_failures"].empty();
  for (const auto& row : r.json["reference_rows"]) v.pass = v.pass && row["found"] == true;
  return v;
}

Verdict ac_fischer() {
  JobConfig jc = verify("fischer");
  jc.tol = kFischerTol;
  JobResult r = run_job(jc);
  Verdict v = from(r);
  for (const auto& c : r.json["classical"])
    v.pass = v.pass && c["relative_residual"].get<double>() <= kFischerTol;
  const json& d = r.json["degenerate"];
  v.pass = v.pass && d["deterministic"] == true && d["kcut_monotone"] == true && d["parseval_bounded"] == true;
  const json& last = d["reports"].back();
  v.detail += "; |x|^2 on (2,2,1): residual " + fmt(last["residual_norm"].get<double>()) + ", out-of-range mass " +
              fmt(last["out_of_range_mass"].get<double>()) + " at kCut " + std::to_string(last["kCut"].get<int>());
  return v;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const std::string& name, const std::function<Verdict()>& f) {
    Verdict v;
    try {
      v = f();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << "AC" << id << " " << name << ": " << v.detail << std::endl;
  };
  double t = 0;
  report(1, "exact harmonicity", [&] { return ac_basis(t); });
  report(2, "dimension agreement", ac_dims);
  report(3, "orthonormality", ac_norms);
  report(4, "addition formula", ac_addition);
  report(5, "reproducing kernel", ac_kernel);
  report(6, "closed forms vs quadrature", [] { return ac_bounds({"closed-forms"}); });
  report(7, "Bernstein suite", [] { return ac_bounds({"bernstein", "unit", "legendre"}); });
  report(8, "ratio bounds", [] { return ac_bounds({"ratio", "kl1"}); });
  report(9, "growth fits", [&] { return ac_growth(t); });
  report(10, "spectral exactness", ac_spectral);
  CarlemanVerdicts carl;
  bool carlOk = true;
  std::string carlErr;
  try {
    carl = ac_carleman();
  } catch (const std::exception& e) {
    carlOk = false;
    carlErr = std::string("exception: ") + e.what();
  }
  report(11, "eigenrelation", [&] { return carlOk ? carl.eigen : Verdict{false, carlErr}; });
  report(12, "exponent tables", ac_exponents);
  report(13, "Carleman property check", [&] { return carlOk ? carl.ratio : Verdict{false, carlErr}; });
  report(14, "Fischer harness", ac_fischer);
  std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria passed"))
            << std::endl;
  return failures ? 1 : 0;
}
