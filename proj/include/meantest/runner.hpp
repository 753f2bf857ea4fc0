#ifndef MEANTEST_RUNNER_HPP
#define MEANTEST_RUNNER_HPP

#include <map>
#include <string>
#include <vector>

#include "meantest/calibration.hpp"
#include "meantest/compositional.hpp"
#include "meantest/solver_report.hpp"

namespace meantest {

enum class TestKind { Hotelling, James, El, Eel };

std::string to_string(TestKind t);
TestKind test_kind_from_string(const std::string& s);

struct TestSpec {
  TestKind kind = TestKind::Hotelling;
  Calibration calibration = Calibration::F;
};

// True when the calibration is defined for the test (Hotelling supports only
// its own F law and bootstrap).
bool calibration_valid_for(TestKind kind, Calibration calibration);

// Unified outcome row shared by the CLI and the simulation studies.
struct TestResult {
  std::string test;
  std::string calibration;
  double statistic = 0.0;
  double p_value = 1.0;
  std::map<std::string, double> aux;
  SolverReport report;
  bool has_report = false;
};

// Dispatches to the requested statistic/calibration pair. Library errors
// (hull violations, singular covariances, non-convergence) propagate.
TestResult run_test(const TestSpec& spec, const EuclideanSample& s1, const EuclideanSample& s2,
                    const BootstrapConfig& bootstrap);

}  // namespace meantest

#endif
