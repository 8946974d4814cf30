#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sigmaforge/report.hpp"

namespace sigmaforge::suites {

struct Config {
  std::string backend = "euclidean";
  int n = 2;
  int k = 4;
  double tau = 0.25;
  std::string mode = "shrinking";
  bool lambda_override = false;
  double lambda = 0.0;
  int quad_order = 12;
  int grid = 24;
  std::uint64_t seed = 7;
  int samples = 1000;
  double tol_scale = 1.0;
  std::string model = "gaussian";
};

double resolve_lambda(const Config& cfg);

// Normalizing constant of the round-sphere soliton potential.
double sphere_soliton_constant(int n, double tau);

std::vector<report::Record> algebra_suite(const Config& cfg);
std::vector<report::Record> identities_suite(const Config& cfg);
std::vector<report::Record> soliton_suite(const Config& cfg);
std::vector<report::Record> variation_suite(const Config& cfg);
std::vector<report::Record> spectrum_suite(const Config& cfg);

const std::vector<std::string>& suite_names();
std::vector<report::Record> run_suite(const std::string& name, const Config& cfg);
std::vector<report::Record> run_all(const Config& cfg, int jobs);

}  // namespace sigmaforge::suites
