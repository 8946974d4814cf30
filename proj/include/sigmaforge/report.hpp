#pragma once

#include <string>
#include <vector>

namespace sigmaforge::report {

struct Record {
  std::string suite;
  std::string check;
  std::string anchor;
  double value = 0.0;
  double reference = 0.0;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
};

// Difference check: residual = |value - reference|, pass iff residual <= tol.
Record against(std::string suite, std::string check, std::string anchor, double value,
               double reference, double tol);

// Magnitude check: value is itself the residual, reference 0.
Record bounded(std::string suite, std::string check, std::string anchor, double residual,
               double tol);

// One-sided check: pass iff value <= bound + tol; residual is the overshoot.
Record below(std::string suite, std::string check, std::string anchor, double value, double bound,
             double tol);

bool all_pass(const std::vector<Record>& records);

std::string format_double(double x);
std::string to_jsonl(const std::vector<Record>& records);
std::string to_csv(const std::vector<Record>& records);
void write_text(const std::string& path, const std::string& content);

}  // namespace sigmaforge::report
