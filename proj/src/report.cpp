#include "sigmaforge/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

namespace sigmaforge::report {

Record against(std::string suite, std::string check, std::string anchor, double value,
               double reference, double tol) {
  Record r;
  r.suite = std::move(suite);
  r.check = std::move(check);
  r.anchor = std::move(anchor);
  r.value = value;
  r.reference = reference;
  r.residual = std::fabs(value - reference);
  r.tol = tol;
  r.pass = std::isfinite(r.residual) && r.residual <= tol;
  return r;
}

Record bounded(std::string suite, std::string check, std::string anchor, double residual,
               double tol) {
  Record r;
  r.suite = std::move(suite);
  r.check = std::move(check);
  r.anchor = std::move(anchor);
  r.value = residual;
  r.reference = 0.0;
  r.residual = std::fabs(residual);
  r.tol = tol;
  r.pass = std::isfinite(r.residual) && r.residual <= tol;
  return r;
}

Record below(std::string suite, std::string check, std::string anchor, double value, double bound,
             double tol) {
  Record r;
  r.suite = std::move(suite);
  r.check = std::move(check);
  r.anchor = std::move(anchor);
  r.value = value;
  r.reference = bound;
  r.residual = std::max(0.0, value - bound);
  r.tol = tol;
  r.pass = std::isfinite(value) && r.residual <= tol;
  return r;
}

bool all_pass(const std::vector<Record>& records) {
  for (const Record& r : records)
    if (!r.pass) return false;
  return true;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

std::string json_number(double x) {
  if (!std::isfinite(x)) return "null";
  return format_double(x);
}

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

}  // namespace

std::string to_jsonl(const std::vector<Record>& records) {
  std::string out;
  for (const Record& r : records) {
    out += "{\"suite\":" + quoted(r.suite) + ",\"check\":" + quoted(r.check) +
           ",\"anchor\":" + quoted(r.anchor) + ",\"value\":" + json_number(r.value) +
           ",\"reference\":" + json_number(r.reference) +
           ",\"residual\":" + json_number(r.residual) + ",\"tol\":" + json_number(r.tol) +
           ",\"pass\":" + (r.pass ? "true" : "false") + "}\n";
  }
  return out;
}

std::string to_csv(const std::vector<Record>& records) {
  std::string out = "suite,check,anchor,value,reference,residual,tol,pass\n";
  for (const Record& r : records) {
    out += r.suite + "," + r.check + "," + r.anchor + "," + format_double(r.value) + "," +
           format_double(r.reference) + "," + format_double(r.residual) + "," +
           format_double(r.tol) + "," + (r.pass ? "true" : "false") + "\n";
  }
  return out;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

}  // namespace sigmaforge::report
