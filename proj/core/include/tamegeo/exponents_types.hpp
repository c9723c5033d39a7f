#pragma once

#include <utility>
#include <vector>

namespace tamegeo {

// Result of a log-log exponent fit v ~ constant * u^exponent.
struct ExponentFit {
  double exponent = 0.0;
  double constant = 0.0;
  std::pair<double, double> window{0.0, 0.0};  // [u_min, u_max] actually fit
  int bins = 0;
  double max_residual = 0.0;  // max |log v - fit| over the fitted points
  std::vector<std::pair<double, double>> envelope;  // (log u, log v) pairs
};

// Optional per-sample dump of an envelope fit, for CSV export.
struct EnvelopeDump {
  struct Row {
    double log_u = 0.0;
    double log_v = 0.0;
    int bin = -1;      // -1: outside the binned window
    bool is_min = false;
  };
  std::vector<Row> rows;
};

}  // namespace tamegeo
