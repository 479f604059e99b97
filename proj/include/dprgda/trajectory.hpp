#pragma once

#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

namespace dprgda {

// One per-iteration record. phi / grad_norm / lambda_min are evaluation-only
// diagnostics filled by the harness instrument; lambda_min is NaN on rows
// where the eigensolver cadence skips it.
struct TrajectoryRow {
  int t = 0;
  std::string phase;
  double phi = std::numeric_limits<double>::quiet_NaN();
  double grad_norm = std::numeric_limits<double>::quiet_NaN();
  double lambda_min = std::numeric_limits<double>::quiet_NaN();
  double v_norm = std::numeric_limits<double>::quiet_NaN();
  double eps_spent = 0.0;
};

inline constexpr const char* kTrajectoryHeader =
    "t,phase,phi,grad_norm,lambda_min,v_norm,eps_spent";

inline std::string format_trajectory_row(const TrajectoryRow& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%d,%s,%.17g,%.17g,%.17g,%.17g,%.17g", r.t,
                r.phase.c_str(), r.phi, r.grad_norm, r.lambda_min, r.v_norm,
                r.eps_spent);
  return std::string(buf);
}

class TrajectorySink {
 public:
  virtual ~TrajectorySink() = default;
  virtual void push(const TrajectoryRow& row) = 0;
};

class MemoryTrajectory : public TrajectorySink {
 public:
  void push(const TrajectoryRow& row) override { rows_.push_back(row); }
  const std::vector<TrajectoryRow>& rows() const { return rows_; }

 private:
  std::vector<TrajectoryRow> rows_;
};

// Streams CSV rows as they arrive; the header is written up front.
class CsvTrajectory : public TrajectorySink {
 public:
  explicit CsvTrajectory(std::ostream& out) : out_(out) {
    out_ << kTrajectoryHeader << "\n";
  }
  void push(const TrajectoryRow& row) override {
    out_ << format_trajectory_row(row) << "\n";
  }

 private:
  std::ostream& out_;
};

class TeeTrajectory : public TrajectorySink {
 public:
  TeeTrajectory(TrajectorySink& a, TrajectorySink& b) : a_(a), b_(b) {}
  void push(const TrajectoryRow& row) override {
    a_.push(row);
    b_.push(row);
  }

 private:
  TrajectorySink& a_;
  TrajectorySink& b_;
};

}  // namespace dprgda
