#pragma once

namespace ncp {

/// A half-open time interval [s, t).
struct Interval {
  double s = 0.0;
  double t = 0.0;

  double length() const { return t - s; }
  bool operator==(const Interval& other) const { return s == other.s && t == other.t; }
};

}  // namespace ncp
