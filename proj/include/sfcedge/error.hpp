#pragma once

#include <stdexcept>
#include <string>

namespace sfcedge {

// Base for every failure the library reports as an exception. Violations that
// are data (validation reports, constraint reports) are returned, not thrown.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InfeasibleConfig : public Error {
 public:
  using Error::Error;
};

class DelayError : public Error {
 public:
  using Error::Error;
};

class RoutingError : public Error {
 public:
  using Error::Error;
};

class PlacementError : public Error {
 public:
  using Error::Error;
};

class MatchingError : public Error {
 public:
  using Error::Error;
};

class ScheduleError : public Error {
 public:
  using Error::Error;
};

class LimitError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// Result sets that do not cover the same scenarios.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

}  // namespace sfcedge
