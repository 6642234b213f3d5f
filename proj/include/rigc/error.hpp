#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rigc {

/// Every failure raised by the library carries a stable code so the CLI can
/// report it with module context.
enum class ErrorCode {
  EmptyCommunity,
  DisconnectedCommunity,
  NonSimpleCommunity,
  CommunityTooLarge,
  Empty,
  ZeroDegree,
  HalfEdgeMismatch,
  InfeasibleRepair,
  MissingConditional,
  InvalidMeasure,
  InvalidTree,
  NeighborhoodTooLarge,
  InvalidArgument,
  Parse,
  Io,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyCommunity: return "EmptyCommunity";
    case ErrorCode::DisconnectedCommunity: return "DisconnectedCommunity";
    case ErrorCode::NonSimpleCommunity: return "NonSimpleCommunity";
    case ErrorCode::CommunityTooLarge: return "CommunityTooLarge";
    case ErrorCode::Empty: return "Empty";
    case ErrorCode::ZeroDegree: return "ZeroDegree";
    case ErrorCode::HalfEdgeMismatch: return "HalfEdgeMismatch";
    case ErrorCode::InfeasibleRepair: return "InfeasibleRepair";
    case ErrorCode::MissingConditional: return "MissingConditional";
    case ErrorCode::InvalidMeasure: return "InvalidMeasure";
    case ErrorCode::InvalidTree: return "InvalidTree";
    case ErrorCode::NeighborhoodTooLarge: return "NeighborhoodTooLarge";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class HalfEdgeMismatch : public Error {
 public:
  HalfEdgeMismatch(std::uint64_t l_sum, std::uint64_t r_sum)
      : Error(ErrorCode::HalfEdgeMismatch,
              "sum of l-degrees " + std::to_string(l_sum) + " != sum of community sizes " +
                  std::to_string(r_sum)),
        l_sum_(l_sum),
        r_sum_(r_sum) {}

  std::uint64_t l_sum() const noexcept { return l_sum_; }
  std::uint64_t r_sum() const noexcept { return r_sum_; }

 private:
  std::uint64_t l_sum_;
  std::uint64_t r_sum_;
};

class MissingConditional : public Error {
 public:
  explicit MissingConditional(int size)
      : Error(ErrorCode::MissingConditional,
              "no conditional community measure for size " + std::to_string(size)),
        size_(size) {}

  int size() const noexcept { return size_; }

 private:
  int size_;
};

}  // namespace rigc
