#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace ashll {

/// Cell address on a structured grid (i along the first grid direction).
struct CellIndex {
  int i = 0;
  int j = 0;
  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

/// A state with rho <= 0 or p <= 0 was produced; the driver treats this as blow-up.
class NonPhysicalState : public std::runtime_error {
 public:
  explicit NonPhysicalState(const std::string& what,
                            std::optional<CellIndex> cell = std::nullopt)
      : std::runtime_error(what), cell_(cell) {}

  const std::optional<CellIndex>& cell() const noexcept { return cell_; }

 private:
  std::optional<CellIndex> cell_;
};

class DegenerateCell : public std::runtime_error {
 public:
  DegenerateCell(const std::string& what, CellIndex cell)
      : std::runtime_error(what), cell_(cell) {}
  CellIndex cell() const noexcept { return cell_; }

 private:
  CellIndex cell_;
};

/// HLLC contact speed undefined (alpha_R == alpha_L).
class DegenerateWaveSpeeds : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class VacuumGenerated : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CaseFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ashll
