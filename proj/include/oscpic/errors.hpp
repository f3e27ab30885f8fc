#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace oscpic {

/// A particle left the field grid domain [-extent, extent]; usually means
/// grid_extent is too small for the run.
class OutOfDomainError : public std::runtime_error {
 public:
  OutOfDomainError(std::size_t particle, double position, double extent)
      : std::runtime_error("particle " + std::to_string(particle) + " at r=" +
                           std::to_string(position) + " is outside the grid domain [-" +
                           std::to_string(extent) + ", " + std::to_string(extent) + "]"),
        particle_index(particle),
        position(position) {}

  std::size_t particle_index;
  double position;
};

/// A particle state went non-finite during fine integration.
class IntegrationFailure : public std::runtime_error {
 public:
  IntegrationFailure(std::size_t particle, double time)
      : std::runtime_error("non-finite state for particle " + std::to_string(particle) +
                           " at t=" + std::to_string(time)),
        particle_index(particle),
        time(time) {}

  std::size_t particle_index;
  double time;
};

/// Fewer than three velocity sign changes in the recorded window; the horizon
/// was too short or the particle sits at the origin.
class NoPeriodDetected : public std::runtime_error {
 public:
  explicit NoPeriodDetected(std::size_t particle)
      : std::runtime_error("no period detected for particle " + std::to_string(particle)),
        particle_index(particle) {}

  std::size_t particle_index;
};

}  // namespace oscpic
