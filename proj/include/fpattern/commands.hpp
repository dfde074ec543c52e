#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fpattern/bearing.hpp"
#include "fpattern/config.hpp"
#include "fpattern/pressure.hpp"

namespace fpattern {

// Builders shared by the commands, the acceptance suite and the bindings.

PhysicalParams make_params(const PhysicsConfig& c);
ScalarField2D make_pi1(const Pi1Config& c, const Grid2D& grid);
/// grad pi1 at the origin, in closed form.
Vec2 pi1_gradient_at_origin(const Pi1Config& c);
/// u = L x: anticlockwise rotation with unit angular velocity.
VectorField2D solid_body_velocity(const Grid2D& grid);

/// Every command writes into config.output.directory, appends to its
/// manifest.txt and returns the data files written (manifest excluded).
std::vector<std::string> cmd_build(const RunConfig& config);
std::vector<std::string> cmd_verify(const RunConfig& config);
std::vector<std::string> cmd_transport(const RunConfig& config);
std::vector<std::string> cmd_trajectory(const RunConfig& config);
std::vector<std::string> cmd_evolve(const RunConfig& config);

using Command = std::vector<std::string> (*)(const RunConfig&);
/// nullptr for an unknown name.
Command find_command(const std::string& name);

}  // namespace fpattern
