#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "entgeom/tensor.hpp"

namespace entgeom {

/// Contents of a state file: a unit vector or, with "kind": "density", a
/// density operator stored row-major.
using StateFileContents = std::variant<PureState, DensityOperator>;

/// Parses a state file document. Throws ParseError (with line and column)
/// on malformed JSON or a bad layout, and the library's validation errors
/// when the data fails the state invariants at kLoadTolerance.
StateFileContents parse_state_file(std::string_view text);
StateFileContents read_state_file(const std::filesystem::path& path);

/// Same, but the file must hold the requested kind.
PureState read_pure_state(const std::filesystem::path& path);
DensityOperator read_density_operator(const std::filesystem::path& path);

/// Every number is written with 17 significant digits, so reading the
/// document back reproduces the doubles exactly.
std::string to_state_file(const PureState& state);
std::string to_state_file(const DensityOperator& rho);

void write_state_file(const std::filesystem::path& path, const PureState& state);
void write_state_file(const std::filesystem::path& path, const DensityOperator& rho);

}  // namespace entgeom
