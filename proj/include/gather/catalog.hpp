#pragma once

#include "gather/scenario.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace gather {

/// Names of the built-in scenarios, in listing order.
std::vector<std::string> catalog_names();

/// One-line description for `catalog` listings.
std::string_view catalog_description(std::string_view name);

/// Scenario file text of a built-in scenario. Throws std::invalid_argument for unknown names.
std::string catalog_text(std::string_view name);

Scenario catalog_scenario(std::string_view name);

}  // namespace gather
