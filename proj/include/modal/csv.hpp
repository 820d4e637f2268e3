#pragma once

#include "modal/sample.hpp"

#include <string>
#include <vector>

namespace modal {

//! Loads the selected columns (all columns when empty) of a comma-separated
//! file. A first row that does not parse as numbers is treated as a header.
//! Errors report 1-based rows and 0-based columns.
Sample load_csv(const std::string& path, const std::vector<std::size_t>& columns = {});

//! Column selector "0,2,3"; throws InvalidArgument.
std::vector<std::size_t> parse_columns(const std::string& spec);

} // namespace modal
