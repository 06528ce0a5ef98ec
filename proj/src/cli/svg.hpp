#pragma once

#include <string>

#include "specrkhs/spectra.hpp"

namespace specrkhs::cli {

// Heat map of log10 tau over the grid points; flagged points are outlined.
std::string pseudospectrum_svg(const PseudospectrumResult& res, const std::string& title);

} // namespace specrkhs::cli
