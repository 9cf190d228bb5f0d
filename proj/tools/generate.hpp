#pragma once

#include <cstdint>
#include <string>

namespace nra::tools {

/// Script text with an (A, B) pair over shared x, y and local z, w, ending in
/// compute-interpolant. Polynomials have degree at most 3.
std::string random_interpolation_script(std::uint64_t seed);

}  // namespace nra::tools
