#pragma once

// A small synthetic study on disk: two tick pools for one pair, a cascade
// series crossed with itself, and an fGn pair. Used by the pipeline tests
// and the acceptance run.

#include <filesystem>

#include "json.hpp"

namespace demo {

// Writes the inputs under dir and returns a config document whose paths are
// relative to dir (output_dir = "out").
nlohmann::json write_inputs(const std::filesystem::path& dir, bool with_surrogates);

}  // namespace demo
