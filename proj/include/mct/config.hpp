#pragma once

#include <cstdint>

namespace mct {

struct TranslatorConfig
{
    float c_max = 1.0f;
    bool clamp_output = true;
    int pad = 0;                 // misalignment pad, in lattice cells
    std::uint64_t rng_seed = 0;  // crop offset stream

    // Throws ConfigError when pad < 0 or c_max is not positive and finite.
    void validate() const;
};

} // namespace mct
