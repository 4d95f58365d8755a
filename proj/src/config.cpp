#include "mct/config.hpp"

#include <cmath>

#include "mct/error.hpp"

namespace mct {

void TranslatorConfig::validate() const
{
    if (pad < 0)
        throw ConfigError("pad must be >= 0");
    if (!(c_max > 0.0f) || !std::isfinite(c_max))
        throw ConfigError("c_max must be positive and finite");
}

} // namespace mct
