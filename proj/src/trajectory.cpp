#include "conescan/trajectory.hpp"

#include <cmath>
#include <sstream>

#include "conescan/errors.hpp"

namespace conescan {

void trajectory::validate() const {
    if (samples.empty())
        throw parse_error("trajectory: no samples");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        if (!std::isfinite(s.t) || !std::isfinite(s.x) || !std::isfinite(s.y)) {
            std::ostringstream msg;
            msg << "trajectory: non-finite sample at index " << i;
            throw parse_error(msg.str());
        }
        if (i > 0 && !(s.t > samples[i - 1].t)) {
            std::ostringstream msg;
            msg << "trajectory: time must be strictly increasing (index " << i << ")";
            throw parse_error(msg.str());
        }
    }
}

}  // namespace conescan
