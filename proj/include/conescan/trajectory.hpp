#pragma once

#include <string>
#include <vector>

namespace conescan {

struct trajectory_sample {
    double t;  // s
    double x;  // mm
    double y;  // mm
};

struct trajectory {
    std::vector<trajectory_sample> samples;
    std::string label;
    double scale = 1.0;

    bool empty() const { return samples.empty(); }
    double t_begin() const { return samples.front().t; }
    double t_end() const { return samples.back().t; }
    void validate() const;  // strictly increasing t, finite coordinates
};

}  // namespace conescan
