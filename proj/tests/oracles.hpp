#pragma once

// Independent reference implementations used only by the tests.  These
// deliberately avoid the library's formulas and code paths so that agreement
// is meaningful: the scene oracle builds the contact geometry by explicit
// 2-D rotation, the metric oracle sums finite differences directly, and the
// RNG is hand-rolled so sequences are identical on every platform.

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "conescan/trajectory.hpp"

namespace oracle {

// Explicit scene construction: the cam tip rests at (d + k, l) in the cone
// frame; tilting the cone by theta = atan2(z, sqrt(r^2 - z^2)) rotates that
// point, and the contact coordinates are read off the rotated frame.
inline std::pair<double, double> scene_contact(double z, double d, double l, double k,
                                               double r) {
    double theta = std::atan2(z, std::sqrt(r * r - z * z));
    double c = std::cos(theta), s = std::sin(theta);
    double x = d + k, y = l;
    double xr = x * c - y * s;
    double yr = x * s + y * c;
    return {yr - l, xr - k};  // (s, f)
}

// Least-squares objective for the conic profile fit.
inline double fit_energy(const std::vector<double>& ss, const std::vector<double>& fs,
                         double A, double B, double C) {
    double e = 0.0;
    for (std::size_t i = 0; i < ss.size(); ++i) {
        double res = (A * ss[i] + B) * ss[i] + C - fs[i];
        e += res * res;
    }
    return e;
}

// Portable deterministic uniform RNG (64-bit LCG, top 53 bits).
struct lcg {
    std::uint64_t state;
    explicit lcg(std::uint64_t seed) : state(seed * 2862933555777941757ULL + 3037000493ULL) {}
    double uniform() {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<double>(state >> 11) * (1.0 / 9007199254740992.0);
    }
    double range(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double gaussian() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 1e-300)
            u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }
};

// Smooth random trajectory: a few sinusoidal harmonics, sampled uniformly.
inline conescan::trajectory random_smooth_trajectory(lcg& rng, double t_end, double dt) {
    double ax[3], ay[3], wx[3], wy[3], px[3], py[3];
    for (int h = 0; h < 3; ++h) {
        ax[h] = rng.range(-1.0, 1.0);
        ay[h] = rng.range(-1.0, 1.0);
        wx[h] = rng.range(0.1, 1.5);
        wy[h] = rng.range(0.1, 1.5);
        px[h] = rng.range(0.0, 6.28);
        py[h] = rng.range(0.0, 6.28);
    }
    conescan::trajectory traj;
    std::size_t n = static_cast<std::size_t>(std::floor(t_end / dt)) + 1;
    for (std::size_t i = 0; i < n; ++i) {
        double t = static_cast<double>(i) * dt;
        double x = 0.0, y = 0.0;
        for (int h = 0; h < 3; ++h) {
            x += ax[h] * std::sin(wx[h] * t + px[h]);
            y += ay[h] * std::sin(wy[h] * t + py[h]);
        }
        traj.samples.push_back({t, x, y});
    }
    return traj;
}

// Brute-force discrete-sum mismatch metrics on an explicit common grid.
struct dc_values {
    double D;
    double C;
};

inline dc_values dc_oracle(const conescan::trajectory& a, const conescan::trajectory& b,
                           double dt) {
    double t0 = std::max(a.samples.front().t, b.samples.front().t);
    double t1 = std::min(a.samples.back().t, b.samples.back().t);
    std::size_t n = static_cast<std::size_t>(std::floor((t1 - t0) / dt + 1e-9)) + 1;
    double span = static_cast<double>(n - 1) * dt;

    auto interp = [](const conescan::trajectory& tr, double t) {
        const auto& s = tr.samples;
        std::size_t j = 1;
        while (j + 1 < s.size() && s[j].t < t)
            ++j;
        double u = (t - s[j - 1].t) / (s[j].t - s[j - 1].t);
        if (u < 0.0)
            u = 0.0;
        if (u > 1.0)
            u = 1.0;
        return std::pair<double, double>{s[j - 1].x + u * (s[j].x - s[j - 1].x),
                                         s[j - 1].y + u * (s[j].y - s[j - 1].y)};
    };

    std::vector<double> axs(n), ays(n), bxs(n), bys(n);
    for (std::size_t i = 0; i < n; ++i) {
        double t = t0 + static_cast<double>(i) * dt;
        if (t > t1)
            t = t1;
        auto pa = interp(a, t);
        auto pb = interp(b, t);
        axs[i] = pa.first;
        ays[i] = pa.second;
        bxs[i] = pb.first;
        bys[i] = pb.second;
    }

    double d_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double w = (i == 0 || i == n - 1) ? 0.5 * dt : dt;
        d_sum += w * std::hypot(axs[i] - bxs[i], ays[i] - bys[i]);
    }

    auto vel = [&](const std::vector<double>& arr, std::size_t i) {
        if (i == 0)
            return (arr[1] - arr[0]) / dt;
        if (i == n - 1)
            return (arr[n - 1] - arr[n - 2]) / dt;
        return (arr[i + 1] - arr[i - 1]) / (2.0 * dt);
    };
    double c_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double w = (i == 0 || i == n - 1) ? 0.5 * dt : dt;
        c_sum += w * std::hypot(vel(axs, i) - vel(bxs, i), vel(ays, i) - vel(bys, i));
    }
    return {d_sum / span, c_sum / span};
}

// Adds isotropic Gaussian noise of the given standard deviation to x and y.
inline conescan::trajectory add_noise(const conescan::trajectory& traj, double amplitude,
                                      std::uint64_t seed) {
    lcg rng(seed);
    conescan::trajectory out = traj;
    for (auto& s : out.samples) {
        s.x += amplitude * rng.gaussian();
        s.y += amplitude * rng.gaussian();
    }
    return out;
}

inline double path_length(const conescan::trajectory& traj) {
    double len = 0.0;
    for (std::size_t i = 1; i < traj.samples.size(); ++i)
        len += std::hypot(traj.samples[i].x - traj.samples[i - 1].x,
                          traj.samples[i].y - traj.samples[i - 1].y);
    return len;
}

}  // namespace oracle
