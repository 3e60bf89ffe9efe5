#pragma once

#include <map>
#include <string>
#include <vector>

#include "conescan/geometry.hpp"
#include "conescan/metrics.hpp"
#include "conescan/planning.hpp"
#include "conescan/profile.hpp"
#include "conescan/trajectory.hpp"

namespace conescan {

// Key-value config format: one `key = value` per line, `#` comments and blank
// lines ignored.  Unknown keys are rejected so typos do not silently fall
// back to defaults.  Values print with %.17g, making parse(serialize(x)) a
// fixed point.
std::map<std::string, double> parse_kv(const std::string& text);
std::map<std::string, double> load_kv(const std::string& path);

design_params design_from_kv(const std::map<std::string, double>& kv);
requirement_spec requirements_from_kv(const std::map<std::string, double>& kv);
conic_profile profile_from_kv(const std::map<std::string, double>& kv);
drag_params drag_from_kv(const std::map<std::string, double>& kv);

std::string serialize_design(const design_params& p);
std::string serialize_requirements(const requirement_spec& req);
std::string serialize_profile(const conic_profile& profile);
std::string serialize_drag(const drag_params& params);

design_params load_design(const std::string& path);
requirement_spec load_requirements(const std::string& path);
conic_profile load_profile(const std::string& path);
drag_params load_drag(const std::string& path);

// Trajectory CSV: header `t,x,y`, one %.17g row per sample so that
// write -> read -> write reproduces the bytes exactly.
std::string serialize_trajectory(const trajectory& traj);
trajectory parse_trajectory(const std::string& text);
void save_trajectory(const trajectory& traj, const std::string& path);
trajectory load_trajectory(const std::string& path);

// Cam program CSV: header `t,omega_cam,omega_motor`, forward setpoints in
// order, then (when a rewind is present) one trailing row at the rewind end
// time carrying the negative rewind speed.  omega_motor is omega_cam times
// the gear ratio on every row.
std::string serialize_program(const cam_program& program);
cam_program parse_program(const std::string& text);
void save_program(const cam_program& program, const std::string& path);
cam_program load_program(const std::string& path);

enum class plot_style { polyline, dots };

struct plot_series {
    std::string label;
    const trajectory* traj;
    plot_style style = plot_style::polyline;
};

// Static SVG 1.1 scan-plane plot: 1 mm grid, axes through the origin, one
// coloured polyline (or dot set) per series, legend top-left.  Output is a
// pure function of the inputs, so identical calls give identical bytes.
// A single-point series renders as exactly one circle marker.
std::string render_svg_plot(const std::vector<plot_series>& series,
                            double px_per_mm = 100.0);
void save_svg_plot(const std::vector<plot_series>& series, const std::string& path,
                   double px_per_mm = 100.0);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace conescan
