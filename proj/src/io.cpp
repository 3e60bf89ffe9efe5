#include "conescan/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "conescan/errors.hpp"

namespace conescan {

namespace {

std::string g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos)
        return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_number(const std::string& text, const std::string& context) {
    const char* begin = text.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(v))
        throw parse_error(context + ": not a finite number: '" + text + "'");
    return v;
}

using kv_map = std::map<std::string, double>;

// Applies kv onto a set of known fields, rejecting unknown keys.
struct kv_reader {
    const kv_map& kv;
    std::set<std::string> seen;

    void read(const char* key, double& field) {
        auto it = kv.find(key);
        if (it != kv.end()) {
            field = it->second;
            seen.insert(key);
        }
    }
    void finish(const char* what) const {
        for (const auto& [key, value] : kv) {
            (void)value;
            if (!seen.count(key))
                throw parse_error(std::string(what) + " config: unknown key '" + key + "'");
        }
    }
};

std::string escape_xml(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

}  // namespace

std::map<std::string, double> parse_kv(const std::string& text) {
    kv_map kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            std::ostringstream msg;
            msg << "config line " << lineno << ": expected 'key = value'";
            throw parse_error(msg.str());
        }
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw parse_error("config: empty key");
        if (kv.count(key))
            throw parse_error("config: duplicate key '" + key + "'");
        kv[key] = parse_number(val, "config key '" + key + "'");
    }
    return kv;
}

std::map<std::string, double> load_kv(const std::string& path) {
    return parse_kv(read_text_file(path));
}

design_params design_from_kv(const kv_map& kv) {
    design_params p;
    kv_reader rd{kv, {}};
    rd.read("l", p.l);
    rd.read("k", p.k);
    rd.read("r", p.r);
    rd.read("alpha", p.alpha);
    rd.read("eta", p.eta);
    rd.read("Z", p.Z);
    rd.read("scale", p.scale);
    rd.read("tube_radius", p.tube_radius);
    rd.finish("design");
    p.validate();
    return p;
}

requirement_spec requirements_from_kv(const kv_map& kv) {
    requirement_spec req;
    kv_reader rd{kv, {}};
    rd.read("max_tip_speed", req.max_tip_speed);
    rd.read("target_pitch", req.target_pitch);
    rd.read("max_pitch", req.max_pitch);
    rd.read("min_area", req.min_area);
    rd.read("max_duration", req.max_duration);
    rd.read("target_duration", req.target_duration);
    rd.read("max_height_change", req.max_height_change);
    rd.read("max_inclination_deg", req.max_inclination_deg);
    rd.read("hard_max_inclination_deg", req.hard_max_inclination_deg);
    rd.read("nominal_tip_distance", req.nominal_tip_distance);
    rd.read("min_tip_distance", req.min_tip_distance);
    rd.read("max_tip_distance", req.max_tip_distance);
    rd.finish("requirements");
    req.validate();
    return req;
}

conic_profile profile_from_kv(const kv_map& kv) {
    for (const char* key : {"A", "B", "C", "s_max"}) {
        if (!kv.count(key))
            throw parse_error(std::string("profile config: missing key '") + key + "'");
    }
    conic_profile profile;
    kv_reader rd{kv, {}};
    rd.read("A", profile.A);
    rd.read("B", profile.B);
    rd.read("C", profile.C);
    rd.read("s_max", profile.s_max);
    rd.finish("profile");
    if (!(profile.s_max > 0.0))
        throw parse_error("profile config: s_max must be positive");
    profile.f_max = profile_eval(profile.s_max, profile).f;
    return profile;
}

drag_params drag_from_kv(const kv_map& kv) {
    drag_params params;
    kv_reader rd{kv, {}};
    rd.read("stick_radius", params.stick_radius);
    rd.read("lag_time", params.lag_time);
    rd.read("creep_gain", params.creep_gain);
    rd.finish("drag");
    params.validate();
    return params;
}

std::string serialize_design(const design_params& p) {
    std::ostringstream out;
    out << "# cam-on-cone design parameters (mm, mm/s, rad)\n";
    out << "l = " << g17(p.l) << "\n";
    out << "k = " << g17(p.k) << "\n";
    out << "r = " << g17(p.r) << "\n";
    out << "alpha = " << g17(p.alpha) << "\n";
    out << "eta = " << g17(p.eta) << "\n";
    out << "Z = " << g17(p.Z) << "\n";
    out << "scale = " << g17(p.scale) << "\n";
    out << "tube_radius = " << g17(p.tube_radius) << "\n";
    return out.str();
}

std::string serialize_requirements(const requirement_spec& req) {
    std::ostringstream out;
    out << "# scan requirements at unit scale\n";
    out << "max_tip_speed = " << g17(req.max_tip_speed) << "\n";
    out << "target_pitch = " << g17(req.target_pitch) << "\n";
    out << "max_pitch = " << g17(req.max_pitch) << "\n";
    out << "min_area = " << g17(req.min_area) << "\n";
    out << "max_duration = " << g17(req.max_duration) << "\n";
    out << "target_duration = " << g17(req.target_duration) << "\n";
    out << "max_height_change = " << g17(req.max_height_change) << "\n";
    out << "max_inclination_deg = " << g17(req.max_inclination_deg) << "\n";
    out << "hard_max_inclination_deg = " << g17(req.hard_max_inclination_deg) << "\n";
    out << "nominal_tip_distance = " << g17(req.nominal_tip_distance) << "\n";
    out << "min_tip_distance = " << g17(req.min_tip_distance) << "\n";
    out << "max_tip_distance = " << g17(req.max_tip_distance) << "\n";
    return out.str();
}

std::string serialize_profile(const conic_profile& profile) {
    std::ostringstream out;
    out << "# conic cam profile f(s) = A*s^2 + B*s + C\n";
    out << "# f_max = " << g17(profile.f_max) << " (recomputed on load)\n";
    out << "A = " << g17(profile.A) << "\n";
    out << "B = " << g17(profile.B) << "\n";
    out << "C = " << g17(profile.C) << "\n";
    out << "s_max = " << g17(profile.s_max) << "\n";
    return out.str();
}

std::string serialize_drag(const drag_params& params) {
    std::ostringstream out;
    out << "# tissue drag surrogate\n";
    out << "stick_radius = " << g17(params.stick_radius) << "\n";
    out << "lag_time = " << g17(params.lag_time) << "\n";
    out << "creep_gain = " << g17(params.creep_gain) << "\n";
    return out.str();
}

design_params load_design(const std::string& path) { return design_from_kv(load_kv(path)); }
requirement_spec load_requirements(const std::string& path) {
    return requirements_from_kv(load_kv(path));
}
conic_profile load_profile(const std::string& path) { return profile_from_kv(load_kv(path)); }
drag_params load_drag(const std::string& path) { return drag_from_kv(load_kv(path)); }

std::string serialize_trajectory(const trajectory& traj) {
    std::ostringstream out;
    out << "t,x,y\n";
    for (const auto& s : traj.samples)
        out << g17(s.t) << "," << g17(s.x) << "," << g17(s.y) << "\n";
    return out.str();
}

namespace {

std::vector<std::array<double, 3>> parse_csv_rows(const std::string& text,
                                                  const char* expected_header) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw parse_error("csv: empty file");
    if (trim(line) != expected_header)
        throw parse_error(std::string("csv: expected header '") + expected_header + "', got '" +
                          trim(line) + "'");
    std::vector<std::array<double, 3>> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty())
            continue;
        std::array<double, 3> row;
        std::size_t pos = 0;
        for (int col = 0; col < 3; ++col) {
            std::size_t comma = t.find(',', pos);
            bool last = (col == 2);
            if (last != (comma == std::string::npos)) {
                std::ostringstream msg;
                msg << "csv line " << lineno << ": expected 3 comma-separated values";
                throw parse_error(msg.str());
            }
            std::string field = last ? t.substr(pos) : t.substr(pos, comma - pos);
            std::ostringstream ctx;
            ctx << "csv line " << lineno;
            row[static_cast<std::size_t>(col)] = parse_number(trim(field), ctx.str());
            pos = comma + 1;
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

trajectory parse_trajectory(const std::string& text) {
    trajectory traj;
    for (const auto& row : parse_csv_rows(text, "t,x,y"))
        traj.samples.push_back({row[0], row[1], row[2]});
    traj.validate();
    return traj;
}

void save_trajectory(const trajectory& traj, const std::string& path) {
    write_text_file(path, serialize_trajectory(traj));
}

trajectory load_trajectory(const std::string& path) {
    return parse_trajectory(read_text_file(path));
}

std::string serialize_program(const cam_program& program) {
    std::ostringstream out;
    out << "t,omega_cam,omega_motor\n";
    for (const auto& sp : program.setpoints) {
        double motor = sp.omega_cam * program.gear_ratio_motor_per_cam;
        out << g17(sp.t) << "," << g17(sp.omega_cam) << "," << g17(motor) << "\n";
    }
    if (program.rewind.present) {
        double t = program.forward_duration() + program.rewind.duration;
        double cam = -program.rewind.omega;
        out << g17(t) << "," << g17(cam) << ","
            << g17(cam * program.gear_ratio_motor_per_cam) << "\n";
    }
    return out.str();
}

cam_program parse_program(const std::string& text) {
    auto rows = parse_csv_rows(text, "t,omega_cam,omega_motor");
    if (rows.empty())
        throw parse_error("program csv: no setpoints");

    cam_program prog;
    // The gear ratio is implied by the rows; snap to the exact 24/11 drive
    // ratio when it matches.
    double ratio = 24.0 / 11.0;
    for (const auto& row : rows) {
        if (row[1] != 0.0) {
            double implied = row[2] / row[1];
            if (std::fabs(implied - ratio) > 1e-9 * ratio)
                ratio = implied;
            break;
        }
    }
    prog.gear_ratio_motor_per_cam = ratio;

    std::size_t n = rows.size();
    std::size_t fwd_end = n;
    if (n >= 2 && rows[n - 1][1] < 0.0)
        fwd_end = n - 1;
    for (std::size_t i = 0; i < fwd_end; ++i) {
        if (rows[i][1] < 0.0)
            throw parse_error("program csv: negative omega inside the forward phase");
        prog.setpoints.push_back({rows[i][0], rows[i][1]});
    }
    if (fwd_end < n) {
        prog.rewind.present = true;
        prog.rewind.omega = -rows[n - 1][1];
        prog.rewind.duration = rows[n - 1][0] - rows[fwd_end - 1][0];
    }
    prog.validate();
    return prog;
}

void save_program(const cam_program& program, const std::string& path) {
    write_text_file(path, serialize_program(program));
}

cam_program load_program(const std::string& path) {
    return parse_program(read_text_file(path));
}

std::string render_svg_plot(const std::vector<plot_series>& series, double px_per_mm) {
    if (series.empty())
        throw parse_error("svg plot: no series");
    if (!(px_per_mm > 0.0) || !std::isfinite(px_per_mm))
        throw parse_error("svg plot: scale must be positive");

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series) {
        if (!s.traj || s.traj->samples.empty())
            throw parse_error("svg plot: empty series '" + s.label + "'");
        for (const auto& p : s.traj->samples) {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
    }
    double pad = std::max(0.5, 0.05 * std::max(xmax - xmin, ymax - ymin));
    xmin -= pad;
    xmax += pad;
    ymin -= pad;
    ymax += pad;

    double w = (xmax - xmin) * px_per_mm;
    double h = (ymax - ymin) * px_per_mm;
    auto to_px_x = [&](double x) { return (x - xmin) * px_per_mm; };
    auto to_px_y = [&](double y) { return (ymax - y) * px_per_mm; };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b"};
    constexpr int n_colors = 6;

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << px(w)
        << "\" height=\"" << px(h) << "\" viewBox=\"0 0 " << px(w) << " " << px(h) << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << px(w) << "\" height=\"" << px(h)
        << "\" fill=\"#ffffff\"/>\n";

    // 1 mm grid.
    out << "<g stroke=\"#e0e0e0\" stroke-width=\"1\">\n";
    for (double gx = std::ceil(xmin); gx <= std::floor(xmax) + 1e-9; gx += 1.0) {
        out << "<line x1=\"" << px(to_px_x(gx)) << "\" y1=\"0\" x2=\"" << px(to_px_x(gx))
            << "\" y2=\"" << px(h) << "\"/>\n";
    }
    for (double gy = std::ceil(ymin); gy <= std::floor(ymax) + 1e-9; gy += 1.0) {
        out << "<line x1=\"0\" y1=\"" << px(to_px_y(gy)) << "\" x2=\"" << px(w) << "\" y2=\""
            << px(to_px_y(gy)) << "\"/>\n";
    }
    out << "</g>\n";

    // Axes through the origin.
    out << "<g stroke=\"#808080\" stroke-width=\"1.5\">\n";
    if (xmin <= 0.0 && xmax >= 0.0)
        out << "<line x1=\"" << px(to_px_x(0.0)) << "\" y1=\"0\" x2=\"" << px(to_px_x(0.0))
            << "\" y2=\"" << px(h) << "\"/>\n";
    if (ymin <= 0.0 && ymax >= 0.0)
        out << "<line x1=\"0\" y1=\"" << px(to_px_y(0.0)) << "\" x2=\"" << px(w) << "\" y2=\""
            << px(to_px_y(0.0)) << "\"/>\n";
    out << "</g>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const char* color = palette[i % n_colors];
        const auto& pts = s.traj->samples;
        if (pts.size() == 1 || s.style == plot_style::dots) {
            out << "<g fill=\"" << color << "\">\n";
            for (const auto& p : pts)
                out << "<circle cx=\"" << px(to_px_x(p.x)) << "\" cy=\"" << px(to_px_y(p.y))
                    << "\" r=\"2.5\"/>\n";
            out << "</g>\n";
        } else {
            out << "<polyline fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t j = 0; j < pts.size(); ++j) {
                if (j)
                    out << " ";
                out << px(to_px_x(pts[j].x)) << "," << px(to_px_y(pts[j].y));
            }
            out << "\"/>\n";
        }
    }

    // Legend, top-left.
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = palette[i % n_colors];
        double ly = 14.0 + 18.0 * static_cast<double>(i);
        out << "<rect x=\"10\" y=\"" << px(ly - 9.0) << "\" width=\"12\" height=\"12\" fill=\""
            << color << "\"/>\n";
        std::string label = series[i].label.empty() ? series[i].traj->label : series[i].label;
        out << "<text x=\"27\" y=\"" << px(ly + 1.0)
            << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#202020\">"
            << escape_xml(label) << "</text>\n";
    }

    out << "</svg>\n";
    return out.str();
}

void save_svg_plot(const std::vector<plot_series>& series, const std::string& path,
                   double px_per_mm) {
    write_text_file(path, render_svg_plot(series, px_per_mm));
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw parse_error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw parse_error("cannot write file: " + path);
    out << content;
    if (!out)
        throw parse_error("write failed: " + path);
}

}  // namespace conescan
