#include "conescan/cli.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>

#include <CLI11.hpp>

#include "conescan/errors.hpp"
#include "conescan/geometry.hpp"
#include "conescan/io.hpp"
#include "conescan/kinematics.hpp"
#include "conescan/metrics.hpp"
#include "conescan/planning.hpp"
#include "conescan/profile.hpp"

namespace conescan {

namespace {

design_params design_from(const std::string& path) {
    return path.empty() ? design_params{} : load_design(path);
}

requirement_spec requirements_from(const std::string& path) {
    return path.empty() ? requirement_spec{} : load_requirements(path);
}

// Fits the default profile when no --profile file is given.
conic_profile profile_from(const std::string& path, const design_params& p) {
    return path.empty() ? fit_profile(generate_fit_samples(p, 6)) : load_profile(path);
}

void print_kv(const char* key, double value) {
    std::printf("%s = %.9g\n", key, value);
}

// Heel displacement at which the deflection first reaches full travel Z.
double full_travel_displacement(const conic_profile& profile, const design_params& p) {
    auto reaches = [&](double d) {
        try {
            return solve_deflection(d, profile, p) >= p.Z;
        } catch (const numeric_error&) {
            return true;  // contact lost: past full travel
        }
    };
    double hi = p.d_max();
    int grow = 0;
    while (!reaches(hi)) {
        hi *= 1.25;
        if (++grow > 50)
            throw numeric_error("profile never reaches full deflection");
    }
    double lo = 0.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-10 * p.d_max(); ++it) {
        double mid = 0.5 * (lo + hi);
        if (reaches(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

int cmd_fit_profile(const std::string& design_path, int n_samples,
                    const std::string& out_path) {
    design_params p = design_from(design_path);
    conic_profile profile = fit_profile(generate_fit_samples(p, n_samples));
    print_kv("A", profile.A);
    print_kv("B", profile.B);
    print_kv("C", profile.C);
    print_kv("s_max", profile.s_max);
    print_kv("f_max", profile.f_max);
    linearity_report rep = make_linearity_report(profile, p, 200);
    print_kv("max_abs_residual", rep.max_abs_residual);
    if (!out_path.empty())
        write_text_file(out_path, serialize_profile(profile));
    return 0;
}

int cmd_solve(const std::string& design_path, const std::string& profile_path, double d) {
    design_params p = design_from(design_path);
    conic_profile profile = profile_from(profile_path, p);
    double z = solve_deflection(d, profile, p);
    print_kv("z", z);
    print_kv("target_z", target_deflection(d, p));
    return 0;
}

int cmd_simulate(const std::string& design_path, const std::string& profile_path,
                 const std::string& program_path, double omega, double turns, double dt,
                 const std::string& out_path) {
    design_params p = design_from(design_path);
    conic_profile profile = profile_from(profile_path, p);

    cam_program program;
    if (!program_path.empty()) {
        program = load_program(program_path);
    } else {
        double phi_end;
        if (turns > 0.0) {
            phi_end = 2.0 * std::numbers::pi * turns;
        } else {
            double d_full = full_travel_displacement(profile, p);
            phi_end = 2.0 * std::numbers::pi * d_full / p.eta;
        }
        program.setpoints = {{0.0, omega}, {phi_end / omega, omega}};
    }

    trajectory traj = simulate_scan(program, profile, p, dt);
    traj.label = "scan";
    if (!out_path.empty())
        save_trajectory(traj, out_path);

    double max_r = 0.0;
    for (const auto& s : traj.samples)
        max_r = std::max(max_r, std::hypot(s.x, s.y));
    print_kv("duration", traj.t_end());
    print_kv("samples", static_cast<double>(traj.samples.size()));
    print_kv("max_radius", max_r);
    print_kv("turns", program.forward_turns());
    return 0;
}

int cmd_check(const std::string& design_path, const std::string& profile_path,
              const std::string& req_path) {
    design_params p = design_from(design_path);
    conic_profile profile = profile_from(profile_path, p);
    requirement_spec req = requirements_from(req_path);
    constraint_report rep = validate_design(profile, p, req);
    for (const auto& e : rep.entries) {
        std::printf("%s %s: value %.9g, bound %.9g\n", e.pass ? "PASS" : "FAIL",
                    e.name.c_str(), e.value, e.bound);
    }
    std::printf("%s\n", rep.all_pass() ? "ALL PASS" : "CONSTRAINT FAILURE");
    return rep.all_pass() ? 0 : 1;
}

int cmd_motor_profile(const std::string& design_path, const std::string& profile_path,
                      const std::string& req_path, double speed, double cap, double dt,
                      const std::string& out_path) {
    design_params p = design_from(design_path);
    conic_profile profile = profile_from(profile_path, p);
    requirement_spec req = requirements_from(req_path);
    cam_program program = constant_speed_cam_program(profile, p, speed, cap, dt, req);
    if (!out_path.empty())
        save_program(program, out_path);
    print_kv("forward_duration", program.forward_duration());
    print_kv("forward_turns", program.forward_turns());
    print_kv("rewind_duration", program.rewind.duration);
    print_kv("rewind_omega", program.rewind.omega);
    print_kv("gear_ratio", program.gear_ratio_motor_per_cam);
    return 0;
}

int cmd_plan(const std::string& pattern, double pitch, double radius, double width,
             double height, double speed, double dt, double scale,
             const std::string& req_path, const std::string& out_path) {
    requirement_spec req = requirements_from(req_path);
    scan_plan plan;
    if (pattern == "spiral")
        plan = plan_spiral(pitch, radius, speed, dt, req, scale);
    else if (pattern == "raster")
        plan = plan_raster(pitch, width, height, speed, dt, req, scale);
    else
        throw parse_error("plan: pattern must be 'spiral' or 'raster'");
    if (!out_path.empty())
        save_trajectory(plan.traj, out_path);
    print_kv("duration", plan.traj.t_end());
    print_kv("samples", static_cast<double>(plan.traj.samples.size()));
    coverage_result cov = coverage_report(plan.traj, 0.1 * scale, req);
    print_kv("covered_area", cov.covered_area);
    print_kv("max_spacing", cov.max_spacing);
    return 0;
}

int cmd_compare(const std::string& image_path, const std::string& probe_path, double grid_dt,
                bool use_drag, const drag_params& drag) {
    trajectory probe = load_trajectory(probe_path);
    trajectory image;
    if (use_drag)
        image = apply_drag_surrogate(probe, drag);
    else if (!image_path.empty())
        image = load_trajectory(image_path);
    else
        throw parse_error("compare: need --image or drag parameters");
    mismatch_report rep = mismatch(image, probe, grid_dt);
    print_kv("D", rep.D);
    print_kv("C", rep.C);
    print_kv("t_f", rep.t_f);
    print_kv("n_samples", static_cast<double>(rep.n_samples));
    return 0;
}

int cmd_match_ratio(const std::string& traj_path, double pitch, double radius,
                    double dot_spacing, double half_thickness) {
    trajectory traj = load_trajectory(traj_path);
    match_ratio_report rep = match_ratio(traj, pitch, radius, dot_spacing, half_thickness);
    print_kv("ratio", rep.ratio);
    print_kv("matched", static_cast<double>(rep.matched));
    print_kv("mismatched", static_cast<double>(rep.mismatched));
    print_kv("irrelevant", static_cast<double>(rep.irrelevant));
    return 0;
}

int cmd_plot(const std::vector<std::string>& traj_paths,
             const std::vector<std::string>& labels, const std::string& style_name,
             double px_per_mm, const std::string& out_path) {
    if (traj_paths.empty())
        throw parse_error("plot: need at least one --traj file");
    plot_style style = plot_style::polyline;
    if (style_name == "dots")
        style = plot_style::dots;
    else if (style_name != "polyline")
        throw parse_error("plot: style must be 'polyline' or 'dots'");

    std::vector<trajectory> trajs;
    trajs.reserve(traj_paths.size());
    for (const auto& path : traj_paths)
        trajs.push_back(load_trajectory(path));
    std::vector<plot_series> series;
    for (std::size_t i = 0; i < trajs.size(); ++i) {
        std::string label = i < labels.size() ? labels[i] : traj_paths[i];
        series.push_back({label, &trajs[i], style});
    }
    save_svg_plot(series, out_path, px_per_mm);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"cam-on-cone distal scanner design and verification tool"};
    app.require_subcommand(1);

    // fit-profile
    auto* fit = app.add_subcommand("fit-profile", "fit the conic cam profile for a design");
    std::string fit_design, fit_out;
    int fit_samples = 6;
    fit->add_option("--design", fit_design, "design config file");
    fit->add_option("--samples", fit_samples, "number of nonzero fit samples")
        ->check(CLI::Range(3, 10000));
    fit->add_option("--out", fit_out, "output profile config file");

    // solve
    auto* solve = app.add_subcommand("solve", "deflection for a heel displacement");
    std::string solve_design, solve_profile;
    double solve_d = 0.0;
    solve->add_option("--design", solve_design, "design config file");
    solve->add_option("--profile", solve_profile, "profile config file");
    solve->add_option("--d", solve_d, "heel displacement in mm")->required();

    // simulate
    auto* sim = app.add_subcommand("simulate", "integrate a cam program into a trajectory");
    std::string sim_design, sim_profile, sim_program, sim_out;
    double sim_omega = 1.0, sim_turns = 0.0, sim_dt = 0.01;
    sim->add_option("--design", sim_design, "design config file");
    sim->add_option("--profile", sim_profile, "profile config file");
    sim->add_option("--program", sim_program, "cam program csv (overrides --omega/--turns)");
    sim->add_option("--omega", sim_omega, "constant cam speed in rad/s");
    sim->add_option("--turns", sim_turns, "cam turns (0 = run to full deflection)");
    sim->add_option("--dt", sim_dt, "time step in s");
    sim->add_option("--out", sim_out, "output trajectory csv");

    // check
    auto* check = app.add_subcommand("check", "validate a design against requirements");
    std::string check_design, check_profile, check_req;
    check->add_option("--design", check_design, "design config file");
    check->add_option("--profile", check_profile, "profile config file");
    check->add_option("--requirements", check_req, "requirements config file");

    // motor-profile
    auto* motor = app.add_subcommand("motor-profile", "constant-speed cam/motor program");
    std::string motor_design, motor_profile, motor_req, motor_out;
    double motor_speed = 0.38, motor_cap = 3.0, motor_dt = 0.01;
    motor->add_option("--design", motor_design, "design config file");
    motor->add_option("--profile", motor_profile, "profile config file");
    motor->add_option("--requirements", motor_req, "requirements config file");
    motor->add_option("--speed", motor_speed, "tip speed in mm/s");
    motor->add_option("--cap", motor_cap, "cam speed cap in rad/s");
    motor->add_option("--dt", motor_dt, "setpoint spacing in s");
    motor->add_option("--out", motor_out, "output program csv");

    // plan
    auto* plan = app.add_subcommand("plan", "reference scan trajectory");
    std::string plan_pattern = "spiral", plan_req, plan_out;
    double plan_pitch = 0.15, plan_radius = 1.0, plan_width = 2.0, plan_height = 2.0;
    double plan_speed = 0.38, plan_dt = 0.01, plan_scale = 1.0;
    plan->add_option("--pattern", plan_pattern, "spiral or raster");
    plan->add_option("--pitch", plan_pitch, "pass spacing in mm");
    plan->add_option("--radius", plan_radius, "spiral outer radius in mm");
    plan->add_option("--width", plan_width, "raster width in mm");
    plan->add_option("--height", plan_height, "raster height in mm");
    plan->add_option("--speed", plan_speed, "tip speed in mm/s");
    plan->add_option("--dt", plan_dt, "time step in s");
    plan->add_option("--scale", plan_scale, "design scale factor for limits");
    plan->add_option("--requirements", plan_req, "requirements config file");
    plan->add_option("--out", plan_out, "output trajectory csv");

    // compare
    auto* cmp = app.add_subcommand("compare", "position/velocity mismatch of two trajectories");
    std::string cmp_image, cmp_probe;
    double cmp_grid = 1.0 / 12.0;
    drag_params cmp_drag;
    bool cmp_use_drag = false;
    cmp->add_option("--image", cmp_image, "image trajectory csv");
    cmp->add_option("--probe", cmp_probe, "probe trajectory csv")->required();
    cmp->add_option("--grid", cmp_grid, "comparison grid step in s");
    auto* opt_stick =
        cmp->add_option("--drag-stick", cmp_drag.stick_radius, "drag stick radius in mm");
    auto* opt_lag = cmp->add_option("--drag-lag", cmp_drag.lag_time, "drag lag time in s");
    auto* opt_creep = cmp->add_option("--drag-creep", cmp_drag.creep_gain, "drag creep gain");

    // match-ratio
    auto* match = app.add_subcommand("match-ratio", "score a scan against the ideal spiral");
    std::string match_traj;
    double match_pitch = 0.15, match_radius = 1.0, match_spacing = 0.05, match_half = 0.015;
    match->add_option("--traj", match_traj, "trajectory csv")->required();
    match->add_option("--pitch", match_pitch, "ideal spiral pitch in mm");
    match->add_option("--radius", match_radius, "ideal spiral outer radius in mm");
    match->add_option("--dot-spacing", match_spacing, "reference dot arc spacing in mm");
    match->add_option("--half-thickness", match_half, "match half-thickness in mm");

    // plot
    auto* plot = app.add_subcommand("plot", "render trajectories to SVG");
    std::vector<std::string> plot_trajs, plot_labels;
    std::string plot_out, plot_style_name = "polyline";
    double plot_scale = 100.0;
    plot->add_option("--traj", plot_trajs, "trajectory csv (repeatable)");
    plot->add_option("--label", plot_labels, "series label (repeatable)");
    plot->add_option("--style", plot_style_name, "polyline or dots");
    plot->add_option("--scale", plot_scale, "pixels per mm");
    plot->add_option("--out", plot_out, "output svg file")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);

        if (app.got_subcommand(fit))
            return cmd_fit_profile(fit_design, fit_samples, fit_out);
        if (app.got_subcommand(solve))
            return cmd_solve(solve_design, solve_profile, solve_d);
        if (app.got_subcommand(sim))
            return cmd_simulate(sim_design, sim_profile, sim_program, sim_omega, sim_turns,
                                sim_dt, sim_out);
        if (app.got_subcommand(check))
            return cmd_check(check_design, check_profile, check_req);
        if (app.got_subcommand(motor))
            return cmd_motor_profile(motor_design, motor_profile, motor_req, motor_speed,
                                     motor_cap, motor_dt, motor_out);
        if (app.got_subcommand(plan))
            return cmd_plan(plan_pattern, plan_pitch, plan_radius, plan_width, plan_height,
                            plan_speed, plan_dt, plan_scale, plan_req, plan_out);
        if (app.got_subcommand(cmp)) {
            cmp_use_drag = opt_stick->count() || opt_lag->count() || opt_creep->count();
            return cmd_compare(cmp_image, cmp_probe, cmp_grid, cmp_use_drag, cmp_drag);
        }
        if (app.got_subcommand(match))
            return cmd_match_ratio(match_traj, match_pitch, match_radius, match_spacing,
                                   match_half);
        if (app.got_subcommand(plot))
            return cmd_plot(plot_trajs, plot_labels, plot_style_name, plot_scale, plot_out);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const constraint_error& e) {
        std::cerr << "constraint violation: " << e.what() << "\n";
        return 1;
    } catch (const numeric_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace conescan
