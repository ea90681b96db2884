// Command-line surface for the restless-bandit toolkit: index computation
// and indexability checking, structural diagnostics, policy simulation,
// and fixture export.
//
// Exit codes: 0 success, 1 domain error (non-convergence, or a policy
// that needs indices on a non-indexable arm), 2 usage or parse error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rmab/fixtures.hpp"
#include "rmab/indexability.hpp"
#include "rmab/model_io.hpp"
#include "rmab/simulate.hpp"

namespace {

using namespace rmab;

// A domain failure that maps to exit code 1.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

constexpr const char* kFixturePrefix = "fixture:";

bool is_fixture_ref(const std::string& spec) { return spec.rfind(kFixturePrefix, 0) == 0; }

// Resolves "fixture:NAME" or a file path to a parsed model file.
ModelFile resolve_model(const std::string& spec) {
    if (is_fixture_ref(spec)) {
        const std::string name = spec.substr(std::string(kFixturePrefix).size());
        if (!is_fixture(name) && !is_instance_fixture(name)) {
            throw ModelParseError("unknown fixture \"" + name + "\"");
        }
        return fixture_model_file(name);
    }
    return load_model_file(spec);
}

const NamedArm& pick_arm(const ModelFile& file, const std::string& arm_name) {
    if (!arm_name.empty()) {
        for (const auto& arm : file.arms) {
            if (arm.name == arm_name) return arm;
        }
        throw ModelParseError("no arm named \"" + arm_name + "\" in the model file");
    }
    if (file.arms.size() != 1) {
        throw ModelParseError("model file has several arms; pick one with --arm");
    }
    return file.arms[0];
}

void apply_beta_override(ModelFile& file, double beta) {
    if (beta == 0.0) return;
    for (auto& arm : file.arms) {
        arm.model.discount = beta;
        arm.model.validate(arm.name);
    }
}

struct GridOptions {
    double lo = 0.0, hi = 0.0;
    int points = 0;
};

SubsidyGrid make_grid(const GridOptions& opt, const ArmModel& arm) {
    if (opt.points == 0 && opt.lo == 0.0 && opt.hi == 0.0) return SubsidyGrid::default_for(arm);
    GridOptions g = opt;
    if (g.points == 0) g.points = 201;
    if (g.lo == 0.0 && g.hi == 0.0) {
        const SubsidyGrid d = SubsidyGrid::default_for(arm);
        g.lo = d.points.front();
        g.hi = d.points.back();
    }
    if (!(g.lo < g.hi) || g.points < 2) {
        throw std::invalid_argument("grid needs --grid-min < --grid-max and --grid-points >= 2");
    }
    return SubsidyGrid::linspace(g.lo, g.hi, g.points);
}

void print_verdict(const IndexReport& report) {
    if (report.indexable) {
        std::cout << "INDEXABLE\n";
    } else {
        const Witness& w = report.witnesses.front();
        std::cout << "NON-INDEXABLE state=" << w.state << " lambdas=" << fmt(w.lambda_active_low)
                  << ',' << fmt(w.lambda_passive) << ',' << fmt(w.lambda_active_high) << '\n';
    }
}

int cmd_index(const std::string& model_spec, const std::string& arm_name, const GridOptions& grid_opt,
              SolverConfig solver, bool refine, double beta_override, const std::string& out) {
    ModelFile file = resolve_model(model_spec);
    apply_beta_override(file, beta_override);
    const NamedArm& arm = pick_arm(file, arm_name);
    const SubsidyGrid grid = make_grid(grid_opt, arm.model);

    const PolicyMatrix pm = compute_policy_matrix(arm.model, grid, solver);
    IndexReport report = verify_indexability(pm);
    if (refine && report.indexable) {
        report = compute_whittle_indices(arm.model, grid, solver, true);
    }

    write_policy_csv_file(pm, out + ".policy.csv");
    write_index_csv_file(report, out + ".index.csv");
    print_verdict(report);
    return 0;
}

int cmd_check(const std::string& model_spec, const std::string& arm_name, double beta_override) {
    ModelFile file = resolve_model(model_spec);
    apply_beta_override(file, beta_override);
    const NamedArm& arm = pick_arm(file, arm_name);
    const StructuralReport rep = check_structural_conditions(arm.model);

    auto line = [](const std::string& name, bool value) {
        std::cout << name << ": " << (value ? "true" : "false") << '\n';
    };
    for (int a = 0; a < 2; ++a) {
        line("reward_monotone_nondecreasing[a=" + std::to_string(a) + "]",
             rep.reward_monotone_nondecreasing[a]);
    }
    for (int a = 0; a < 2; ++a) {
        line("reward_monotone_nonincreasing[a=" + std::to_string(a) + "]",
             rep.reward_monotone_nonincreasing[a]);
    }
    for (int a = 0; a < 2; ++a) {
        line("tail_monotone[a=" + std::to_string(a) + "]", rep.tail_monotone[a]);
    }
    line("reward_superadditive", rep.reward_superadditive);
    line("reward_subadditive", rep.reward_subadditive);
    line("tail_superadditive", rep.tail_superadditive);
    line("tail_subadditive", rep.tail_subadditive);
    line("theorem1_nondecreasing_case", rep.theorem1_nondecreasing_case);
    line("theorem1_nonincreasing_case", rep.theorem1_nonincreasing_case);
    return 0;
}

// Whittle indices for every arm of an instance, refined, using each arm's
// default grid. Cached in a sidecar file next to the model (no cache for
// fixture references) keyed by a digest of the arm and solver settings.
IndexTable whittle_table(const RmabInstance& instance, const std::vector<std::string>& arm_names,
                         const SolverConfig& solver, const std::string& sidecar_path) {
    nlohmann::json cache;
    bool cache_loaded = false;
    if (!sidecar_path.empty()) {
        std::ifstream in(sidecar_path, std::ios::binary);
        if (in) {
            try {
                in >> cache;
                cache_loaded = cache.is_object() && cache.contains("index_cache");
            } catch (...) {
                cache_loaded = false;
            }
        }
    }

    auto arm_digest = [&](int n) {
        ModelFile single;
        single.arms.push_back({arm_names[n], instance.arms[n]});
        nlohmann::json key;
        key["arm"] = serialize_model(single);
        key["max_iterations"] = solver.max_iterations;
        key["value_tolerance"] = solver.value_tolerance;
        key["action_tolerance"] = solver.action_tolerance;
        key["refine"] = true;
        return digest64(key.dump());
    };

    IndexTable table;
    table.per_arm.resize(instance.num_arms());
    bool cache_dirty = false;
    for (int n = 0; n < instance.num_arms(); ++n) {
        const std::string digest = arm_digest(n);
        if (cache_loaded) {
            bool found = false;
            for (const auto& entry : cache["index_cache"]) {
                if (entry.value("digest", "") == digest) {
                    table.per_arm[n] = entry["indices"].get<std::vector<double>>();
                    found = true;
                    break;
                }
            }
            if (found) continue;
        }
        const SubsidyGrid grid = SubsidyGrid::default_for(instance.arms[n]);
        const IndexReport report = compute_whittle_indices(instance.arms[n], grid, solver, true);
        if (!report.indexable) {
            const Witness& w = report.witnesses.front();
            throw DomainError("whittle policy needs indices, but arm " + std::to_string(n + 1) +
                              " (" + arm_names[n] + ") is NON-INDEXABLE at state " +
                              std::to_string(w.state));
        }
        table.per_arm[n] = report.whittle_index;
        if (!cache.is_object()) cache = nlohmann::json::object();
        if (!cache.contains("format_version")) cache["format_version"] = 1;
        if (!cache.contains("index_cache")) cache["index_cache"] = nlohmann::json::array();
        nlohmann::json entry;
        entry["arm"] = arm_names[n];
        entry["digest"] = digest;
        entry["indices"] = table.per_arm[n];
        cache["index_cache"].push_back(entry);
        cache_dirty = true;
    }

    if (!sidecar_path.empty() && cache_dirty) {
        std::ofstream out(sidecar_path, std::ios::binary);
        if (out) out << cache.dump(2) << '\n';
    }
    return table;
}

int cmd_simulate(const std::string& model_spec, const std::string& policy_name, int horizon,
                 int reps, std::uint64_t seed, const RolloutConfig& rollout_cfg,
                 const std::string& init_csv, double beta_override, const std::string& out) {
    ModelFile file = resolve_model(model_spec);
    apply_beta_override(file, beta_override);
    const RmabInstance instance = build_instance(file);

    std::vector<std::string> arm_names;
    if (file.instance) {
        arm_names = file.instance->arm_names;
    } else {
        arm_names.push_back(file.arms[0].name);
    }

    SimulationConfig config;
    config.horizon_steps = horizon;
    config.replications = reps;
    config.seed = seed;
    if (!init_csv.empty()) {
        JointState state;
        std::istringstream is(init_csv);
        std::string tok;
        while (std::getline(is, tok, ',')) state.states.push_back(std::stoi(tok));
        state.validate(instance);
        config.initial_state = state;
    }

    if (policy_name == "myopic") {
        config.policy = MyopicPolicy{};
    } else if (policy_name == "whittle") {
        const std::string sidecar = is_fixture_ref(model_spec) ? "" : model_spec + ".whittle.json";
        config.policy = WhittlePolicy{whittle_table(instance, arm_names, SolverConfig{}, sidecar)};
    } else if (policy_name == "rollout") {
        config.policy = RolloutPolicy{rollout_cfg};
    } else {
        throw std::invalid_argument("--policy must be myopic, whittle or rollout");
    }

    const SimulationTrace trace = simulate(instance, config);
    write_trace_csv_file(trace, out);

    const int t_last = horizon - 1;
    std::cout << "final " << fmt(trace.per_step_mean[t_last]) << " +/- "
              << fmt(trace.per_step_stderr[t_last]) << '\n';
    return 0;
}

int cmd_fixtures_list(bool instances) {
    for (const auto& name : instances ? instance_fixture_names() : fixture_names()) {
        std::cout << name << '\n';
    }
    return 0;
}

int cmd_fixtures_export(const std::string& name, const std::string& path) {
    if (!is_fixture(name) && !is_instance_fixture(name)) {
        std::cerr << "unknown fixture \"" << name << "\"\n";
        return 2;
    }
    const std::string text = serialize_model(fixture_model_file(name));
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot write \"" + path + "\"");
    out << text;
    out.flush();
    if (!out) throw DomainError("write to \"" + path + "\" failed");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Restless-bandit toolkit: Whittle indices, indexability checks and policy simulation"};
    app.require_subcommand(1);

    std::string model_spec, arm_name, out_path, policy_name = "myopic", init_csv;
    GridOptions grid_opt;
    SolverConfig solver;
    RolloutConfig rollout_cfg;
    bool refine = false;
    double beta_override = 0.0;
    int horizon = 500, reps = 100;
    std::uint64_t seed = 1;

    auto add_model_arg = [&](CLI::App* cmd) {
        cmd->add_option("model", model_spec,
                        "model file path, or fixture:NAME (see `fixtures list`)")
            ->required();
    };
    auto add_solver_flags = [&](CLI::App* cmd) {
        cmd->add_option("--delta", solver.action_tolerance, "action tie threshold");
        cmd->add_option("--tol", solver.value_tolerance, "value-iteration stopping tolerance");
        cmd->add_option("--max-iters", solver.max_iterations, "value-iteration iteration cap");
        cmd->add_option("--beta-override", beta_override, "replace every arm's discount factor");
    };

    CLI::App* index = app.add_subcommand("index", "compute the policy matrix and Whittle indices");
    add_model_arg(index);
    index->add_option("--arm", arm_name, "arm name when the file defines several");
    index->add_option("--grid-min", grid_opt.lo, "lowest subsidy grid point");
    index->add_option("--grid-max", grid_opt.hi, "highest subsidy grid point");
    index->add_option("--grid-points", grid_opt.points, "number of grid points");
    add_solver_flags(index);
    index->add_flag("--refine", refine, "bisect each index between its bracketing grid points");
    index->add_option("--out", out_path, "output prefix for .policy.csv and .index.csv")->required();

    CLI::App* check = app.add_subcommand("check", "evaluate the structural threshold conditions");
    add_model_arg(check);
    check->add_option("--arm", arm_name, "arm name when the file defines several");
    check->add_option("--beta-override", beta_override, "replace every arm's discount factor");

    CLI::App* simulate_cmd = app.add_subcommand("simulate", "simulate a policy on an instance");
    add_model_arg(simulate_cmd);
    simulate_cmd->add_option("--policy", policy_name, "myopic, whittle or rollout");
    simulate_cmd->add_option("--horizon", horizon, "time steps per replication")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--reps", reps, "number of replications")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--seed", seed, "stream seed");
    simulate_cmd->add_option("--rollout-h", rollout_cfg.horizon, "rollout look-ahead length");
    simulate_cmd->add_option("--rollout-l", rollout_cfg.trajectories, "rollout trajectories per action");
    simulate_cmd->add_option("--candidates", rollout_cfg.candidate_limit,
                             "candidate action sets when several arms are played");
    simulate_cmd->add_option("--init", init_csv, "fixed initial joint state, e.g. 1,3,2");
    simulate_cmd->add_option("--beta-override", beta_override, "replace every arm's discount factor");
    simulate_cmd->add_option("--out", out_path, "trace CSV path")->required();

    CLI::App* fixtures = app.add_subcommand("fixtures", "list or export the built-in models");
    fixtures->require_subcommand(1);
    bool list_instances = false;
    CLI::App* fx_list = fixtures->add_subcommand("list", "print fixture names");
    fx_list->add_flag("--instances", list_instances, "list multi-arm instance fixtures instead");
    std::string fx_name, fx_path;
    CLI::App* fx_export = fixtures->add_subcommand("export", "write a fixture as a model file");
    fx_export->add_option("name", fx_name, "fixture name")->required();
    fx_export->add_option("path", fx_path, "destination path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }

    try {
        if (index->parsed()) {
            return cmd_index(model_spec, arm_name, grid_opt, solver, refine, beta_override, out_path);
        }
        if (check->parsed()) {
            return cmd_check(model_spec, arm_name, beta_override);
        }
        if (simulate_cmd->parsed()) {
            return cmd_simulate(model_spec, policy_name, horizon, reps, seed, rollout_cfg, init_csv,
                                beta_override, out_path);
        }
        if (fixtures->parsed()) {
            if (fx_list->parsed()) return cmd_fixtures_list(list_instances);
            return cmd_fixtures_export(fx_name, fx_path);
        }
    } catch (const ModelParseError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const SolveError& e) {
        std::cerr << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 1;
    }
    return 0;
}
