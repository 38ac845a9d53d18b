// depstat: run dependence tests on CSV datasets, generate rotation-mixed
// benchmark data, and run power-grid experiments.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 runtime failure.

#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "depstat/dataset_io.hpp"
#include "depstat/experiment.hpp"
#include "depstat/textio.hpp"

namespace {

using namespace depstat;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitRuntime = 3;

std::optional<std::pair<double, double>> parse_bandwidth_flag(const std::string& token) {
    if (token == "median")
        return std::nullopt;
    if (token.rfind("fixed:", 0) == 0) {
        const std::vector<std::string> parts = split(token.substr(6), ',');
        double sx = 0.0, sy = 0.0;
        if (parts.size() == 2 && parse_double(parts[0], sx) && parse_double(parts[1], sy))
            return std::make_pair(sx, sy);
    }
    throw CLI::ValidationError("--bandwidth", "expected 'median' or 'fixed:SX,SY'");
}

std::vector<double> parse_double_list(const std::string& csv, const std::string& flag) {
    std::vector<double> out;
    for (const std::string& tok : split(csv, ',')) {
        double v = 0.0;
        if (!parse_double(tok, v))
            throw CLI::ValidationError(flag, "bad number '" + tok + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& csv, const std::string& flag) {
    std::vector<int> out;
    for (const std::string& tok : split(csv, ',')) {
        long v = 0;
        if (!parse_long(tok, v))
            throw CLI::ValidationError(flag, "bad integer '" + tok + "'");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

std::string json_str(std::string_view s) {
    return "\"" + std::string(s) + "\"";
}

std::string json_opt(const std::optional<double>& v) {
    return v ? fmt_g17(*v) : "null";
}

std::string test_result_json(const TestResult& r, int p_dim, int q_dim) {
    std::string out = "{";
    out += "\"statistic\": " + fmt_g17(r.statistic.value);
    out += ", \"stat_kind\": " + json_str(stat_kind_name(r.statistic.kind));
    out += ", \"threshold\": " + fmt_g17(r.threshold);
    out += ", \"p_value\": " + fmt_g17(r.p_value);
    out += std::string(", \"reject\": ") + (r.reject ? "true" : "false");
    out += ", \"n\": " + std::to_string(r.statistic.n);
    out += ", \"p\": " + std::to_string(p_dim);
    out += ", \"q\": " + std::to_string(q_dim);
    out += ", \"seed\": " + std::to_string(r.config.seed);
    out += ", \"null_model\": " + json_str(null_model_name(r.config.null_model));
    out += ", \"bandwidth_x\": " + json_opt(r.bandwidth_x);
    out += ", \"bandwidth_y\": " + json_opt(r.bandwidth_y);
    out += "}";
    return out;
}

std::string grid_config_json(const ExperimentGrid& g) {
    // reuse the report serializer's grid block
    PowerReport empty;
    empty.grid = g;
    const std::string full = emit_report_json(empty);
    const std::size_t start = full.find("{\n    \"thetas\"");
    const std::size_t end = full.find("\n  },");
    return "{" + full.substr(start + 1, end - start - 1) + "\n}";
}

struct TestArgs {
    std::string file;
    std::string stat = "hsic";
    std::string null_model = "permutation";
    int perms = 200;
    bool perms_given = false;
    double alpha = 0.05;
    std::string bandwidth = "median";
    std::uint64_t seed = 0;
};

int run_cmd_test(const TestArgs& args) {
    TestConfig config;
    try {
        config.stat = parse_stat_kind(args.stat);
        config.null_model = parse_null_model(args.null_model);
        config.alpha = args.alpha;
        config.permutations = args.perms;
        // The Gamma moment fit defaults to 50 permutations unless --perms
        // was given explicitly.
        if (config.null_model == NullModel::Gamma && args.perms_given)
            config.gamma_moment_perms = args.perms;
        config.fixed_bandwidths = parse_bandwidth_flag(args.bandwidth);
        config.seed = args.seed;
        config.validate();
    } catch (const CLI::Error& e) {
        std::cerr << "depstat test: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "depstat test: " << e.what() << "\n";
        return kExitUsage;
    }

    std::cerr << "depstat test: config {file: " << args.file
              << ", stat: " << stat_kind_name(config.stat)
              << ", null: " << null_model_name(config.null_model)
              << ", perms: " << config.permutations << ", alpha: " << fmt_g17(config.alpha)
              << ", bandwidth: " << args.bandwidth << ", seed: " << config.seed << "}\n";

    try {
        const PairedSample sample = parse_dataset_csv(read_file(args.file));
        const TestResult result = run_test(sample, config);
        std::cout << test_result_json(result, sample.p(), sample.q()) << "\n";
        return kExitOk;
    } catch (const ParseError& e) {
        std::cerr << "depstat test: " << args.file << ":" << e.line() << ": " << e.what() << "\n";
        return kExitData;
    } catch (const UnsupportedStatisticError& e) {
        std::cerr << "depstat test: " << e.what() << "\n";
        return kExitUsage;
    } catch (const UnsupportedDimensionError& e) {
        std::cerr << "depstat test: " << e.what() << "\n";
        return kExitData;
    } catch (const InsufficientSampleError& e) {
        std::cerr << "depstat test: " << e.what() << "\n";
        return kExitData;
    } catch (const InvalidInputError& e) {
        std::cerr << "depstat test: " << e.what() << "\n";
        return kExitData;
    } catch (const IoError& e) {
        std::cerr << "depstat test: " << e.what() << "\n";
        return kExitData;
    } catch (const Error& e) {
        std::cerr << "depstat test: " << e.what() << "\n";
        return kExitRuntime;
    }
}

struct GenArgs {
    double theta = 0.0;
    int d = 1;
    int n = 128;
    std::string density_x = "gauss-mix";
    std::string density_y = "gauss-mix";
    std::uint64_t seed = 0;
    std::string out;
};

int run_cmd_gen(const GenArgs& args) {
    MixConfig config;
    try {
        config.theta = args.theta;
        config.d = args.d;
        config.n = args.n;
        config.density_x = parse_source_density(args.density_x);
        config.density_y = parse_source_density(args.density_y);
        config.seed = args.seed;
        config.validate();
    } catch (const Error& e) {
        std::cerr << "depstat gen: " << e.what() << "\n";
        return kExitUsage;
    }

    std::cerr << "{\"theta\": " << fmt_g17(config.theta) << ", \"d\": " << config.d
              << ", \"n\": " << config.n << ", \"density_x\": "
              << json_str(source_density_name(config.density_x))
              << ", \"density_y\": " << json_str(source_density_name(config.density_y))
              << ", \"seed\": " << config.seed << ", \"out\": " << json_str(args.out) << "}\n";

    try {
        write_file(args.out, dataset_to_csv(generate_instance(config)));
        return kExitOk;
    } catch (const IoError& e) {
        std::cerr << "depstat gen: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const Error& e) {
        std::cerr << "depstat gen: " << e.what() << "\n";
        return kExitRuntime;
    }
}

struct PowerArgs {
    std::string config_file;
    std::string thetas;
    std::string ns;
    std::string ds;
    std::string tests;
    int reps = 300;
    int perms = 200;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    std::string density_x = "gauss-mix";
    std::string density_y = "gauss-mix";
    bool fresh_densities = false;
    int workers = 1;
    std::string format = "csv";
    std::string out;
    // which flags were set explicitly (config-file values win otherwise)
    bool thetas_given = false, ns_given = false, ds_given = false, tests_given = false;
    bool density_given = false, fresh_given = false;
    bool reps_given = false, perms_given = false, alpha_given = false, seed_given = false;
};

ExperimentGrid grid_from_args(const PowerArgs& args) {
    ExperimentGrid grid;
    const bool from_config = !args.config_file.empty();
    if (from_config) {
        grid = parse_grid_json(read_file(args.config_file));
    } else {
        // desk-scale defaults; the full-scale design (n up to 2048, d up
        // to 4, R = 500) is reachable through explicit flags
        grid.thetas.clear();
        for (int k = 0; k <= 8; ++k)
            grid.thetas.push_back(k * std::numbers::pi_v<double> / 32.0);
        grid.ns = {128, 512};
        grid.ds = {1, 2};
        grid.tests = {TestSpec{StatKind::HsicBiased, NullModel::Permutation},
                      TestSpec{StatKind::DCov, NullModel::Permutation}};
    }
    if (args.thetas_given)
        grid.thetas = parse_double_list(args.thetas, "--thetas");
    if (args.ns_given)
        grid.ns = parse_int_list(args.ns, "--ns");
    if (args.ds_given)
        grid.ds = parse_int_list(args.ds, "--ds");
    if (args.tests_given) {
        grid.tests.clear();
        for (const std::string& tok : split(args.tests, ','))
            grid.tests.push_back(parse_test_spec(tok));
    }
    if (args.reps_given || !from_config)
        grid.repetitions = args.reps;
    if (args.perms_given || !from_config)
        grid.permutations = args.perms;
    if (args.alpha_given || !from_config)
        grid.alpha = args.alpha;
    if (args.seed_given || !from_config)
        grid.base_seed = args.seed;
    if (args.density_given || !from_config) {
        grid.density_x = parse_source_density(args.density_x);
        grid.density_y = parse_source_density(args.density_y);
    }
    // Per-repetition catalog draws are the default sampling protocol;
    // pinning a density implies fixed marginals unless --fresh-densities
    // is also given.
    if (args.fresh_given)
        grid.fresh_density_per_rep = args.fresh_densities;
    else if (args.density_given)
        grid.fresh_density_per_rep = false;
    grid.workers = args.workers;  // execution knob, never from the config
    return grid;
}

int run_cmd_power(const PowerArgs& args) {
    ExperimentGrid grid;
    try {
        grid = grid_from_args(args);
        grid.validate();
        if (args.format != "csv" && args.format != "json")
            throw InvalidInputError("--format must be csv or json");
    } catch (const CLI::Error& e) {
        std::cerr << "depstat power: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "depstat power: " << args.config_file << ":" << e.line() << ": " << e.what()
                  << "\n";
        return kExitData;
    } catch (const IoError& e) {
        std::cerr << "depstat power: " << e.what() << "\n";
        return kExitData;
    } catch (const Error& e) {
        std::cerr << "depstat power: " << e.what() << "\n";
        return kExitUsage;
    }

    std::cerr << "depstat power: config " << grid_config_json(grid) << "\n";

    const auto emit = [&](const PowerReport& report) {
        return args.format == "csv" ? emit_report_csv(report) : emit_report_json(report);
    };
    const auto progress = [](int done, int total) {
        std::cerr << "depstat power: cells completed " << done << "/" << total << "\n";
    };

    try {
        const PowerReport report = run_grid(grid, progress);
        write_file(args.out, emit(report));
        std::cerr << "depstat power: wrote " << args.out << " (" << report.cells.size()
                  << " cells, " << fmt_f6(report.runtime_seconds) << " s)\n";
        return kExitOk;
    } catch (const GridError& e) {
        const std::string partial_path = args.out + ".partial";
        try {
            write_file(partial_path, emit(e.partial_report()));
            std::cerr << "depstat power: wrote partial results to " << partial_path << "\n";
        } catch (const Error& io) {
            std::cerr << "depstat power: failed to write partial results: " << io.what() << "\n";
        }
        std::cerr << "depstat power: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const Error& e) {
        std::cerr << "depstat power: " << e.what() << "\n";
        return kExitRuntime;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dependence statistics and independence tests"};
    app.require_subcommand(1);

    TestArgs test_args;
    CLI::App* test_cmd = app.add_subcommand("test", "run an independence test on a CSV dataset");
    test_cmd->add_option("file", test_args.file, "dataset CSV (header x1..xp,y1..yq)")
        ->required();
    test_cmd->add_option("--stat", test_args.stat,
                         "statistic: dcov|dcor|hsic|hsic-u|feuerverger");
    test_cmd->add_option("--null", test_args.null_model, "null model: permutation|gamma");
    CLI::Option* perms_opt =
        test_cmd->add_option("--perms", test_args.perms, "permutation count B");
    test_cmd->add_option("--alpha", test_args.alpha, "test level");
    test_cmd->add_option("--bandwidth", test_args.bandwidth, "median | fixed:SX,SY");
    test_cmd->add_option("--seed", test_args.seed, "RNG seed");

    GenArgs gen_args;
    CLI::App* gen_cmd = app.add_subcommand("gen", "generate a rotation-mixed benchmark dataset");
    gen_cmd->add_option("--theta", gen_args.theta, "rotation angle in [0, pi/4]");
    gen_cmd->add_option("--d", gen_args.d, "dimension per side: 1|2|4");
    gen_cmd->add_option("--n", gen_args.n, "sample size");
    gen_cmd->add_option("--density-x", gen_args.density_x,
                        "gauss-mix|laplace|uniform|student-t5|exp");
    gen_cmd->add_option("--density-y", gen_args.density_y,
                        "gauss-mix|laplace|uniform|student-t5|exp");
    gen_cmd->add_option("--seed", gen_args.seed, "RNG seed");
    gen_cmd->add_option("--out", gen_args.out, "output CSV path")->required();

    PowerArgs power_args;
    CLI::App* power_cmd = app.add_subcommand("power", "run the power-grid experiment");
    power_cmd->add_option("--config", power_args.config_file, "grid config JSON");
    CLI::Option* thetas_opt =
        power_cmd->add_option("--thetas", power_args.thetas, "comma-separated angles");
    CLI::Option* ns_opt = power_cmd->add_option("--ns", power_args.ns, "comma-separated sizes");
    CLI::Option* ds_opt =
        power_cmd->add_option("--ds", power_args.ds, "comma-separated dimensions");
    CLI::Option* tests_opt = power_cmd->add_option(
        "--tests", power_args.tests, "comma-separated tests, e.g. hsic,dcov,hsic-gamma");
    CLI::Option* reps_opt =
        power_cmd->add_option("--reps", power_args.reps, "repetitions per cell R");
    CLI::Option* pperms_opt =
        power_cmd->add_option("--perms", power_args.perms, "permutations per test B");
    CLI::Option* alpha_opt = power_cmd->add_option("--alpha", power_args.alpha, "test level");
    CLI::Option* seed_opt = power_cmd->add_option("--seed", power_args.seed, "base seed");
    CLI::Option* dx_opt =
        power_cmd->add_option("--density-x", power_args.density_x, "pin the source density for x");
    CLI::Option* dy_opt =
        power_cmd->add_option("--density-y", power_args.density_y, "pin the source density for y");
    CLI::Option* fresh_opt =
        power_cmd->add_flag("--fresh-densities,!--no-fresh-densities", power_args.fresh_densities,
                            "draw catalog densities afresh per repetition (default)");
    power_cmd->add_option("--workers", power_args.workers, "worker thread count");
    power_cmd->add_option("--format", power_args.format, "csv|json");
    power_cmd->add_option("--out", power_args.out, "output report path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "depstat: " << e.what() << "\n";
        return kExitUsage;
    }

    test_args.perms_given = perms_opt->count() > 0;
    power_args.thetas_given = thetas_opt->count() > 0;
    power_args.ns_given = ns_opt->count() > 0;
    power_args.ds_given = ds_opt->count() > 0;
    power_args.tests_given = tests_opt->count() > 0;
    power_args.density_given = dx_opt->count() > 0 || dy_opt->count() > 0;
    power_args.fresh_given = fresh_opt->count() > 0;
    power_args.reps_given = reps_opt->count() > 0;
    power_args.perms_given = pperms_opt->count() > 0;
    power_args.alpha_given = alpha_opt->count() > 0;
    power_args.seed_given = seed_opt->count() > 0;

    if (test_cmd->parsed())
        return run_cmd_test(test_args);
    if (gen_cmd->parsed())
        return run_cmd_gen(gen_args);
    if (power_cmd->parsed())
        return run_cmd_power(power_args);
    return kExitUsage;
}
